//! Dense complex square matrices and the handful of kernels the rest of the
//! crate needs: products, adjoints, Hermitian eigendecomposition (cyclic
//! Jacobi), exponentials of anti-Hermitian matrices and distance metrics.
//!
//! Storage is row-major and dense; every matrix here is at most 16×16.

use std::fmt;
use std::ops::{Add, Deref, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{cis, Real};
use crate::tolerances;

#[derive(Clone, PartialEq)]
pub struct ComplexSquareMatrix<T: Real> {
    dim: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> fmt::Debug for ComplexSquareMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexSquareMatrix({}x{}) [", self.dim, self.dim)?;
        for r in 0..self.dim {
            write!(f, "  ")?;
            for c in 0..self.dim {
                let z = self[(r, c)];
                write!(f, "{:+.6}{:+.6}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl<T: Real> ComplexSquareMatrix<T> {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![Complex::zero(); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex::one();
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for r in 0..dim {
            for c in 0..dim {
                data.push(f(r, c));
            }
        }
        Self { dim, data }
    }

    pub fn from_diag(diag: &[Complex<T>]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &z) in diag.iter().enumerate() {
            m[(i, i)] = z;
        }
        m
    }

    pub fn from_real_diag(diag: &[T]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &x) in diag.iter().enumerate() {
            m[(i, i)] = Complex::new(x, T::zero());
        }
        m
    }

    /// Builds a matrix from rows. Rejects ragged input and non-finite entries.
    pub fn from_rows(rows: Vec<Vec<Complex<T>>>) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::invalid("matrix must have at least one row"));
        }
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: row.len() });
            }
            data.extend(row);
        }
        let m = Self { dim, data };
        if !m.is_finite() {
            return Err(Error::invalid("matrix has non-finite entries"));
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[Complex<T>] {
        &self.data[r * self.dim..(r + 1) * self.dim]
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |r, c| self[(c, r)].conj())
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|&z| z * s).collect() }
    }

    pub fn scale_real(&self, s: T) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|&z| z * s).collect() }
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.dim).map(|i| self[(i, i)]).fold(Complex::zero(), |a, b| a + b)
    }

    pub fn frobenius_norm(&self) -> T {
        self.data.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr()).sqrt()
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |acc, z| acc.max(z.norm()))
    }

    /// `‖self − other‖_F`. Panics on dimension mismatch.
    pub fn distance(&self, other: &Self) -> T {
        assert_eq!(self.dim, other.dim, "distance: dimension mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .fold(T::zero(), |acc, (a, b)| acc + (a - b).norm_sqr())
            .sqrt()
    }

    /// `[self, other] = self·other − other·self`.
    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        let n = other.dim;
        Self::from_fn(self.dim * n, |r, c| self[(r / n, c / n)] * other[(r % n, c % n)])
    }

    /// Principal submatrix on the given (ordered) indices.
    pub fn select(&self, indices: &[usize]) -> Self {
        Self::from_fn(indices.len(), |r, c| self[(indices[r], indices[c])])
    }

    /// `‖M − M†‖_F ≤ tol`.
    pub fn is_hermitian_within(&self, tol: T) -> bool {
        self.hermiticity_defect(T::one()) <= tol
    }

    /// `‖M + M†‖_F ≤ tol`.
    pub fn is_anti_hermitian_within(&self, tol: T) -> bool {
        self.hermiticity_defect(-T::one()) <= tol
    }

    fn hermiticity_defect(&self, sign: T) -> T {
        let mut acc = T::zero();
        for r in 0..self.dim {
            for c in 0..self.dim {
                acc = acc + (self[(r, c)] - self[(c, r)].conj() * sign).norm_sqr();
            }
        }
        acc.sqrt()
    }

    pub fn apply(&self, v: &StateVector<T>) -> StateVector<T> {
        assert_eq!(self.dim, v.dim(), "apply: dimension mismatch");
        let amps = (0..self.dim)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v.amplitudes())
                    .fold(Complex::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect();
        StateVector::new(amps)
    }

    pub fn map_scalar<U: Real>(&self, f: impl Fn(T) -> U) -> ComplexSquareMatrix<U> {
        ComplexSquareMatrix {
            dim: self.dim,
            data: self.data.iter().map(|z| Complex::new(f(z.re), f(z.im))).collect(),
        }
    }
}

impl<T: Real> Index<(usize, usize)> for ComplexSquareMatrix<T> {
    type Output = Complex<T>;
    fn index(&self, (r, c): (usize, usize)) -> &Complex<T> {
        &self.data[r * self.dim + c]
    }
}

impl<T: Real> IndexMut<(usize, usize)> for ComplexSquareMatrix<T> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex<T> {
        &mut self.data[r * self.dim + c]
    }
}

/// Unchecked product; panics on dimension mismatch. Use [`mat_mul`] for the
/// fallible form.
impl<T: Real> Mul for &ComplexSquareMatrix<T> {
    type Output = ComplexSquareMatrix<T>;
    fn mul(self, rhs: Self) -> ComplexSquareMatrix<T> {
        assert_eq!(self.dim, rhs.dim, "matrix product: dimension mismatch");
        let n = self.dim;
        let mut out = ComplexSquareMatrix::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let a = self.data[r * n + k];
                if a.is_zero() {
                    continue;
                }
                for c in 0..n {
                    out.data[r * n + c] = out.data[r * n + c] + a * rhs.data[k * n + c];
                }
            }
        }
        out
    }
}

impl<T: Real> Add for &ComplexSquareMatrix<T> {
    type Output = ComplexSquareMatrix<T>;
    fn add(self, rhs: Self) -> ComplexSquareMatrix<T> {
        assert_eq!(self.dim, rhs.dim, "matrix sum: dimension mismatch");
        ComplexSquareMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<T: Real> Sub for &ComplexSquareMatrix<T> {
    type Output = ComplexSquareMatrix<T>;
    fn sub(self, rhs: Self) -> ComplexSquareMatrix<T> {
        assert_eq!(self.dim, rhs.dim, "matrix difference: dimension mismatch");
        ComplexSquareMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl<T: Real> Neg for &ComplexSquareMatrix<T> {
    type Output = ComplexSquareMatrix<T>;
    fn neg(self) -> ComplexSquareMatrix<T> {
        ComplexSquareMatrix { dim: self.dim, data: self.data.iter().map(|z| -z).collect() }
    }
}

/// Checked matrix product.
pub fn mat_mul<T: Real>(
    a: &ComplexSquareMatrix<T>,
    b: &ComplexSquareMatrix<T>,
) -> Result<ComplexSquareMatrix<T>> {
    if a.dim != b.dim {
        return Err(Error::DimensionMismatch { expected: a.dim, found: b.dim });
    }
    Ok(a * b)
}

/// Frobenius norm of `u†u − I`.
pub fn unitarity_distance<T: Real>(u: &ComplexSquareMatrix<T>) -> T {
    (&(&u.adjoint() * u) - &ComplexSquareMatrix::identity(u.dim)).frobenius_norm()
}

/// A matrix known to be unitary.
#[derive(Clone, Debug, PartialEq)]
pub struct Unitary<T: Real>(ComplexSquareMatrix<T>);

impl<T: Real> Unitary<T> {
    pub fn new(m: ComplexSquareMatrix<T>) -> Result<Self> {
        Self::new_with_tol(m, T::lit(tolerances::INPUT))
    }

    pub fn new_with_tol(m: ComplexSquareMatrix<T>, tol: T) -> Result<Self> {
        let d = unitarity_distance(&m);
        if d.is_nan() || d > tol {
            return Err(Error::invalid(format!("matrix is not unitary (‖U†U − I‖ = {d:e})")));
        }
        Ok(Self(m))
    }

    pub(crate) fn new_unchecked(m: ComplexSquareMatrix<T>) -> Self {
        Self(m)
    }

    pub fn identity(dim: usize) -> Self {
        Self(ComplexSquareMatrix::identity(dim))
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    /// `self · rhs`; panics on dimension mismatch.
    pub fn compose(&self, rhs: &Self) -> Self {
        Self(&self.0 * &rhs.0)
    }

    pub fn matrix(&self) -> &ComplexSquareMatrix<T> {
        &self.0
    }

    pub fn into_inner(self) -> ComplexSquareMatrix<T> {
        self.0
    }
}

impl<T: Real> Deref for Unitary<T> {
    type Target = ComplexSquareMatrix<T>;
    fn deref(&self) -> &ComplexSquareMatrix<T> {
        &self.0
    }
}

/// A matrix `g` with `g† = −g`: an element of the Lie algebra u(n).
#[derive(Clone, Debug, PartialEq)]
pub struct AntiHermitian<T: Real>(ComplexSquareMatrix<T>);

impl<T: Real> AntiHermitian<T> {
    pub fn new(m: ComplexSquareMatrix<T>) -> Result<Self> {
        Self::new_with_tol(m, T::lit(tolerances::INPUT))
    }

    pub fn new_with_tol(m: ComplexSquareMatrix<T>, tol: T) -> Result<Self> {
        if !m.is_finite() {
            return Err(Error::invalid("matrix has non-finite entries"));
        }
        if !m.is_anti_hermitian_within(tol) {
            return Err(Error::invalid(format!(
                "matrix is not anti-Hermitian (‖g + g†‖ = {:e})",
                m.hermiticity_defect(-T::one())
            )));
        }
        Ok(Self(m))
    }

    pub fn zeros(dim: usize) -> Self {
        Self(ComplexSquareMatrix::zeros(dim))
    }

    /// `−i·h` for a Hermitian `h`.
    pub fn from_hermitian(h: &ComplexSquareMatrix<T>) -> Result<Self> {
        if !h.is_hermitian_within(T::lit(tolerances::INPUT)) {
            return Err(Error::invalid("matrix is not Hermitian"));
        }
        Ok(Self(h.scale(Complex::new(T::zero(), -T::one()))))
    }

    pub fn scale(&self, s: T) -> Self {
        Self(self.0.scale_real(s))
    }

    pub fn add(&self, rhs: &Self) -> Self {
        Self(&self.0 + &rhs.0)
    }

    /// `[self, rhs]`, which stays in the algebra.
    pub fn bracket(&self, rhs: &Self) -> Self {
        Self(self.0.commutator(&rhs.0))
    }

    pub fn exp(&self) -> Unitary<T> {
        expm_unchecked(&self.0)
    }

    pub fn matrix(&self) -> &ComplexSquareMatrix<T> {
        &self.0
    }

    pub fn into_inner(self) -> ComplexSquareMatrix<T> {
        self.0
    }
}

impl<T: Real> Deref for AntiHermitian<T> {
    type Target = ComplexSquareMatrix<T>;
    fn deref(&self) -> &ComplexSquareMatrix<T> {
        &self.0
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector<T: Real> {
    amplitudes: Vec<Complex<T>>,
}

impl<T: Real> StateVector<T> {
    pub fn new(amplitudes: Vec<Complex<T>>) -> Self {
        Self { amplitudes }
    }

    /// Computational basis ket `|index⟩`.
    pub fn basis(dim: usize, index: usize) -> Self {
        let mut amplitudes = vec![Complex::zero(); dim];
        amplitudes[index] = Complex::one();
        Self { amplitudes }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amplitudes
    }

    pub fn norm(&self) -> T {
        self.amplitudes.iter().fold(T::zero(), |a, z| a + z.norm_sqr()).sqrt()
    }

    pub fn normalized(&self) -> Self {
        let n = self.norm();
        Self { amplitudes: self.amplitudes.iter().map(|z| z / n).collect() }
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Complex<T> {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .fold(Complex::zero(), |a, (x, y)| a + x.conj() * y)
    }
}

/// Cyclic complex Jacobi diagonalization of a Hermitian matrix.
///
/// Returns ascending eigenvalues and the unitary whose columns are the
/// matching eigenvectors. Deterministic: the pivot order is fixed.
pub fn hermitian_eigh<T: Real>(
    h: &ComplexSquareMatrix<T>,
) -> Result<(Vec<T>, ComplexSquareMatrix<T>)> {
    if !h.is_finite() {
        return Err(Error::invalid("matrix has non-finite entries"));
    }
    if !h.is_hermitian_within(T::lit(tolerances::INPUT)) {
        return Err(Error::invalid("matrix is not Hermitian"));
    }
    Ok(jacobi(h))
}

/// Ascending eigenvalues of a Hermitian matrix.
pub fn hermitian_eigenvalues<T: Real>(h: &ComplexSquareMatrix<T>) -> Result<Vec<T>> {
    hermitian_eigh(h).map(|(w, _)| w)
}

fn jacobi<T: Real>(h: &ComplexSquareMatrix<T>) -> (Vec<T>, ComplexSquareMatrix<T>) {
    let n = h.dim;
    // Symmetrize so rounding in the input cannot bias the rotations.
    let mut a = ComplexSquareMatrix::from_fn(n, |r, c| (h[(r, c)] + h[(c, r)].conj()).scale(T::lit(0.5)));
    let mut v = ComplexSquareMatrix::<T>::identity(n);
    let scale = a.frobenius_norm();
    let eps = T::epsilon();

    for _sweep in 0..64 {
        let off = off_diagonal_norm(&a);
        if off <= eps * scale || off == T::zero() {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let b = a[(p, q)];
                let r = b.norm();
                if r <= eps * eps * scale {
                    continue;
                }
                let phase = cis(-b.arg());
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let theta = (r + r).atan2(aqq - app) * T::lit(0.5);
                let (s, c) = theta.sin_cos();
                // J = diag(1, e^{-iα}) · [[c, s], [-s, c]]
                let j00 = Complex::new(c, T::zero());
                let j01 = Complex::new(s, T::zero());
                let j10 = phase * (-s);
                let j11 = phase * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * j00 + akq * j10;
                    a[(k, q)] = akp * j01 + akq * j11;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = j00.conj() * apk + j10.conj() * aqk;
                    a[(q, k)] = j01.conj() * apk + j11.conj() * aqk;
                }
                a[(p, q)] = Complex::zero();
                a[(q, p)] = Complex::zero();
                a[(p, p)] = Complex::new(a[(p, p)].re, T::zero());
                a[(q, q)] = Complex::new(a[(q, q)].re, T::zero());
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * j00 + vkq * j10;
                    v[(k, q)] = vkp * j01 + vkq * j11;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.partial_cmp(&a[(j, j)].re).expect("finite eigenvalues"));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = ComplexSquareMatrix::from_fn(n, |r, c| v[(r, order[c])]);
    (values, vectors)
}

fn off_diagonal_norm<T: Real>(a: &ComplexSquareMatrix<T>) -> T {
    let mut acc = T::zero();
    for r in 0..a.dim {
        for c in 0..a.dim {
            if r != c {
                acc = acc + a[(r, c)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// `exp(g)` for anti-Hermitian `g`, via the spectral decomposition of the
/// Hermitian matrix `i·g`.
pub fn expm_antihermitian<T: Real>(g: &ComplexSquareMatrix<T>) -> Result<Unitary<T>> {
    expm_antihermitian_with_tol(g, T::lit(tolerances::INPUT))
}

pub fn expm_antihermitian_with_tol<T: Real>(
    g: &ComplexSquareMatrix<T>,
    tol: T,
) -> Result<Unitary<T>> {
    let g = AntiHermitian::new_with_tol(g.clone(), tol)?;
    Ok(g.exp())
}

fn expm_unchecked<T: Real>(g: &ComplexSquareMatrix<T>) -> Unitary<T> {
    let n = g.dim;
    // g = -i h  =>  exp(g) = V diag(e^{-iλ}) V†
    let h = g.scale(Complex::new(T::zero(), T::one()));
    let (w, v) = jacobi(&h);
    let phases: Vec<Complex<T>> = w.iter().map(|&l| cis(-l)).collect();
    let mut out = ComplexSquareMatrix::zeros(n);
    for r in 0..n {
        for c in 0..n {
            let mut acc = Complex::zero();
            for k in 0..n {
                acc = acc + v[(r, k)] * phases[k] * v[(c, k)].conj();
            }
            out[(r, c)] = acc;
        }
    }
    Unitary::new_unchecked(out)
}
