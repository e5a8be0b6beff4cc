//! Isospectral control families.
//!
//! Two models are provided:
//!
//! * **CP²** (one qubit): full space `(|1⟩, |2⟩, |2̃⟩)` with `H₀ = diag(0,0,1)`,
//!   `U(z) = U₁(z₁)·U₂(z₂)` and `U_α = exp(z_α|α⟩⟨2̃| − z̄_α|2̃⟩⟨α|)`,
//!   `z_α = θ_α e^{iφ_α}`. Coordinates are ordered `(θ₁, φ₁, θ₂, φ₂)`.
//! * **G(4,2)** (two-qubit interaction): the 9-dim product space of two
//!   CP² models in the order
//!   `(|13⟩,|14⟩,|23⟩,|24⟩,|14̃⟩,|24̃⟩,|2̃3⟩,|2̃4⟩,|2̃4̃⟩)`, so
//!   `H₀ = diag(0,0,0,0,1,1,1,1,2)`, with a single rotation
//!   `exp(z|24⟩⟨2̃4̃| − z̄|2̃4̃⟩⟨24|)`. Coordinates are `(θ, φ)`.
//!
//! The degenerate subspace is always selected by basis index; the connection
//! is `A_a = P U†∂_aU P` with no extra sign.
//!
//! Note that `P_α = |α⟩⟨α|` (what one-qubit phase loops generate) is a rank-one
//! projector, not the traceless Pauli σ³.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::matrix::{AntiHermitian, ComplexSquareMatrix, Unitary};
use crate::scalar::{cis, sinc, Real};
use crate::tolerances;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Coordinate {
    Theta1,
    Phi1,
    Theta2,
    Phi2,
    Theta,
    Phi,
}

impl Coordinate {
    pub fn label(self) -> &'static str {
        match self {
            Coordinate::Theta1 => "theta1",
            Coordinate::Phi1 => "phi1",
            Coordinate::Theta2 => "theta2",
            Coordinate::Phi2 => "phi2",
            Coordinate::Theta => "theta",
            Coordinate::Phi => "phi",
        }
    }
}

impl fmt::Display for Coordinate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Coordinate {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "theta1" | "θ1" | "θ₁" => Coordinate::Theta1,
            "phi1" | "φ1" | "φ₁" => Coordinate::Phi1,
            "theta2" | "θ2" | "θ₂" => Coordinate::Theta2,
            "phi2" | "φ2" | "φ₂" => Coordinate::Phi2,
            "theta" | "θ" => Coordinate::Theta,
            "phi" | "φ" => Coordinate::Phi,
            other => return Err(Error::invalid(format!("unknown coordinate label `{other}`"))),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Cp2Point<T> {
    pub theta1: T,
    pub phi1: T,
    pub theta2: T,
    pub phi2: T,
}

impl<T: Real> Cp2Point<T> {
    pub fn new(theta1: T, phi1: T, theta2: T, phi2: T) -> Self {
        Self { theta1, phi1, theta2, phi2 }
    }

    pub fn coords(&self) -> [T; 4] {
        [self.theta1, self.phi1, self.theta2, self.phi2]
    }

    pub fn from_coords(c: &[T]) -> Result<Self> {
        match *c {
            [theta1, phi1, theta2, phi2] => Ok(Self { theta1, phi1, theta2, phi2 }),
            _ => Err(Error::DimensionMismatch { expected: 4, found: c.len() }),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct GrassmannPoint<T> {
    pub theta: T,
    pub phi: T,
}

impl<T: Real> GrassmannPoint<T> {
    pub fn new(theta: T, phi: T) -> Self {
        Self { theta, phi }
    }

    pub fn coords(&self) -> [T; 2] {
        [self.theta, self.phi]
    }

    pub fn from_coords(c: &[T]) -> Result<Self> {
        match *c {
            [theta, phi] => Ok(Self { theta, phi }),
            _ => Err(Error::DimensionMismatch { expected: 2, found: c.len() }),
        }
    }
}

// Full-space indices.
const CP2_KET1: usize = 0;
const CP2_KET2: usize = 1;
const CP2_TILDE: usize = 2;
const G42_KET24: usize = 3;
const G42_TILDE24: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ModelKind {
    Cp2,
    Grassmann,
}

impl ModelKind {
    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Cp2 => "cp2",
            ModelKind::Grassmann => "grassmann",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cp2" => Ok(ModelKind::Cp2),
            "grassmann" | "g42" => Ok(ModelKind::Grassmann),
            other => Err(Error::invalid(format!("unknown model `{other}`"))),
        }
    }
}

/// A parametrized isospectral family `H(λ) = U(λ) H₀ U(λ)†`.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelFamily<T: Real> {
    pub kind: ModelKind,
    pub full_dim: usize,
    /// Full-space indices spanning the E = 0 eigenspace, in code order.
    pub degenerate_basis: Vec<usize>,
    pub parameter_names: Vec<Coordinate>,
    pub base_hamiltonian: ComplexSquareMatrix<T>,
}

impl<T: Real> ModelFamily<T> {
    pub fn cp2() -> Self {
        Self {
            kind: ModelKind::Cp2,
            full_dim: 3,
            degenerate_basis: vec![CP2_KET1, CP2_KET2],
            parameter_names: vec![
                Coordinate::Theta1,
                Coordinate::Phi1,
                Coordinate::Theta2,
                Coordinate::Phi2,
            ],
            base_hamiltonian: ComplexSquareMatrix::from_real_diag(&[
                T::zero(),
                T::zero(),
                T::one(),
            ]),
        }
    }

    pub fn grassmann() -> Self {
        let h0 = [0.0, 0.0, 0.0, 0.0, 1.0, 1.0, 1.0, 1.0, 2.0].map(T::lit);
        Self {
            kind: ModelKind::Grassmann,
            full_dim: 9,
            degenerate_basis: vec![0, 1, 2, 3],
            parameter_names: vec![Coordinate::Theta, Coordinate::Phi],
            base_hamiltonian: ComplexSquareMatrix::from_real_diag(&h0),
        }
    }

    pub fn of_kind(kind: ModelKind) -> Self {
        match kind {
            ModelKind::Cp2 => Self::cp2(),
            ModelKind::Grassmann => Self::grassmann(),
        }
    }

    pub fn num_params(&self) -> usize {
        self.parameter_names.len()
    }

    pub fn degenerate_dim(&self) -> usize {
        self.degenerate_basis.len()
    }

    pub fn coordinate_index(&self, a: Coordinate) -> Result<usize> {
        self.parameter_names
            .iter()
            .position(|&c| c == a)
            .ok_or_else(|| Error::invalid(format!("coordinate `{a}` is not a {} coordinate", self.kind)))
    }

    fn check_point(&self, p: &[T]) -> Result<()> {
        if p.len() != self.num_params() {
            return Err(Error::DimensionMismatch { expected: self.num_params(), found: p.len() });
        }
        if p.iter().any(|x| !x.is_finite()) {
            return Err(Error::invalid("parameter point has non-finite coordinates"));
        }
        Ok(())
    }

    pub fn unitary(&self, p: &[T]) -> Result<Unitary<T>> {
        self.check_point(p)?;
        Ok(match self.kind {
            ModelKind::Cp2 => cp2_unitary(&Cp2Point::from_coords(p)?),
            ModelKind::Grassmann => grassmann_unitary(&GrassmannPoint::from_coords(p)?),
        })
    }

    pub fn partial(&self, p: &[T], a: Coordinate) -> Result<ComplexSquareMatrix<T>> {
        self.check_point(p)?;
        match self.kind {
            ModelKind::Cp2 => cp2_partial(&Cp2Point::from_coords(p)?, a),
            ModelKind::Grassmann => grassmann_partial(&GrassmannPoint::from_coords(p)?, a),
        }
    }

    /// Directional derivative `Σ_a dir_a ∂_aU` at `p`.
    pub fn directional_partial(&self, p: &[T], dir: &[T]) -> Result<ComplexSquareMatrix<T>> {
        self.check_point(p)?;
        if dir.len() != self.num_params() {
            return Err(Error::DimensionMismatch { expected: self.num_params(), found: dir.len() });
        }
        let mut acc = ComplexSquareMatrix::zeros(self.full_dim);
        for (&a, &d) in self.parameter_names.iter().zip(dir) {
            if d != T::zero() {
                acc = &acc + &self.partial(p, a)?.scale_real(d);
            }
        }
        Ok(acc)
    }

    /// `P U† dU P` restricted to the degenerate basis.
    pub(crate) fn project_pullback(
        &self,
        u: &ComplexSquareMatrix<T>,
        du: &ComplexSquareMatrix<T>,
    ) -> ComplexSquareMatrix<T> {
        let basis = &self.degenerate_basis;
        ComplexSquareMatrix::from_fn(basis.len(), |r, c| {
            let (a, b) = (basis[r], basis[c]);
            (0..self.full_dim).fold(Complex::zero(), |acc, k| acc + u[(k, a)].conj() * du[(k, b)])
        })
    }

    /// The connection contracted with a direction: `Σ_a A_a(p)·dir_a`.
    pub fn connection_along(&self, p: &[T], dir: &[T]) -> Result<AntiHermitian<T>> {
        let u = self.unitary(p)?;
        let du = self.directional_partial(p, dir)?;
        AntiHermitian::new(self.project_pullback(&u, &du))
    }
}

fn rotation<T: Real>(dim: usize, ket: usize, tilde: usize, theta: T, phi: T) -> ComplexSquareMatrix<T> {
    // 1⊥ + cosθ·1_α + (sinθ/θ)·G(z)
    let mut u = ComplexSquareMatrix::identity(dim);
    let z = cis(phi) * theta;
    let s = sinc(theta);
    let c = Complex::new(theta.cos(), T::zero());
    u[(ket, ket)] = c;
    u[(tilde, tilde)] = c;
    u[(ket, tilde)] = z * s;
    u[(tilde, ket)] = -z.conj() * s;
    u
}

fn rotation_dtheta<T: Real>(dim: usize, ket: usize, tilde: usize, theta: T, phi: T) -> ComplexSquareMatrix<T> {
    let mut d = ComplexSquareMatrix::zeros(dim);
    let e = cis(phi);
    let (s, c) = theta.sin_cos();
    d[(ket, ket)] = Complex::new(-s, T::zero());
    d[(tilde, tilde)] = Complex::new(-s, T::zero());
    d[(ket, tilde)] = e * c;
    d[(tilde, ket)] = -e.conj() * c;
    d
}

fn rotation_dphi<T: Real>(dim: usize, ket: usize, tilde: usize, theta: T, phi: T) -> ComplexSquareMatrix<T> {
    let mut d = ComplexSquareMatrix::zeros(dim);
    let e = cis(phi);
    let i = Complex::new(T::zero(), T::one());
    let s = theta.sin();
    d[(ket, tilde)] = i * e * s;
    d[(tilde, ket)] = i * e.conj() * s;
    d
}

/// `G(z) = z|ket⟩⟨tilde| − z̄|tilde⟩⟨ket|`.
fn rotation_generator<T: Real>(dim: usize, ket: usize, tilde: usize, theta: T, phi: T) -> ComplexSquareMatrix<T> {
    let mut g = ComplexSquareMatrix::zeros(dim);
    let z = cis(phi) * theta;
    g[(ket, tilde)] = z;
    g[(tilde, ket)] = -z.conj();
    g
}

/// `G_α(z_α)` for the CP² model, α ∈ {1, 2}.
pub fn cp2_generator<T: Real>(alpha: u8, theta: T, phi: T) -> Result<ComplexSquareMatrix<T>> {
    match alpha {
        1 => Ok(rotation_generator(3, CP2_KET1, CP2_TILDE, theta, phi)),
        2 => Ok(rotation_generator(3, CP2_KET2, CP2_TILDE, theta, phi)),
        _ => Err(Error::invalid(format!("CP² factor index must be 1 or 2, got {alpha}"))),
    }
}

/// Generator of the G(4,2) rotation between `|24⟩` and `|2̃4̃⟩`.
pub fn grassmann_generator<T: Real>(theta: T, phi: T) -> ComplexSquareMatrix<T> {
    rotation_generator(9, G42_KET24, G42_TILDE24, theta, phi)
}

/// `U₁(z₁)·U₂(z₂)` in the basis `(|1⟩, |2⟩, |2̃⟩)`.
pub fn cp2_unitary<T: Real>(p: &Cp2Point<T>) -> Unitary<T> {
    let u1 = rotation(3, CP2_KET1, CP2_TILDE, p.theta1, p.phi1);
    let u2 = rotation(3, CP2_KET2, CP2_TILDE, p.theta2, p.phi2);
    Unitary::new_unchecked(&u1 * &u2)
}

pub fn cp2_partial<T: Real>(p: &Cp2Point<T>, a: Coordinate) -> Result<ComplexSquareMatrix<T>> {
    let u1 = || rotation(3, CP2_KET1, CP2_TILDE, p.theta1, p.phi1);
    let u2 = || rotation(3, CP2_KET2, CP2_TILDE, p.theta2, p.phi2);
    Ok(match a {
        Coordinate::Theta1 => &rotation_dtheta(3, CP2_KET1, CP2_TILDE, p.theta1, p.phi1) * &u2(),
        Coordinate::Phi1 => &rotation_dphi(3, CP2_KET1, CP2_TILDE, p.theta1, p.phi1) * &u2(),
        Coordinate::Theta2 => &u1() * &rotation_dtheta(3, CP2_KET2, CP2_TILDE, p.theta2, p.phi2),
        Coordinate::Phi2 => &u1() * &rotation_dphi(3, CP2_KET2, CP2_TILDE, p.theta2, p.phi2),
        other => return Err(Error::invalid(format!("`{other}` is not a CP² coordinate"))),
    })
}

pub fn grassmann_unitary<T: Real>(p: &GrassmannPoint<T>) -> Unitary<T> {
    Unitary::new_unchecked(rotation(9, G42_KET24, G42_TILDE24, p.theta, p.phi))
}

pub fn grassmann_partial<T: Real>(p: &GrassmannPoint<T>, a: Coordinate) -> Result<ComplexSquareMatrix<T>> {
    match a {
        Coordinate::Theta => Ok(rotation_dtheta(9, G42_KET24, G42_TILDE24, p.theta, p.phi)),
        Coordinate::Phi => Ok(rotation_dphi(9, G42_KET24, G42_TILDE24, p.theta, p.phi)),
        other => Err(Error::invalid(format!("`{other}` is not a G(4,2) coordinate"))),
    }
}

/// Component `A_a(p)` of the adiabatic connection on the degenerate subspace.
pub fn connection_at<T: Real>(
    model: &ModelFamily<T>,
    p: &[T],
    a: Coordinate,
) -> Result<AntiHermitian<T>> {
    model.coordinate_index(a)?;
    let u = model.unitary(p)?;
    let du = model.partial(p, a)?;
    AntiHermitian::new(model.project_pullback(&u, &du))
}

/// `H(λ) = U(λ) H₀ U(λ)†`.
pub fn isospectral_hamiltonian<T: Real>(model: &ModelFamily<T>, p: &[T]) -> Result<ComplexSquareMatrix<T>> {
    let u = model.unitary(p)?;
    Ok(&(&*u * &model.base_hamiltonian) * &u.adjoint())
}

/// Central finite difference of `U` along one coordinate.
pub fn finite_difference_partial<T: Real>(
    model: &ModelFamily<T>,
    p: &[T],
    a: Coordinate,
    h: T,
) -> Result<ComplexSquareMatrix<T>> {
    let idx = model.coordinate_index(a)?;
    let mut plus = p.to_vec();
    let mut minus = p.to_vec();
    plus[idx] = plus[idx] + h;
    minus[idx] = minus[idx] - h;
    let up = model.unitary(&plus)?;
    let um = model.unitary(&minus)?;
    Ok((&*up - &*um).scale_real(T::one() / (h + h)))
}

/// Unitary within the default output tolerance.
pub fn is_unitary<T: Real>(u: &ComplexSquareMatrix<T>) -> bool {
    crate::matrix::unitarity_distance(u) < T::lit(tolerances::OUTPUT)
}
