//! Closed loops in control space and their path-ordered holonomies
//! `Γ_A(C) = P exp ∮_C A`.
//!
//! Ordering convention: a factor belonging to a later part of the loop
//! multiplies on the **left**, so `Γ(C₂∘C₁) = Γ(C₂)·Γ(C₁)`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, IntegrationError, Result};
use crate::matrix::{AntiHermitian, ComplexSquareMatrix, Unitary};
use crate::models::{connection_at, Coordinate, ModelFamily, ModelKind};
use crate::scalar::{cis, sinc, Real};
use crate::tolerances;

/// The five planes on which the connection restricts to a single
/// non-vanishing, self-commuting component.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PlaneKind {
    /// `(θ₁, φ₁)` with `θ₂ = 0`; generates `−i P₁`.
    ThetaPhi1,
    /// `(θ₂, φ₂)` with `θ₁ = 0`; generates `−i P₂`.
    ThetaPhi2,
    /// `(θ₁, θ₂)` at `φ₁ = φ₂ = 0`; generates `−i σ²`.
    Theta1Theta2Phi0,
    /// `(θ₁, θ₂)` at `φ₁ = π/2, φ₂ = 0`; generates `−i σ¹`.
    Theta1Theta2Phi90,
    /// `(θ, φ)` of the G(4,2) rotation; generates `diag(0,0,0,−i)`.
    Grassmann,
}

impl PlaneKind {
    pub const ALL: [PlaneKind; 5] = [
        PlaneKind::ThetaPhi1,
        PlaneKind::ThetaPhi2,
        PlaneKind::Theta1Theta2Phi0,
        PlaneKind::Theta1Theta2Phi90,
        PlaneKind::Grassmann,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PlaneKind::ThetaPhi1 => "theta-phi-1",
            PlaneKind::ThetaPhi2 => "theta-phi-2",
            PlaneKind::Theta1Theta2Phi0 => "theta1-theta2-phi0",
            PlaneKind::Theta1Theta2Phi90 => "theta1-theta2-phi90",
            PlaneKind::Grassmann => "grassmann",
        }
    }

    pub fn model(self) -> ModelKind {
        match self {
            PlaneKind::Grassmann => ModelKind::Grassmann,
            _ => ModelKind::Cp2,
        }
    }

    /// In-plane coordinates `(u, v)`.
    pub fn axes(self) -> (Coordinate, Coordinate) {
        match self {
            PlaneKind::ThetaPhi1 => (Coordinate::Theta1, Coordinate::Phi1),
            PlaneKind::ThetaPhi2 => (Coordinate::Theta2, Coordinate::Phi2),
            PlaneKind::Theta1Theta2Phi0 | PlaneKind::Theta1Theta2Phi90 => {
                (Coordinate::Theta1, Coordinate::Theta2)
            }
            PlaneKind::Grassmann => (Coordinate::Theta, Coordinate::Phi),
        }
    }

    pub fn is_theta_phi(self) -> bool {
        matches!(self, PlaneKind::ThetaPhi1 | PlaneKind::ThetaPhi2 | PlaneKind::Grassmann)
    }

    /// Generator `g` with `Γ = exp(Σ·g)` for loops in this plane.
    pub fn generator<T: Real>(self) -> AntiHermitian<T> {
        let z = Complex::zero();
        let one = Complex::new(T::one(), T::zero());
        let mi = Complex::new(T::zero(), -T::one());
        let m = match self {
            PlaneKind::ThetaPhi1 => ComplexSquareMatrix::from_diag(&[mi, z]),
            PlaneKind::ThetaPhi2 => ComplexSquareMatrix::from_diag(&[z, mi]),
            // −iσ² = [[0, −1], [1, 0]]
            PlaneKind::Theta1Theta2Phi0 => {
                ComplexSquareMatrix::from_fn(2, |r, c| match (r, c) {
                    (0, 1) => -one,
                    (1, 0) => one,
                    _ => z,
                })
            }
            // −iσ¹ = [[0, −i], [−i, 0]]
            PlaneKind::Theta1Theta2Phi90 => {
                ComplexSquareMatrix::from_fn(2, |r, c| if r != c { mi } else { z })
            }
            PlaneKind::Grassmann => ComplexSquareMatrix::from_diag(&[z, z, z, mi]),
        };
        AntiHermitian::new(m).expect("plane generators are anti-Hermitian")
    }
}

impl fmt::Display for PlaneKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PlaneKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        PlaneKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::invalid(format!("unknown plane kind `{s}`")))
    }
}

/// A plane together with the values of the off-plane coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct PlaneSpec<T: Real> {
    pub kind: PlaneKind,
    /// Full coordinate vector; the two in-plane entries are ignored.
    pub base: Vec<T>,
}

impl<T: Real> PlaneSpec<T> {
    /// The plane at its canonical position (all off-plane coordinates 0,
    /// except `φ₁ = π/2` for [`PlaneKind::Theta1Theta2Phi90`]).
    pub fn canonical(kind: PlaneKind) -> Self {
        let mut base = vec![T::zero(); ModelFamily::<T>::of_kind(kind.model()).num_params()];
        if kind == PlaneKind::Theta1Theta2Phi90 {
            base[1] = T::FRAC_PI_2();
        }
        Self { kind, base }
    }

    pub fn model(&self) -> ModelFamily<T> {
        ModelFamily::of_kind(self.kind.model())
    }

    fn axis_indices(&self) -> (usize, usize) {
        let m = self.model();
        let (u, v) = self.kind.axes();
        (m.coordinate_index(u).expect("axis in model"), m.coordinate_index(v).expect("axis in model"))
    }

    /// Full coordinates of the in-plane point `(u, v)`.
    pub fn embed(&self, u: T, v: T) -> Vec<T> {
        let (iu, iv) = self.axis_indices();
        let mut p = self.base.clone();
        p[iu] = u;
        p[iv] = v;
        p
    }

    /// In-plane coordinates of a full point.
    pub fn project(&self, p: &[T]) -> (T, T) {
        let (iu, iv) = self.axis_indices();
        (p[iu], p[iv])
    }

    pub fn contains(&self, p: &[T]) -> bool {
        if p.len() != self.base.len() {
            return false;
        }
        let (iu, iv) = self.axis_indices();
        let tol = T::lit(tolerances::OUTPUT);
        p.iter()
            .zip(&self.base)
            .enumerate()
            .all(|(i, (x, b))| i == iu || i == iv || (*x - *b).abs() <= tol)
    }
}

/// A closed piecewise-linear loop in the parameter space of a model.
#[derive(Clone, Debug, PartialEq)]
pub struct ParameterLoop<T: Real> {
    model: ModelFamily<T>,
    vertices: Vec<Vec<T>>,
    plane: Option<PlaneSpec<T>>,
}

impl<T: Real> ParameterLoop<T> {
    /// Loop through the given vertices. The last vertex must equal the first
    /// exactly and at least three distinct vertices are required.
    pub fn new(model: ModelFamily<T>, vertices: Vec<Vec<T>>) -> Result<Self> {
        let lp = Self::closed(model, vertices, None)?;
        let mut distinct: Vec<&Vec<T>> = Vec::new();
        for v in &lp.vertices {
            if !distinct.contains(&v) {
                distinct.push(v);
            }
        }
        if distinct.len() < 3 {
            return Err(Error::invalid(
                "a loop needs at least 3 distinct vertices (use ParameterLoop::point for a point loop)",
            ));
        }
        Ok(lp)
    }

    /// The constant loop sitting at `p`.
    pub fn point(model: ModelFamily<T>, p: Vec<T>) -> Result<Self> {
        Self::closed(model, vec![p.clone(), p], None)
    }

    /// Loop given by in-plane vertices `(u, v)`; may be degenerate (zero area).
    pub fn in_plane(plane: &PlaneSpec<T>, uv: &[(T, T)]) -> Result<Self> {
        let vertices = uv.iter().map(|&(u, v)| plane.embed(u, v)).collect();
        Self::closed(plane.model(), vertices, Some(plane.clone()))
    }

    fn closed(model: ModelFamily<T>, vertices: Vec<Vec<T>>, plane: Option<PlaneSpec<T>>) -> Result<Self> {
        if vertices.len() < 2 {
            return Err(Error::invalid("a loop needs at least two vertices"));
        }
        for v in &vertices {
            if v.len() != model.num_params() {
                return Err(Error::DimensionMismatch { expected: model.num_params(), found: v.len() });
            }
            if v.iter().any(|x| !x.is_finite()) {
                return Err(Error::invalid("loop vertex has non-finite coordinates"));
            }
        }
        if vertices.first() != vertices.last() {
            return Err(Error::invalid("loop is not closed: first and last vertices differ"));
        }
        Ok(Self { model, vertices, plane })
    }

    pub fn model(&self) -> &ModelFamily<T> {
        &self.model
    }

    pub fn vertices(&self) -> &[Vec<T>] {
        &self.vertices
    }

    pub fn plane(&self) -> Option<&PlaneSpec<T>> {
        self.plane.as_ref()
    }

    pub fn basepoint(&self) -> &[T] {
        &self.vertices[0]
    }

    pub fn num_segments(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn is_point_loop(&self) -> bool {
        self.vertices.iter().all(|v| v == &self.vertices[0])
    }

    /// The same loop traversed backwards.
    pub fn reversed(&self) -> Self {
        let mut out = self.clone();
        out.vertices.reverse();
        out
    }

    /// `next ∘ self`: traverse `self`, then `next`, from a shared basepoint.
    pub fn then(&self, next: &Self) -> Result<Self> {
        if self.model.kind != next.model.kind {
            return Err(Error::invalid("cannot concatenate loops of different models"));
        }
        if self.basepoint() != next.basepoint() {
            return Err(Error::invalid("concatenated loops must share their basepoint"));
        }
        let mut vertices = self.vertices.clone();
        vertices.extend(next.vertices.iter().skip(1).cloned());
        let plane = match (&self.plane, &next.plane) {
            (Some(a), Some(b)) if a == b => Some(a.clone()),
            _ => None,
        };
        Ok(Self { model: self.model.clone(), vertices, plane })
    }

    /// Point at vertex parameter `s ∈ [0, num_segments]` (linear within segments).
    pub fn position(&self, s: T) -> Vec<T> {
        let k = self.num_segments();
        let s = s.max(T::zero()).min(T::from_usize(k).expect("segment count"));
        let mut i = s.floor().to_usize().unwrap_or(0);
        if i >= k {
            i = k - 1;
        }
        let f = s - T::from_usize(i).expect("segment index");
        let (a, b) = (&self.vertices[i], &self.vertices[i + 1]);
        a.iter().zip(b).map(|(&x, &y)| x + (y - x) * f).collect()
    }

    /// The supported plane this loop lies in, if any.
    pub fn detect_plane(&self) -> Option<PlaneSpec<T>> {
        if let Some(p) = &self.plane {
            if self.vertices.iter().all(|v| p.contains(v)) {
                return Some(p.clone());
            }
        }
        PlaneKind::ALL
            .into_iter()
            .filter(|k| k.model() == self.model.kind)
            .map(PlaneSpec::canonical)
            .find(|p| self.vertices.iter().all(|v| p.contains(v)))
    }
}

/// Axis-aligned rectangle `[0, a] × [0, b]` in plane coordinates, first
/// edge along increasing `u`, every edge split into `subdivisions` pieces.
pub fn rectangle_loop<T: Real>(
    plane: &PlaneSpec<T>,
    extent_a: T,
    extent_b: T,
    subdivisions: usize,
) -> Result<ParameterLoop<T>> {
    if subdivisions == 0 {
        return Err(Error::invalid("subdivisions must be at least 1"));
    }
    if !extent_a.is_finite() || !extent_b.is_finite() {
        return Err(Error::invalid("rectangle extents must be finite"));
    }
    let z = T::zero();
    let corners = [(z, z), (extent_a, z), (extent_a, extent_b), (z, extent_b), (z, z)];
    let n = T::from_usize(subdivisions).expect("subdivision count");
    let mut uv = vec![corners[0]];
    for w in corners.windows(2) {
        let ((u0, v0), (u1, v1)) = (w[0], w[1]);
        for j in 1..=subdivisions {
            let f = T::from_usize(j).expect("index") / n;
            uv.push(if j == subdivisions { (u1, v1) } else { (u0 + (u1 - u0) * f, v0 + (v1 - v0) * f) });
        }
    }
    ParameterLoop::in_plane(plane, &uv)
}

/// Outcome of a holonomy integration.
#[derive(Clone, Debug, PartialEq)]
pub struct HolonomyResult<T: Real> {
    /// Unitary on the degenerate subspace.
    pub gamma: Unitary<T>,
    /// Number of exponential factors in the final product.
    pub steps_used: usize,
    /// Frobenius distance between the last two refinement levels.
    pub estimated_error: T,
}

/// Ordered product `Π exp(sign · A(λ̄)·Δλ)` with every loop segment split
/// into `substeps` equal pieces evaluated at their midpoints.
pub fn ordered_product<T: Real>(lp: &ParameterLoop<T>, substeps: usize, sign: T) -> Result<Unitary<T>> {
    let model = lp.model();
    let d = model.degenerate_dim();
    let mut gamma = ComplexSquareMatrix::identity(d);
    let n = T::from_usize(substeps.max(1)).expect("substeps");
    for w in lp.vertices().windows(2) {
        let (p, q) = (&w[0], &w[1]);
        if p == q {
            continue;
        }
        let step: Vec<T> = p.iter().zip(q).map(|(&a, &b)| (b - a) / n).collect();
        for j in 0..substeps.max(1) {
            let t = T::from_usize(j).expect("index") + T::lit(0.5);
            let mid: Vec<T> = p.iter().zip(&step).map(|(&a, &s)| a + s * t).collect();
            let a = model.connection_along(&mid, &step)?;
            let factor = a.scale(sign).exp();
            gamma = &*factor * &gamma;
        }
    }
    Ok(Unitary::new_unchecked(gamma))
}

fn refine<T: Real>(
    lp: &ParameterLoop<T>,
    tolerance: T,
    max_steps: usize,
    sign: T,
) -> std::result::Result<HolonomyResult<T>, IntegrationError<T>> {
    if tolerance.is_nan() || tolerance <= T::zero() {
        return Err(Error::invalid("refinement tolerance must be positive").into());
    }
    let d = lp.model().degenerate_dim();
    if lp.is_point_loop() {
        return Ok(HolonomyResult { gamma: Unitary::identity(d), steps_used: 0, estimated_error: T::zero() });
    }
    let k = lp.num_segments();
    let mut n = 1usize;
    let mut coarse = ordered_product(lp, n, sign)?;
    loop {
        n *= 2;
        let fine = ordered_product(lp, n, sign)?;
        let err = fine.distance(&coarse);
        let result = HolonomyResult { gamma: fine, steps_used: k * n, estimated_error: err };
        if err < tolerance {
            return Ok(result);
        }
        if k * n * 2 > max_steps {
            return Err(IntegrationError::NotConverged(Box::new(result)));
        }
        coarse = result.gamma;
    }
}

/// `Γ_A(C) = P exp ∮_C A`, refined by step doubling until two successive
/// levels differ by less than `refinement_tolerance` (Frobenius norm).
///
/// At least two levels are always evaluated; further doubling stops once
/// the next level would exceed `max_steps` exponential factors.
pub fn integrate_holonomy<T: Real>(
    lp: &ParameterLoop<T>,
    refinement_tolerance: T,
    max_steps: usize,
) -> std::result::Result<HolonomyResult<T>, IntegrationError<T>> {
    refine(lp, refinement_tolerance, max_steps, T::one())
}

/// `P exp ∮_C (−A)`: the map that adiabatic transport around `C` induces on
/// the degenerate subspace (expressed in the moving frame `U(λ)|α⟩`).
///
/// For loops inside one of the supported planes this is `Γ_A(C)†`, which is
/// also `Γ_A(C⁻¹)`.
pub fn integrate_transport<T: Real>(
    lp: &ParameterLoop<T>,
    refinement_tolerance: T,
    max_steps: usize,
) -> std::result::Result<HolonomyResult<T>, IntegrationError<T>> {
    refine(lp, refinement_tolerance, max_steps, -T::one())
}

/// The signed area functional that fixes the holonomy of a planar loop.
///
/// * `(θ, φ)` planes: `∮ sin²θ dφ` (Green's form of `∬ sin 2θ dθ dφ`).
/// * `(θ₁, θ₂)` planes: `∮ sin θ₂ dθ₁`.
///
/// Every segment is integrated in closed form.
pub fn projected_area<T: Real>(lp: &ParameterLoop<T>) -> Result<T> {
    let plane = lp
        .detect_plane()
        .ok_or_else(|| Error::invalid("loop does not lie in a supported plane"))?;
    let half = T::lit(0.5);
    let mut area = T::zero();
    for w in lp.vertices().windows(2) {
        let (u0, v0) = plane.project(&w[0]);
        let (u1, v1) = plane.project(&w[1]);
        let (du, dv) = (u1 - u0, v1 - v0);
        let umid = (u0 + u1) * half;
        let vmid = (v0 + v1) * half;
        area = area
            + if plane.kind.is_theta_phi() {
                // ∫₀¹ sin²(θ(t)) dt = ½ − ½ cos(2θ̄)·sinc(Δθ)
                dv * (half - half * (umid + umid).cos() * sinc(du))
            } else {
                // ∫₀¹ sin(θ₂(t)) dt = sin(θ̄₂)·sinc(Δθ₂/2)
                du * vmid.sin() * sinc(dv * half)
            };
    }
    Ok(area)
}

/// Closed-form holonomy `exp(Σ·g)` of a loop with area `Σ` in the plane.
pub fn analytic_plane_holonomy<T: Real>(plane: PlaneKind, sigma_area: T) -> Unitary<T> {
    let one = Complex::<T>::one();
    let ph = cis(-sigma_area);
    let (s, c) = sigma_area.sin_cos();
    let m = match plane {
        PlaneKind::ThetaPhi1 => ComplexSquareMatrix::from_diag(&[ph, one]),
        PlaneKind::ThetaPhi2 => ComplexSquareMatrix::from_diag(&[one, ph]),
        PlaneKind::Theta1Theta2Phi0 => ComplexSquareMatrix::from_fn(2, |r, col| match (r, col) {
            (0, 1) => Complex::new(-s, T::zero()),
            (1, 0) => Complex::new(s, T::zero()),
            _ => Complex::new(c, T::zero()),
        }),
        PlaneKind::Theta1Theta2Phi90 => ComplexSquareMatrix::from_fn(2, |r, col| {
            if r == col {
                Complex::new(c, T::zero())
            } else {
                Complex::new(T::zero(), -s)
            }
        }),
        PlaneKind::Grassmann => ComplexSquareMatrix::from_diag(&[one, one, one, ph]),
    };
    Unitary::new_unchecked(m)
}

/// `F_ab = ∂_a A_b − ∂_b A_a + [A_a, A_b]`, derivatives by central differences.
pub fn field_strength<T: Real>(
    model: &ModelFamily<T>,
    p: &[T],
    a: Coordinate,
    b: Coordinate,
) -> Result<AntiHermitian<T>> {
    if a == b {
        return Err(Error::invalid("field strength needs two different coordinates"));
    }
    let ia = model.coordinate_index(a)?;
    let ib = model.coordinate_index(b)?;
    let h = T::lit(tolerances::FIELD_STRENGTH_STEP);
    let shifted = |i: usize, delta: T| {
        let mut q = p.to_vec();
        q[i] = q[i] + delta;
        q
    };
    let derivative = |along: usize, comp: Coordinate| -> Result<ComplexSquareMatrix<T>> {
        let plus = connection_at(model, &shifted(along, h), comp)?;
        let minus = connection_at(model, &shifted(along, -h), comp)?;
        Ok((&*plus - &*minus).scale_real(T::one() / (h + h)))
    };
    let da_b = derivative(ia, b)?;
    let db_a = derivative(ib, a)?;
    let aa = connection_at(model, p, a)?;
    let ab = connection_at(model, p, b)?;
    let f = &(&da_b - &db_a) + &aa.commutator(&ab);
    AntiHermitian::new_with_tol(f, T::lit(tolerances::FIELD_STRENGTH_ANTI_HERMITIAN))
}
