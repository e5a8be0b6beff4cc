//! Logical gates as loop programs on an m-qubit register.
//!
//! Each qubit is the degenerate pair `(|1⟩, |2⟩)` of one CP² factor; the
//! register basis is lexicographic with qubit 0 the most significant bit
//! (`|2⟩` is bit value 1). Steps apply in order, so a later step multiplies
//! on the left.

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, IntegrationError, Result};
use crate::holonomy::{analytic_plane_holonomy, integrate_holonomy, rectangle_loop, PlaneKind, PlaneSpec};
use crate::matrix::{AntiHermitian, ComplexSquareMatrix, Unitary};
use crate::scalar::{cis, Real};
use crate::tolerances;

/// Largest register handled by [`evaluate_program`].
pub const MAX_QUBITS: usize = 4;

#[derive(Clone, Debug, PartialEq)]
pub enum LoopStep<T> {
    /// A loop of signed area `area` in one of the four CP² planes of `qubit`.
    PlaneLoop { qubit: usize, plane: PlaneKind, area: T },
    /// A G(4,2) loop between two qubits: `diag(1,1,1,e^{−iΣ})` on the pair.
    ControlledPhase { control: usize, target: usize, area: T },
}

impl<T: Real> LoopStep<T> {
    fn validate(&self, num_qubits: usize) -> Result<()> {
        match *self {
            LoopStep::PlaneLoop { qubit, plane, area } => {
                if qubit >= num_qubits {
                    return Err(Error::invalid(format!("qubit {qubit} out of range for {num_qubits} qubits")));
                }
                if plane == PlaneKind::Grassmann {
                    return Err(Error::invalid("single-qubit loops must use a CP² plane"));
                }
                if !area.is_finite() {
                    return Err(Error::invalid("loop area must be finite"));
                }
            }
            LoopStep::ControlledPhase { control, target, area } => {
                if control >= num_qubits || target >= num_qubits {
                    return Err(Error::invalid(format!(
                        "controlled phase ({control}, {target}) out of range for {num_qubits} qubits"
                    )));
                }
                if control == target {
                    return Err(Error::invalid("controlled phase needs two different qubits"));
                }
                if !area.is_finite() {
                    return Err(Error::invalid("loop area must be finite"));
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LoopProgram<T> {
    pub num_qubits: usize,
    pub steps: Vec<LoopStep<T>>,
}

impl<T: Real> LoopProgram<T> {
    pub fn new(num_qubits: usize, steps: Vec<LoopStep<T>>) -> Result<Self> {
        if num_qubits == 0 {
            return Err(Error::invalid("a program needs at least one qubit"));
        }
        for s in &steps {
            s.validate(num_qubits)?;
        }
        Ok(Self { num_qubits, steps })
    }

    pub fn empty(num_qubits: usize) -> Self {
        Self { num_qubits, steps: Vec::new() }
    }

    /// Run `self`, then `next`.
    pub fn then(&self, next: &Self) -> Result<Self> {
        if self.num_qubits != next.num_qubits {
            return Err(Error::invalid("programs act on different register sizes"));
        }
        let mut steps = self.steps.clone();
        steps.extend(next.steps.iter().cloned());
        Ok(Self { num_qubits: self.num_qubits, steps })
    }

    /// Same program on a larger register (qubit indices unchanged).
    pub fn widen(&self, num_qubits: usize) -> Result<Self> {
        Self::new(num_qubits, self.steps.clone())
    }
}

fn bit(x: usize, qubit: usize, m: usize) -> usize {
    (x >> (m - 1 - qubit)) & 1
}

/// `g` acting on `qubit` of an m-qubit register, identity elsewhere.
pub fn embed_single<T: Real>(g: &ComplexSquareMatrix<T>, qubit: usize, m: usize) -> ComplexSquareMatrix<T> {
    let mask = 1usize << (m - 1 - qubit);
    ComplexSquareMatrix::from_fn(1 << m, |r, c| {
        if (r & !mask) != (c & !mask) {
            Complex::zero()
        } else {
            g[(bit(r, qubit, m), bit(c, qubit, m))]
        }
    })
}

/// A 4×4 `g` acting on the ordered pair `(first, second)`, identity elsewhere.
pub fn embed_pair<T: Real>(
    g: &ComplexSquareMatrix<T>,
    first: usize,
    second: usize,
    m: usize,
) -> ComplexSquareMatrix<T> {
    let mask = (1usize << (m - 1 - first)) | (1usize << (m - 1 - second));
    ComplexSquareMatrix::from_fn(1 << m, |r, c| {
        if (r & !mask) != (c & !mask) {
            Complex::zero()
        } else {
            let ri = 2 * bit(r, first, m) + bit(r, second, m);
            let ci = 2 * bit(c, first, m) + bit(c, second, m);
            g[(ri, ci)]
        }
    })
}

fn controlled_phase_matrix<T: Real>(control: usize, target: usize, area: T, m: usize) -> ComplexSquareMatrix<T> {
    let ph = cis(-area);
    let diag: Vec<Complex<T>> = (0..1usize << m)
        .map(|x| if bit(x, control, m) == 1 && bit(x, target, m) == 1 { ph } else { Complex::one() })
        .collect();
    ComplexSquareMatrix::from_diag(&diag)
}

fn step_matrix<T: Real>(step: &LoopStep<T>, m: usize) -> ComplexSquareMatrix<T> {
    match *step {
        LoopStep::PlaneLoop { qubit, plane, area } => embed_single(&analytic_plane_holonomy(plane, area), qubit, m),
        LoopStep::ControlledPhase { control, target, area } => controlled_phase_matrix(control, target, area, m),
    }
}

fn check_register<T: Real>(prog: &LoopProgram<T>) -> Result<()> {
    if prog.num_qubits == 0 || prog.num_qubits > MAX_QUBITS {
        return Err(Error::invalid(format!(
            "register size must be between 1 and {MAX_QUBITS}, got {}",
            prog.num_qubits
        )));
    }
    for s in &prog.steps {
        s.validate(prog.num_qubits)?;
    }
    Ok(())
}

/// Composite unitary of a program using the closed-form plane holonomies.
pub fn evaluate_program<T: Real>(prog: &LoopProgram<T>) -> Result<Unitary<T>> {
    check_register(prog)?;
    let m = prog.num_qubits;
    let mut acc = ComplexSquareMatrix::identity(1 << m);
    for s in &prog.steps {
        acc = &step_matrix(s, m) * &acc;
    }
    Ok(Unitary::new_unchecked(acc))
}

/// Rectangle extents `(a, b)` in `plane` whose loop has projected area `area`.
pub fn realizing_rectangle<T: Real>(plane: PlaneKind, area: T) -> (T, T) {
    match plane {
        PlaneKind::ThetaPhi1 | PlaneKind::ThetaPhi2 | PlaneKind::Grassmann => (T::FRAC_PI_2(), area),
        // ∮ sin θ₂ dθ₁ = −a·sin b
        PlaneKind::Theta1Theta2Phi0 | PlaneKind::Theta1Theta2Phi90 => (-area, T::FRAC_PI_2()),
    }
}

/// Like [`evaluate_program`] but every step's holonomy comes from the
/// numerical integrator run on a rectangle realizing the step's area.
pub fn evaluate_program_numerical<T: Real>(
    prog: &LoopProgram<T>,
    tolerance: T,
) -> std::result::Result<Unitary<T>, IntegrationError<T>> {
    check_register(prog)?;
    let m = prog.num_qubits;
    let mut acc = ComplexSquareMatrix::identity(1 << m);
    for s in &prog.steps {
        let (plane, area) = match *s {
            LoopStep::PlaneLoop { plane, area, .. } => (plane, area),
            LoopStep::ControlledPhase { area, .. } => (PlaneKind::Grassmann, area),
        };
        let (a, b) = realizing_rectangle(plane, area);
        let lp = rectangle_loop(&PlaneSpec::canonical(plane), a, b, 1)?;
        let gamma = integrate_holonomy(&lp, tolerance, tolerances::MAX_STEPS)?.gamma;
        let mat = match *s {
            LoopStep::PlaneLoop { qubit, .. } => embed_single(&gamma, qubit, m),
            LoopStep::ControlledPhase { control, target, .. } => embed_pair(&gamma, control, target, m),
        };
        acc = &mat * &acc;
    }
    Ok(Unitary::new_unchecked(acc))
}

/// Reduces an angle into `(−π, π]`.
pub fn wrap_area<T: Real>(x: T) -> T {
    let two_pi = T::PI() + T::PI();
    let mut r = x % two_pi;
    if r <= -T::PI() {
        r = r + two_pi;
    } else if r > T::PI() {
        r = r - two_pi;
    }
    r
}

/// Writes a 2×2 unitary as
/// `diag(e^{iα}, e^{iβ}) · exp(−iΣσ²) · diag(e^{iγ}, e^{iδ})` and emits the
/// corresponding phase loops and σ² loop on qubit 0 of a one-qubit register.
pub fn synthesize_single_qubit<T: Real>(target: &ComplexSquareMatrix<T>) -> Result<LoopProgram<T>> {
    if target.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: target.dim() });
    }
    Unitary::new(target.clone())?;

    let (u00, u01, u10, u11) = (target[(0, 0)], target[(0, 1)], target[(1, 0)], target[(1, 1)]);
    let c = u00.norm();
    let s = u10.norm();
    let mut rotation = s.atan2(c);
    let negligible = T::lit(tolerances::NEGLIGIBLE_AREA);

    // γ is fixed to 0; the other phases come from whichever entries are
    // large enough to carry an accurate argument.
    let (alpha, beta, gamma, delta);
    if rotation < negligible {
        rotation = T::zero();
        alpha = u00.arg();
        beta = u11.arg();
        gamma = T::zero();
        delta = T::zero();
    } else if c >= s {
        alpha = u00.arg();
        beta = u10.arg();
        gamma = T::zero();
        delta = u11.arg() - beta;
    } else {
        alpha = u00.arg();
        beta = u10.arg();
        gamma = T::zero();
        delta = (-u01).arg() - alpha;
    }

    // exp(−iΣP_α) = e^{−iΣ} on |α⟩, so a phase e^{iχ} needs area −χ.
    let candidates = [
        (PlaneKind::ThetaPhi1, -gamma),
        (PlaneKind::ThetaPhi2, -delta),
        (PlaneKind::Theta1Theta2Phi0, rotation),
        (PlaneKind::ThetaPhi1, -alpha),
        (PlaneKind::ThetaPhi2, -beta),
    ];
    let steps = candidates
        .into_iter()
        .map(|(plane, area)| (plane, wrap_area(area)))
        .filter(|(_, area)| area.abs() >= negligible)
        .map(|(plane, area)| LoopStep::PlaneLoop { qubit: 0, plane, area })
        .collect();
    LoopProgram::new(1, steps)
}

/// A single controlled-phase loop between `control` and `target`.
pub fn controlled_phase_program<T: Real>(
    num_qubits: usize,
    control: usize,
    target: usize,
    area: T,
) -> Result<LoopProgram<T>> {
    LoopProgram::new(num_qubits, vec![LoopStep::ControlledPhase { control, target, area }])
}

/// Dimension of the real Lie algebra generated by `generators` under
/// nested commutators.
pub fn lie_closure_dimension<T: Real>(generators: &[AntiHermitian<T>]) -> Result<usize> {
    lie_closure_dimension_with_tol(generators, T::lit(tolerances::RANK))
}

pub fn lie_closure_dimension_with_tol<T: Real>(generators: &[AntiHermitian<T>], tol: T) -> Result<usize> {
    let Some(first) = generators.first() else {
        return Ok(0);
    };
    let n = first.dim();
    if let Some(bad) = generators.iter().find(|g| g.dim() != n) {
        return Err(Error::DimensionMismatch { expected: n, found: bad.dim() });
    }
    let max_dim = n * n;
    let mut basis: Vec<ComplexSquareMatrix<T>> = Vec::new();
    for g in generators {
        try_extend(&mut basis, g.matrix().clone(), tol);
    }
    let mut checked = 0;
    while checked < basis.len() && basis.len() < max_dim {
        let len = basis.len();
        for j in checked..len {
            for i in 0..j {
                let c = basis[i].commutator(&basis[j]);
                try_extend(&mut basis, c, tol);
                if basis.len() == max_dim {
                    return Ok(max_dim);
                }
            }
        }
        checked = len;
    }
    Ok(basis.len())
}

/// Adds the component of `m` orthogonal (real Frobenius inner product) to
/// `basis`, if it is larger than `tol` relative to `m`.
fn try_extend<T: Real>(basis: &mut Vec<ComplexSquareMatrix<T>>, m: ComplexSquareMatrix<T>, tol: T) -> bool {
    let norm = m.frobenius_norm();
    if norm <= tol {
        return false;
    }
    let mut v = m.scale_real(T::one() / norm);
    for _ in 0..2 {
        for b in basis.iter() {
            let dot = real_inner(b, &v);
            v = &v - &b.scale_real(dot);
        }
    }
    let r = v.frobenius_norm();
    if r <= tol {
        return false;
    }
    basis.push(v.scale_real(T::one() / r));
    true
}

fn real_inner<T: Real>(a: &ComplexSquareMatrix<T>, b: &ComplexSquareMatrix<T>) -> T {
    a.as_slice()
        .iter()
        .zip(b.as_slice())
        .fold(T::zero(), |acc, (x, y)| acc + x.re * y.re + x.im * y.im)
}

/// `{−iP₁, −iP₂, −iσ¹, −iσ²}`: the generators reachable by one-qubit loops.
pub fn one_qubit_generators<T: Real>() -> Vec<AntiHermitian<T>> {
    [
        PlaneKind::ThetaPhi1,
        PlaneKind::ThetaPhi2,
        PlaneKind::Theta1Theta2Phi90,
        PlaneKind::Theta1Theta2Phi0,
    ]
    .into_iter()
    .map(PlaneKind::generator)
    .collect()
}

/// One-qubit generators on every qubit plus the controlled-phase generator
/// `diag(0,0,0,−i)` on every neighbouring pair.
pub fn register_generators<T: Real>(num_qubits: usize) -> Result<Vec<AntiHermitian<T>>> {
    if num_qubits == 0 || num_qubits > MAX_QUBITS {
        return Err(Error::invalid(format!("register size must be between 1 and {MAX_QUBITS}")));
    }
    let m = num_qubits;
    let mut out = Vec::new();
    for q in 0..m {
        for g in one_qubit_generators::<T>() {
            out.push(AntiHermitian::new(embed_single(&g, q, m))?);
        }
    }
    let cph = PlaneKind::Grassmann.generator::<T>();
    for q in 0..m.saturating_sub(1) {
        out.push(AntiHermitian::new(embed_pair(&cph, q, q + 1, m))?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::unitarity_distance;
    use num_complex::Complex64;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, PI};

    type M = ComplexSquareMatrix<f64>;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn step(plane: PlaneKind, area: f64) -> LoopStep<f64> {
        LoopStep::PlaneLoop { qubit: 0, plane, area }
    }

    #[test]
    fn empty_program_is_identity() {
        for m in 1..=4 {
            let u = evaluate_program(&LoopProgram::<f64>::empty(m)).unwrap();
            assert_eq!(*u, M::identity(1 << m));
        }
        assert!(evaluate_program(&LoopProgram::<f64>::empty(5)).is_err());
    }

    #[test]
    fn controlled_phase_pi() {
        let u = evaluate_program(&controlled_phase_program(2, 0, 1, PI).unwrap()).unwrap();
        assert!(u.distance(&M::from_real_diag(&[1.0, 1.0, 1.0, -1.0])) < 1e-12);
        let id = evaluate_program(&controlled_phase_program(2, 0, 1, 0.0).unwrap()).unwrap();
        assert_eq!(*id, M::identity(4));
        assert!(controlled_phase_program(2, 1, 1, PI).is_err());
        assert!(controlled_phase_program(2, 0, 2, PI).is_err());
    }

    #[test]
    fn controlled_phase_on_three_qubits() {
        let u = evaluate_program(&controlled_phase_program(3, 1, 2, FRAC_PI_2).unwrap()).unwrap();
        // Enumerate basis states: qubits 1 and 2 are the two low bits.
        for x in 0..8usize {
            let both = (x & 0b011) == 0b011;
            let want = if both { c(0.0, -1.0) } else { c(1.0, 0.0) };
            assert!((u[(x, x)] - want).norm() < 1e-15);
        }
        assert!((u.frobenius_norm() - 8f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn phase_pair_gives_traceless_z_rotation() {
        let s1 = 0.73;
        let prog =
            LoopProgram::new(1, vec![step(PlaneKind::ThetaPhi1, s1), step(PlaneKind::ThetaPhi2, -s1)]).unwrap();
        let u = evaluate_program(&prog).unwrap();
        assert!(u.distance(&M::from_diag(&[cis(-s1), cis(s1)])) < 1e-15);
    }

    #[test]
    fn embedding_respects_register_order() {
        let x = M::from_rows(vec![vec![c(0.0, 0.0), c(1.0, 0.0)], vec![c(1.0, 0.0), c(0.0, 0.0)]]).unwrap();
        let on0 = embed_single(&x, 0, 2);
        assert_eq!(on0, x.kron(&M::identity(2)));
        let on1 = embed_single(&x, 1, 2);
        assert_eq!(on1, M::identity(2).kron(&x));
    }

    #[test]
    fn synthesis_of_generator_exponential() {
        let target = analytic_plane_holonomy(PlaneKind::Theta1Theta2Phi0, FRAC_PI_4);
        let prog = synthesize_single_qubit(&target).unwrap();
        assert_eq!(prog.steps, vec![step(PlaneKind::Theta1Theta2Phi0, FRAC_PI_4)]);
    }

    #[test]
    fn synthesis_of_identity_is_empty() {
        let prog = synthesize_single_qubit(&M::identity(2)).unwrap();
        assert!(prog.steps.is_empty());
    }

    #[test]
    fn synthesis_of_hadamard() {
        let h = M::from_rows(vec![
            vec![c(FRAC_1_SQRT_2, 0.0), c(FRAC_1_SQRT_2, 0.0)],
            vec![c(FRAC_1_SQRT_2, 0.0), c(-FRAC_1_SQRT_2, 0.0)],
        ])
        .unwrap();
        let prog = synthesize_single_qubit(&h).unwrap();
        assert!(prog.steps.len() <= 5);
        assert!(evaluate_program(&prog).unwrap().distance(&h) < 1e-8);
    }

    #[test]
    fn synthesis_of_diagonal_and_antidiagonal() {
        let d = M::from_diag(&[cis(2.9), cis(-1.3)]);
        let prog = synthesize_single_qubit(&d).unwrap();
        assert!(prog.steps.iter().all(|s| !matches!(s, LoopStep::PlaneLoop { plane: PlaneKind::Theta1Theta2Phi0, .. })));
        assert!(evaluate_program(&prog).unwrap().distance(&d) < 1e-12);
        let a = M::from_rows(vec![vec![c(0.0, 0.0), cis(0.4)], vec![cis(-2.0), c(0.0, 0.0)]]).unwrap();
        let prog = synthesize_single_qubit(&a).unwrap();
        assert!(evaluate_program(&prog).unwrap().distance(&a) < 1e-12);
    }

    #[test]
    fn synthesis_rejects_non_unitary() {
        assert!(synthesize_single_qubit(&M::identity(2).scale_real(1.1)).is_err());
        assert!(synthesize_single_qubit(&M::identity(3)).is_err());
    }

    #[test]
    fn synthesized_areas_are_canonical() {
        let u = M::from_diag(&[cis(3.0), cis(-3.1)]);
        let prog = synthesize_single_qubit(&u).unwrap();
        for s in &prog.steps {
            if let LoopStep::PlaneLoop { area, .. } = s {
                assert!(*area > -PI && *area <= PI);
            }
        }
        assert_eq!(wrap_area(PI), PI);
        assert_eq!(wrap_area(-PI), PI);
        assert!((wrap_area(3.0 * PI + 0.1) - (-PI + 0.1)).abs() < 1e-12);
    }

    #[test]
    fn closure_dimensions() {
        assert_eq!(lie_closure_dimension(&one_qubit_generators::<f64>()).unwrap(), 4);
        let s3 = AntiHermitian::new(M::from_diag(&[c(0.0, -1.0), c(0.0, 1.0)])).unwrap();
        assert_eq!(lie_closure_dimension(&[s3]).unwrap(), 1);
        assert_eq!(lie_closure_dimension(&register_generators::<f64>(2).unwrap()).unwrap(), 16);
        // Local generators alone give u(2)⊕u(2) sharing the identity: 7.
        let local: Vec<_> = register_generators::<f64>(2).unwrap().into_iter().take(8).collect();
        assert_eq!(lie_closure_dimension(&local).unwrap(), 7);
        assert_eq!(lie_closure_dimension::<f64>(&[]).unwrap(), 0);
    }

    #[test]
    fn closure_rejects_mixed_dimensions() {
        let a = AntiHermitian::<f64>::zeros(2);
        let b = AntiHermitian::<f64>::zeros(3);
        assert!(lie_closure_dimension(&[a, b]).is_err());
    }

    #[test]
    fn numerical_evaluation_agrees() {
        let prog = LoopProgram::new(
            2,
            vec![
                LoopStep::PlaneLoop { qubit: 0, plane: PlaneKind::Theta1Theta2Phi0, area: 0.6 },
                LoopStep::ControlledPhase { control: 0, target: 1, area: 1.1 },
                LoopStep::PlaneLoop { qubit: 1, plane: PlaneKind::ThetaPhi2, area: -0.8 },
                LoopStep::PlaneLoop { qubit: 1, plane: PlaneKind::Theta1Theta2Phi90, area: 0.3 },
            ],
        )
        .unwrap();
        let a = evaluate_program(&prog).unwrap();
        let n = evaluate_program_numerical(&prog, 1e-9).unwrap();
        assert!(a.distance(&n) < 1e-5);
        assert!(unitarity_distance(&a) < 1e-10);
    }

    fn plane_of(k: u8) -> PlaneKind {
        [
            PlaneKind::ThetaPhi1,
            PlaneKind::ThetaPhi2,
            PlaneKind::Theta1Theta2Phi0,
            PlaneKind::Theta1Theta2Phi90,
        ][k as usize % 4]
    }

    fn step_strategy(m: usize) -> impl Strategy<Value = LoopStep<f64>> {
        prop_oneof![
            (0..m, 0u8..4, -PI..PI).prop_map(|(qubit, k, area)| LoopStep::PlaneLoop { qubit, plane: plane_of(k), area }),
            (0..m, 1..m, -PI..PI).prop_map(move |(control, shift, area)| LoopStep::ControlledPhase {
                control,
                target: (control + shift) % m,
                area
            }),
        ]
    }

    fn program_strategy(m: usize) -> impl Strategy<Value = LoopProgram<f64>> {
        proptest::collection::vec(step_strategy(m), 0..6).prop_map(move |steps| LoopProgram::new(m, steps).unwrap())
    }

    fn unit_quaternion_u2(q: [f64; 4], phase: f64) -> M {
        let n = q.iter().map(|x| x * x).sum::<f64>().sqrt();
        let [a, b, cc, d] = q.map(|x| x / n);
        M::from_rows(vec![vec![c(a, b), c(cc, d)], vec![c(-cc, d), c(a, -b)]])
            .unwrap()
            .scale(cis(phase))
    }

    use proptest::prelude::*;

    proptest! {
        #[test]
        fn concatenation_is_later_left_product(p in program_strategy(3), q in program_strategy(3)) {
            let joined = evaluate_program(&p.then(&q).unwrap()).unwrap();
            let product = &*evaluate_program(&q).unwrap() * &*evaluate_program(&p).unwrap();
            prop_assert!(joined.distance(&product) < 1e-12);
        }

        #[test]
        fn disjoint_controlled_phases_commute(a in -PI..PI, b in -PI..PI) {
            let x = evaluate_program(&controlled_phase_program(4, 0, 1, a).unwrap()).unwrap();
            let y = evaluate_program(&controlled_phase_program(4, 2, 3, b).unwrap()).unwrap();
            prop_assert!((&*x * &*y).distance(&(&*y * &*x)) < 1e-14);
        }

        #[test]
        fn closure_is_conjugation_invariant(q in proptest::array::uniform4(-1.0f64..1.0), phase in -PI..PI) {
            prop_assume!(q.iter().map(|x| x * x).sum::<f64>() > 1e-3);
            let v = unit_quaternion_u2(q, phase);
            let gens = one_qubit_generators::<f64>();
            let conj: Vec<_> = gens
                .iter()
                .map(|g| AntiHermitian::new(&(&v * g.matrix()) * &v.adjoint()).unwrap())
                .collect();
            prop_assert_eq!(lie_closure_dimension(&conj).unwrap(), lie_closure_dimension(&gens).unwrap());
            let s3 = AntiHermitian::new(M::from_diag(&[c(0.0, -1.0), c(0.0, 1.0)])).unwrap();
            let s3c = AntiHermitian::new(&(&v * s3.matrix()) * &v.adjoint()).unwrap();
            prop_assert_eq!(lie_closure_dimension(&[s3c]).unwrap(), 1);
        }
    }

    #[test]
    fn synthesis_round_trip_on_haar_samples() {
        use rand::{Rng, SeedableRng};
        use rand_distr::StandardNormal;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        for _ in 0..200 {
            let q: [f64; 4] = std::array::from_fn(|_| rng.sample(StandardNormal));
            let u = unit_quaternion_u2(q, rng.random_range(-PI..PI));
            let prog = synthesize_single_qubit(&u).unwrap();
            assert!(prog.steps.len() <= 5);
            assert!(evaluate_program(&prog).unwrap().distance(&u) < 1e-8);
        }
    }
}
