//! Full-space Trotterized adiabatic evolution around a control loop,
//! `|ψ(T)⟩ = Π_i U(λ(t_i)) e^{−iH₀Δt} U(λ(t_i))† |ψ(0)⟩`, and its comparison
//! with the holonomy of the same loop.
//!
//! Time is shared equally between the loop segments. Inside a segment the
//! control either moves at constant speed ([`Pacing::Uniform`]) or follows
//! the ramp `τ − sin(2πτ)/2π` ([`Pacing::Smooth`]), which starts and stops
//! at rest so the corners of a polygonal loop do not kick population out
//! of the degenerate subspace.

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, IntegrationError, Result};
use crate::holonomy::{integrate_transport, ParameterLoop};
use crate::matrix::{ComplexSquareMatrix, StateVector, Unitary};
use crate::scalar::{cis, Real};
use crate::tolerances;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Pacing {
    Uniform,
    #[default]
    Smooth,
}

impl std::str::FromStr for Pacing {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(Pacing::Uniform),
            "smooth" => Ok(Pacing::Smooth),
            other => Err(Error::invalid(format!("unknown pacing `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EvolutionSchedule<T: Real> {
    pub path: ParameterLoop<T>,
    /// Total traversal time `T` in units of the inverse gap.
    pub total_time: T,
    /// Number of Trotter factors `N`; `Δt = T / N`.
    pub steps: usize,
    pub pacing: Pacing,
}

impl<T: Real> EvolutionSchedule<T> {
    pub fn new(path: ParameterLoop<T>, total_time: T, steps: usize) -> Result<Self> {
        if !total_time.is_finite() || total_time <= T::zero() {
            return Err(Error::invalid("total time must be positive and finite"));
        }
        if steps == 0 {
            return Err(Error::invalid("at least one Trotter step is required"));
        }
        Ok(Self { path, total_time, steps, pacing: Pacing::default() })
    }

    pub fn with_pacing(mut self, pacing: Pacing) -> Self {
        self.pacing = pacing;
        self
    }

    pub fn dt(&self) -> T {
        self.total_time / T::from_usize(self.steps).expect("step count")
    }

    /// Control point at time `t ∈ [0, T]`.
    pub fn control_at(&self, t: T) -> Vec<T> {
        let k = T::from_usize(self.path.num_segments()).expect("segment count");
        let s = (t / self.total_time).max(T::zero()).min(T::one()) * k;
        let s = match self.pacing {
            Pacing::Uniform => s,
            Pacing::Smooth => {
                let seg = s.floor().min(k - T::one());
                let tau = s - seg;
                let two_pi = T::PI() + T::PI();
                seg + tau - (two_pi * tau).sin() / two_pi
            }
        };
        self.path.position(s)
    }
}

/// Outcome of comparing the evolved degenerate block with the holonomy.
#[derive(Clone, Debug, PartialEq)]
pub struct EvolutionReport<T: Real> {
    /// Degenerate-basis block of the evolution, in the frame `U(λ₀)|α⟩`.
    pub projected_map: ComplexSquareMatrix<T>,
    /// Max over degenerate inputs of the norm outside the degenerate subspace.
    pub leakage: T,
    /// Frobenius distance between the phase-aligned block and `transport`.
    pub deviation: T,
    /// Reference map `P exp ∮(−A)` from the holonomy integrator.
    pub transport: Unitary<T>,
}

fn evolve_many<T: Real>(schedule: &EvolutionSchedule<T>, states: &mut [StateVector<T>]) -> Result<()> {
    let model = schedule.path.model();
    let n = model.full_dim;
    if let Some(bad) = states.iter().find(|s| s.dim() != n) {
        return Err(Error::DimensionMismatch { expected: n, found: bad.dim() });
    }
    let dt = schedule.dt();
    let phases: Vec<Complex<T>> = (0..n).map(|i| cis(-model.base_hamiltonian[(i, i)].re * dt)).collect();
    let half = T::lit(0.5);
    let mut rotated = vec![Complex::zero(); n];
    for i in 0..schedule.steps {
        let t = (T::from_usize(i).expect("index") + half) * dt;
        let u = model.unitary(&schedule.control_at(t))?;
        for psi in states.iter_mut() {
            let amps = psi.amplitudes();
            // U† ψ, phase, then U
            for (k, slot) in rotated.iter_mut().enumerate() {
                let mut acc: Complex<T> = Complex::zero();
                for (j, a) in amps.iter().enumerate() {
                    acc = acc + u[(j, k)].conj() * a;
                }
                *slot = acc * phases[k];
            }
            let next = (0..n)
                .map(|r| (0..n).fold(Complex::zero(), |acc, k| acc + u[(r, k)] * rotated[k]))
                .collect();
            *psi = StateVector::new(next);
        }
    }
    Ok(())
}

/// Applies the Trotter product to `initial`.
pub fn trotter_evolve<T: Real>(schedule: &EvolutionSchedule<T>, initial: &StateVector<T>) -> Result<StateVector<T>> {
    let mut states = [initial.clone()];
    evolve_many(schedule, &mut states)?;
    let [out] = states;
    Ok(out)
}

/// `min_φ ‖e^{iφ} b − g‖_F`.
pub fn phase_aligned_distance<T: Real>(b: &ComplexSquareMatrix<T>, g: &ComplexSquareMatrix<T>) -> T {
    let overlap = (&g.adjoint() * b).trace();
    let r = overlap.norm();
    let phase = if r > T::zero() { overlap.conj() / r } else { Complex::new(T::one(), T::zero()) };
    b.scale(phase).distance(g)
}

/// Evolves every degenerate basis state around the loop and measures the
/// result against the integrated transport map of the same loop.
pub fn compare_to_holonomy<T: Real>(
    schedule: &EvolutionSchedule<T>,
) -> std::result::Result<EvolutionReport<T>, IntegrationError<T>> {
    let model = schedule.path.model();
    let u0 = model.unitary(schedule.path.basepoint())?;
    let basis = &model.degenerate_basis;
    let n = model.full_dim;
    let mut states: Vec<StateVector<T>> =
        basis.iter().map(|&a| u0.apply(&StateVector::basis(n, a))).collect();
    evolve_many(schedule, &mut states)?;

    let frame = u0.adjoint();
    let d = basis.len();
    let mut projected_map = ComplexSquareMatrix::zeros(d);
    let mut leakage = T::zero();
    for (col, psi) in states.iter().enumerate() {
        let local = frame.apply(psi);
        let amps = local.amplitudes();
        for (row, &b) in basis.iter().enumerate() {
            projected_map[(row, col)] = amps[b];
        }
        let outside = (0..n)
            .filter(|k| !basis.contains(k))
            .fold(T::zero(), |acc, k| acc + amps[k].norm_sqr())
            .sqrt();
        leakage = leakage.max(outside);
    }

    let transport = integrate_transport(
        &schedule.path,
        T::lit(tolerances::REFINEMENT),
        tolerances::MAX_STEPS,
    )?
    .gamma;
    let deviation = phase_aligned_distance(&projected_map, &transport);
    Ok(EvolutionReport { projected_map, leakage: leakage.min(T::one()), deviation, transport })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::holonomy::{integrate_holonomy, rectangle_loop, PlaneKind, PlaneSpec};
    use crate::models::ModelFamily;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    type M = ComplexSquareMatrix<f64>;

    #[test]
    fn schedule_validation() {
        let lp = ParameterLoop::point(ModelFamily::<f64>::cp2(), vec![0.0; 4]).unwrap();
        assert!(EvolutionSchedule::new(lp.clone(), 0.0, 10).is_err());
        assert!(EvolutionSchedule::new(lp.clone(), 1.0, 0).is_err());
        assert!(EvolutionSchedule::new(lp, 1.0, 1).is_ok());
    }

    #[test]
    fn control_path_visits_vertices() {
        let lp = rectangle_loop(&PlaneSpec::<f64>::canonical(PlaneKind::Grassmann), 1.0, 2.0, 1).unwrap();
        for pacing in [Pacing::Uniform, Pacing::Smooth] {
            let s = EvolutionSchedule::new(lp.clone(), 8.0, 10).unwrap().with_pacing(pacing);
            assert_eq!(s.control_at(0.0), vec![0.0, 0.0]);
            let p = s.control_at(2.0);
            assert!((p[0] - 1.0).abs() < 1e-15 && p[1].abs() < 1e-15);
            let p = s.control_at(8.0);
            assert!(p[0].abs() < 1e-15 && p[1].abs() < 1e-15);
        }
    }

    #[test]
    fn degenerate_state_is_static_on_point_loop() {
        let lp = ParameterLoop::point(ModelFamily::<f64>::cp2(), vec![0.0; 4]).unwrap();
        let s = EvolutionSchedule::new(lp, 3.0, 1).unwrap();
        let psi = StateVector::basis(3, 1);
        assert_eq!(trotter_evolve(&s, &psi).unwrap(), psi);
    }

    #[test]
    fn excited_state_picks_up_dynamical_phase() {
        let lp = ParameterLoop::point(ModelFamily::<f64>::cp2(), vec![0.0; 4]).unwrap();
        let s = EvolutionSchedule::new(lp, 2.0 * PI, 1).unwrap();
        let out = trotter_evolve(&s, &StateVector::basis(3, 2)).unwrap();
        assert!((out.amplitudes()[2] - Complex::new(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let lp = ParameterLoop::point(ModelFamily::<f64>::cp2(), vec![0.0; 4]).unwrap();
        let s = EvolutionSchedule::new(lp, 1.0, 1).unwrap();
        assert!(trotter_evolve(&s, &StateVector::basis(9, 0)).is_err());
    }

    #[test]
    fn point_loop_report_is_exact() {
        let lp = ParameterLoop::point(ModelFamily::<f64>::grassmann(), vec![0.0, 0.0]).unwrap();
        let r = compare_to_holonomy(&EvolutionSchedule::new(lp, 5.0, 7).unwrap()).unwrap();
        assert_eq!(r.deviation, 0.0);
        assert_eq!(r.leakage, 0.0);
        assert_eq!(r.projected_map, M::identity(4));
    }

    #[test]
    fn off_origin_point_loop_is_identity_on_code() {
        let lp = ParameterLoop::point(ModelFamily::<f64>::cp2(), vec![0.7, 0.2, 1.1, -0.4]).unwrap();
        let r = compare_to_holonomy(&EvolutionSchedule::new(lp, 5.0, 50).unwrap()).unwrap();
        assert!(r.deviation < 1e-12);
        assert!(r.leakage < 1e-12);
    }

    #[test]
    fn norm_is_preserved() {
        let lp = rectangle_loop(&PlaneSpec::<f64>::canonical(PlaneKind::Theta1Theta2Phi90), 1.0, 1.3, 1).unwrap();
        let s = EvolutionSchedule::new(lp, 7.0, 300).unwrap().with_pacing(Pacing::Uniform);
        let psi = StateVector::new(vec![
            Complex::new(0.6, 0.0),
            Complex::new(0.0, 0.48),
            Complex::new(0.64, 0.0),
        ]);
        let out = trotter_evolve(&s, &psi).unwrap();
        assert!((out.norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn grassmann_rectangle_state_follows_holonomy() {
        let lp = rectangle_loop(&PlaneSpec::canonical(PlaneKind::Grassmann), FRAC_PI_2, PI, 1).unwrap();
        let s = EvolutionSchedule::new(lp.clone(), 200.0, 4000).unwrap();
        let out = trotter_evolve(&s, &StateVector::basis(9, 3)).unwrap();
        let gamma = integrate_holonomy(&lp, 1e-10, 1 << 20).unwrap().gamma;
        let expected = gamma[(3, 3)];
        let overlap = (out.amplitudes()[3] * expected.conj()).norm();
        assert!(overlap > 0.99, "overlap {overlap}");
    }

    #[test]
    fn transport_not_holonomy_is_what_evolution_realizes() {
        // Area π/2: Γ = diag(1,1,1,−i) while the transport is diag(1,1,1,+i);
        // the two differ even after removing a global phase.
        let lp = rectangle_loop(&PlaneSpec::canonical(PlaneKind::Grassmann), FRAC_PI_4, PI, 1).unwrap();
        let r = compare_to_holonomy(&EvolutionSchedule::new(lp.clone(), 400.0, 8000).unwrap()).unwrap();
        let gamma = integrate_holonomy(&lp, 1e-10, 1 << 20).unwrap().gamma;
        assert!(r.deviation < 0.1, "deviation {}", r.deviation);
        assert!(phase_aligned_distance(&r.projected_map, &gamma) > 0.5);
    }

    #[test]
    fn phase_alignment_removes_global_phase() {
        let g = M::from_real_diag(&[1.0, -1.0]);
        let b = g.scale(cis(0.7));
        assert!(phase_aligned_distance(&b, &g) < 1e-15);
    }
}
