//! Holonomic quantum computation on the CP² qubit model and the G(4,2)
//! two-qubit interaction model.
//!
//! The crate computes non-abelian adiabatic connections `A = U†∂U`
//! projected on the degenerate (E = 0) eigenspace, integrates path-ordered
//! holonomies along closed loops in control-parameter space, simulates the
//! Trotterized adiabatic evolution that realizes them, and compiles logical
//! gates into loop programs.
//!
//! Everything numeric is generic over the real scalar ([`Real`], implemented
//! for `f32` and `f64`). The `f64` aliases below are what most callers want.

pub mod adiabatic;
pub mod cli;
pub mod error;
pub mod gates;
pub mod holonomy;
pub mod matrix;
pub mod models;
pub mod program_file;
pub mod scalar;
pub mod tolerances;

pub use error::{Error, IntegrationError, Result};
pub use scalar::Real;

pub use adiabatic::{compare_to_holonomy, trotter_evolve, EvolutionReport, EvolutionSchedule, Pacing};
pub use gates::{
    controlled_phase_program, evaluate_program, lie_closure_dimension, synthesize_single_qubit,
    LoopProgram, LoopStep,
};
pub use holonomy::{
    analytic_plane_holonomy, field_strength, integrate_holonomy, integrate_transport,
    projected_area, rectangle_loop, HolonomyResult, ParameterLoop, PlaneKind, PlaneSpec,
};
pub use matrix::{
    expm_antihermitian, hermitian_eigenvalues, mat_mul, unitarity_distance, AntiHermitian,
    ComplexSquareMatrix, StateVector, Unitary,
};
pub use models::{connection_at, Coordinate, Cp2Point, GrassmannPoint, ModelFamily, ModelKind};

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex<f64>;

pub type CMatrix = ComplexSquareMatrix<f64>;
pub type CMatrix32 = ComplexSquareMatrix<f32>;
pub type UnitaryMatrix = Unitary<f64>;
pub type UnitaryMatrix32 = Unitary<f32>;
pub type AntiHermitianMatrix = AntiHermitian<f64>;
pub type AntiHermitianMatrix32 = AntiHermitian<f32>;
pub type State = StateVector<f64>;
pub type Loop = ParameterLoop<f64>;
pub type Loop32 = ParameterLoop<f32>;
pub type Plane = PlaneSpec<f64>;
pub type Holonomy = HolonomyResult<f64>;
pub type Program = LoopProgram<f64>;
pub type Schedule = EvolutionSchedule<f64>;
pub type Report = EvolutionReport<f64>;
