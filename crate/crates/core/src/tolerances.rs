//! Numerical tolerances shared by the crate.
//!
//! Functions that validate inputs use [`INPUT`]; output contracts are tested
//! against [`OUTPUT`]. Routines that take an explicit tolerance argument
//! (the `*_with_tol` variants) let callers override these.

/// Input validation (Hermiticity, anti-Hermiticity, unitarity of targets).
pub const INPUT: f64 = 1e-10;

/// Output contract for exact-in-principle constructions.
pub const OUTPUT: f64 = 1e-12;

/// Below this |θ| the `sin θ / θ` factor is evaluated by its series.
pub const SINC_GUARD: f64 = 1e-7;

/// Rank tolerance for Lie closure orthogonalization.
pub const RANK: f64 = 1e-9;

/// Central-difference step for the field strength.
pub const FIELD_STRENGTH_STEP: f64 = 1e-5;

/// Anti-Hermiticity tolerance accepted on finite-difference field strengths.
pub const FIELD_STRENGTH_ANTI_HERMITIAN: f64 = 1e-6;

/// Default stopping tolerance of the holonomy integrator (Frobenius norm).
pub const REFINEMENT: f64 = 1e-8;

/// Default cap on total integration segments.
pub const MAX_STEPS: usize = 1 << 20;

/// Areas below this magnitude are dropped from synthesized programs.
pub const NEGLIGIBLE_AREA: f64 = 1e-12;
