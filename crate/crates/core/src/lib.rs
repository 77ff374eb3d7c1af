//! Optimal ultimate bounds for damped second-order linear equations
//! `u'' + c u' + A u = f` with bounded forcing.

// `!(x > 0.0)` is used on purpose throughout so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod equivalence;
pub mod error;
pub mod estimate;
pub mod quadrature;
pub mod scalar;
pub mod signal;
pub mod simulator;
pub mod vector;

pub use equivalence::{run_equivalence, EquivalenceConfig, EquivalenceReport};
pub use error::{Error, Result};
pub use estimate::{BoundEstimate, BoundKind};
pub use scalar::{
    classify_regime, decay_envelope, historical_bounds, optimal_position_bound,
    optimal_velocity_bound, quadrature_bound_oracle, DecayEnvelope, HistoricalBounds, Regime,
    RegimeData, ScalarParams,
};
pub use signal::{build_construction, ExtremalConstruction, ForcingSignal};
pub use simulator::{
    bounded_solution_at, evolve_exact, evolve_rk4, periodic_solution, ultimate_sup_estimator,
    Functional, Method, ModalState, Trajectory,
};
pub use vector::{
    dyadic_partition, evaluate_construction, guaranteed_lower_bound, log_regime_bound,
    mm_bound, nonmonotonicity_witness, ratio_subsequence, symmetric_eigenvalues,
    upper_bound_finite_dim, upper_bound_general, weyl_spectrum, Dimension, LogRegimeParams,
    SpectrumModel,
};
