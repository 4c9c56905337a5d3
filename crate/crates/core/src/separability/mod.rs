//! The `(√ρ)ᵀ O √ρ` singular-value test, random-witness detection, hollow
//! congruences and reference oracles.

mod criterion;
mod hollow;
mod oracles;
mod pure;
mod sampling;

pub use criterion::{
    average_concurrence_bound, condition_margin, s_matrix, spectrum_via_rho, witness_test, PreparedState,
    ViolationTolerance, WitnessTestResult, SPECTRUM_NEG_TOL,
};
pub use hollow::{
    closure_phases, hollowizing_unitary, Construction, DecompositionCertificate, DecompositionSize, HollowOptions,
};
pub use oracles::{ppt_oracle, wootters_oracle, PptResult, PptVerdict, PPT_TOL};
pub use pure::{pure_state_check, PureCheck, PURE_OVERLAP_THRESHOLD};
pub use sampling::{run_trial, sample_witness_detection, trial_witness, DetectionConfig, DetectionReport, Verdict};
