//! Synthetic data, contamination, resilience checks and operator verification.

mod generate;
mod operator;
mod resilience;

pub use generate::{corrupt, gaussian_sample, CorruptionMode, CorruptionPlan};
pub use operator::{
    cauchy_schwarz_violations, default_nu, empirical_sigma_bound, sos_1d_arbitrary_system, sos_1d_mean_system, verify_arbitrary_1d,
    verify_operator_1d, weights_in_unit_interval, OperatorReport, OPERATOR_DEGREE,
};
pub use resilience::{check_resilience_1d, top_weighted_sum, ResilienceReport, RESILIENCE_C};
