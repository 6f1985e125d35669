//! Concrete score functions and adapters for the mechanisms.

pub mod combinatorial;
pub mod oracle;
pub mod sos_mean;

pub use combinatorial::{brute_force_score, inverse_sensitivity_score, CombinatorialScore, Estimator, SortedScorer};
pub use oracle::{contract_self_check, wrap_as_score_oracle, CachedScore, ContractReport, DistanceScore};
pub use sos_mean::{mean_system, sos_mean_low_scorer, sos_mean_score, sos_mean_search, upper_witness, MeanScoreConfig, SosMeanScore};
