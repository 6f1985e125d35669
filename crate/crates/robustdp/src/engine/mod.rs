//! Approximate pseudoexpectations over polynomial constraint systems.

pub mod basis;
pub mod check;
pub mod ellipsoid;
pub mod functional;
pub mod poly;
pub mod search;
pub mod system;

pub use basis::{Monomial, MonomialBasis};
pub use check::{check_satisfies, constraint_margins, Cut, Margin, Verdict};
pub use ellipsoid::{ellipsoid_search, EllipsoidOptions, InfeasibleReason, SearchOutcome};
pub use functional::FunctionalRep;
pub use poly::Poly;
pub use search::{compute_score_t, robust_ball_radius, Probe, ScoreSearch};
pub use system::{CompiledSystem, ConstraintSystem, Labeled, TConstraint};
