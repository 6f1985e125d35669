//! Lattice sampling from a convex body given only a weak membership oracle.

mod budget;
mod hit_and_run;
mod lattice;
mod rounding;

pub use budget::{PrecisionBudget, PrecisionOptions};
pub use hit_and_run::{chord_endpoints, hit_and_run_chain};
pub use lattice::{sample_lattice_uniform, LatticeSampler};
pub use rounding::{isotropic_round, AffineMap, RoundedOracle, RoundingResult};
