//! Differentially private estimation from robust score functions.
//!
//! The crate samples from `exp(−ε·score)` over a lattice in a convex
//! parameter domain using only threshold queries on the score, and ships
//! two concrete scores for mean estimation: an exact inverse-sensitivity
//! score for 1-d robust estimators, and a sum-of-squares certifiable-mean
//! score computed by an approximate pseudoexpectation engine.

pub mod datalab;
pub mod dataset;
pub mod engine;
pub mod error;
pub mod geometry;
pub mod mechanism;
pub mod sampler;
pub mod scores;
pub mod volume;

pub use error::{Error, Result};

pub type DetRng = rand_chacha::ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> DetRng {
    use rand::SeedableRng;
    DetRng::seed_from_u64(seed)
}
