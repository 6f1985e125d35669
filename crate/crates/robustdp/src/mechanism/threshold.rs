//! Randomised score threshold and the precisions γ7, γ8.

use crate::rng_from_seed;
use rand::Rng;

pub const GAMMA_FLOOR: f64 = 8.673617379884035e-19; // 2^-60

/// `(ε/2)·e^{−n}·(γ5/2R)^d`, floored.
pub fn gamma8(epsilon: f64, n: usize, gamma5: f64, big_r: f64, dim: usize) -> f64 {
    let log = (epsilon / 2.0).ln() - n as f64 + dim as f64 * (gamma5 / (2.0 * big_r)).ln();
    log.exp().max(GAMMA_FLOOR)
}

/// `γ8·(γ1 r/6d)^d / (2(2R)^d)`, floored.
pub fn gamma7(gamma8: f64, gamma1: f64, r: f64, big_r: f64, dim: usize) -> f64 {
    let d = dim as f64;
    let log = gamma8.ln() + d * (gamma1 * r / (6.0 * d)).ln() - (2.0f64).ln() - d * (2.0 * big_r).ln();
    log.exp().max(GAMMA_FLOOR)
}

/// Uniform multiple of `gamma7` in `(t_prime + 1, t_prime + 2]`.
pub fn random_threshold_rng<R: Rng + ?Sized>(t_prime: f64, gamma7: f64, rng: &mut R) -> f64 {
    assert!(gamma7 > 0.0 && gamma7 <= 1.0, "gamma7 must lie in (0, 1]");
    let lo = ((t_prime + 1.0) / gamma7).floor() as i128 + 1;
    let hi = ((t_prime + 2.0) / gamma7).floor() as i128;
    let k = if hi > lo { rng.random_range(lo..=hi) } else { hi };
    k as f64 * gamma7
}

pub fn random_threshold(t_prime: f64, gamma7: f64, seed: u64) -> f64 {
    let mut rng = rng_from_seed(seed);
    random_threshold_rng(t_prime, gamma7, &mut rng)
}
