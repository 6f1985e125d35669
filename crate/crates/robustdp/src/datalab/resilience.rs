//! Finite-sample resilience conditions for 1-d data around a known mean.
//!
//! With `z_i = x_i − μ`:
//!
//! 1. `|mean(z)| ≤ α`
//! 2. `|mean(z²) − 1| ≤ α`
//! 3. `max |Σ a_i z_i|/n` and `max Σ a_i z_i²/n` over `a ∈ [0,1]ⁿ`, `Σa ≤ ηn`, both `≤ α`
//! 4. `mean|z| ≤ C`
//!
//! The maxima in (3) put full weight on the largest values of one sign, with a
//! fractional weight on the next one when `ηn` is not an integer.

use serde::{Deserialize, Serialize};

pub const RESILIENCE_C: f64 = 4.0;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResilienceReport {
    pub values: [f64; 4],
    pub pass: [bool; 4],
    pub alpha: f64,
    pub eta: f64,
}

impl ResilienceReport {
    pub fn all_pass(&self) -> bool {
        self.pass.iter().all(|p| *p)
    }
}

/// Largest `Σ a_i v_i` with `a ∈ [0,1]ⁿ`, `Σa ≤ budget`, for nonnegative `v`.
pub fn top_weighted_sum(values: &mut [f64], budget: f64) -> f64 {
    values.sort_by(|a, b| b.total_cmp(a));
    let mut left = budget;
    let mut acc = 0.0;
    for v in values.iter() {
        if left <= 0.0 || *v <= 0.0 {
            break;
        }
        let w = left.min(1.0);
        acc += w * v;
        left -= w;
    }
    acc
}

pub fn check_resilience_1d(x: &[f64], mu: f64, eta: f64, alpha: f64) -> ResilienceReport {
    let n = x.len() as f64;
    let z: Vec<f64> = x.iter().map(|v| v - mu).collect();
    let mean = z.iter().sum::<f64>() / n;
    let second = z.iter().map(|v| v * v).sum::<f64>() / n;
    let budget = eta * n;
    let mut pos: Vec<f64> = z.iter().map(|v| v.max(0.0)).collect();
    let mut neg: Vec<f64> = z.iter().map(|v| (-v).max(0.0)).collect();
    let mut sq: Vec<f64> = z.iter().map(|v| v * v).collect();
    let first_tail = top_weighted_sum(&mut pos, budget).max(top_weighted_sum(&mut neg, budget)) / n;
    let second_tail = top_weighted_sum(&mut sq, budget) / n;
    let abs_mean = z.iter().map(|v| v.abs()).sum::<f64>() / n;
    let values = [mean.abs(), (second - 1.0).abs(), first_tail.max(second_tail), abs_mean];
    let pass = [values[0] <= alpha, values[1] <= alpha, values[2] <= alpha, values[3] <= RESILIENCE_C];
    ResilienceReport { values, pass, alpha, eta }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng_from_seed;
    use rand::Rng;

    #[test]
    fn zeros_pass_everything_but_the_second_moment() {
        let r = check_resilience_1d(&[0.0; 10], 0.0, 0.1, 0.01);
        assert_eq!(r.values[0], 0.0);
        assert_eq!(r.values[2], 0.0);
        assert!(r.pass[0] && r.pass[2] && r.pass[3]);
    }

    #[test]
    fn single_outlier_breaks_condition_three() {
        let mut x = vec![0.0; 20];
        x[3] = 1e6;
        let r = check_resilience_1d(&x, 0.0, 0.05, 1e6 / 20.0 * 0.99);
        assert!(!r.pass[2]);
    }

    #[test]
    fn closed_form_dominates_random_weightings() {
        let mut rng = rng_from_seed(9);
        let x: Vec<f64> = (0..30).map(|_| rng.random_range(-3.0..3.0)).collect();
        let (eta, n) = (0.15, x.len() as f64);
        let r = check_resilience_1d(&x, 0.0, eta, 1.0);
        for _ in 0..10_000 {
            let mut a: Vec<f64> = (0..x.len()).map(|_| rng.random::<f64>()).collect();
            let s: f64 = a.iter().sum();
            let scale = (eta * n / s).min(1.0) * rng.random::<f64>();
            a.iter_mut().for_each(|v| *v *= scale);
            let first = a.iter().zip(&x).map(|(w, z)| w * z).sum::<f64>().abs() / n;
            let second = a.iter().zip(&x).map(|(w, z)| w * z * z).sum::<f64>() / n;
            assert!(first.max(second) <= r.values[2] + 1e-12);
        }
    }
}
