//! Hit-and-run on a γ1-discretized line set.
//!
//! Each step draws a uniform direction, rounds it coordinatewise to
//! multiples of γ1, locates the last accepted lattice point on each side of
//! the current point with exponential-then-binary search, and jumps to a
//! uniform lattice point of that chord.

use crate::error::{Error, Result};
use crate::geometry::{norm, round_coord, MembershipOracle};
use crate::sampler::PrecisionBudget;
use crate::rng_from_seed;
use rand::Rng;
use rand_distr::StandardNormal;

fn probe<O: MembershipOracle + ?Sized>(oracle: &O, x: &[f64], v: &[f64], step: f64, k: u128, sign: f64, buf: &mut [f64]) -> bool {
    let t = sign * (k as f64) * step;
    for ((b, xi), vi) in buf.iter_mut().zip(x).zip(v) {
        *b = xi + t * vi;
    }
    oracle.query(buf)
}

/// Largest `k ≥ 0` with `x + sign·k·step·v` accepted and `k+1` rejected.
fn chord_side<O: MembershipOracle + ?Sized>(
    oracle: &O,
    x: &[f64],
    v: &[f64],
    step: f64,
    sign: f64,
    hint: f64,
    buf: &mut [f64],
) -> Result<u128> {
    let unit = step * norm(v);
    let bound = 2.0 * oracle.outer_radius();
    let kmax = (bound / unit).ceil().max(1.0) as u128;
    let k0 = ((hint / unit).floor() as u128).clamp(1, kmax);
    let (mut lo, mut hi) = if probe(oracle, x, v, step, k0, sign, buf) {
        let mut lo = k0;
        loop {
            if lo >= kmax {
                return Err(Error::Unbounded(bound));
            }
            let next = lo.saturating_mul(2).min(kmax);
            if probe(oracle, x, v, step, next, sign, buf) {
                lo = next;
            } else {
                break (lo, next);
            }
        }
    } else {
        (0, k0)
    };
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if probe(oracle, x, v, step, mid, sign, buf) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// Lattice chord `(a1, a2)` through `x` along `v` with lattice step `step`.
pub fn chord_endpoints<O: MembershipOracle + ?Sized>(oracle: &O, x: &[f64], v: &[f64], step: f64) -> Result<(u128, u128)> {
    if !(step > 0.0) {
        return Err(Error::InvalidParameter(format!("step {step}")));
    }
    if !oracle.query(x) {
        return Err(Error::NotInBody);
    }
    let hint = oracle.inner_radius();
    let mut buf = vec![0.0; x.len()];
    let a1 = chord_side(oracle, x, v, step, 1.0, hint, &mut buf)?;
    let a2 = chord_side(oracle, x, v, step, -1.0, hint, &mut buf)?;
    Ok((a1, a2))
}

/// Uniform direction rounded to multiples of `gamma1`.
pub(crate) fn random_direction<R: Rng + ?Sized>(dim: usize, gamma1: f64, rng: &mut R, v: &mut [f64]) {
    loop {
        for c in v.iter_mut() {
            *c = rng.sample(StandardNormal);
        }
        let n = norm(v);
        if n == 0.0 {
            continue;
        }
        for c in v.iter_mut() {
            *c = round_coord(*c / n, gamma1);
        }
        if v.iter().any(|c| *c != 0.0) {
            debug_assert_eq!(v.len(), dim);
            return;
        }
    }
}

/// One hit-and-run move in place. Returns the direction and chord used.
pub(crate) fn step_in_place<O: MembershipOracle + ?Sized, R: Rng + ?Sized>(
    oracle: &O,
    x: &mut [f64],
    v: &mut [f64],
    buf: &mut [f64],
    gamma1: f64,
    rng: &mut R,
) -> Result<(u128, u128)> {
    random_direction(x.len(), gamma1, rng, v);
    let hint = oracle.inner_radius();
    let a1 = chord_side(oracle, x, v, gamma1, 1.0, hint, buf)?;
    let a2 = chord_side(oracle, x, v, gamma1, -1.0, hint, buf)?;
    let span = a1 + a2 + 1;
    let k = rng.random_range(0..span) as i128 - a2 as i128;
    let t = (k as f64) * gamma1;
    for (xi, vi) in x.iter_mut().zip(v.iter()) {
        *xi += t * vi;
    }
    Ok((a1, a2))
}

pub(crate) fn run_chain<O: MembershipOracle + ?Sized, R: Rng + ?Sized>(
    oracle: &O,
    start: &[f64],
    m: usize,
    gamma1: f64,
    rng: &mut R,
) -> Result<Vec<f64>> {
    if !oracle.query(start) {
        return Err(Error::NotInBody);
    }
    let mut x = start.to_vec();
    let mut v = vec![0.0; x.len()];
    let mut buf = vec![0.0; x.len()];
    for i in 0..m {
        let (a1, a2) = step_in_place(oracle, &mut x, &mut v, &mut buf, gamma1, rng)?;
        log::trace!("hit-and-run step={i} a1={a1} a2={a2}");
    }
    Ok(x)
}

/// Runs `m` hit-and-run steps from `start` with direction precision `budget.gamma1`.
pub fn hit_and_run_chain<O: MembershipOracle + ?Sized>(
    oracle: &O,
    start: &[f64],
    m: usize,
    budget: &PrecisionBudget,
    seed: u64,
) -> Result<Vec<f64>> {
    let mut rng = rng_from_seed(seed);
    run_chain(oracle, start, m, budget.gamma1, &mut rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{BallOracle, BoxOracle};
    use crate::sampler::PrecisionOptions;

    #[test]
    fn chord_examples() {
        let seg = BallOracle::new(vec![0.0], 1.0);
        assert_eq!(chord_endpoints(&seg, &[0.0], &[1.0], 0.25).unwrap(), (4, 4));
        let disk = BallOracle::new(vec![0.0, 0.0], 1.0);
        assert_eq!(chord_endpoints(&disk, &[0.0, 0.0], &[1.0, 0.0], 0.1).unwrap(), (10, 10));
        assert!(matches!(chord_endpoints(&disk, &[2.0, 0.0], &[1.0, 0.0], 0.1), Err(Error::NotInBody)));
    }

    #[test]
    fn chord_with_tiny_step() {
        let seg = BoxOracle::cube(1, 1.0);
        let step = 2f64.powi(-60);
        let (a1, a2) = chord_endpoints(&seg, &[0.25], &[1.0], step).unwrap();
        assert!((a1 as f64 * step - 0.75).abs() < 1e-15);
        assert!((a2 as f64 * step - 1.25).abs() < 1e-15);
    }

    #[test]
    fn unbounded_oracle_is_detected() {
        let everything = crate::geometry::FnOracle {
            f: |_: &[f64]| true,
            dim: 1,
            inner_radius: 1.0,
            outer_radius: 3.0,
            inner_center: vec![0.0],
        };
        assert!(matches!(chord_endpoints(&everything, &[0.0], &[1.0], 0.01), Err(Error::Unbounded(_))));
    }

    #[test]
    fn zero_steps_returns_start() {
        let disk = BallOracle::new(vec![0.0, 0.0], 1.0);
        let b = PrecisionBudget::for_oracle(&disk, 0.01, PrecisionOptions::default()).unwrap();
        assert_eq!(hit_and_run_chain(&disk, &[0.3, -0.2], 0, &b, 1).unwrap(), vec![0.3, -0.2]);
    }

    #[test]
    fn chain_is_deterministic_and_stays_inside() {
        let disk = BallOracle::new(vec![0.0, 0.0], 1.0);
        let b = PrecisionBudget::for_oracle(&disk, 0.01, PrecisionOptions::default()).unwrap();
        let x = hit_and_run_chain(&disk, &[0.0, 0.0], 50, &b, 9).unwrap();
        let y = hit_and_run_chain(&disk, &[0.0, 0.0], 50, &b, 9).unwrap();
        assert_eq!(x, y);
        let mut rng = rng_from_seed(3);
        let mut p = vec![0.0, 0.0];
        let mut v = vec![0.0; 2];
        let mut buf = vec![0.0; 2];
        for _ in 0..2000 {
            step_in_place(&disk, &mut p, &mut v, &mut buf, b.gamma1, &mut rng).unwrap();
            assert!(disk.query(&p));
        }
    }

    #[test]
    fn interval_chain_is_uniform_in_ks_distance() {
        let seg = BoxOracle::cube(1, 1.0);
        let b = PrecisionBudget::for_oracle(&seg, 0.01, PrecisionOptions::default()).unwrap();
        let m = b.chain_length(1.0);
        let mut rng = rng_from_seed(11);
        let mut xs: Vec<f64> = (0..10_000).map(|_| run_chain(&seg, &[0.0], m, b.gamma1, &mut rng).unwrap()[0]).collect();
        xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let n = xs.len() as f64;
        let ks = xs
            .iter()
            .enumerate()
            .map(|(i, x)| {
                let f = (x + 1.0) / 2.0;
                (f - i as f64 / n).abs().max((f - (i + 1) as f64 / n).abs())
            })
            .fold(0.0, f64::max);
        assert!(ks < 0.05, "ks={ks}");
    }
}
