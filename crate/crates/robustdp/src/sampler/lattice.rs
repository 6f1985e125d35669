//! Pointwise-uniform sampling of accepted lattice points.
//!
//! A draw runs hit-and-run in rounded coordinates, maps the point back,
//! dilates it by `1 + 1/d` about the inner center, adds a uniform
//! perturbation in `[−γ4, γ4]^d` at γ1 precision, rounds to the γ5 grid and
//! keeps the result only if the oracle accepts it.

use crate::error::{Error, Result};
use crate::geometry::{round_coord, MembershipOracle};
use crate::sampler::hit_and_run::run_chain;
use crate::sampler::rounding::{round_with_rng, RoundedOracle, RoundingResult};
use crate::sampler::PrecisionBudget;
use crate::rng_from_seed;
use rand::Rng;

pub struct LatticeSampler<O> {
    oracle: O,
    budget: PrecisionBudget,
    rounding: RoundingResult,
    chain_length: usize,
    center: Vec<f64>,
}

impl<O: MembershipOracle> LatticeSampler<O> {
    pub fn new<R: Rng + ?Sized>(oracle: O, budget: PrecisionBudget, rng: &mut R) -> Result<Self> {
        if budget.dim != oracle.dim() {
            return Err(Error::InvalidParameter("budget and oracle dimensions differ".into()));
        }
        let rounding = round_with_rng(&oracle, &budget, rng)?;
        let chain_length = budget.chain_length(rounding.mixing_radius);
        let center = oracle.inner_center();
        Ok(LatticeSampler { oracle, budget, rounding, chain_length, center })
    }

    pub fn budget(&self) -> &PrecisionBudget {
        &self.budget
    }

    pub fn rounding(&self) -> &RoundingResult {
        &self.rounding
    }

    pub fn chain_length(&self) -> usize {
        self.chain_length
    }

    pub fn oracle(&self) -> &O {
        &self.oracle
    }

    /// One accepted lattice point and the number of attempts it took.
    pub fn sample_counted<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<(Vec<f64>, usize)> {
        let d = self.budget.dim;
        let dilation = 1.0 + 1.0 / d as f64;
        let g1 = self.budget.gamma1;
        let half = (self.budget.gamma4 / g1).floor() as i128;
        let rounded = RoundedOracle::new(&self.oracle, &self.rounding.map);
        let origin = vec![0.0; d];
        let trials = self.budget.rejection_trials();
        let mut x = vec![0.0; d];
        for attempt in 1..=trials {
            let z = run_chain(&rounded, &origin, self.chain_length, g1, rng)?;
            self.rounding.map.apply_inverse_into(&z, &mut x);
            for (xi, ci) in x.iter_mut().zip(&self.center) {
                let noise = rng.random_range(-half..=half) as f64 * g1;
                let p = ci + dilation * (*xi - ci) + noise;
                *xi = round_coord(p, self.budget.gamma5);
            }
            if self.oracle.query(&x) {
                log::trace!("lattice sample accepted after {attempt} attempts");
                return Ok((x, attempt));
            }
        }
        Err(Error::RejectionBudgetExceeded(trials))
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Vec<f64>> {
        self.sample_counted(rng).map(|(x, _)| x)
    }
}

/// Single pointwise-uniform lattice point of the oracle's body.
pub fn sample_lattice_uniform<O: MembershipOracle + ?Sized>(oracle: &O, budget: &PrecisionBudget, seed: u64) -> Result<Vec<f64>> {
    let mut rng = rng_from_seed(seed);
    LatticeSampler::new(oracle, *budget, &mut rng)?.sample(&mut rng)
}
