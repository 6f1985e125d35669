//! Pure ε-DP sampler.
//!
//! Level `t` holds `S^(t) = {θ : S(θ) ≤ T̂ + t}` with lattice count `N^(t)`.
//! Drawing `t` with weight `e^{−εt}(1 − e^{−ε})N^(t)`, except for the level
//! covering all of Θ which gets `e^{−εt}N^(t)`, and then a uniform point of
//! `S^(t)`, gives every θ the telescoped mass `e^{−ε·t0(θ)}` with
//! `t0(θ) = max(0, ⌈S(θ) − T̂⌉)`.

use super::level::{build_level, Level};
use super::threshold::{gamma7, gamma8, random_threshold_rng, GAMMA_FLOOR};
use super::{Diagnostics, LowScorer, MechanismConfig, MechanismOutcome, MechanismResult, PrivacyParams, ScoreOracle};
use crate::error::{Error, Result};
use crate::rng_from_seed;
use rand::Rng;

/// Levels whose remaining mass is below this fraction of the total are dropped.
pub(crate) const LOG_TAIL_CUTOFF: f64 = -41.58883083359672; // ln 2^-60

pub(crate) fn log_sum_exp(xs: &[f64]) -> f64 {
    let m = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + xs.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}

/// Counted level sets ready for repeated draws.
pub struct PreparedMechanism<'a, S: ?Sized> {
    pub(crate) score: &'a S,
    pub(crate) levels: Vec<Level<'a, S>>,
    pub(crate) log_weights: Vec<f64>,
    pub t_prime: f64,
    pub threshold: Option<f64>,
    /// Phase-one acceptance probability; `None` for the pure mechanism.
    pub accept_probability: Option<f64>,
    pub(crate) tol: f64,
}

impl<S: ScoreOracle + ?Sized> PreparedMechanism<'_, S> {
    pub fn level_counts(&self) -> Vec<f64> {
        self.levels.iter().map(|l| l.count).collect()
    }

    pub fn level_thresholds(&self) -> Vec<f64> {
        self.levels.iter().map(|l| l.threshold).collect()
    }

    /// Normalised level probabilities.
    pub fn level_probabilities(&self) -> Vec<f64> {
        let z = log_sum_exp(&self.log_weights);
        self.log_weights.iter().map(|w| (w - z).exp()).collect()
    }

    fn pick_level<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let probs = self.level_probabilities();
        let u: f64 = rng.random();
        let mut acc = 0.0;
        for (i, p) in probs.iter().enumerate() {
            acc += p;
            if u < acc {
                return i;
            }
        }
        probs.len() - 1
    }

    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<MechanismOutcome> {
        let mut diagnostics = Diagnostics {
            t_prime: self.t_prime,
            threshold: self.threshold,
            level: None,
            level_counts: self.level_counts(),
            accept_probability: self.accept_probability,
        };
        if let Some(g) = self.accept_probability {
            if !(rng.random::<f64>() < g) {
                return Ok(MechanismOutcome { result: MechanismResult::Reject, score_at_output: None, diagnostics });
            }
        }
        if self.levels.is_empty() {
            return Err(Error::SamplerFailure("no level sets were prepared".into()));
        }
        let t = self.pick_level(rng);
        let theta = self.levels[t].draw(rng)?;
        let score = self.score.evaluate(&theta, self.tol)?;
        diagnostics.level = Some(t);
        Ok(MechanismOutcome { result: MechanismResult::Theta(theta), score_at_output: Some(score), diagnostics })
    }
}

pub(crate) fn draw_threshold<S: ScoreOracle + ?Sized, R: Rng + ?Sized>(
    score: &S,
    low: &LowScorer,
    params: &PrivacyParams,
    cfg: &MechanismConfig,
    rng: &mut R,
) -> f64 {
    let big_r = score.domain().outer_radius();
    let g8 = gamma8(params.epsilon, params.n, cfg.spacing, big_r, score.dim());
    let g7 = gamma7(g8, cfg.precision.gamma1_floor.max(GAMMA_FLOOR), low.radius, big_r, score.dim());
    random_threshold_rng(low.t_prime, g7, rng)
}

/// Builds the level sets of the pure mechanism for one threshold draw.
pub fn prepare_pure<'a, S: ScoreOracle + ?Sized, R: Rng + ?Sized>(
    score: &'a S,
    params: &PrivacyParams,
    cfg: &MechanismConfig,
    rng: &mut R,
) -> Result<PreparedMechanism<'a, S>> {
    params.validate_pure()?;
    let low = score.low_scorer()?;
    let t_hat = draw_threshold(score, &low, params, cfg, rng);
    let eps = params.epsilon;
    let n = score.n() as f64;
    let log_keep = (-(-eps).exp_m1()).ln();
    let log_max = score.domain().lattice_upper_bound(cfg.spacing).ln();
    let mut levels = Vec::new();
    let mut log_weights = Vec::new();
    for t in 0.. {
        let thr = t_hat + t as f64;
        let level = build_level(score, &low, thr, cfg, rng)?;
        let full = thr >= n;
        let lw = -eps * t as f64 + level.count.ln() + if full { 0.0 } else { log_keep };
        levels.push(level);
        log_weights.push(lw);
        if full {
            break;
        }
        let log_tail = -eps * (t + 1) as f64 + log_max - log_keep;
        if log_tail < LOG_TAIL_CUTOFF + log_sum_exp(&log_weights) {
            break;
        }
    }
    Ok(PreparedMechanism {
        score,
        levels,
        log_weights,
        t_prime: low.t_prime,
        threshold: Some(t_hat),
        accept_probability: None,
        tol: cfg.score_tol,
    })
}

/// One run of the pure ε-DP mechanism.
pub fn pure_dp_sample<S: ScoreOracle + ?Sized>(
    score: &S,
    params: &PrivacyParams,
    cfg: &MechanismConfig,
    seed: u64,
) -> Result<MechanismOutcome> {
    let mut rng = rng_from_seed(seed);
    prepare_pure(score, params, cfg, &mut rng)?.draw(&mut rng)
}
