//! (ε, δ)-DP sampler with a staircase rejection step.
//!
//! Phase one rejects with probability `1 − g(T')`. Phase two samples θ with
//! mass `h(T̂ + t0(θ))` for the truncated weight `h`, using level weights
//! `(h(T̂+t) − h(T̂+t+1))·N^(t)`; the factor `e^{−εT̂}` is common and dropped.

use super::level::build_level;
use super::pure::{draw_threshold, log_sum_exp, PreparedMechanism, LOG_TAIL_CUTOFF};
use super::{staircase_g, Diagnostics, MechanismConfig, MechanismOutcome, MechanismResult, PrivacyParams, ScoreOracle};
use crate::error::{Error, Result};
use crate::rng_from_seed;
use rand::Rng;

fn build_phase_two<'a, S: ScoreOracle + ?Sized, R: Rng + ?Sized>(
    score: &'a S,
    low: super::LowScorer,
    params: &PrivacyParams,
    cfg: &MechanismConfig,
    accept: f64,
    rng: &mut R,
) -> Result<PreparedMechanism<'a, S>> {
    let t_hat = draw_threshold(score, &low, params, cfg, rng);
    let eps = params.epsilon;
    let cutoff = 0.9 * params.eta_star * params.n as f64;
    if t_hat > cutoff {
        return Err(Error::SamplerFailure(format!("threshold {t_hat} is above the truncation point {cutoff}")));
    }
    let log_keep = (-(-eps).exp_m1()).ln();
    let log_max = score.domain().lattice_upper_bound(cfg.spacing).ln();
    let mut levels = Vec::new();
    let mut log_weights = Vec::new();
    for t in 0.. {
        let thr = t_hat + t as f64;
        let level = build_level(score, &low, thr, cfg, rng)?;
        let last = thr + 1.0 > cutoff;
        let lw = -eps * t as f64 + level.count.ln() + if last { 0.0 } else { log_keep };
        levels.push(level);
        log_weights.push(lw);
        if last {
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
        accept_probability: Some(accept),
        tol: cfg.score_tol,
    })
}

/// Prepares the approximate mechanism; each draw re-flips the phase-one coin.
pub fn prepare_approx<'a, S: ScoreOracle + ?Sized, R: Rng + ?Sized>(
    score: &'a S,
    params: &PrivacyParams,
    cfg: &MechanismConfig,
    rng: &mut R,
) -> Result<PreparedMechanism<'a, S>> {
    params.validate_approx()?;
    let low = score.low_scorer()?;
    let g = staircase_g(low.t_prime, params);
    if g == 0.0 {
        return Ok(PreparedMechanism {
            score,
            levels: Vec::new(),
            log_weights: Vec::new(),
            t_prime: low.t_prime,
            threshold: None,
            accept_probability: Some(0.0),
            tol: cfg.score_tol,
        });
    }
    build_phase_two(score, low, params, cfg, g, rng)
}

/// One run of the (ε, δ)-DP mechanism; REJECT is a regular outcome.
pub fn approx_dp_sample<S: ScoreOracle + ?Sized>(
    score: &S,
    params: &PrivacyParams,
    cfg: &MechanismConfig,
    seed: u64,
) -> Result<MechanismOutcome> {
    params.validate_approx()?;
    let mut rng = rng_from_seed(seed);
    let low = score.low_scorer()?;
    let g = staircase_g(low.t_prime, params);
    if !(rng.random::<f64>() < g) {
        let diagnostics = Diagnostics { t_prime: low.t_prime, accept_probability: Some(g), ..Default::default() };
        return Ok(MechanismOutcome { result: MechanismResult::Reject, score_at_output: None, diagnostics });
    }
    let mut prepared = build_phase_two(score, low, params, cfg, g, &mut rng)?;
    prepared.accept_probability = None;
    let mut out = prepared.draw(&mut rng)?;
    out.diagnostics.accept_probability = Some(g);
    Ok(out)
}
