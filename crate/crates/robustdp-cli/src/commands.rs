use crate::config::*;
use crate::{envelope, write_json, CliError, CliResult, Context};
use robustdp::datalab::{corrupt as corrupt_data, gaussian_sample};
use robustdp::dataset::Dataset;
use robustdp::geometry::lattice_count_bruteforce;
use robustdp::mechanism::{
    approx_dp_sample, prepare_approx, prepare_pure, privacy_audit, pure_dp_sample, AuditBins, Domain, DomainOracle,
    MechanismOutcome, ScoreOracle,
};
use robustdp::rng_from_seed;
use robustdp::sampler::{LatticeSampler, PrecisionBudget};
use robustdp::scores::{wrap_as_score_oracle, CombinatorialScore, SosMeanScore};
use robustdp::volume::estimate_grid_count;
use serde_json::{json, Value};
use std::fs::File;
use std::path::{Path, PathBuf};

fn out_path(ctx: &Context) -> CliResult<&Path> {
    ctx.out.as_deref().ok_or_else(|| CliError::Config("this command needs --out".into()))
}

fn sidecar(p: &Path) -> PathBuf {
    let mut s = p.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

fn read_dataset(p: &Path) -> CliResult<Dataset> {
    Ok(Dataset::read_csv(File::open(p)?)?)
}

fn write_dataset(p: &Path, d: &Dataset) -> CliResult<()> {
    d.write_csv(File::create(p)?)?;
    Ok(())
}

/// Writes a CSV artifact and its JSON description next to it.
fn finish_csv(p: &Path, summary: Value) -> CliResult<Value> {
    write_json(&sidecar(p), &summary)?;
    Ok(summary)
}

fn finish_json(ctx: &Context, summary: Value) -> CliResult<Value> {
    if let Some(p) = &ctx.out {
        write_json(p, &summary)?;
    }
    Ok(summary)
}

pub fn gen_data(ctx: &Context) -> CliResult<Value> {
    let cfg: GenDataConfig = ctx.load()?;
    let out = out_path(ctx)?;
    let data = gaussian_sample(cfg.n, &cfg.mean, &cfg.covariance(), ctx.seed)?;
    write_dataset(out, &data)?;
    finish_csv(out, envelope("gen-data", ctx.seed, &cfg, &json!({ "rows": data.n(), "dim": data.dim, "path": out })))
}

pub fn corrupt(ctx: &Context) -> CliResult<Value> {
    let mut cfg: CorruptConfig = ctx.load()?;
    let input = ctx.input_path(&cfg.input)?;
    cfg.input = Some(input.clone());
    let out = out_path(ctx)?;
    let data = corrupt_data(&read_dataset(&input)?, &cfg.plan(ctx.seed))?;
    write_dataset(out, &data)?;
    let indices: Vec<usize> = (0..data.n()).filter(|i| data.corrupted[*i]).collect();
    finish_csv(out, envelope("corrupt", ctx.seed, &cfg, &json!({ "rows": data.n(), "corrupted": indices, "path": out })))
}

pub fn build_score(spec: &ScoreSpec, data: &Dataset, domain: &Domain) -> CliResult<Box<dyn ScoreOracle>> {
    Ok(match spec {
        ScoreSpec::Combinatorial { estimator, alpha } => {
            if data.dim != 1 {
                return Err(CliError::Config("combinatorial scores need 1-d data".into()));
            }
            Box::new(CombinatorialScore::new(&data.values, *estimator, *alpha, domain.clone())?)
        }
        ScoreSpec::SosMean { config } => Box::new(wrap_as_score_oracle(SosMeanScore::new(data.clone(), config.clone(), domain.clone())?)),
    })
}

pub fn score(ctx: &Context) -> CliResult<Value> {
    let mut cfg: ScoreConfig = ctx.load()?;
    let input = ctx.input_path(&cfg.input)?;
    cfg.input = Some(input.clone());
    let out = out_path(ctx)?;
    let data = read_dataset(&input)?;
    if data.dim != 1 || cfg.domain.dim() != 1 {
        return Err(CliError::Config("score sweeps are 1-d".into()));
    }
    if cfg.points < 2 || !(cfg.lo < cfg.hi) {
        return Err(CliError::Config("sweep needs lo < hi and at least two points".into()));
    }
    let oracle = build_score(&cfg.score, &data, &cfg.domain)?;
    let mut w = csv::Writer::from_path(out).map_err(|e| CliError::Config(e.to_string()))?;
    w.write_record(["theta", "score"]).map_err(|e| CliError::Config(e.to_string()))?;
    let mut best = (f64::INFINITY, f64::NAN);
    for k in 0..cfg.points {
        let theta = cfg.lo + (cfg.hi - cfg.lo) * k as f64 / (cfg.points - 1) as f64;
        let s = oracle.evaluate(&[theta], cfg.tol)?;
        if s < best.0 {
            best = (s, theta);
        }
        w.write_record([theta.to_string(), s.to_string()]).map_err(|e| CliError::Config(e.to_string()))?;
    }
    w.flush()?;
    finish_csv(out, envelope("score", ctx.seed, &cfg, &json!({ "points": cfg.points, "min_score": best.0, "argmin": best.1, "path": out })))
}

fn outcome_summary(outcome: &MechanismOutcome, true_mean: Option<&[f64]>) -> Value {
    let error = match (outcome.theta(), true_mean) {
        (Some(t), Some(m)) => Some(t.iter().zip(m).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt()),
        _ => None,
    };
    json!({
        "reject": outcome.is_reject(),
        "theta_hat": outcome.theta(),
        "score_at_output": outcome.score_at_output,
        "error_l2": error,
        "diagnostics": outcome.diagnostics,
    })
}

pub fn estimate(ctx: &Context, approx: bool) -> CliResult<Value> {
    let mut cfg: EstimateConfig = ctx.load()?;
    let input = ctx.input_path(&cfg.input)?;
    cfg.input = Some(input.clone());
    let data = read_dataset(&input)?;
    cfg.privacy.n = data.n();
    let oracle = build_score(&cfg.score, &data, &cfg.domain)?;
    let outcome = if approx {
        approx_dp_sample(&*oracle, &cfg.privacy, &cfg.mechanism, ctx.seed)?
    } else {
        pure_dp_sample(&*oracle, &cfg.privacy, &cfg.mechanism, ctx.seed)?
    };
    let name = if approx { "estimate-mean-approx" } else { "estimate-mean-pure" };
    finish_json(ctx, envelope(name, ctx.seed, &cfg, &outcome_summary(&outcome, cfg.true_mean.as_deref())))
}

pub fn audit(ctx: &Context) -> CliResult<Value> {
    let mut cfg: AuditConfig = ctx.load()?;
    let input = ctx.input_path(&cfg.estimate.input)?;
    cfg.estimate.input = Some(input.clone());
    let first = read_dataset(&input)?;
    if cfg.neighbor_index >= first.n() || cfg.neighbor_value.len() != first.dim {
        return Err(CliError::Config("neighbor row is out of range or has the wrong width".into()));
    }
    let second = first.with_row(cfg.neighbor_index, &cfg.neighbor_value);
    cfg.estimate.privacy.n = first.n();
    let est = &cfg.estimate;
    let scores = [build_score(&est.score, &first, &est.domain)?, build_score(&est.score, &second, &est.domain)?];
    let bins = AuditBins::from_domain(&est.domain, cfg.bins_per_axis);
    let approx = cfg.mode == AuditMode::Approx;
    let trial_seed = |s: u64| ctx.seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(s);
    let report = if cfg.fresh_levels {
        privacy_audit(
            |side, s| {
                let score = &*scores[side as usize];
                if approx {
                    approx_dp_sample(score, &est.privacy, &est.mechanism, trial_seed(s))
                } else {
                    pure_dp_sample(score, &est.privacy, &est.mechanism, trial_seed(s))
                }
            },
            cfg.trials,
            &bins,
            est.privacy.epsilon,
        )?
    } else {
        let mut prepared = Vec::new();
        for (k, score) in scores.iter().enumerate() {
            let mut rng = rng_from_seed(trial_seed(u64::MAX - k as u64));
            prepared.push(if approx {
                prepare_approx(&**score, &est.privacy, &est.mechanism, &mut rng)?
            } else {
                prepare_pure(&**score, &est.privacy, &est.mechanism, &mut rng)?
            });
        }
        privacy_audit(|side, s| prepared[side as usize].draw(&mut rng_from_seed(trial_seed(s))), cfg.trials, &bins, est.privacy.epsilon)?
    };
    finish_json(ctx, envelope("audit", ctx.seed, &cfg, &report))
}

fn body_oracle(body: &Domain) -> DomainOracle<'_> {
    let (center, radius) = match body {
        Domain::Box { lo, hi } => (
            lo.iter().zip(hi).map(|(a, b)| 0.5 * (a + b)).collect(),
            lo.iter().zip(hi).map(|(a, b)| 0.5 * (b - a)).fold(f64::INFINITY, f64::min),
        ),
        Domain::Ball { center, radius } => (center.clone(), *radius),
    };
    DomainOracle { domain: body, center, radius }
}

pub fn sample_body(ctx: &Context) -> CliResult<Value> {
    let cfg: SampleBodyConfig = ctx.load()?;
    let oracle = body_oracle(&cfg.body);
    let budget = PrecisionBudget::for_oracle(&oracle, cfg.gamma6, cfg.precision)?;
    let mut rng = rng_from_seed(ctx.seed);
    let sampler = LatticeSampler::new(&oracle, budget, &mut rng)?;
    let samples = (0..cfg.samples).map(|_| sampler.sample(&mut rng)).collect::<robustdp::Result<Vec<_>>>()?;
    let result = json!({ "spacing": budget.gamma5, "chain_length": sampler.chain_length(), "samples": samples });
    finish_json(ctx, envelope("sample-body", ctx.seed, &cfg, &result))
}

pub fn estimate_volume(ctx: &Context) -> CliResult<Value> {
    let cfg: EstimateVolumeConfig = ctx.load()?;
    let oracle = body_oracle(&cfg.body);
    let budget = PrecisionBudget::for_oracle(&oracle, cfg.gamma6, cfg.precision)?;
    let est = estimate_grid_count(&oracle, &budget, cfg.eps, cfg.gamma, ctx.seed)?;
    let exact = if cfg.brute_force { Some(lattice_count_bruteforce(&oracle, &budget.grid())?) } else { None };
    let result = json!({ "spacing": budget.gamma5, "estimate": est, "lattice_count": exact });
    finish_json(ctx, envelope("estimate-volume", ctx.seed, &cfg, &result))
}
