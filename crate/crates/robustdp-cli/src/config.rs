//! Per-command configuration. Every field has a default so the resolved
//! config can always be written back into the output.

use robustdp::datalab::{CorruptionMode, CorruptionPlan};
use robustdp::mechanism::{Domain, LevelBackend, MechanismConfig, PrivacyParams};
use robustdp::sampler::PrecisionOptions;
use robustdp::scores::{Estimator, MeanScoreConfig};
use serde::{Deserialize, Deserializer, Serialize};
use serde_json::Value;
use std::path::PathBuf;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GenDataConfig {
    pub n: usize,
    pub mean: Vec<f64>,
    /// Row-major covariance; identity when absent.
    pub cov: Option<Vec<f64>>,
}

impl Default for GenDataConfig {
    fn default() -> Self {
        GenDataConfig { n: 100, mean: vec![0.0], cov: None }
    }
}

impl GenDataConfig {
    pub fn covariance(&self) -> Vec<f64> {
        self.cov.clone().unwrap_or_else(|| {
            let d = self.mean.len();
            (0..d * d).map(|k| if k / d == k % d { 1.0 } else { 0.0 }).collect()
        })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CorruptConfig {
    pub input: Option<PathBuf>,
    pub eta: f64,
    pub mode: CorruptionMode,
}

impl Default for CorruptConfig {
    fn default() -> Self {
        CorruptConfig { input: None, eta: 0.05, mode: CorruptionMode::ReplaceWithConstant { value: vec![100.0] } }
    }
}

impl CorruptConfig {
    pub fn plan(&self, seed: u64) -> CorruptionPlan {
        CorruptionPlan { eta: self.eta, mode: self.mode.clone(), seed }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", deny_unknown_fields)]
pub enum ScoreSpec {
    Combinatorial {
        estimator: Estimator,
        alpha: f64,
    },
    SosMean {
        #[serde(default)]
        config: MeanScoreConfig,
    },
}

impl Default for ScoreSpec {
    fn default() -> Self {
        ScoreSpec::Combinatorial { estimator: Estimator::Median, alpha: 0.5 }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScoreConfig {
    pub input: Option<PathBuf>,
    pub score: ScoreSpec,
    pub domain: Domain,
    /// Sweep endpoints and number of points (1-d only).
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
    pub tol: f64,
}

impl Default for ScoreConfig {
    fn default() -> Self {
        ScoreConfig { input: None, score: ScoreSpec::default(), domain: Domain::interval(-10.0, 10.0), lo: -10.0, hi: 10.0, points: 41, tol: 0.05 }
    }
}

pub fn default_privacy() -> PrivacyParams {
    PrivacyParams { epsilon: 1.0, delta: 1e-6, beta: 0.05, eta: 0.05, eta_star: 0.5, n: 0 }
}

pub fn default_mechanism() -> MechanismConfig {
    MechanismConfig { backend: LevelBackend::ExactGrid1d, ..Default::default() }
}

fn overlay(base: &mut Value, patch: Value) {
    match (base, patch) {
        (Value::Object(b), Value::Object(p)) => {
            for (k, v) in p {
                match b.get_mut(&k) {
                    Some(slot) => overlay(slot, v),
                    None => {
                        b.insert(k, v);
                    }
                }
            }
        }
        (slot, v) => *slot = v,
    }
}

/// A partial `mechanism` object is read on top of [`default_mechanism`], not the library default.
fn mechanism_over_cli_defaults<'de, D: Deserializer<'de>>(d: D) -> Result<MechanismConfig, D::Error> {
    let mut base = serde_json::to_value(default_mechanism()).expect("json values serialize");
    overlay(&mut base, Value::deserialize(d)?);
    serde_json::from_value(base).map_err(serde::de::Error::custom)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EstimateConfig {
    pub input: Option<PathBuf>,
    /// Generating mean, for the reported ℓ2 error.
    pub true_mean: Option<Vec<f64>>,
    pub score: ScoreSpec,
    pub domain: Domain,
    /// `n` is always taken from the dataset.
    pub privacy: PrivacyParams,
    #[serde(deserialize_with = "mechanism_over_cli_defaults")]
    pub mechanism: MechanismConfig,
}

impl Default for EstimateConfig {
    fn default() -> Self {
        EstimateConfig {
            input: None,
            true_mean: None,
            score: ScoreSpec::default(),
            domain: Domain::interval(-10.0, 10.0),
            privacy: default_privacy(),
            mechanism: default_mechanism(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AuditMode {
    Pure,
    Approx,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AuditConfig {
    pub estimate: EstimateConfig,
    pub mode: AuditMode,
    /// The neighbor replaces row `neighbor_index` by `neighbor_value`.
    pub neighbor_index: usize,
    pub neighbor_value: Vec<f64>,
    pub trials: usize,
    pub bins_per_axis: usize,
    /// Rebuild the level sets for every trial instead of once per dataset.
    pub fresh_levels: bool,
}

impl Default for AuditConfig {
    fn default() -> Self {
        AuditConfig {
            estimate: EstimateConfig::default(),
            mode: AuditMode::Pure,
            neighbor_index: 0,
            neighbor_value: vec![10.0],
            trials: 1000,
            bins_per_axis: 32,
            fresh_levels: false,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SampleBodyConfig {
    pub body: Domain,
    pub samples: usize,
    pub gamma6: f64,
    pub precision: PrecisionOptions,
}

impl Default for SampleBodyConfig {
    fn default() -> Self {
        SampleBodyConfig {
            body: Domain::Box { lo: vec![-1.0, -1.0], hi: vec![1.0, 1.0] },
            samples: 100,
            gamma6: 0.01,
            precision: PrecisionOptions { spacing: Some(0.5), ..Default::default() },
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EstimateVolumeConfig {
    pub body: Domain,
    pub eps: f64,
    pub gamma: f64,
    pub gamma6: f64,
    pub precision: PrecisionOptions,
    /// Also count the lattice points exhaustively.
    pub brute_force: bool,
}

impl Default for EstimateVolumeConfig {
    fn default() -> Self {
        EstimateVolumeConfig {
            body: Domain::Ball { center: vec![0.0, 0.0], radius: 1.0 },
            eps: 0.1,
            gamma: 0.01,
            gamma6: 0.01,
            precision: PrecisionOptions { spacing: Some(0.1), ..Default::default() },
            brute_force: true,
        }
    }
}
