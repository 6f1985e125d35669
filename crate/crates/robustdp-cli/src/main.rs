//! Experiment driver: data generation, contamination, score sweeps, private
//! mean estimation, privacy audits and sampler/volume diagnostics.

mod commands;
mod config;

use clap::{Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::Serialize;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

pub const SCHEMA: u32 = 1;

#[derive(Parser, Debug)]
#[command(name = "robustdp", version, about = "Private robust mean estimation experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// JSON config for the subcommand; omitted fields take their defaults.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Artifact path (CSV for datasets and sweeps, JSON otherwise).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Dataset CSV; overrides `input` in the config.
    #[arg(long, global = true)]
    input: Option<PathBuf>,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Command {
    GenData,
    Corrupt,
    Score,
    EstimateMeanPure,
    EstimateMeanApprox,
    Audit,
    SampleBody,
    EstimateVolume,
}

#[derive(Debug)]
pub enum CliError {
    Lib(robustdp::Error),
    Config(String),
    Io(std::io::Error),
}

impl CliError {
    fn code(&self) -> &'static str {
        match self {
            CliError::Lib(e) => e.code(),
            CliError::Config(_) => "invalid_config",
            CliError::Io(_) => "io",
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::Config(m) => write!(f, "{m}"),
            CliError::Io(e) => write!(f, "{e}"),
        }
    }
}

impl From<robustdp::Error> for CliError {
    fn from(e: robustdp::Error) -> Self {
        CliError::Lib(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

pub struct Context {
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub input: Option<PathBuf>,
    config: Option<PathBuf>,
}

impl Context {
    pub fn load<C: DeserializeOwned + Default>(&self) -> CliResult<C> {
        match &self.config {
            None => Ok(C::default()),
            Some(p) => {
                let text = std::fs::read_to_string(p)?;
                serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", p.display())))
            }
        }
    }

    pub fn input_path(&self, from_config: &Option<PathBuf>) -> CliResult<PathBuf> {
        self.input.clone().or_else(|| from_config.clone()).ok_or_else(|| CliError::Config("no input dataset given".into()))
    }
}

/// The result envelope shared by every subcommand.
pub fn envelope<C: Serialize, R: Serialize>(command: &str, seed: u64, config: &C, result: &R) -> serde_json::Value {
    serde_json::json!({
        "schema": SCHEMA,
        "command": command,
        "seed": seed,
        "config": config,
        "result": result,
    })
}

pub fn write_json(path: &Path, value: &serde_json::Value) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(value).expect("json values serialize");
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

fn name(c: Command) -> &'static str {
    match c {
        Command::GenData => "gen-data",
        Command::Corrupt => "corrupt",
        Command::Score => "score",
        Command::EstimateMeanPure => "estimate-mean-pure",
        Command::EstimateMeanApprox => "estimate-mean-approx",
        Command::Audit => "audit",
        Command::SampleBody => "sample-body",
        Command::EstimateVolume => "estimate-volume",
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let ctx = Context { seed: cli.seed, out: cli.out, input: cli.input, config: cli.config };
    let cmd = name(cli.command);
    let outcome = match cli.command {
        Command::GenData => commands::gen_data(&ctx),
        Command::Corrupt => commands::corrupt(&ctx),
        Command::Score => commands::score(&ctx),
        Command::EstimateMeanPure => commands::estimate(&ctx, false),
        Command::EstimateMeanApprox => commands::estimate(&ctx, true),
        Command::Audit => commands::audit(&ctx),
        Command::SampleBody => commands::sample_body(&ctx),
        Command::EstimateVolume => commands::estimate_volume(&ctx),
    };
    match outcome {
        Ok(summary) => {
            println!("{}", serde_json::to_string(&summary).expect("json values serialize"));
            ExitCode::SUCCESS
        }
        Err(e) => {
            let report = serde_json::json!({
                "schema": SCHEMA,
                "command": cmd,
                "error": { "code": e.code(), "message": e.to_string() },
            });
            println!("{report}");
            ExitCode::from(2)
        }
    }
}
