use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "jamregion", version, about = "Eavesdropping rate regions of a jamming monitor over two interfering links")]
pub struct Cli {
    /// Worker threads; defaults to all cores.
    #[arg(long, global = true, env = "JAMREGION_THREADS")]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Draw a channel realization and write it as scenario JSON.
    Gen(GenArgs),
    /// Compute rate regions for a scenario file and write them as CSV.
    Region(RegionArgs),
    /// Check the closed forms against brute-force searches.
    Verify(VerifyArgs),
    /// Summarize regions over many channel realizations.
    Montecarlo(MonteCarloArgs),
}

/// Geometry, antenna and power settings for generated scenarios.
#[derive(Debug, Clone, Args, serde::Serialize)]
pub struct SetupArgs {
    /// Monitor position `x,y` in meters.
    #[arg(long, default_value = "100,100", value_parser = parse_point)]
    pub monitor: [f64; 2],
    /// Monitor transmit (jamming) antennas.
    #[arg(long, default_value_t = 2)]
    pub nt: usize,
    /// Monitor receive antennas.
    #[arg(long, default_value_t = 2)]
    pub nr: usize,
    #[arg(long, default_value_t = 10.0, allow_hyphen_values = true)]
    pub p1_dbm: f64,
    #[arg(long, default_value_t = 10.0, allow_hyphen_values = true)]
    pub p2_dbm: f64,
    /// Noise power at every receiver.
    #[arg(long, default_value_t = -70.0, allow_hyphen_values = true)]
    pub noise_dbm: f64,
    /// Jamming power budget.
    #[arg(long, default_value_t = 20.0, allow_hyphen_values = true)]
    pub pmax_dbm: f64,
    /// Residual self-interference coefficient in [0, 1].
    #[arg(long, default_value_t = 0.0)]
    pub rho: f64,
}

#[derive(Debug, Args, serde::Serialize)]
pub struct GenArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub setup: SetupArgs,
    /// Output path; stdout if omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Manifest path; defaults to `<out>.manifest.json` when `--out` is set.
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Receiver {
    Mmse,
    MmseSic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Toggle {
    On,
    Off,
}

/// Which regions to build.
#[derive(Debug, Clone, Args, serde::Serialize)]
pub struct RegionOpts {
    #[arg(long, value_enum, default_value_t = Receiver::Mmse)]
    pub receiver: Receiver,
    /// Time-sharing between jamming beamformers.
    #[arg(long, value_enum, default_value_t = Toggle::Off)]
    pub time_sharing: Toggle,
    /// Self-interference coefficient for the lower-bound eavesdropping region.
    #[arg(long)]
    pub si: Option<f64>,
    /// Confine jamming to the null space of the loopback channel.
    #[arg(long)]
    pub null_space: bool,
    /// Boundary samples per sweep.
    #[arg(long, default_value_t = 128)]
    pub samples: usize,
}

#[derive(Debug, Args, serde::Serialize)]
pub struct RegionArgs {
    /// Scenario JSON written by `gen`.
    #[arg(long)]
    pub scenario: PathBuf,
    #[command(flatten)]
    pub opts: RegionOpts,
    /// Override the scenario's jamming budget.
    #[arg(long, allow_hyphen_values = true)]
    pub pmax_dbm: Option<f64>,
    /// CSV output path; stdout if omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// SVG plot path.
    #[arg(long)]
    pub svg: Option<PathBuf>,
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Tamper {
    /// Flip the sign of the orthogonal lower-boundary component.
    SignFlip,
}

#[derive(Debug, Args, serde::Serialize)]
pub struct VerifyArgs {
    /// Scenario JSON to verify.
    #[arg(long, conflicts_with = "random", required_unless_present = "random")]
    pub scenario: Option<PathBuf>,
    /// Number of random scenarios to draw instead.
    #[arg(long)]
    pub random: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub setup: SetupArgs,
    /// Search grid size of the oracles.
    #[arg(long, default_value_t = 10_000)]
    pub n_grid: usize,
    /// Bob-1 rate samples for the boundary checks.
    #[arg(long, default_value_t = 16)]
    pub samples: usize,
    /// Interior targets for the minimum-power check.
    #[arg(long, default_value_t = 8)]
    pub targets: usize,
    /// Rank-two probes per Bob-1 rate sample.
    #[arg(long, default_value_t = 1_000)]
    pub trials: usize,
    /// JSON-lines output path; stdout if omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub manifest: Option<PathBuf>,
    #[arg(long, value_enum, hide = true)]
    pub tamper: Option<Tamper>,
}

#[derive(Debug, Args, serde::Serialize)]
pub struct MonteCarloArgs {
    #[arg(long)]
    pub realizations: usize,
    /// Realization k uses seed `seed + k`.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub setup: SetupArgs,
    #[command(flatten)]
    pub opts: RegionOpts,
    /// CSV output path; stdout if omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

fn parse_point(s: &str) -> Result<[f64; 2], String> {
    let (x, y) = s.split_once(',').ok_or_else(|| format!("expected `x,y`, got `{s}`"))?;
    let parse = |v: &str| v.trim().parse::<f64>().map_err(|e| format!("`{v}`: {e}"));
    let p = [parse(x)?, parse(y)?];
    if p.iter().all(|c| c.is_finite()) {
        Ok(p)
    } else {
        Err("coordinates must be finite".into())
    }
}
