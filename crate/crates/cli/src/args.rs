//! Command-line grammar.

use std::path::PathBuf;

use brownlab::{c64, GridSpec, PotentialEngine};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::parse;

#[derive(Debug, Parser)]
#[command(name = "brownlab", version, about = "Random-matrix experiments on quadratic polynomials in Ginibre matrices")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Eigenvalues of P(X_1, ..., X_n) as a CSV of re,im rows.
    Spectrum(SpectrumArgs),
    /// Build the linearization and check the Schur-complement identity.
    LinearizeCheck(LinearizeArgs),
    /// Median smallest singular value of P - z over a grid.
    SminMap(SminMapArgs),
    /// Small-ball tail of smin(P - z) along an epsilon ladder.
    Tail(TailArgs),
    /// Expected area of the epsilon-pseudospectrum inside a grid window.
    Area(AreaArgs),
    /// Log-potential and Brown density estimate on a grid.
    Brown(BrownArgs),
    /// Stieltjes transform of the squared singular values at i*eta.
    Stieltjes(StieltjesArgs),
    /// Delta determinants of an orthocomplement basis of L^z.
    WalksDelta(WalksDeltaArgs),
    /// Small-ball tail of |det| for a random walk of small matrices.
    WalksDettail(WalksDetTailArgs),
    /// Free moment of a word in circular variables.
    FreeMoment(FreeMomentArgs),
    /// Re-run the command recorded in a manifest and compare output digests.
    Replay(ReplayArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Spectrum(_) => "spectrum",
            Command::LinearizeCheck(_) => "linearize-check",
            Command::SminMap(_) => "smin-map",
            Command::Tail(_) => "tail",
            Command::Area(_) => "area",
            Command::Brown(_) => "brown",
            Command::Stieltjes(_) => "stieltjes",
            Command::WalksDelta(_) => "walks-delta",
            Command::WalksDettail(_) => "walks-dettail",
            Command::FreeMoment(_) => "free-moment",
            Command::Replay(_) => "replay",
        }
    }

    pub fn common(&self) -> Option<&Common> {
        Some(match self {
            Command::Spectrum(a) => &a.common,
            Command::LinearizeCheck(a) => &a.common,
            Command::SminMap(a) => &a.common,
            Command::Tail(a) => &a.common,
            Command::Area(a) => &a.common,
            Command::Brown(a) => &a.common,
            Command::Stieltjes(a) => &a.common,
            Command::WalksDelta(a) => &a.common,
            Command::WalksDettail(a) => &a.common,
            Command::FreeMoment(a) => &a.common,
            Command::Replay(_) => return None,
        })
    }
}

#[derive(Debug, Args, Serialize)]
pub struct Common {
    /// Master seed; every random stream derives from it.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads (outputs do not depend on this).
    #[arg(long, env = "BROWNLAB_THREADS")]
    pub threads: Option<usize>,
    /// Output directory (created if missing).
    #[arg(short = 'o', long = "output")]
    #[serde(skip)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct PolyArgs {
    /// Polynomial in x1..xn, e.g. "x1*x2 + x2*x1".
    #[arg(long)]
    pub poly: String,
    /// Number of variables (default: the largest index used).
    #[arg(long = "n")]
    pub vars: Option<usize>,
}

fn complex_arg(s: &str) -> Result<c64, String> {
    parse::complex(s)
}

/// A parsed epsilon (or eta) ladder.
#[derive(Debug, Clone, Serialize)]
#[serde(transparent)]
pub struct Ladder(pub Vec<f64>);

fn ladder_arg(s: &str) -> Result<Ladder, String> {
    parse::ladder(s).map(Ladder)
}

fn complex_pair<S: serde::Serializer>(z: &c64, s: S) -> Result<S::Ok, S::Error> {
    [z.re, z.im].serialize(s)
}

fn grid_arg(s: &str) -> Result<GridSpec, String> {
    GridSpec::parse(s).map_err(|e| e.to_string())
}

#[derive(Debug, Args, Serialize)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub poly: PolyArgs,
    /// Matrix size.
    #[arg(long = "N")]
    pub size: usize,
    #[arg(long, default_value_t = 1)]
    pub trials: usize,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args, Serialize)]
pub struct LinearizeArgs {
    #[command(flatten)]
    pub poly: PolyArgs,
    #[arg(long = "N", default_value_t = 6)]
    pub size: usize,
    /// Spectral parameter "a+bi".
    #[arg(long, value_parser = complex_arg, allow_hyphen_values = true, default_value = "0")]
    #[serde(serialize_with = "complex_pair")]
    pub z: c64,
    #[arg(long, default_value_t = 1)]
    pub trials: usize,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args, Serialize)]
pub struct SminMapArgs {
    #[command(flatten)]
    pub poly: PolyArgs,
    #[arg(long = "N")]
    pub size: usize,
    /// "re_min,re_max,im_min,im_max,nx,ny".
    #[arg(long, value_parser = grid_arg, allow_hyphen_values = true)]
    pub grid: GridSpec,
    #[arg(long, default_value_t = 1)]
    pub trials: usize,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args, Serialize)]
pub struct TailArgs {
    #[command(flatten)]
    pub poly: PolyArgs,
    #[arg(long = "N")]
    pub size: usize,
    #[arg(long, value_parser = complex_arg, allow_hyphen_values = true, default_value = "0")]
    #[serde(serialize_with = "complex_pair")]
    pub z: c64,
    /// "lo:hi:log10[:count]" or a comma-separated list.
    #[arg(long, value_parser = ladder_arg, allow_hyphen_values = true)]
    pub eps: Ladder,
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args, Serialize)]
pub struct AreaArgs {
    #[command(flatten)]
    pub poly: PolyArgs,
    #[arg(long = "N")]
    pub size: usize,
    /// Window "re_min,re_max,im_min,im_max,nx,ny".
    #[arg(long, value_parser = grid_arg, allow_hyphen_values = true)]
    pub grid: GridSpec,
    #[arg(long, value_parser = ladder_arg, allow_hyphen_values = true)]
    pub eps: Ladder,
    #[arg(long, default_value_t = 1)]
    pub trials: usize,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EngineArg {
    Schur,
    Direct,
}

impl From<EngineArg> for PotentialEngine {
    fn from(e: EngineArg) -> Self {
        match e {
            EngineArg::Schur => PotentialEngine::Schur,
            EngineArg::Direct => PotentialEngine::Direct,
        }
    }
}

#[derive(Debug, Args, Serialize)]
pub struct BrownArgs {
    #[command(flatten)]
    pub poly: PolyArgs,
    #[arg(long = "N")]
    pub size: usize,
    /// Window "re_min,re_max,im_min,im_max,nx,ny".
    #[arg(long, value_parser = grid_arg, allow_hyphen_values = true)]
    pub grid: GridSpec,
    #[arg(long, default_value_t = 1)]
    pub trials: usize,
    /// Singular-value floor inside the logarithm (default N^-6).
    #[arg(long)]
    pub floor: Option<f64>,
    #[arg(long, value_enum, default_value_t = EngineArg::Schur)]
    pub engine: EngineArg,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args, Serialize)]
pub struct StieltjesArgs {
    #[command(flatten)]
    pub poly: PolyArgs,
    #[arg(long = "N")]
    pub size: usize,
    #[arg(long, value_parser = complex_arg, allow_hyphen_values = true, default_value = "0")]
    #[serde(serialize_with = "complex_pair")]
    pub z: c64,
    /// Values of eta, same syntax as --eps.
    #[arg(long, value_parser = ladder_arg, allow_hyphen_values = true)]
    pub eta: Ladder,
    #[arg(long, default_value_t = 1)]
    pub trials: usize,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeArg {
    Full,
    Classify,
}

#[derive(Debug, Args, Serialize)]
pub struct WalksDeltaArgs {
    #[command(flatten)]
    pub poly: PolyArgs,
    #[arg(long = "N")]
    pub size: usize,
    #[arg(long, value_parser = complex_arg, allow_hyphen_values = true, default_value = "0")]
    #[serde(serialize_with = "complex_pair")]
    pub z: c64,
    /// Block column j left out of the orthocomplement (0-based).
    #[arg(long, default_value_t = 0)]
    pub block: usize,
    /// Structure threshold (default N^(-r/2-10)).
    #[arg(long)]
    pub threshold: Option<f64>,
    #[arg(long, value_enum, default_value_t = ModeArg::Full)]
    pub mode: ModeArg,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args, Serialize)]
pub struct WalksDetTailArgs {
    #[command(flatten)]
    pub poly: PolyArgs,
    #[arg(long = "N")]
    pub size: usize,
    #[arg(long, value_parser = complex_arg, allow_hyphen_values = true, default_value = "0")]
    #[serde(serialize_with = "complex_pair")]
    pub z: c64,
    #[arg(long, default_value_t = 0)]
    pub block: usize,
    #[arg(long, value_parser = ladder_arg, allow_hyphen_values = true)]
    pub eps: Ladder,
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args, Serialize)]
pub struct FreeMomentArgs {
    /// Word such as "c1 c1* c2 c2*".
    #[arg(long)]
    pub word: String,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args, Serialize)]
pub struct ReplayArgs {
    /// Manifest written by an earlier run.
    pub manifest: PathBuf,
    /// Directory for the replayed outputs (default: a "replay" directory
    /// next to the manifest).
    #[arg(short = 'o', long = "output")]
    pub output: Option<PathBuf>,
}
