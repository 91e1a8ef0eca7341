use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::error::CliError;
use crate::output::{Format, FULL_DIGITS};
use crate::ranges::parse_window;

#[derive(Debug, Parser)]
#[command(
    name = "satkernel",
    version,
    about = "Kernels, number variance, gap probabilities and Monte Carlo checks for non-intersecting Brownian paths",
    args_override_self = true
)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    /// Same as the `selftest` command.
    #[arg(long)]
    pub selftest: bool,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct Global {
    /// Emit a JSON report.
    #[arg(long, global = true)]
    pub json: bool,
    /// Emit CSV (the default for tables).
    #[arg(long, global = true)]
    pub csv: bool,
    /// JSON object whose keys are flag names; flags given on the command line win.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Round numbers to this many significant digits on output.
    #[arg(long, global = true, value_parser = clap::value_parser!(u8).range(1..=17))]
    pub digits: Option<u8>,
    /// Worker threads (SATKERNEL_WORKERS caps this).
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Write the report here, next to a `.manifest.json`.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

impl Global {
    pub fn format(&self, fallback: Format) -> Result<Format, CliError> {
        match (self.json, self.csv) {
            (true, true) => Err(CliError::Usage("--json and --csv are exclusive".into())),
            (true, false) => Ok(Format::Json),
            (false, true) => Ok(Format::Csv),
            (false, false) => Ok(fallback),
        }
    }

    pub fn digits(&self) -> usize {
        self.digits.map_or(FULL_DIGITS, usize::from)
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a kernel family on a grid.
    #[command(args_override_self = true, allow_negative_numbers = true)]
    Kernel(KernelArgs),
    /// Number variance of the count in [R, R+L].
    #[command(args_override_self = true, allow_negative_numbers = true)]
    Variance(VarianceArgs),
    /// First-particle distribution from Fredholm determinants.
    #[command(args_override_self = true, allow_negative_numbers = true)]
    Gap(GapArgs),
    /// Monte Carlo of Hermitian Brownian motion started from a lattice.
    #[command(args_override_self = true, allow_negative_numbers = true)]
    Simulate(SimulateArgs),
    /// Compare a general starting configuration with its local lattice model.
    #[command(args_override_self = true, allow_negative_numbers = true)]
    Approx(ApproxArgs),
    /// Run the acceptance suite.
    #[command(args_override_self = true)]
    Selftest(SelftestArgs),
}

pub const COMMANDS: [&str; 6] = ["kernel", "variance", "gap", "simulate", "approx", "selftest"];

#[derive(Debug, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct ModelArgs {
    /// Lattice spacing.
    #[arg(long, default_value_t = 1.0)]
    pub a: f64,
    /// Time S.
    #[serde(rename = "S")]
    #[arg(long = "S", default_value_t = 1.0)]
    pub s: f64,
    /// Offset Δ of the lattice.
    #[arg(long, default_value_t = 0.0)]
    pub delta: f64,
}

#[derive(Debug, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct KernelArgs {
    #[arg(long, default_value = "sine")]
    pub family: String,
    #[command(flatten)]
    #[serde(flatten)]
    pub model: ModelArgs,
    /// d = 2πS/a²; overrides --S.
    #[arg(long)]
    pub d: Option<f64>,
    /// Bessel order.
    #[arg(long, default_value_t = 0.5)]
    pub nu: f64,
    /// Paths in the finite contour kernel.
    #[serde(rename = "N")]
    #[arg(long = "N", default_value_t = 21)]
    pub n: usize,
    /// lo:hi window for the infinite contour kernel.
    #[arg(long, default_value = "0:5", allow_hyphen_values = true)]
    pub window: String,
    #[arg(long, default_value_t = 1e-14)]
    pub tol: f64,
    /// `X` or `X x Y`, each a value list or range.
    #[arg(long, required = true, allow_hyphen_values = true)]
    pub grid: String,
    /// Second family, adding its values and |Δ|.
    #[arg(long)]
    pub compare: Option<String>,
}

#[derive(Debug, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct VarianceArgs {
    /// direct, closed, averaged, vd, sine or un.
    #[arg(long, default_value = "closed")]
    pub method: String,
    #[command(flatten)]
    #[serde(flatten)]
    pub model: ModelArgs,
    /// Values of d (overrides --S).
    #[arg(long)]
    pub d: Option<String>,
    /// Interval starts.
    #[serde(rename = "R")]
    #[arg(long = "R", default_value = "0", allow_hyphen_values = true)]
    pub r: String,
    /// Interval lengths.
    #[serde(rename = "L")]
    #[arg(long = "L")]
    pub l: Option<String>,
    /// Arcs for the circle model (an alias of --L).
    #[arg(long)]
    pub arc: Option<String>,
    /// Points on the circle.
    #[arg(long, default_value_t = 64)]
    pub n: usize,
    /// Kernel family for the direct engine.
    #[arg(long, default_value = "LS-approx")]
    pub family: String,
    /// Integration cutoff for the direct engine.
    #[arg(long)]
    pub cutoff: Option<f64>,
    /// Compare the direct engine with a closed form.
    #[arg(long)]
    pub crosscheck: bool,
}

#[derive(Debug, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct GapArgs {
    /// free, absorbing or reflecting.
    #[arg(long, default_value = "absorbing")]
    pub boundary: String,
    /// Any kernel family; overrides --boundary.
    #[arg(long)]
    pub family: Option<String>,
    #[command(flatten)]
    #[serde(flatten)]
    pub model: ModelArgs,
    #[arg(long)]
    pub d: Option<f64>,
    #[arg(long, default_value_t = 0.5)]
    pub nu: f64,
    #[serde(rename = "N")]
    #[arg(long = "N", default_value_t = 21)]
    pub n: usize,
    /// Right ends ξ of the gap [0, ξ].
    #[arg(long, default_value = "0:0.1:2")]
    pub xi: String,
    /// Quadrature order.
    #[arg(long, default_value_t = 40)]
    pub order: usize,
}

#[derive(Debug, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct SimulateArgs {
    #[serde(rename = "N")]
    #[arg(long = "N", default_value_t = 201)]
    pub n: usize,
    #[command(flatten)]
    #[serde(flatten)]
    pub model: ModelArgs,
    #[arg(long, default_value_t = 20_000)]
    pub samples: usize,
    /// lo:hi counting window.
    #[arg(long, default_value = "0.25:5.25", allow_hyphen_values = true)]
    pub window: String,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    #[arg(long, default_value_t = 50)]
    pub bins: usize,
    #[arg(long, default_value_t = 40)]
    pub batches: usize,
    /// Also write every sampled configuration to this file.
    #[arg(long, value_name = "PATH")]
    pub samples_out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct ApproxArgs {
    /// power:<δ>, zeta-counting or unfolding.
    #[serde(rename = "F")]
    #[arg(long = "F", default_value = "power:0.05")]
    pub f: String,
    #[arg(long, default_value = "50,100,200")]
    pub alpha: String,
    /// Half-width of the window around α.
    #[serde(rename = "T")]
    #[arg(long = "T", default_value_t = 2.0)]
    pub t: f64,
    #[serde(rename = "S")]
    #[arg(long = "S", default_value_t = 1.0)]
    pub s: f64,
    /// Points of the configuration tabulated exactly.
    #[arg(long, default_value_t = 20_000)]
    pub prefix: usize,
    /// Grid points per axis.
    #[arg(long, default_value_t = 5)]
    pub points: usize,
    /// Half-width and grid size of the local sine comparison.
    #[arg(long, default_value_t = 2.0)]
    pub sine_h: f64,
    #[arg(long, default_value_t = 9)]
    pub sine_n: usize,
}

#[derive(Debug, Default, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct SelftestArgs {
    /// Criteria to run, e.g. 1,3,11.
    #[arg(long)]
    pub only: Option<String>,
    /// Also fail when a criterion misses its stated tolerance but meets its gate.
    #[arg(long)]
    pub strict: bool,
}

impl KernelArgs {
    pub fn params(&self) -> Result<satkernel::registry::KernelParams, CliError> {
        let (lo, len) = parse_window(&self.window)?;
        Ok(satkernel::registry::KernelParams {
            a: self.model.a,
            s: self.model.s,
            d: self.d,
            delta: self.model.delta,
            nu: self.nu,
            n: self.n,
            window: (lo, lo + len),
            tol: self.tol,
        })
    }
}
