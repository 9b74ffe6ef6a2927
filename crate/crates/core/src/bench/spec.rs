use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};

use super::record::Algo;
use super::BenchError;
use crate::abo::AboConfig;
use crate::Precision;

pub const DEFAULT_DIMS: [usize; 3] = [100, 1_000, 10_000];
/// Grid used when `--extreme` is given without `--dims`.
pub const EXTREME_DIMS: [usize; 1] = [1_000_000_000];
/// Largest dimension accepted without `--extreme`.
pub const DESK_MAX_DIM: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

/// Where ABO runs start.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StartMode {
    /// Midpoint of the search box.
    Center,
    /// Seeded uniform draw inside the box.
    Random,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSpec {
    pub algo: Algo,
    pub dims: Vec<usize>,
    pub precision: Precision,
    pub fe_budget_per_dim: u64,
    pub samples_per_coordinate: usize,
    pub shrink_factor: f64,
    pub seed: u64,
    pub repeats: usize,
    pub memory_ceiling_bytes: u64,
    pub track_memory: Option<bool>,
    /// `None` writes to stdout.
    pub output_path: Option<PathBuf>,
    pub format: OutputFormat,
    pub plot_path: Option<PathBuf>,
    pub compare_reference: bool,
    pub extreme: bool,
    pub start: StartMode,
}

impl Default for RunSpec {
    fn default() -> Self {
        Self {
            algo: Algo::AboOpt,
            dims: DEFAULT_DIMS.to_vec(),
            precision: Precision::Double,
            fe_budget_per_dim: 500,
            samples_per_coordinate: 10,
            shrink_factor: 0.5,
            seed: 0,
            repeats: 3,
            memory_ceiling_bytes: 2_000_000_000,
            track_memory: None,
            output_path: None,
            format: OutputFormat::Csv,
            plot_path: None,
            compare_reference: false,
            extreme: false,
            start: StartMode::Center,
        }
    }
}

impl RunSpec {
    pub fn abo_config(&self, dim: usize) -> AboConfig {
        AboConfig {
            samples_per_coordinate: self.samples_per_coordinate,
            shrink_factor: self.shrink_factor,
            fe_budget: self.fe_budget_per_dim.saturating_mul(dim as u64),
            ..AboConfig::default()
        }
    }

    pub fn validate(&self) -> Result<(), BenchError> {
        let usage = |m: String| Err(BenchError::Usage(m));
        if self.dims.is_empty() {
            return usage("--dims is empty".into());
        }
        if self.dims.contains(&0) {
            return usage("dimensions must be positive".into());
        }
        if self.dims.windows(2).any(|w| w[0] >= w[1]) {
            return usage(format!("--dims must be strictly increasing, got {:?}", self.dims));
        }
        if self.repeats == 0 {
            return usage("--repeats must be positive".into());
        }
        if self.fe_budget_per_dim < self.samples_per_coordinate as u64 {
            return usage(format!(
                "--budget-per-dim {} is below --samples-per-coord {}",
                self.fe_budget_per_dim, self.samples_per_coordinate
            ));
        }
        if let Err(e) = self.abo_config(1).validate() {
            return usage(e.to_string());
        }
        let max = *self.dims.last().unwrap();
        if max > DESK_MAX_DIM && !self.extreme {
            return usage(format!("dimension {max} exceeds {DESK_MAX_DIM}; pass --extreme"));
        }
        if self.extreme && self.algo == Algo::Nm {
            return usage("--extreme conflicts with --algo nm".into());
        }
        if self.plot_path.is_some() {
            if self.track_memory == Some(false) {
                return usage("--plot needs memory tracking; drop --track-memory off".into());
            }
            if self.dims.len() < 3 {
                return usage("--plot needs at least 3 dimensions".into());
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AlgoArg {
    Abo,
    AboOpt,
    Nm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PrecisionArg {
    F32,
    F64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Switch {
    On,
    Off,
}

/// Benchmark ABO, ABO-Opt and Nelder-Mead on the Griewank function.
#[derive(Debug, Parser)]
#[command(name = "sweepopt-bench", version)]
struct Cli {
    /// Algorithm to run.
    #[arg(long, value_enum, default_value = "abo-opt")]
    algo: AlgoArg,
    /// Comma-separated, strictly increasing dimensions (1e6 notation allowed).
    #[arg(long, value_delimiter = ',', value_parser = parse_count)]
    dims: Option<Vec<u64>>,
    #[arg(long, value_enum, default_value = "f64")]
    precision: PrecisionArg,
    /// Function evaluations per decision variable.
    #[arg(long, default_value_t = 500, value_parser = parse_count)]
    budget_per_dim: u64,
    /// Probes per coordinate per sweep.
    #[arg(long, default_value_t = 10)]
    samples_per_coord: usize,
    /// Bracket shrink factor per sweep.
    #[arg(long, default_value_t = 0.5)]
    shrink: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Runs per dimension [default: 3, or 1 when any dimension exceeds 1e5].
    #[arg(long)]
    repeats: Option<usize>,
    /// Nelder-Mead runs needing more simplex bytes than this are refused.
    #[arg(long, default_value_t = 2_000_000_000, value_parser = parse_count)]
    memory_ceiling: u64,
    /// Byte accounting [default: on, or the SWEEPOPT_TRACK_MEMORY setting].
    #[arg(long, value_enum)]
    track_memory: Option<Switch>,
    /// Results file [default: stdout].
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: OutputFormat,
    /// Write log-log scaling plots of wall time and peak memory.
    #[arg(long, value_name = "PATH.svg")]
    plot: Option<PathBuf>,
    /// Compare results with the bundled published values.
    #[arg(long)]
    compare_reference: bool,
    /// Allow dimensions above 1e6 (hours of runtime, many GB of memory).
    #[arg(long)]
    extreme: bool,
    /// ABO starting point.
    #[arg(long, value_enum, default_value = "center")]
    start: StartMode,
}

/// Accepts `1000`, `1_000` and integral scientific notation such as `1e6`.
fn parse_count(s: &str) -> Result<u64, String> {
    let t = s.trim().replace('_', "");
    if let Ok(v) = t.parse::<u64>() {
        return Ok(v);
    }
    match t.parse::<f64>() {
        Ok(v) if v.is_finite() && v >= 0.0 && v.fract() == 0.0 && v < 1.8e19 => Ok(v as u64),
        _ => Err(format!("{s:?} is not a non-negative integer")),
    }
}

/// Parses command-line arguments, `argv[0]` included.
pub fn parse_args<I, S>(argv: I) -> Result<RunSpec, BenchError>
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(|e| match e.kind() {
        clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
            BenchError::Help(e.to_string())
        }
        _ => BenchError::Usage(e.to_string()),
    })?;

    let dims: Vec<usize> = match (&cli.dims, cli.extreme) {
        (Some(d), _) => d
            .iter()
            .map(|&v| usize::try_from(v).map_err(|_| BenchError::Usage(format!("dimension {v} too large"))))
            .collect::<Result<_, _>>()?,
        (None, true) => EXTREME_DIMS.to_vec(),
        (None, false) => DEFAULT_DIMS.to_vec(),
    };
    let repeats = cli.repeats.unwrap_or_else(|| {
        if dims.iter().any(|&d| d > 100_000) {
            1
        } else {
            3
        }
    });
    let spec = RunSpec {
        algo: match cli.algo {
            AlgoArg::Abo => Algo::Abo,
            AlgoArg::AboOpt => Algo::AboOpt,
            AlgoArg::Nm => Algo::Nm,
        },
        dims,
        precision: match cli.precision {
            PrecisionArg::F32 => Precision::Single,
            PrecisionArg::F64 => Precision::Double,
        },
        fe_budget_per_dim: cli.budget_per_dim,
        samples_per_coordinate: cli.samples_per_coord,
        shrink_factor: cli.shrink,
        seed: cli.seed,
        repeats,
        memory_ceiling_bytes: cli.memory_ceiling,
        track_memory: cli.track_memory.map(|s| s == Switch::On),
        output_path: cli.out,
        format: cli.format,
        plot_path: cli.plot,
        compare_reference: cli.compare_reference,
        extreme: cli.extreme,
        start: cli.start,
    };
    spec.validate()?;
    Ok(spec)
}
