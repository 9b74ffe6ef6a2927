//! Benchmark harness: argument parsing, suite execution, output and
//! comparison against bundled reference results.

use std::io;
use std::path::{Path, PathBuf};

mod cli;
mod plot;
mod record;
mod reference;
mod spec;
mod suite;

pub use cli::{main_with_args, EXIT_IO, EXIT_OK, EXIT_REFERENCE, EXIT_USAGE};
pub use plot::{emit_scaling_plot, render_scaling_plot, ScalingFits};
pub use record::{
    emit_csv, emit_json, parse_csv_file, read_csv, write_csv, write_json, Algo, RunRecord,
    CSV_HEADER,
};
pub use reference::{
    compare_to_reference, Check, ComparisonReport, Quantity, ReferenceCell, ReferenceSeries,
    ReferenceTable, Source, ToleranceClass, Verdict,
};
pub use spec::{parse_args, OutputFormat, RunSpec, StartMode, DEFAULT_DIMS, EXTREME_DIMS};
pub use suite::{run_suite, CallCounter, CellAccounting, SuiteReport};

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    /// `--help` output; not a failure.
    #[error("{0}")]
    Help(String),
    #[error("usage: {0}")]
    Usage(String),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("parse: {0}")]
    Parse(String),
    #[error("no records to write")]
    Empty,
    #[error("plot: {0}")]
    Plot(String),
    #[error(transparent)]
    Optimizer(#[from] crate::Error),
}

impl BenchError {
    pub(crate) fn io(path: impl AsRef<Path>, source: io::Error) -> Self {
        BenchError::Io {
            path: path.as_ref().to_path_buf(),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            BenchError::Help(_) => EXIT_OK,
            BenchError::Usage(_) => EXIT_USAGE,
            _ => EXIT_IO,
        }
    }
}
