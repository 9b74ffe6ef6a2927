use std::ffi::OsString;
use std::io::{self, Write};

use super::plot::emit_scaling_plot;
use super::record::{emit_csv, emit_json, write_csv, write_json};
use super::reference::{compare_to_reference, ReferenceTable, Verdict};
use super::spec::{parse_args, OutputFormat, RunSpec};
use super::suite::run_suite;
use super::BenchError;
use crate::metrics::alloc::init_from_env;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_IO: i32 = 2;
pub const EXIT_REFERENCE: i32 = 3;

fn execute(spec: &RunSpec) -> Result<i32, BenchError> {
    if spec.extreme {
        eprintln!(
            "warning: --extreme runs dimensions up to {}; expect hours of runtime and GB of memory",
            spec.dims.last().unwrap()
        );
    }
    let report = run_suite(spec)?;
    let records = &report.records;
    match (&spec.output_path, spec.format) {
        (Some(p), OutputFormat::Csv) => emit_csv(records, p)?,
        (Some(p), OutputFormat::Json) => emit_json(records, p)?,
        (None, format) => {
            let stdout = io::stdout().lock();
            match format {
                OutputFormat::Csv => write_csv(records, stdout)?,
                OutputFormat::Json => {
                    write_json(records, stdout)?;
                    io::stdout().write_all(b"\n").map_err(|e| BenchError::io("<stdout>", e))?;
                }
            }
        }
    }
    if let Some(p) = &spec.plot_path {
        let fits = emit_scaling_plot(records, p)?;
        eprintln!(
            "plot {}: wall_s slope {:.2}, peak_kb slope {:.2}",
            p.display(),
            fits.wall.slope,
            fits.memory.slope
        );
    }
    if spec.compare_reference {
        let cmp = compare_to_reference(records, &ReferenceTable::default());
        for c in cmp.checks.iter().filter(|c| c.verdict != Verdict::NotReproducible) {
            eprintln!("{c}");
        }
        eprintln!("{}", cmp.summary());
        if !cmp.passed() {
            return Ok(EXIT_REFERENCE);
        }
    }
    Ok(EXIT_OK)
}

/// Runs the benchmark CLI and returns the process exit status.
pub fn main_with_args<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    init_from_env();
    let result = parse_args(argv).and_then(|spec| execute(&spec));
    match result {
        Ok(code) => code,
        Err(BenchError::Help(text)) => {
            print!("{text}");
            EXIT_OK
        }
        Err(e) => {
            eprintln!("sweepopt-bench: {e}");
            e.exit_code()
        }
    }
}
