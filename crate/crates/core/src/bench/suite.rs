use std::fs::OpenOptions;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use super::record::{Algo, RunRecord};
use super::spec::{RunSpec, StartMode};
use super::BenchError;
use crate::abo::{abo_optimize, InitialPoint};
use crate::metrics::alloc::{hooks_installed, set_tracking_enabled, tracking_enabled};
use crate::metrics::{theoretical_memory, track_peak, Stopwatch};
use crate::nelder_mead::{nm_optimize, NmConfig};
use crate::objective::{BoxBounds, EvalCounter, Griewank, Objective};
use crate::{Error, Precision, Real, Termination};

/// Search box used by every cell.
pub const GRIEWANK_BOUND: f64 = 600.0;

/// Counts successful calls reaching the wrapped objective.
#[derive(Debug)]
pub struct CallCounter<O> {
    pub inner: O,
    pub calls: u64,
}

impl<O> CallCounter<O> {
    pub fn new(inner: O) -> Self {
        Self { inner, calls: 0 }
    }
}

impl<T: Real, O: Objective<T>> Objective<T> for CallCounter<O> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn evaluate(&mut self, x: &[T]) -> crate::Result<f64> {
        let v = self.inner.evaluate(x)?;
        self.calls += 1;
        Ok(v)
    }

    fn counter(&self) -> EvalCounter {
        self.inner.counter()
    }

    fn supports_incremental(&self) -> bool {
        self.inner.supports_incremental()
    }

    fn begin_incremental(&mut self, x: &[T]) -> crate::Result<f64> {
        let v = self.inner.begin_incremental(x)?;
        self.calls += 1;
        Ok(v)
    }

    fn update_coordinate(&mut self, x: &mut [T], i: usize, value: T) -> crate::Result<f64> {
        let v = self.inner.update_coordinate(x, i, value)?;
        self.calls += 1;
        Ok(v)
    }
}

/// Evaluation accounting for one cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CellAccounting {
    /// The objective's own counter.
    pub counter: EvalCounter,
    /// Calls seen by a [`CallCounter`] around the objective.
    pub instrumented_calls: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub records: Vec<RunRecord>,
    /// Parallel to `records`.
    pub accounting: Vec<CellAccounting>,
}

impl SuiteReport {
    pub fn total(&self) -> EvalCounter {
        self.accounting
            .iter()
            .fold(EvalCounter::default(), |acc, c| acc + c.counter)
    }
}

/// Fails if `path` cannot be opened for writing. Leaves existing files
/// untouched and removes probe files it created.
fn check_writable(path: &Path) -> Result<(), BenchError> {
    let existed = path.exists();
    OpenOptions::new()
        .append(true)
        .create(true)
        .open(path)
        .map_err(|e| BenchError::io(path, e))?;
    if !existed {
        std::fs::remove_file(path).map_err(|e| BenchError::io(path, e))?;
    }
    Ok(())
}

fn unix_seconds() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map_or(0, |d| d.as_secs())
}

struct CellOutcome {
    fe: u64,
    wall_s: f64,
    best_f: Option<f64>,
    termination: Termination,
    accounting: CellAccounting,
}

fn run_cell<T: Real>(spec: &RunSpec, dim: usize) -> Result<CellOutcome, BenchError> {
    let objective = match spec.algo {
        Algo::AboOpt => Griewank::incremental(dim)?,
        Algo::Abo | Algo::Nm => Griewank::new(dim)?,
    };
    let mut objective = CallCounter::new(objective);
    let bounds = BoxBounds::uniform(T::from_f64(-GRIEWANK_BOUND), T::from_f64(GRIEWANK_BOUND))?;
    let clock = Stopwatch::start();
    let result = match spec.algo {
        Algo::Abo | Algo::AboOpt => {
            let mut config = spec.abo_config(dim);
            if spec.start == StartMode::Random {
                config.initial_point = InitialPoint::Random { seed: spec.seed };
            }
            abo_optimize(&mut objective, &bounds, &config)
        }
        Algo::Nm => {
            let config = NmConfig {
                seed: spec.seed,
                memory_ceiling_bytes: spec.memory_ceiling_bytes,
                max_evaluations: Some(spec.fe_budget_per_dim.saturating_mul(dim as u64)),
                ..NmConfig::default()
            };
            nm_optimize(&mut objective, &bounds, &config)
        }
    };
    let accounting = CellAccounting {
        counter: Objective::<T>::counter(&objective),
        instrumented_calls: objective.calls,
    };
    match result {
        Ok(r) => Ok(CellOutcome {
            fe: r.fe_used,
            wall_s: r.wall_seconds,
            best_f: Some(r.best_f),
            termination: r.termination,
            accounting,
        }),
        Err(Error::MemoryLimit { .. }) => Ok(CellOutcome {
            fe: 0,
            wall_s: clock.elapsed_seconds(),
            best_f: None,
            termination: Termination::MemoryRefused,
            accounting,
        }),
        Err(e) => Err(e.into()),
    }
}

/// Runs every (dimension, repeat) cell of `spec` serially.
///
/// Memory is tracked per cell when the tracking allocator is installed and
/// enabled (`spec.track_memory` overrides the process setting).
pub fn run_suite(spec: &RunSpec) -> Result<SuiteReport, BenchError> {
    spec.validate()?;
    for path in [&spec.output_path, &spec.plot_path].into_iter().flatten() {
        check_writable(path)?;
    }
    if let Some(on) = spec.track_memory {
        set_tracking_enabled(on);
    }
    let track = hooks_installed() && tracking_enabled();

    let mut report = SuiteReport {
        records: Vec::new(),
        accounting: Vec::new(),
    };
    for &dim in &spec.dims {
        let theory = theoretical_memory(dim, spec.precision)?;
        for _ in 0..spec.repeats {
            let timestamp = unix_seconds();
            let cell = || match spec.precision {
                Precision::Single => run_cell::<f32>(spec, dim),
                Precision::Double => run_cell::<f64>(spec, dim),
            };
            let (outcome, peak) = if track {
                let (out, mem) = track_peak(spec.algo.as_str(), cell)?;
                (out?, Some(mem.peak_kb()))
            } else {
                (cell()?, None)
            };
            report.records.push(
                RunRecord {
                    algo: spec.algo,
                    dim,
                    precision: spec.precision,
                    fe: outcome.fe,
                    wall_s: outcome.wall_s,
                    best_f: outcome.best_f,
                    theory_kb: theory as f64 / 1000.0,
                    peak_kb: peak,
                    termination: outcome.termination,
                    seed: spec.seed,
                    timestamp,
                }
                .normalized(),
            );
            report.accounting.push(outcome.accounting);
        }
    }
    Ok(report)
}
