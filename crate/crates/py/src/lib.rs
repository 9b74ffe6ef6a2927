//! Python bindings for the `sweepopt` optimizers, objectives and metrics.

use pyo3::exceptions::{PyIndexError, PyMemoryError, PyOSError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use sweepopt::abo::{abo_optimize as abo_run, AboConfig, InitialPoint};
use sweepopt::bench::{self, BenchError, RunRecord};
use sweepopt::metrics;
use sweepopt::nelder_mead::{nm_optimize as nm_run, NmConfig};
use sweepopt::objective::{self as obj, BoxBounds, EvalCounter, Griewank, Objective};
use sweepopt::{BestPoint, Error, OptimizationResult, Precision};

fn to_py(e: Error) -> PyErr {
    match e {
        Error::InvalidIndex { .. } => PyIndexError::new_err(e.to_string()),
        Error::MemoryLimit { .. } => PyMemoryError::new_err(e.to_string()),
        Error::TrackingUnavailable | Error::TrackingDisabled => {
            PyRuntimeError::new_err(e.to_string())
        }
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn bench_to_py(e: BenchError) -> PyErr {
    match e {
        BenchError::Io { .. } => PyOSError::new_err(e.to_string()),
        BenchError::Optimizer(inner) => to_py(inner),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn parse_precision(s: &str) -> PyResult<Precision> {
    match s {
        "single" | "f32" => Ok(Precision::Single),
        "double" | "f64" => Ok(Precision::Double),
        _ => Err(PyValueError::new_err(format!(
            "precision must be 'single' or 'double', got {s:?}"
        ))),
    }
}

/// Griewank function value at `x`.
#[pyfunction]
fn griewank(x: Vec<f64>) -> PyResult<f64> {
    obj::griewank_value(&x).map_err(to_py)
}

/// Squared distance from `x` to `center` in every coordinate.
#[pyfunction]
fn sphere_shifted(x: Vec<f64>, center: f64) -> PyResult<f64> {
    obj::sphere_shifted(&x, center).map_err(to_py)
}

/// Bytes needed to store `dim` decision variables.
#[pyfunction]
#[pyo3(signature = (dim, precision = "double"))]
fn theoretical_memory(dim: usize, precision: &str) -> PyResult<u64> {
    metrics::theoretical_memory(dim, parse_precision(precision)?).map_err(to_py)
}

/// Least-squares fit of `ln(measurement)` against `ln(size)`.
///
/// Returns a dict with `slope`, `intercept` and `r_squared`.
#[pyfunction]
fn fit_loglog(py: Python<'_>, points: Vec<(f64, f64)>) -> PyResult<Py<PyDict>> {
    let fit = metrics::fit_loglog(&points).map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("slope", fit.slope)?;
    d.set_item("intercept", fit.intercept)?;
    d.set_item("r_squared", fit.r_squared)?;
    Ok(d.unbind())
}

/// Incremental Griewank evaluator owning its decision vector.
#[pyclass(name = "GriewankState")]
struct PyGriewankState {
    x: Vec<f64>,
    state: obj::GriewankState,
}

#[pymethods]
impl PyGriewankState {
    #[new]
    #[pyo3(signature = (x, refresh_period = obj::DEFAULT_REFRESH_PERIOD, zero_guard = obj::DEFAULT_ZERO_GUARD))]
    fn new(x: Vec<f64>, refresh_period: u64, zero_guard: f64) -> PyResult<Self> {
        let state = obj::GriewankState::new(&x, refresh_period, zero_guard).map_err(to_py)?;
        Ok(Self { x, state })
    }

    /// Sets coordinate `i` to `value` and returns the new objective.
    fn update(&mut self, i: usize, value: f64) -> PyResult<f64> {
        self.state.update(&mut self.x, i, value).map_err(to_py)
    }

    /// Rebuilds the cached sum and product from scratch.
    fn refresh(&mut self) -> PyResult<()> {
        self.state.refresh(&self.x).map_err(to_py)
    }

    #[getter]
    fn objective(&self) -> f64 {
        self.state.objective()
    }

    #[getter]
    fn x(&self) -> Vec<f64> {
        self.x.clone()
    }

    #[getter]
    fn refresh_count(&self) -> u64 {
        self.state.refresh_count()
    }

    fn __len__(&self) -> usize {
        self.x.len()
    }

    fn __repr__(&self) -> String {
        format!(
            "GriewankState(dim={}, objective={:e})",
            self.x.len(),
            self.state.objective()
        )
    }
}

/// Outcome of an optimizer run.
#[pyclass(name = "OptimizeResult", get_all, frozen)]
struct PyOptimizeResult {
    best_f: f64,
    /// `None` when the point was too large to return in full.
    best_x: Option<Vec<f64>>,
    fe_used: u64,
    wall_seconds: f64,
    termination: String,
    iterations: u64,
}

#[pymethods]
impl PyOptimizeResult {
    fn __repr__(&self) -> String {
        format!(
            "OptimizeResult(best_f={:e}, fe_used={}, termination={:?}, wall_seconds={:.3})",
            self.best_f, self.fe_used, self.termination, self.wall_seconds
        )
    }
}

fn wrap_result<T: sweepopt::Real>(r: OptimizationResult<T>) -> PyOptimizeResult {
    let best_x = match &r.best_x {
        BestPoint::Full(x) => Some(x.as_slice().iter().map(|v| v.to_f64()).collect()),
        BestPoint::Digest { .. } => None,
    };
    PyOptimizeResult {
        best_f: r.best_f,
        best_x,
        fe_used: r.fe_used,
        wall_seconds: r.wall_seconds,
        termination: r.termination.as_str().to_owned(),
        iterations: r.iterations,
    }
}

/// A Python callable used as an objective. The first exception it raises
/// stops the optimizer and is re-raised afterwards.
struct PyCallable<'py> {
    func: Bound<'py, PyAny>,
    dim: usize,
    counter: EvalCounter,
    raised: Option<PyErr>,
}

impl Objective<f64> for PyCallable<'_> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn evaluate(&mut self, x: &[f64]) -> sweepopt::Result<f64> {
        let value = self
            .func
            .call1((x.to_vec(),))
            .and_then(|v| v.extract::<f64>());
        match value {
            Ok(v) => {
                self.counter.full_evals += 1;
                Ok(v)
            }
            Err(e) => {
                self.raised = Some(e);
                Err(Error::InvalidInput("objective raised an exception".into()))
            }
        }
    }

    fn counter(&self) -> EvalCounter {
        self.counter
    }
}

enum Target<'py> {
    Griewank { incremental: bool },
    Callable(Bound<'py, PyAny>),
}

fn target<'py>(objective: Option<Bound<'py, PyAny>>, incremental: bool) -> PyResult<Target<'py>> {
    match objective {
        None => Ok(Target::Griewank { incremental }),
        Some(o) if o.is_callable() => Ok(Target::Callable(o)),
        Some(o) => match o.extract::<String>()?.as_str() {
            "griewank" => Ok(Target::Griewank { incremental }),
            other => Err(PyValueError::new_err(format!(
                "objective must be 'griewank' or a callable, got {other:?}"
            ))),
        },
    }
}

fn initial_point(start: Option<Bound<'_, PyAny>>, seed: u64) -> PyResult<InitialPoint> {
    let Some(start) = start else {
        return Ok(InitialPoint::DomainCenter);
    };
    if let Ok(s) = start.extract::<String>() {
        return match s.as_str() {
            "center" => Ok(InitialPoint::DomainCenter),
            "random" => Ok(InitialPoint::Random { seed }),
            _ => Err(PyValueError::new_err(format!(
                "start must be 'center', 'random' or a sequence of floats, got {s:?}"
            ))),
        };
    }
    Ok(InitialPoint::Given(start.extract::<Vec<f64>>()?))
}

fn run_with<'py, R>(
    target: Target<'py>,
    dim: usize,
    run_f64: impl FnOnce(&mut dyn Objective<f64>) -> sweepopt::Result<R>,
) -> PyResult<R> {
    match target {
        Target::Griewank { incremental } => {
            let mut g = if incremental {
                Griewank::incremental(dim)
            } else {
                Griewank::new(dim)
            }
            .map_err(to_py)?;
            run_f64(&mut g).map_err(to_py)
        }
        Target::Callable(func) => {
            let mut f = PyCallable {
                func,
                dim,
                counter: EvalCounter::default(),
                raised: None,
            };
            let out = run_f64(&mut f);
            if let Some(e) = f.raised.take() {
                return Err(e);
            }
            out.map_err(to_py)
        }
    }
}

/// Coordinate line-sampling optimizer over the box `[lo, hi]^dim`.
///
/// `objective` is `"griewank"` (the default) or a callable taking a list of
/// floats. `incremental` selects O(1) per-coordinate Griewank evaluation.
/// `start` is `"center"`, `"random"` (seeded by `seed`) or a point.
#[pyfunction]
#[pyo3(signature = (
    dim,
    objective = None,
    lo = -600.0,
    hi = 600.0,
    budget = None,
    incremental = true,
    samples_per_coordinate = 10,
    shrink_factor = 0.5,
    start = None,
    seed = 0,
    precision = "double",
))]
#[allow(clippy::too_many_arguments)]
fn abo_optimize(
    py: Python<'_>,
    dim: usize,
    objective: Option<Bound<'_, PyAny>>,
    lo: f64,
    hi: f64,
    budget: Option<u64>,
    incremental: bool,
    samples_per_coordinate: usize,
    shrink_factor: f64,
    start: Option<Bound<'_, PyAny>>,
    seed: u64,
    precision: &str,
) -> PyResult<PyOptimizeResult> {
    let config = AboConfig {
        samples_per_coordinate,
        shrink_factor,
        fe_budget: budget.unwrap_or(250 * dim as u64),
        initial_point: initial_point(start, seed)?,
        ..AboConfig::default()
    };
    let target = target(objective, incremental)?;
    match (parse_precision(precision)?, target) {
        (Precision::Single, Target::Griewank { incremental }) => {
            let bounds = BoxBounds::uniform(lo as f32, hi as f32).map_err(to_py)?;
            let mut g = if incremental {
                Griewank::incremental(dim)
            } else {
                Griewank::new(dim)
            }
            .map_err(to_py)?;
            let r = py
                .detach(|| abo_run::<f32, _>(&mut g, &bounds, &config))
                .map_err(to_py)?;
            Ok(wrap_result(r))
        }
        (Precision::Single, Target::Callable(_)) => Err(PyValueError::new_err(
            "callable objectives run in double precision",
        )),
        (Precision::Double, target) => {
            let bounds = BoxBounds::uniform(lo, hi).map_err(to_py)?;
            let r = run_with(target, dim, |f| abo_run(f, &bounds, &config))?;
            Ok(wrap_result(r))
        }
    }
}

/// Multi-start Nelder-Mead over the box `[lo, hi]^dim`.
///
/// Raises `MemoryError` when the simplex would exceed `memory_ceiling` bytes.
#[pyfunction]
#[pyo3(signature = (
    dim,
    objective = None,
    lo = -600.0,
    hi = 600.0,
    restarts = 4,
    seed = 0,
    max_iterations = 100_000,
    max_evaluations = None,
    memory_ceiling = 2_000_000_000,
))]
#[allow(clippy::too_many_arguments)]
fn nm_optimize(
    dim: usize,
    objective: Option<Bound<'_, PyAny>>,
    lo: f64,
    hi: f64,
    restarts: u32,
    seed: u64,
    max_iterations: u64,
    max_evaluations: Option<u64>,
    memory_ceiling: u64,
) -> PyResult<PyOptimizeResult> {
    let config = NmConfig {
        restarts,
        seed,
        max_iterations,
        max_evaluations,
        memory_ceiling_bytes: memory_ceiling,
        ..NmConfig::default()
    };
    let bounds = BoxBounds::uniform(lo, hi).map_err(to_py)?;
    let r = run_with(target(objective, false)?, dim, |f| nm_run(f, &bounds, &config))?;
    Ok(wrap_result(r))
}

fn record_dict<'py>(py: Python<'py>, r: &RunRecord) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("algo", r.algo.as_str())?;
    d.set_item("dim", r.dim)?;
    d.set_item("precision", r.precision.as_str())?;
    d.set_item("fe", r.fe)?;
    d.set_item("wall_s", r.wall_s)?;
    d.set_item("best_f", r.best_f)?;
    d.set_item("theory_kb", r.theory_kb)?;
    d.set_item("peak_kb", r.peak_kb)?;
    d.set_item("termination", r.termination.as_str())?;
    d.set_item("seed", r.seed)?;
    d.set_item("timestamp", r.timestamp)?;
    Ok(d)
}

/// Runs a benchmark suite described by command-line style arguments, such
/// as `["--algo", "abo-opt", "--dims", "100,1000"]`, and returns one dict
/// per record. Output, plot and reference flags are ignored here.
#[pyfunction]
fn run_suite<'py>(py: Python<'py>, args: Vec<String>) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let argv = std::iter::once("sweepopt-bench".to_owned()).chain(args);
    let mut spec = bench::parse_args(argv).map_err(bench_to_py)?;
    spec.output_path = None;
    spec.plot_path = None;
    let report = py
        .detach(|| bench::run_suite(&spec))
        .map_err(bench_to_py)?;
    report.records.iter().map(|r| record_dict(py, r)).collect()
}

/// Whether per-scope byte accounting is active in this process.
#[pyfunction]
fn memory_tracking_enabled() -> bool {
    metrics::alloc::hooks_installed() && metrics::alloc::tracking_enabled()
}

#[pymodule]
fn pysweepopt(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(griewank, m)?)?;
    m.add_function(wrap_pyfunction!(sphere_shifted, m)?)?;
    m.add_function(wrap_pyfunction!(theoretical_memory, m)?)?;
    m.add_function(wrap_pyfunction!(fit_loglog, m)?)?;
    m.add_function(wrap_pyfunction!(abo_optimize, m)?)?;
    m.add_function(wrap_pyfunction!(nm_optimize, m)?)?;
    m.add_function(wrap_pyfunction!(run_suite, m)?)?;
    m.add_function(wrap_pyfunction!(memory_tracking_enabled, m)?)?;
    m.add_class::<PyGriewankState>()?;
    m.add_class::<PyOptimizeResult>()?;
    Ok(())
}
