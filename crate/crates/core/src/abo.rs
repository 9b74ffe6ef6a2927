//! Cyclic coordinate line sampling with shrinking brackets.
//!
//! Each sweep visits the coordinates in order. Coordinate `i` is probed at
//! `k` evenly spaced values covering `[x_i - r_i, x_i + r_i]` intersected
//! with its bounds, endpoints included. The best probe is committed
//! immediately if it beats the incumbent objective, otherwise `x_i` is
//! restored. After a full sweep every bracket radius is multiplied by the
//! shrink factor.
//!
//! The bracket radius is stored as one scale factor and expanded on the fly
//! as `r_i = scale * (hi_i - lo_i) / 2`, so the optimizer owns no
//! per-dimension array other than the decision vector. Nothing is allocated
//! once [`AboState::init`] returns.
//!
//! With an incremental objective the probes of one coordinate are chained:
//! each probe moves `x_i` from the previous probe, and one extra update
//! commits or restores when the final probe is not the chosen value. A
//! coordinate therefore costs `k` or `k + 1` incremental evaluations.
//! Full objectives cost exactly `k` evaluations per coordinate.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::metrics::Stopwatch;
use crate::objective::{BoxBounds, DecisionVector, Objective};
use crate::{BestPoint, Error, OptimizationResult, Real, Result, Termination};

#[derive(Debug, Clone, PartialEq)]
pub enum InitialPoint {
    /// Midpoint of every coordinate's bounds.
    DomainCenter,
    Given(Vec<f64>),
    /// Uniform draw inside the bounds from a seeded ChaCha8 stream.
    Random { seed: u64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct AboConfig {
    /// Probes per coordinate per sweep (`k >= 2`).
    pub samples_per_coordinate: usize,
    /// Bracket multiplier applied after every sweep, in `(0, 1)`.
    pub shrink_factor: f64,
    /// Limit on full plus incremental evaluations.
    pub fe_budget: u64,
    /// Stop once the best value improves by less than this, relative to
    /// `max(1, |best|)`, over the stall window.
    pub tolerance: f64,
    /// Completed sweeps the tolerance is measured across. `None` picks the
    /// number of sweeps that shrink the bracket by one grid spacing,
    /// `ceil(ln(k - 1) / ln(1 / shrink)) + 1`, so a coarse grid missing a
    /// nearby improvement is not mistaken for convergence.
    pub stall_sweeps: Option<usize>,
    pub initial_point: InitialPoint,
    pub max_sweeps: u64,
    /// Above this dimension the result carries only a digest of the point.
    pub digest_threshold: usize,
}

impl Default for AboConfig {
    fn default() -> Self {
        Self {
            samples_per_coordinate: 10,
            shrink_factor: 0.5,
            fe_budget: 500_000,
            tolerance: 1e-15,
            stall_sweeps: None,
            initial_point: InitialPoint::DomainCenter,
            max_sweeps: 1_000_000,
            digest_threshold: 10_000_000,
        }
    }
}

impl AboConfig {
    pub fn with_budget(fe_budget: u64) -> Self {
        Self {
            fe_budget,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.samples_per_coordinate < 2 {
            return Err(Error::InvalidConfig(format!(
                "samples_per_coordinate must be >= 2, got {}",
                self.samples_per_coordinate
            )));
        }
        if !(self.shrink_factor > 0.0 && self.shrink_factor < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "shrink_factor must lie in (0, 1), got {}",
                self.shrink_factor
            )));
        }
        if self.tolerance.is_nan() || self.tolerance <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "tolerance must be positive, got {}",
                self.tolerance
            )));
        }
        if let Some(w) = self.stall_sweeps {
            if w == 0 || w > MAX_STALL_SWEEPS {
                return Err(Error::InvalidConfig(format!(
                    "stall_sweeps must lie in [1, {MAX_STALL_SWEEPS}], got {w}"
                )));
            }
        }
        if self.fe_budget == 0 {
            return Err(Error::InvalidConfig("fe_budget must be positive".into()));
        }
        if self.max_sweeps == 0 {
            return Err(Error::InvalidConfig("max_sweeps must be positive".into()));
        }
        Ok(())
    }

    /// Effective stall window in sweeps.
    pub fn stall_window(&self) -> usize {
        self.stall_sweeps.unwrap_or_else(|| {
            let k = self.samples_per_coordinate.max(2) as f64;
            let per_sweep = (1.0 / self.shrink_factor).ln();
            let w = ((k - 1.0).ln() / per_sweep).ceil();
            (w.max(0.0) as usize + 1).clamp(1, MAX_STALL_SWEEPS)
        })
    }
}

pub const MAX_STALL_SWEEPS: usize = 64;
const HISTORY_LEN: usize = MAX_STALL_SWEEPS + 1;

/// Outcome of [`abo_termination_check`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Progress {
    Continue,
    ToleranceMet,
    BudgetExhausted,
    SweepLimit,
}

impl Progress {
    pub fn termination(self) -> Option<Termination> {
        match self {
            Progress::Continue => None,
            Progress::ToleranceMet => Some(Termination::ToleranceMet),
            Progress::BudgetExhausted => Some(Termination::BudgetExhausted),
            Progress::SweepLimit => Some(Termination::SweepLimit),
        }
    }
}

/// In-place optimizer state.
#[derive(Debug, Clone)]
pub struct AboState<T> {
    x: DecisionVector<T>,
    radius_scale: f64,
    best_f: f64,
    fe_used: u64,
    sweep_index: u64,
    last_improvement: Option<f64>,
    incremental: bool,
    /// Best value after each of the most recent sweeps, indexed by
    /// `sweep_index % HISTORY_LEN`; slot 0 starts with the initial value.
    history: [f64; HISTORY_LEN],
}

impl<T: Real> AboState<T> {
    /// Builds the starting point and evaluates it once.
    pub fn init<O: Objective<T> + ?Sized>(
        objective: &mut O,
        bounds: &BoxBounds<T>,
        config: &AboConfig,
    ) -> Result<Self> {
        config.validate()?;
        let dim = objective.dim();
        if dim == 0 {
            return Err(Error::InvalidInput("objective dimension must be >= 1".into()));
        }
        bounds.check_dim(dim)?;

        let mut x = DecisionVector::filled(dim, T::from_f64(0.0))?;
        let xs = x.as_mut_slice();
        match &config.initial_point {
            InitialPoint::DomainCenter => {
                for (i, v) in xs.iter_mut().enumerate() {
                    let (lo, hi) = bounds.get(i);
                    *v = bounds.clamp(i, T::from_f64(0.5 * (lo.to_f64() + hi.to_f64())));
                }
            }
            InitialPoint::Given(start) => {
                if start.len() != dim {
                    return Err(Error::InvalidInput(format!(
                        "initial point has {} coordinates, objective expects {dim}",
                        start.len()
                    )));
                }
                for (i, (v, &s)) in xs.iter_mut().zip(start).enumerate() {
                    if !s.is_finite() {
                        return Err(Error::InvalidInput(format!(
                            "initial coordinate {i} is not finite"
                        )));
                    }
                    *v = bounds.clamp(i, T::from_f64(s));
                }
            }
            InitialPoint::Random { seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                for (i, v) in xs.iter_mut().enumerate() {
                    let (lo, hi) = bounds.get(i);
                    let u: f64 = rng.random();
                    let s = lo.to_f64() + u * (hi.to_f64() - lo.to_f64());
                    *v = bounds.clamp(i, T::from_f64(s));
                }
            }
        }

        let incremental = objective.supports_incremental();
        let best_f = if incremental {
            objective.begin_incremental(x.as_slice())?
        } else {
            objective.evaluate(x.as_slice())?
        };
        Ok(Self {
            x,
            radius_scale: 1.0,
            best_f,
            fe_used: 1,
            sweep_index: 0,
            last_improvement: None,
            incremental,
            history: [best_f; HISTORY_LEN],
        })
    }

    pub fn x(&self) -> &DecisionVector<T> {
        &self.x
    }

    pub fn best_f(&self) -> f64 {
        self.best_f
    }

    pub fn fe_used(&self) -> u64 {
        self.fe_used
    }

    pub fn sweep_index(&self) -> u64 {
        self.sweep_index
    }

    pub fn is_incremental(&self) -> bool {
        self.incremental
    }

    /// Best value recorded after completed sweep `sweep`, if still held.
    fn best_after(&self, sweep: u64) -> Option<f64> {
        (sweep <= self.sweep_index && self.sweep_index - sweep < HISTORY_LEN as u64)
            .then(|| self.history[(sweep % HISTORY_LEN as u64) as usize])
    }

    /// Relative improvement achieved by the last completed sweep.
    pub fn last_improvement(&self) -> Option<f64> {
        self.last_improvement
    }

    /// Bracket radius as a multiple of each coordinate's half-width.
    pub fn radius_scale(&self) -> f64 {
        self.radius_scale
    }

    pub fn set_radius_scale(&mut self, scale: f64) -> Result<()> {
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "bracket scale must be positive and finite, got {scale}"
            )));
        }
        self.radius_scale = scale;
        Ok(())
    }

    /// Current bracket radius of coordinate `i`, in coordinate units.
    pub fn bracket_radius(&self, bounds: &BoxBounds<T>, i: usize) -> f64 {
        let (lo, hi) = bounds.get(i);
        self.radius_scale * 0.5 * (hi.to_f64() - lo.to_f64())
    }

    pub fn into_result(
        self,
        termination: Termination,
        wall_seconds: f64,
        digest_threshold: usize,
    ) -> OptimizationResult<T> {
        OptimizationResult {
            best_f: self.best_f,
            best_x: BestPoint::from_vector(self.x, digest_threshold),
            fe_used: self.fe_used,
            wall_seconds,
            termination,
            iterations: self.sweep_index,
        }
    }
}

/// Probes coordinate `i` and commits the best probe if it improves.
fn sample_coordinate<T: Real, O: Objective<T> + ?Sized>(
    state: &mut AboState<T>,
    objective: &mut O,
    bounds: &BoxBounds<T>,
    k: usize,
    i: usize,
) -> Result<()> {
    let (lo, hi) = bounds.get(i);
    let r = state.bracket_radius(bounds, i);
    let incumbent = state.x.as_slice()[i];
    let centre = incumbent.to_f64();
    let a = (centre - r).max(lo.to_f64());
    let b = (centre + r).min(hi.to_f64());
    let step = (b - a) / (k - 1) as f64;

    let xs = state.x.as_mut_slice();
    let mut best_val = state.best_f;
    let mut chosen: Option<T> = None;
    let mut last = incumbent;
    for j in 0..k {
        let c = if j + 1 == k { b } else { a + step * j as f64 };
        let c = bounds.clamp(i, T::from_f64(c));
        let f = if state.incremental {
            objective.update_coordinate(xs, i, c)?
        } else {
            xs[i] = c;
            objective.evaluate(xs)?
        };
        state.fe_used += 1;
        last = c;
        if f < best_val {
            best_val = f;
            chosen = Some(c);
        }
    }

    let target = chosen.unwrap_or(incumbent);
    if state.incremental {
        if last != target {
            objective.update_coordinate(xs, i, target)?;
            state.fe_used += 1;
        }
    } else {
        xs[i] = target;
    }
    state.best_f = best_val;
    Ok(())
}

/// One pass over all coordinates. Returns the best value afterwards.
///
/// Stops early, leaving the sweep incomplete, when the evaluation budget runs
/// out; the bracket only shrinks after a complete sweep.
pub fn abo_sweep<T: Real, O: Objective<T> + ?Sized>(
    state: &mut AboState<T>,
    objective: &mut O,
    bounds: &BoxBounds<T>,
    config: &AboConfig,
) -> Result<f64> {
    let dim = state.x.dim();
    let k = config.samples_per_coordinate;
    let start_best = state.best_f;
    for i in 0..dim {
        if state.fe_used >= config.fe_budget {
            return Ok(state.best_f);
        }
        sample_coordinate(state, objective, bounds, k, i)?;
    }
    state.last_improvement = Some((start_best - state.best_f) / start_best.abs().max(1.0));
    state.radius_scale *= config.shrink_factor;
    state.sweep_index += 1;
    state.history[(state.sweep_index % HISTORY_LEN as u64) as usize] = state.best_f;
    Ok(state.best_f)
}

pub fn abo_termination_check<T: Real>(state: &AboState<T>, config: &AboConfig) -> Progress {
    if state.fe_used >= config.fe_budget {
        return Progress::BudgetExhausted;
    }
    let window = config.stall_window() as u64;
    if state.sweep_index >= window {
        if let Some(old) = state.best_after(state.sweep_index - window) {
            let imp = (old - state.best_f) / old.abs().max(1.0);
            if imp < config.tolerance {
                return Progress::ToleranceMet;
            }
        }
    }
    if state.sweep_index >= config.max_sweeps {
        return Progress::SweepLimit;
    }
    Progress::Continue
}

/// Runs sweeps until the budget, the tolerance or the sweep limit stops them.
pub fn abo_optimize<T: Real, O: Objective<T> + ?Sized>(
    objective: &mut O,
    bounds: &BoxBounds<T>,
    config: &AboConfig,
) -> Result<OptimizationResult<T>> {
    let clock = Stopwatch::start();
    let mut state = AboState::init(objective, bounds, config)?;
    let termination = loop {
        if let Some(t) = abo_termination_check(&state, config).termination() {
            break t;
        }
        abo_sweep(&mut state, objective, bounds, config)?;
    };
    Ok(state.into_result(termination, clock.elapsed_seconds(), config.digest_threshold))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objective::{FnObjective, Griewank, ShiftedSphere};

    #[test]
    fn config_validation() {
        let bad = [
            AboConfig {
                samples_per_coordinate: 1,
                ..Default::default()
            },
            AboConfig {
                shrink_factor: 1.0,
                ..Default::default()
            },
            AboConfig {
                shrink_factor: 0.0,
                ..Default::default()
            },
            AboConfig {
                tolerance: 0.0,
                ..Default::default()
            },
            AboConfig::with_budget(0),
        ];
        for c in bad {
            assert!(matches!(c.validate(), Err(Error::InvalidConfig(_))), "{c:?}");
        }
        AboConfig::default().validate().unwrap();
    }

    #[test]
    fn hand_enumerable_sweep() {
        let mut f = FnObjective::new(1, |x: &[f64]| x[0] * x[0]);
        let bounds = BoxBounds::uniform(-1.0, 1.0).unwrap();
        let config = AboConfig {
            samples_per_coordinate: 5,
            initial_point: InitialPoint::Given(vec![1.0]),
            ..AboConfig::with_budget(100)
        };
        let mut state = AboState::init(&mut f, &bounds, &config).unwrap();
        state.set_radius_scale(2.0).unwrap();
        assert_eq!(state.bracket_radius(&bounds, 0), 2.0);
        let best = abo_sweep(&mut state, &mut f, &bounds, &config).unwrap();
        assert_eq!(best, 0.0);
        assert_eq!(state.x().as_slice(), &[0.0]);
        assert_eq!(state.fe_used(), 1 + 5);
        assert_eq!(state.radius_scale(), 1.0);
    }

    #[test]
    fn incumbent_kept_on_tie() {
        // Constant objective: nothing may move.
        let mut f = FnObjective::new(2, |_: &[f64]| 1.0);
        let bounds = BoxBounds::uniform(-1.0, 1.0).unwrap();
        let config = AboConfig {
            initial_point: InitialPoint::Given(vec![0.3, -0.2]),
            ..AboConfig::with_budget(1000)
        };
        let r = abo_optimize(&mut f, &bounds, &config).unwrap();
        assert_eq!(r.best_x.as_full().unwrap().as_slice(), &[0.3, -0.2]);
        assert_eq!(r.termination, Termination::ToleranceMet);
        let window = config.stall_window() as u64;
        assert_eq!(window, 5);
        assert_eq!(r.iterations, window);
        assert_eq!(r.fe_used, 1 + window * 2 * 10);
    }

    #[test]
    fn lowest_grid_index_wins_ties() {
        // |x| has equal minima at both ends of a symmetric probe grid around 0.5.
        let mut f = FnObjective::new(1, |x: &[f64]| -(x[0] - 0.5).abs());
        let bounds = BoxBounds::uniform(0.0, 1.0).unwrap();
        let config = AboConfig {
            samples_per_coordinate: 3,
            ..AboConfig::with_budget(4)
        };
        let mut state = AboState::init(&mut f, &bounds, &config).unwrap();
        abo_sweep(&mut state, &mut f, &bounds, &config).unwrap();
        assert_eq!(state.x().as_slice(), &[0.0]);
    }

    #[test]
    fn sphere_converges_to_center() {
        let mut f = ShiftedSphere::new(5, 3.0).unwrap();
        let bounds = BoxBounds::uniform(-600.0, 600.0).unwrap();
        let r = abo_optimize(&mut f, &bounds, &AboConfig::with_budget(5000)).unwrap();
        assert!(r.best_f <= 1e-8, "{}", r.best_f);
        for &v in r.best_x.as_full().unwrap().as_slice() {
            assert!((v - 3.0f64).abs() <= 1e-4, "{v}");
        }
    }

    #[test]
    fn partial_sweep_reports_budget() {
        let mut f = Griewank::new(50).unwrap();
        let bounds = BoxBounds::uniform(-600.0f64, 600.0).unwrap();
        let config = AboConfig::with_budget(25);
        let r = abo_optimize(&mut f, &bounds, &config).unwrap();
        assert_eq!(r.termination, Termination::BudgetExhausted);
        assert_eq!(r.iterations, 0);
        assert!(r.fe_used <= config.fe_budget + config.samples_per_coordinate as u64);
        assert_eq!(r.fe_used, Objective::<f64>::counter(&f).total());
    }

    #[test]
    fn termination_checks() {
        let mut f = FnObjective::new(1, |x: &[f64]| x[0] * x[0]);
        let bounds = BoxBounds::uniform(-1.0, 1.0).unwrap();
        let config = AboConfig {
            tolerance: 1e-12,
            stall_sweeps: Some(1),
            initial_point: InitialPoint::Given(vec![0.9]),
            ..AboConfig::with_budget(1000)
        };
        let mut state = AboState::init(&mut f, &bounds, &config).unwrap();
        assert_eq!(abo_termination_check(&state, &config), Progress::Continue);
        abo_sweep(&mut state, &mut f, &bounds, &config).unwrap();
        assert_eq!(abo_termination_check(&state, &config), Progress::Continue);

        let mut flat = FnObjective::new(1, |_: &[f64]| 2.0);
        let mut s2 = AboState::init(&mut flat, &bounds, &config).unwrap();
        abo_sweep(&mut s2, &mut flat, &bounds, &config).unwrap();
        assert_eq!(abo_termination_check(&s2, &config), Progress::ToleranceMet);

        let tight = AboConfig {
            fe_budget: state.fe_used(),
            ..config.clone()
        };
        assert_eq!(abo_termination_check(&state, &tight), Progress::BudgetExhausted);

        let capped = AboConfig {
            max_sweeps: 1,
            ..config
        };
        assert_eq!(abo_termination_check(&state, &capped), Progress::SweepLimit);
    }

    #[test]
    fn rejects_mismatched_bounds_and_start() {
        let mut f = Griewank::new(3).unwrap();
        let bounds = BoxBounds::per_dimension(vec![-1.0f64; 2], vec![1.0; 2]).unwrap();
        assert!(matches!(
            abo_optimize(&mut f, &bounds, &AboConfig::default()),
            Err(Error::InvalidBounds(_))
        ));
        let bounds = BoxBounds::uniform(-1.0f64, 1.0).unwrap();
        let config = AboConfig {
            initial_point: InitialPoint::Given(vec![0.0]),
            ..Default::default()
        };
        assert!(abo_optimize(&mut f, &bounds, &config).is_err());
    }

    #[test]
    fn digest_above_threshold() {
        let mut f = ShiftedSphere::new(40, 1.0).unwrap();
        let bounds = BoxBounds::uniform(-2.0f32, 2.0).unwrap();
        let config = AboConfig {
            digest_threshold: 20,
            ..AboConfig::with_budget(2000)
        };
        let r = abo_optimize(&mut f, &bounds, &config).unwrap();
        match r.best_x {
            BestPoint::Digest { dim, head, tail } => {
                assert_eq!(dim, 40);
                assert_eq!(head.len(), 8);
                assert_eq!(tail.len(), 8);
            }
            BestPoint::Full(_) => panic!("expected digest"),
        }
    }
}
