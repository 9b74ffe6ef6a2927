use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sweepopt::abo::{abo_optimize, abo_sweep, abo_termination_check, AboConfig, AboState, InitialPoint, Progress};
use sweepopt::metrics::track_peak;
use sweepopt::nelder_mead::{nm_optimize, nm_step, NmConfig, Simplex};
use sweepopt::objective::{griewank_value, BoxBounds, EvalCounter, Griewank, Objective};
use sweepopt::{Real, Result, Termination};

/// Griewank that records whether any evaluated point left the box.
struct BoundChecker {
    inner: Griewank,
    lo: Vec<f64>,
    hi: Vec<f64>,
    violations: u64,
}

impl BoundChecker {
    fn new(inner: Griewank, lo: Vec<f64>, hi: Vec<f64>) -> Self {
        Self { inner, lo, hi, violations: 0 }
    }

    fn check<T: Real>(&mut self, x: &[T]) {
        for (i, v) in x.iter().enumerate() {
            let v = v.to_f64();
            if v < self.lo[i] || v > self.hi[i] {
                self.violations += 1;
            }
        }
    }
}

impl Objective<f64> for BoundChecker {
    fn dim(&self) -> usize {
        Objective::<f64>::dim(&self.inner)
    }

    fn evaluate(&mut self, x: &[f64]) -> Result<f64> {
        self.check(x);
        self.inner.evaluate(x)
    }

    fn counter(&self) -> EvalCounter {
        Objective::<f64>::counter(&self.inner)
    }

    fn supports_incremental(&self) -> bool {
        Objective::<f64>::supports_incremental(&self.inner)
    }

    fn begin_incremental(&mut self, x: &[f64]) -> Result<f64> {
        self.check(x);
        self.inner.begin_incremental(x)
    }

    fn update_coordinate(&mut self, x: &mut [f64], i: usize, value: f64) -> Result<f64> {
        let v = self.inner.update_coordinate(x, i, value)?;
        self.check(x);
        Ok(v)
    }
}

fn boxes(max_dim: usize) -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    prop::collection::vec((-600.0f64..550.0, 1.0f64..50.0), 1..max_dim)
        .prop_map(|v| v.into_iter().map(|(lo, w)| (lo, lo + w)).unzip())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn abo_best_is_monotone_and_exact(
        (lo, hi) in boxes(12),
        seed in any::<u64>(),
        incremental in any::<bool>(),
        k in 2usize..12,
    ) {
        let d = lo.len();
        let bounds = BoxBounds::per_dimension(lo.clone(), hi.clone()).unwrap();
        let g = if incremental { Griewank::incremental(d) } else { Griewank::new(d) }.unwrap();
        let mut f = BoundChecker::new(g, lo, hi);
        let config = AboConfig {
            samples_per_coordinate: k,
            fe_budget: 200 * d as u64,
            initial_point: InitialPoint::Random { seed },
            ..AboConfig::default()
        };
        let mut state = AboState::init(&mut f, &bounds, &config).unwrap();
        let mut prev = state.best_f();
        while abo_termination_check(&state, &config) == Progress::Continue {
            let now = abo_sweep(&mut state, &mut f, &bounds, &config).unwrap();
            prop_assert!(now <= prev);
            prev = now;
            let truth = griewank_value(state.x().as_slice()).unwrap();
            prop_assert!((now - truth).abs() <= 1e-9 * truth.max(1.0));
            prop_assert_eq!(state.fe_used(), Objective::<f64>::counter(&f).total());
        }
        prop_assert!(state.fe_used() <= config.fe_budget + k as u64 + 1);
        prop_assert_eq!(f.violations, 0);
    }

    #[test]
    fn nm_best_vertex_is_monotone((lo, hi) in boxes(8), seed in any::<u64>()) {
        let d = lo.len();
        let bounds = BoxBounds::per_dimension(lo.clone(), hi.clone()).unwrap();
        let mut f = BoundChecker::new(Griewank::new(d).unwrap(), lo, hi);
        let config = NmConfig::default();
        let mut simplex = Simplex::<f64>::with_ceiling(d, u64::MAX).unwrap();
        simplex.randomize(&mut ChaCha8Rng::seed_from_u64(seed), &bounds, &mut f).unwrap();
        let mut prev = simplex.best_value();
        for _ in 0..200 {
            nm_step(&mut simplex, &mut f, &bounds, &config).unwrap();
            prop_assert!(simplex.best_value() <= prev);
            prev = simplex.best_value();
            prop_assert!(bounds.contains(simplex.best_vertex()));
        }
        prop_assert_eq!(simplex.evaluations(), Objective::<f64>::counter(&f).total());
        prop_assert_eq!(f.violations, 0);
    }
}

/// Plain re-statement of the full-evaluation sweep for a fixed run.
fn replay(start: [f64; 2], k: usize, budget: u64) -> (f64, [f64; 2], u64) {
    let g = |x: &[f64; 2]| {
        x[0] * x[0] / 4000.0 + x[1] * x[1] / 4000.0 - x[0].cos() * (x[1] / 2f64.sqrt()).cos() + 1.0
    };
    let (lo, hi) = (-600.0f64, 600.0f64);
    let mut x = start;
    let mut best = g(&x);
    let mut fe = 1u64;
    let mut scale = 1.0f64;
    'run: loop {
        for i in 0..2 {
            if fe >= budget {
                break 'run;
            }
            let r = scale * (hi - lo) / 2.0;
            let a = (x[i] - r).max(lo);
            let b = (x[i] + r).min(hi);
            let mut keep = x[i];
            for j in 0..k {
                let c = if j + 1 == k { b } else { a + (b - a) / (k - 1) as f64 * j as f64 };
                let mut y = x;
                y[i] = c;
                let v = g(&y);
                fe += 1;
                if v < best {
                    best = v;
                    keep = c;
                }
            }
            x[i] = keep;
        }
        scale *= 0.5;
        if fe >= budget {
            break;
        }
    }
    (best, x, fe)
}

#[test]
fn abo_matches_brute_force_replay() {
    for start in [[123.4, -321.0], [-599.0, 17.25], [5.0, 5.0]] {
        let config = AboConfig {
            fe_budget: 1000,
            tolerance: f64::MIN_POSITIVE,
            stall_sweeps: Some(64),
            initial_point: InitialPoint::Given(start.to_vec()),
            ..AboConfig::default()
        };
        let mut f = Griewank::new(2).unwrap();
        let bounds = BoxBounds::uniform(-600.0, 600.0).unwrap();
        let r = abo_optimize(&mut f, &bounds, &config).unwrap();
        let (best, x, fe) = replay(start, 10, 1000);
        assert_eq!(r.fe_used, fe);
        assert_eq!(r.best_x.as_full().unwrap().as_slice(), &x[..]);
        assert!((r.best_f - best).abs() <= 1e-15, "{} vs {best}", r.best_f);
        assert_eq!(r.termination, Termination::BudgetExhausted);
    }
}

#[test]
fn abo_sweeps_do_not_allocate() {
    for incremental in [false, true] {
        let d = 2_000;
        let mut f = if incremental { Griewank::incremental(d) } else { Griewank::new(d) }.unwrap();
        let bounds = BoxBounds::per_dimension(vec![-600.0; d], vec![600.0; d]).unwrap();
        let config = AboConfig {
            initial_point: InitialPoint::Random { seed: 3 },
            fe_budget: 40 * d as u64,
            ..AboConfig::default()
        };
        let mut state = AboState::init(&mut f, &bounds, &config).unwrap();
        let (_, mem) = track_peak("sweeps", || {
            while abo_termination_check(&state, &config) == Progress::Continue {
                abo_sweep(&mut state, &mut f, &bounds, &config).unwrap();
            }
        })
        .unwrap();
        assert_eq!(mem.acquired_bytes, 0, "incremental = {incremental}");
    }
}

#[test]
fn abo_single_precision_runs() {
    let mut f = Griewank::incremental(100).unwrap();
    let bounds = BoxBounds::uniform(-600.0f32, 600.0f32).unwrap();
    let config = AboConfig {
        initial_point: InitialPoint::Random { seed: 1 },
        fe_budget: 25_000,
        ..AboConfig::default()
    };
    let r = abo_optimize(&mut f, &bounds, &config).unwrap();
    assert!(r.best_f < 1e-3, "{}", r.best_f);
    assert_eq!(r.fe_used, Objective::<f32>::counter(&f).total());
}

#[test]
fn nm_griewank_2d_against_grid() {
    let bounds = BoxBounds::uniform(-600.0, 600.0).unwrap();
    let g = |x: f64, y: f64| griewank_value(&[x, y]).unwrap();
    // Brute-force grid over the box at unit spacing.
    let grid_min = (-600..=600)
        .flat_map(|i| (-600..=600).map(move |j| (i as f64, j as f64)))
        .map(|(x, y)| g(x, y))
        .fold(f64::INFINITY, f64::min);
    assert_eq!(grid_min, 0.0);

    let config = NmConfig {
        restarts: 9,
        seed: 11,
        ..NmConfig::default()
    };
    let mut f = Griewank::new(2).unwrap();
    let r = nm_optimize(&mut f, &bounds, &config).unwrap();
    assert!(r.best_f <= grid_min + 0.05, "{}", r.best_f);

    // The answer is a local minimum on a fine grid around it.
    let x = r.best_x.as_full().unwrap().as_slice().to_vec();
    for i in -50..=50 {
        for j in -50..=50 {
            let v = g(x[0] + i as f64 * 0.02, x[1] + j as f64 * 0.02);
            assert!(v >= r.best_f - 1e-9, "({i},{j}) {v} < {}", r.best_f);
        }
    }
}

#[test]
fn nm_is_deterministic() {
    let bounds = BoxBounds::uniform(-600.0, 600.0).unwrap();
    let config = NmConfig {
        seed: 5,
        max_evaluations: Some(20_000),
        ..NmConfig::default()
    };
    let run = || {
        let mut f = Griewank::new(10).unwrap();
        let r = nm_optimize(&mut f, &bounds, &config).unwrap();
        (r.best_f, r.fe_used, r.best_x.as_full().unwrap().as_slice().to_vec())
    };
    assert_eq!(run(), run());
}

#[test]
fn nm_simplex_memory_is_quadratic() {
    for d in [100usize, 400] {
        let (s, mem) = track_peak("simplex", || Simplex::<f64>::with_ceiling(d, u64::MAX).unwrap()).unwrap();
        let want = 8 * ((d + 1) * d) as u64;
        assert_eq!(s.coordinate_slots(), (d + 1) * d);
        assert!(mem.measured_peak_bytes >= want);
        assert!(mem.measured_peak_bytes <= want + 64 * d as u64 + 4096);
    }
}
