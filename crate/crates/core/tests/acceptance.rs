//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sweepopt::abo::{abo_optimize, abo_sweep, abo_termination_check, AboConfig, AboState, InitialPoint, Progress};
use sweepopt::bench::{
    parse_args, read_csv, run_suite, write_csv, Algo, BenchError, Quantity, ReferenceTable,
    RunRecord, RunSpec, Source, StartMode, ToleranceClass, EXTREME_DIMS,
};
use sweepopt::metrics::{centi_kb, fit_loglog, median, theoretical_memory, track_peak};
use sweepopt::nelder_mead::{nm_step, NmConfig, Simplex};
use sweepopt::objective::{griewank_value, BoxBounds, Griewank, GriewankState, Objective};
use sweepopt::{Precision, Termination};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($arg:tt)+) => {
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($arg)+));
        }
    };
}

fn theory_exact() -> Outcome {
    let table = ReferenceTable::default();
    let mut n = 0;
    for cell in table.cells().filter(|c| c.quantity == Quantity::TheoryKb) {
        let p = if cell.table == "Table I" { Precision::Single } else { Precision::Double };
        let got = centi_kb(theoretical_memory(cell.dim as usize, p).map_err(|e| e.to_string())?);
        let want = (cell.value * 100.0).round() as u64;
        ensure!(got == want, "{} d={} {p}: {got} vs {want} hundredths of a KB", cell.table, cell.dim);
        n += 1;
    }
    ensure!(n == 20, "expected 20 theory cells, found {n}");
    ensure!(theoretical_memory(100_000, Precision::Single) == Ok(400_000), "400 KB at 1e5 single");
    ensure!(
        theoretical_memory(1_000_000_000, Precision::Double) == Ok(8_000_000_000),
        "8,000,000 KB at 1e9 double"
    );
    Ok(format!("{n} cells exact"))
}

fn abo_memory_linear() -> Outcome {
    let mut points = Vec::new();
    let mut detail = Vec::new();
    for d in [10_000usize, 100_000, 1_000_000] {
        let (r, mem) = track_peak("abo", || {
            let lo: Vec<f64> = (0..d).map(|i| -600.0 + (i % 7) as f64).collect();
            let hi: Vec<f64> = (0..d).map(|i| 600.0 - (i % 5) as f64).collect();
            let bounds = BoxBounds::per_dimension(lo, hi).unwrap();
            let mut f = Griewank::new(d).unwrap();
            let config = AboConfig {
                fe_budget: 21,
                initial_point: InitialPoint::Random { seed: 1 },
                ..AboConfig::default()
            };
            abo_optimize(&mut f, &bounds, &config).unwrap()
        })
        .map_err(|e| e.to_string())?;
        let peak = mem.measured_peak_bytes as f64;
        let (lo, hi) = (8.0 * d as f64, 24.0 * d as f64 + 16.0 * 1024.0 * 1024.0);
        ensure!(peak >= lo && peak <= hi, "d={d}: peak {peak} outside [{lo}, {hi}]");
        ensure!(r.fe_used <= 21 + 10, "d={d}: fe {}", r.fe_used);
        points.push((d as f64, peak));
        detail.push(format!("{:.2}d", peak / d as f64));
    }
    let fit = fit_loglog(&points).map_err(|e| e.to_string())?;
    ensure!((fit.slope - 1.0).abs() <= 0.1, "slope {:.3}", fit.slope);
    Ok(format!("peak {} bytes, slope {:.3}", detail.join(" / "), fit.slope))
}

fn zero_steady_allocation() -> Outcome {
    let d = 100_000;
    let mut out = Vec::new();
    for incremental in [true, false] {
        let mut f = if incremental { Griewank::incremental(d) } else { Griewank::new(d) }.unwrap();
        let bounds = BoxBounds::uniform(-600.0, 600.0).unwrap();
        let config = AboConfig {
            fe_budget: if incremental { 250 * d as u64 } else { 2_000 },
            initial_point: InitialPoint::Random { seed: 2 },
            ..AboConfig::default()
        };
        let mut state = AboState::init(&mut f, &bounds, &config).map_err(|e| e.to_string())?;
        let (_, mem) = track_peak("sweeps", || {
            while abo_termination_check(&state, &config) == Progress::Continue {
                abo_sweep(&mut state, &mut f, &bounds, &config).unwrap();
            }
        })
        .map_err(|e| e.to_string())?;
        ensure!(
            mem.acquired_bytes <= 4096,
            "incremental={incremental}: {} bytes acquired",
            mem.acquired_bytes
        );
        out.push(format!(
            "{} FE {}: {} B",
            state.fe_used(),
            if incremental { "incremental" } else { "full" },
            mem.acquired_bytes
        ));
    }
    Ok(out.join(", "))
}

fn nm_memory_quadratic() -> Outcome {
    let mut points = Vec::new();
    let mut at_1000 = 0.0;
    for d in [100usize, 300, 1000, 3000] {
        let (_, mem) = track_peak("simplex", || {
            let bounds = BoxBounds::uniform(-600.0, 600.0).unwrap();
            let mut f = Griewank::new(d).unwrap();
            let mut s = Simplex::<f64>::with_ceiling(d, 2_000_000_000).unwrap();
            s.randomize(&mut ChaCha8Rng::seed_from_u64(0), &bounds, &mut f).unwrap();
            nm_step(&mut s, &mut f, &bounds, &NmConfig::default()).unwrap();
        })
        .map_err(|e| e.to_string())?;
        let b = mem.measured_peak_bytes as f64;
        if d == 1000 {
            at_1000 = b;
        }
        points.push((d as f64, b));
    }
    let fit = fit_loglog(&points).map_err(|e| e.to_string())?;
    ensure!((fit.slope - 2.0).abs() <= 0.15, "slope {:.3}", fit.slope);
    let rel = (at_1000 - 8_008_000.0).abs() / 8_008_000.0;
    ensure!(rel <= 0.2, "d=1000: {at_1000} bytes, {:.1}% from 8,008,000", rel * 100.0);
    Ok(format!("slope {:.3}, {at_1000} bytes at d=1000 ({:+.2}%)", fit.slope, 100.0 * (at_1000 / 8_008_000.0 - 1.0)))
}

fn run_abo(d: usize, incremental: bool, budget: u64, start: InitialPoint) -> (f64, u64) {
    let mut f = if incremental { Griewank::incremental(d) } else { Griewank::new(d) }.unwrap();
    let bounds = BoxBounds::uniform(-600.0, 600.0).unwrap();
    let config = AboConfig {
        fe_budget: budget,
        initial_point: start,
        ..AboConfig::default()
    };
    let r = abo_optimize(&mut f, &bounds, &config).unwrap();
    (r.best_f, r.fe_used)
}

fn convergence() -> Outcome {
    let cases = [(2usize, false, 1_000u64, 1e-3), (1_000, true, 250_000, 1e-6), (100_000, true, 25_000_000, 1e-4)];
    let mut out = Vec::new();
    for (d, inc, budget, bar) in cases {
        let (f, fe) = run_abo(d, inc, budget, InitialPoint::DomainCenter);
        ensure!(f <= bar && fe <= budget + 11, "d={d} centre start: best {f:e} (bar {bar:e}), fe {fe}");
        out.push(format!("d={d} centre {f:.1e}"));
        if d >= 1_000 {
            let (f, fe) = run_abo(d, inc, budget, InitialPoint::Random { seed: 0 });
            ensure!(f <= bar && fe <= budget + 11, "d={d} random start: best {f:e} (bar {bar:e}), fe {fe}");
            out.push(format!("random {f:.1e}"));
        } else {
            let (f, _) = run_abo(d, inc, budget, InitialPoint::Random { seed: 0 });
            out.push(format!("random {f:.1e} (informational)"));
        }
    }
    Ok(out.join(", "))
}

fn time_linear() -> Outcome {
    let mut points = Vec::new();
    for d in [1_000usize, 10_000, 100_000, 1_000_000] {
        let mut times = Vec::new();
        for rep in 0..3 {
            let t = Instant::now();
            let (_, fe) = run_abo(d, true, 250 * d as u64, InitialPoint::Random { seed: rep });
            times.push(t.elapsed().as_secs_f64());
            ensure!(fe >= 250 * d as u64, "d={d}: stopped early at {fe} FE");
        }
        points.push((d as f64, median(&times).unwrap()));
    }
    let fit = fit_loglog(&points).map_err(|e| e.to_string())?;
    ensure!((0.9..=1.3).contains(&fit.slope), "slope {:.3} over {points:?}", fit.slope);
    let times: Vec<String> = points.iter().map(|p| format!("{:.3}s", p.1)).collect();
    Ok(format!("slope {:.3} ({})", fit.slope, times.join(", ")))
}

fn incremental_fidelity() -> Outcome {
    let d = 1000;
    let mut report = Vec::new();
    // The wide range leaves the cosine product negligible; the narrow one
    // keeps it O(1) so the divide-and-replace path is exercised.
    for (seed, range) in [(7u64, 600.0f64), (8, 3.0)] {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut x: Vec<f64> = (0..d).map(|_| rng.random_range(-range..range)).collect();
        let mut st = GriewankState::new(&x, 1 << 20, 1e-8).map_err(|e| e.to_string())?;
        let mut worst = 0.0f64;
        for n in 1..=1_000_000u32 {
            let i = rng.random_range(0..d);
            let v = rng.random_range(-range..range);
            let inc = st.update(&mut x, i, v).map_err(|e| e.to_string())?;
            if n % 1000 == 0 {
                let full = griewank_value(&x).unwrap();
                worst = worst.max((inc - full).abs() / full.abs());
            }
        }
        ensure!(worst <= 1e-9, "range {range}: worst relative error {worst:e}");
        report.push(format!(
            "range +/-{range}: worst {worst:.2e}, product {:.1e}, {} guard rebuilds",
            st.product(),
            st.refresh_count()
        ));
    }
    Ok(report.join("; "))
}

fn fe_accounting() -> Outcome {
    let mut cells = 0;
    for (algo, dims) in [
        (Algo::Abo, vec![2, 10, 100]),
        (Algo::AboOpt, vec![2, 100, 10_000]),
        (Algo::Nm, vec![2, 10, 100, 100_000]),
    ] {
        for precision in [Precision::Single, Precision::Double] {
            let spec = RunSpec {
                algo,
                dims: dims.clone(),
                precision,
                repeats: 2,
                start: StartMode::Random,
                fe_budget_per_dim: 100,
                ..RunSpec::default()
            };
            let report = run_suite(&spec).map_err(|e| e.to_string())?;
            for (r, a) in report.records.iter().zip(&report.accounting) {
                ensure!(
                    r.fe == a.instrumented_calls && r.fe == a.counter.total(),
                    "{algo} d={} {precision}: fe {} vs {} calls vs counter {}",
                    r.dim,
                    r.fe,
                    a.instrumented_calls,
                    a.counter.total()
                );
                cells += 1;
            }
        }
    }
    Ok(format!("{cells} cells exact"))
}

fn record_strategy() -> impl Strategy<Value = RunRecord> {
    let algo = prop_oneof![Just(Algo::Abo), Just(Algo::AboOpt), Just(Algo::Nm)];
    let prec = prop_oneof![Just(Precision::Single), Just(Precision::Double)];
    let term = prop_oneof![
        Just(Termination::BudgetExhausted),
        Just(Termination::ToleranceMet),
        Just(Termination::SweepLimit),
        Just(Termination::MemoryRefused),
    ];
    (
        (algo, 1usize..2_000_000_000, prec, any::<u64>()),
        (0.0f64..1e6, prop::option::of(0.0f64..1e4), prop::option::of(0.0f64..1e7)),
        (term, any::<u64>(), any::<u64>()),
    )
        .prop_map(|((algo, dim, precision, fe), (wall_s, best_f, peak_kb), (termination, seed, timestamp))| {
            RunRecord {
                algo,
                dim,
                precision,
                fe,
                wall_s,
                best_f,
                theory_kb: (dim as u64 * precision.bytes()) as f64 / 1000.0,
                peak_kb,
                termination,
                seed,
                timestamp,
            }
            .normalized()
        })
}

fn properties() -> Outcome {
    const CASES: u32 = 128;
    let mut runner = TestRunner::new(Config {
        cases: CASES,
        failure_persistence: None,
        ..Config::default()
    });
    let mut names = Vec::new();
    let mut check = |name: &str, result: Result<(), String>| -> Result<(), String> {
        result.map_err(|e| format!("{name}: {e}"))?;
        names.push(name.to_owned());
        Ok(())
    };

    let boxes = prop::collection::vec((-600.0f64..550.0, 1.0f64..50.0), 1..10)
        .prop_map(|v| v.into_iter().map(|(lo, w)| (lo, lo + w)).unzip::<f64, f64, Vec<f64>, Vec<f64>>());

    check(
        "abo monotone + in bounds",
        runner
            .run(&(boxes.clone(), any::<u64>(), any::<bool>()), |((lo, hi), seed, inc)| {
                let d = lo.len();
                let bounds = BoxBounds::per_dimension(lo, hi).unwrap();
                let mut f = if inc { Griewank::incremental(d) } else { Griewank::new(d) }.unwrap();
                let config = AboConfig {
                    fe_budget: 150 * d as u64,
                    initial_point: InitialPoint::Random { seed },
                    ..AboConfig::default()
                };
                let mut st = AboState::init(&mut f, &bounds, &config).unwrap();
                let mut prev = st.best_f();
                while abo_termination_check(&st, &config) == Progress::Continue {
                    let now = abo_sweep(&mut st, &mut f, &bounds, &config).unwrap();
                    prop_assert!(now <= prev);
                    prop_assert!(bounds.contains(st.x().as_slice()));
                    prev = now;
                }
                Ok(())
            })
            .map_err(|e| e.to_string()),
    )?;

    check(
        "nm best vertex monotone + in bounds",
        runner
            .run(&(boxes, any::<u64>()), |((lo, hi), seed)| {
                let d = lo.len();
                let bounds = BoxBounds::per_dimension(lo, hi).unwrap();
                let mut f = Griewank::new(d).unwrap();
                let mut s = Simplex::<f64>::with_ceiling(d, u64::MAX).unwrap();
                s.randomize(&mut ChaCha8Rng::seed_from_u64(seed), &bounds, &mut f).unwrap();
                let mut prev = s.best_value();
                for _ in 0..100 {
                    nm_step(&mut s, &mut f, &bounds, &NmConfig::default()).unwrap();
                    prop_assert!(s.best_value() <= prev);
                    prop_assert!((0..=d).all(|v| bounds.contains(s.vertex(v))));
                    prev = s.best_value();
                }
                Ok(())
            })
            .map_err(|e| e.to_string()),
    )?;

    check(
        "griewank nonnegative",
        runner
            .run(&prop::collection::vec(-1e4f64..1e4, 1..200), |x| {
                prop_assert!(griewank_value(&x).unwrap() >= 0.0);
                let mut g = Griewank::incremental(x.len()).unwrap();
                let mut y = x.clone();
                Objective::<f64>::begin_incremental(&mut g, &y).unwrap();
                for (i, v) in x.iter().enumerate() {
                    prop_assert!(g.update_coordinate(&mut y, i, -v * 0.5).unwrap() >= 0.0);
                }
                Ok(())
            })
            .map_err(|e| e.to_string()),
    )?;

    check(
        "csv round-trip",
        runner
            .run(&prop::collection::vec(record_strategy(), 1..8), |recs| {
                let mut buf = Vec::new();
                write_csv(&recs, &mut buf).unwrap();
                prop_assert_eq!(read_csv(&buf[..]).unwrap(), recs);
                Ok(())
            })
            .map_err(|e| e.to_string()),
    )?;

    check(
        "fit_loglog scale equivariance",
        runner
            .run(
                &(
                    prop::collection::btree_set(1u32..1_000_000, 3..8),
                    -3.0f64..3.0,
                    0.1f64..10.0,
                    1.0f64..1e3,
                    1e-3f64..1e3,
                ),
                |(sizes, s, c, a, b)| {
                    let pts: Vec<(f64, f64)> = sizes
                        .iter()
                        .map(|&n| (n as f64, c * (n as f64).powf(s) * (1.0 + 0.01 * ((n % 7) as f64))))
                        .collect();
                    let scaled: Vec<(f64, f64)> = pts.iter().map(|&(n, m)| (a * n, b * m)).collect();
                    let f0 = fit_loglog(&pts).unwrap();
                    let f1 = fit_loglog(&scaled).unwrap();
                    prop_assert!((f0.slope - f1.slope).abs() <= 1e-9 * f0.slope.abs().max(1.0));
                    let shift = b.ln() - f0.slope * a.ln();
                    prop_assert!((f1.intercept - f0.intercept - shift).abs() <= 1e-8 * (1.0 + shift.abs()));
                    Ok(())
                },
            )
            .map_err(|e| e.to_string()),
    )?;

    Ok(format!("{} suites x {CASES} cases: {}", names.len(), names.join("; ")))
}

fn declared_not_reproducible() -> Outcome {
    let argv = |s: &str| parse_args(std::iter::once("sweepopt-bench").chain(s.split_whitespace()));
    ensure!(matches!(argv("--dims 1e9"), Err(BenchError::Usage(_))), "1e9 accepted without --extreme");
    let spec = argv("--extreme").map_err(|e| e.to_string())?;
    ensure!(spec.dims == EXTREME_DIMS.to_vec(), "extreme grid {:?}", spec.dims);
    let table = ReferenceTable::default();
    for cell in table.cells() {
        let context = matches!(cell.table, "Table VI" | "Table VII" | "Headline")
            || matches!(cell.source, Source::MaSwChains | Source::GpuMaSwChains | Source::GpuAbo);
        if context {
            ensure!(
                cell.class == ToleranceClass::NotReproducible,
                "{} {:?} d={} is not marked not reproducible",
                cell.table,
                cell.source,
                cell.dim
            );
        }
    }
    Ok("1e9 run gated behind --extreme; context tables marked not reproducible".into())
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("1 theoretical memory exactness", theory_exact),
        ("2 ABO memory linearity", abo_memory_linear),
        ("3 zero steady-state allocation", zero_steady_allocation),
        ("4 NM quadratic memory", nm_memory_quadratic),
        ("5 convergence at reference FE budgets", convergence),
        ("6 linear time scaling", time_linear),
        ("7 incremental-evaluation fidelity", incremental_fidelity),
        ("8 FE accounting", fe_accounting),
        ("9 property suites", properties),
        ("10 not reproducible at desk scale (declared)", declared_not_reproducible),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let t = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panic: {msg}"))
        });
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS  criterion {name} [{secs:.1}s]: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  criterion {name} [{secs:.1}s]: {detail}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
