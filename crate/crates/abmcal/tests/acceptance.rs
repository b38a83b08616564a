//! Acceptance suite: one test per criterion, each printing a pass/fail line
//! per assertion group (run with `--nocapture` to see them all).
//!
//! Criterion 1's raw-return autocorrelation clause is a known structural
//! red: the market price adjusts only partially per session toward the
//! random-walk fundamental value (the clearing price has to eat through
//! twenty sessions of resting depth), so raw minute returns autocorrelate
//! positively at short lags at the baseline parameterization. Kurtosis and
//! volatility-clustering clauses pass. The mechanism and the experiments
//! that isolated it are summarized in the README's behavior notes.

#![allow(clippy::needless_range_loop)] // index loops mirror the matrix fixtures

mod common;

use std::fs;

use abmcal::agents::ModelParams;
use abmcal::dataio::{bars_from_quotes, synth_ticks, tukey_interval, SynthConfig, DAY_END, DAY_START};
use abmcal::engine::{run_replications, run_simulation};
use abmcal::lob::{LimitOrder, OrderBook, Side};
use abmcal::moments::{hurst_ghe, ks_statistic, log_prices, stylized_report, GHE_TAU_MAX};
use abmcal::objective::{
    objective_with_reps,
    block_bootstrap, bootstrap_covariance, objective, weight_matrix, FreeParamSet, Matrix,
    ObjectiveSpec, WeightMatrix,
};
use abmcal::optimize::{
    ga_run, init_free_params, nm_step, nm_ta_run, FnObjective, GaConfig, MsmObjective, Simplex,
    ThresholdSchedule,
};
use abmcal::rng::derive_seed;
use abmcal::surface::{evaluate_surface, sobol_2d, SurfaceSpec};
use common::{brute_force_clear, spearman};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, StandardNormal};

fn report(criterion: &str, pass: bool, detail: &str) -> bool {
    let tag = if pass { "PASS" } else { "FAIL" };
    println!("[{tag}] {criterion}: {detail}");
    pass
}

// --- Criterion 1: stylized facts ---------------------------------------

struct StylizedOutcome {
    kurtosis_ok: bool,
    returns_acf_ok: bool,
    clustering_ok: bool,
    detail: String,
}

fn stylized_outcome(n_l: u32, reps: usize) -> StylizedOutcome {
    let mut params = ModelParams::stylized_baseline();
    params.n_l = n_l;
    let results = run_replications(&params, 20260808, reps).expect("valid params");
    let rep = stylized_report(&results, 50).expect("report");
    let band = rep.acf_returns.band;

    let kurtosis_ok = rep.pooled_kurtosis > 3.0;
    let inside = rep.acf_returns.values[1..=50]
        .iter()
        .filter(|v| v.abs() <= band)
        .count();
    let returns_acf_ok = inside * 10 >= 45 * 10; // >= 90% of 50 lags
    let abs = &rep.acf_abs_returns.values;
    let clustering_ok = (1..=5).all(|k| abs[k] > band) && abs[20] < abs[1];
    let detail = format!(
        "N_L={n_l} reps={reps}: pooled kurtosis {:.3} (>3), returns-ACF {inside}/50 lags inside +-{band:.4} (need >=45), |returns|-ACF lags 1-5 {:?} vs band, lag20 {:.4} < lag1 {:.4}",
        rep.pooled_kurtosis,
        (1..=5).map(|k| (abs[k] * 1e3).round() / 1e3).collect::<Vec<_>>(),
        abs[20],
        abs[1],
    );
    StylizedOutcome { kurtosis_ok, returns_acf_ok, clustering_ok, detail }
}

fn assert_stylized(outcome: StylizedOutcome, label: &str) {
    let kurt = report(label, outcome.kurtosis_ok, &format!("kurtosis clause; {}", outcome.detail));
    let cluster = report(
        label,
        outcome.clustering_ok,
        "volatility-clustering clauses (|returns| ACF lags 1-5 above band, lag 20 below lag 1)",
    );
    let acf = report(
        label,
        outcome.returns_acf_ok,
        "returns-ACF clause (>= 90% of lags 1-50 inside the white-noise band)",
    );
    assert!(kurt, "pooled kurtosis must exceed 3");
    assert!(cluster, "volatility clustering must be visible in |returns| ACF");
    assert!(
        acf,
        "returns-ACF clause failed: partial per-session price adjustment toward the \
         random-walk fundamental autocorrelates raw returns at short lags at the baseline \
         parameterization (structural; see README behavior notes)"
    );
}

#[test]
fn acceptance_1_stylized_facts_reduced() {
    assert_stylized(stylized_outcome(1_000, 10), "criterion 1 (reduced)");
}

#[test]
#[ignore = "full-scale mode (~15 s simulation work in release, minutes in debug); run with --ignored"]
fn acceptance_1_stylized_facts_full() {
    assert_stylized(stylized_outcome(10_000, 50), "criterion 1 (full)");
}

// --- Criterion 2: matching-engine oracle --------------------------------

#[test]
fn acceptance_2_matching_engine_matches_brute_force() {
    let mut rng = ChaCha12Rng::seed_from_u64(2);
    let sessions = 10_000;
    for round in 0..sessions {
        let session = 1 + (round % 7) as u32;
        let mut orders: Vec<LimitOrder> = Vec::new();
        let mut next_id = 1u64;
        for side in [Side::Buy, Side::Sell] {
            let count = rng.random_range(0..=50);
            for _ in 0..count {
                orders.push(LimitOrder {
                    order_id: next_id,
                    trader_id: next_id,
                    side,
                    // Coarse price grid forces plenty of priority ties.
                    price: 90.0 + 0.5 * rng.random_range(0..=40) as f64,
                    size: rng.random_range(1..=50) as f64 / 10.0,
                    placed_session: rng.random_range(0..=session),
                    lifetime: 20,
                });
                next_id += 1;
            }
        }
        // Shuffle ids relative to insertion order.
        for i in (1..orders.len()).rev() {
            let j = rng.random_range(0..=i);
            orders.swap(i, j);
        }

        let mut book = OrderBook::new();
        for o in &orders {
            book.insert(o.clone()).expect("unique ids");
        }
        let (trades, price) = book.clear_session(session);
        let (oracle_trades, oracle_price, oracle_rest) = brute_force_clear(orders, session);

        assert_eq!(trades, oracle_trades, "trade sequence diverged in round {round}");
        assert_eq!(price, oracle_price);
        if let (Some(b), Some(a)) = (book.best_bid(), book.best_ask()) {
            assert!(b.price < a.price, "crossed spread after clearing in round {round}");
        }
        let mut rest: Vec<LimitOrder> = book.bids().chain(book.asks()).cloned().collect();
        rest.sort_by_key(|o| o.order_id);
        let mut oracle_rest = oracle_rest;
        oracle_rest.sort_by_key(|o| o.order_id);
        assert_eq!(rest, oracle_rest, "residual book diverged in round {round}");
    }
    report(
        "criterion 2",
        true,
        &format!("{sessions} random sessions identical to the brute-force matcher, no crossed spreads"),
    );
}

// --- Criterion 3: reference weight-matrix fixture ------------------------

fn fixture_w() -> Matrix {
    [
        [5.0346e4, -1.2885e4, -736.6343, 3.0220e3, 391.2534],
        [-1.2885e4, 7.8957e5, 2.5435e3, -341.4378, -6.1999e3],
        [-736.6343, 2.5435e3, 28.7473, -88.4746, 17.2640],
        [3.0220e3, -341.4378, -88.4746, 723.4611, 56.7301],
        [391.2534, -6.1999e3, 17.2640, 56.7301, 2.3549e3],
    ]
}

#[test]
fn acceptance_3_weight_matrix_fixture() {
    let w_ref = fixture_w();
    let cov = weight_matrix(&w_ref).expect("fixture invertible");
    let w_back = weight_matrix(&cov.entries).expect("covariance invertible");

    let scale = w_ref.iter().flatten().fold(0.0f64, |a, &x| a.max(x.abs()));
    let mut max_rel: f64 = 0.0;
    for i in 0..5 {
        for j in 0..5 {
            max_rel = max_rel.max((w_back.entries[i][j] - w_ref[i][j]).abs() / scale);
        }
    }
    let cond = w_back.source_condition_number;
    let cond_rel = (cond - 1.2772e5).abs() / 1.2772e5;

    let ok = max_rel < 1e-4 && cond_rel < 0.05;
    assert!(
        report(
            "criterion 3",
            ok,
            &format!(
                "round-trip inversion error {max_rel:.3e} (tol 1e-4), condition number {cond:.6e} within {:.3}% of 1.2772e5",
                cond_rel * 100.0
            ),
        ),
        "weight-matrix fixture failed"
    );
}

// --- Criterion 4: statistics oracles -------------------------------------

#[test]
fn acceptance_4_statistics_oracles() {
    // Generalized Hurst exponent on Brownian paths.
    let mut rng = ChaCha12Rng::seed_from_u64(4);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let mut x = 0.0;
        let path: Vec<f64> = (0..10_000)
            .map(|_| {
                let step: f64 = StandardNormal.sample(&mut rng);
                x += step;
                x
            })
            .collect();
        let h = hurst_ghe(&path, GHE_TAU_MAX).expect("valid path");
        worst = worst.max((h - 0.5).abs());
        assert!((h - 0.5).abs() <= 0.05, "Brownian path H = {h}");
    }
    let ghe_ok = report(
        "criterion 4",
        true,
        &format!("GHE on 20 Brownian paths: max |H - 0.5| = {worst:.4} (tol 0.05)"),
    );

    // KS equals brute-force CDF evaluation exactly.
    let mut ks_ok = true;
    for _ in 0..200 {
        let n = rng.random_range(1..40);
        let m = rng.random_range(1..40);
        let a: Vec<f64> = (0..n).map(|_| rng.random_range(0..12) as f64).collect();
        let b: Vec<f64> = (0..m).map(|_| rng.random_range(0..12) as f64).collect();
        let mut support: Vec<f64> = a.iter().chain(&b).copied().collect();
        support.sort_unstable_by(|x, y| x.partial_cmp(y).unwrap());
        support.dedup();
        let brute = support
            .iter()
            .map(|&x| {
                let fa = a.iter().filter(|&&v| v <= x).count() as f64 / a.len() as f64;
                let fb = b.iter().filter(|&&v| v <= x).count() as f64 / b.len() as f64;
                (fa - fb).abs()
            })
            .fold(0.0f64, f64::max);
        ks_ok &= ks_statistic(&a, &b) == brute;
    }
    assert!(
        report("criterion 4", ks_ok, "KS statistic equals brute-force CDF evaluation exactly"),
        "KS oracle mismatch"
    );

    // Full-length blocks reproduce the original series.
    let series: Vec<f64> = (0..80).map(|i| (i as f64 * 0.3).sin() + 2.0).collect();
    let samples = block_bootstrap(&series, series.len(), 25, &mut rng).expect("valid b");
    let bootstrap_ok = samples.iter().all(|s| s == &series);
    assert!(
        report("criterion 4", bootstrap_ok, "block bootstrap with b = len returns only copies"),
        "bootstrap copy property failed"
    );
    assert!(ghe_ok);
}

// --- Criteria 5 and 6: twin experiment on pseudo-data --------------------

const DELTA_TRUE: f64 = 0.001;

fn twin_base_params() -> ModelParams {
    let mut p = ModelParams::stylized_baseline();
    p.t = 600;
    p.n_l = 1_000;
    p.n_h = 100;
    p.delta = DELTA_TRUE;
    p
}

/// Model-generated pseudo-data plus its bootstrap weight matrix.
fn twin_reference() -> (Vec<f64>, WeightMatrix) {
    let params = twin_base_params();
    let sim = run_simulation(&params, 515151).expect("valid params");
    let prices = sim.simulated_prices().to_vec();
    let logs = log_prices(&prices).expect("positive prices");
    let boot = bootstrap_covariance(&logs, 100, 10_000, 616161).expect("bootstrap");
    let w = weight_matrix(&boot.cov).expect("invertible covariance");
    (prices, w)
}

#[test]
fn acceptance_5_twin_experiment_recovers_delta() {
    let (prices, weights) = twin_reference();
    let spec = ObjectiveSpec::from_reference_prices(
        &prices,
        weights,
        5,
        twin_base_params(),
        FreeParamSet::with_default_bounds(&["delta"]).unwrap(),
    )
    .expect("valid spec");

    // Five independent calibration runs, 50 iterations each. The final
    // basin comparison re-evaluates both points under one fresh seed with
    // extra replications, measuring the criterion quantity precisely rather
    // than through single-evaluation Monte Carlo noise.
    let compare_seed = 909090;
    let compare_reps = 40;
    let f_true = objective_with_reps(&spec, &[DELTA_TRUE], compare_seed, compare_reps)
        .expect("objective at truth");
    let mut all_ok = true;
    for run in 0..5u64 {
        let run_seed = derive_seed(424242, run);
        let objective_fn = MsmObjective { spec: &spec, master_seed: run_seed };
        let mut rng = ChaCha12Rng::seed_from_u64(derive_seed(run_seed, 7));
        let vertices: Vec<Vec<f64>> =
            (0..=1).map(|_| init_free_params(&spec.free, &mut rng)).collect();
        let result = nm_ta_run(&objective_fn, vertices, 50, &ThresholdSchedule::default(), &mut rng)
            .expect("run succeeds");
        let delta_best = result.best_theta[0];
        let f_best = objective_with_reps(&spec, &[delta_best], compare_seed, compare_reps)
            .expect("objective at best");
        let ok = f_best <= 1.5 * f_true;
        all_ok &= report(
            "criterion 5",
            ok,
            &format!(
                "run {run}: recovered delta {delta_best:.6} (true {DELTA_TRUE}), f(best) {f_best:.4e} vs 1.5 f(true) {:.4e}",
                1.5 * f_true
            ),
        );
    }

    // Identifiability: the objective ranks with distance from the truth.
    let sweep_seed = 777777;
    let mut distances = Vec::with_capacity(100);
    let mut values = Vec::with_capacity(100);
    for i in 0..100 {
        let delta = 0.01 * (i as f64 + 0.5) / 100.0;
        let f = objective(&spec, &[delta], sweep_seed).expect("sweep point");
        distances.push((delta - DELTA_TRUE).abs());
        values.push(f);
    }
    let rho = spearman(&distances, &values);
    let sweep_ok = report(
        "criterion 5",
        rho > 0.8,
        &format!("Spearman(|delta - true|, f) = {rho:.4} over a 100-point sweep (need > 0.8)"),
    );
    assert!(all_ok, "a calibration run ended outside the pseudo-truth basin");
    assert!(sweep_ok, "delta sweep lost its monotone structure");
}

#[test]
fn acceptance_6_degeneracy_contrast() {
    let (prices, weights) = twin_reference();

    // Trader-count sweep: haphazard, bounded effect.
    let spec_counts = ObjectiveSpec::from_reference_prices(
        &prices,
        weights.clone(),
        5,
        twin_base_params(),
        FreeParamSet::with_default_bounds(&["N_L", "N_H"]).unwrap(),
    )
    .expect("valid spec");
    let sweep = SurfaceSpec {
        param_x: "N_L".into(),
        param_y: "N_H".into(),
        range_x: (100.0, 2000.0),
        range_y: (100.0, 2000.0),
        n_points: 200,
        replications: 5,
        base_theta: vec![1000.0, 100.0],
    };
    let points = evaluate_surface(&sweep, &spec_counts, 272727).expect("sweep");
    let (count_min, count_max) = points
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| (lo.min(p.f), hi.max(p.f)));
    let count_ratio = count_max / count_min;

    // Drift sweep: dominant, structured effect.
    let spec_delta = ObjectiveSpec::from_reference_prices(
        &prices,
        weights,
        5,
        twin_base_params(),
        FreeParamSet::with_default_bounds(&["delta"]).unwrap(),
    )
    .expect("valid spec");
    let mut delta_min = f64::INFINITY;
    let mut delta_max = f64::NEG_INFINITY;
    for i in 0..100 {
        let delta = 1e-5 + (0.05 - 1e-5) * i as f64 / 99.0;
        let f = objective(&spec_delta, &[delta], 282828).expect("sweep point");
        delta_min = delta_min.min(f);
        delta_max = delta_max.max(f);
    }
    let delta_ratio = delta_max / delta_min;

    let ok = count_ratio < 100.0 && delta_ratio > 1e3;
    assert!(
        report(
            "criterion 6",
            ok,
            &format!(
                "trader-count sweep max/min = {count_ratio:.2} (need < 100); drift sweep max/min = {delta_ratio:.3e} (need > 1e3)"
            ),
        ),
        "degeneracy contrast not reproduced"
    );
}

// --- Criterion 7: optimizer unit suites -----------------------------------

#[test]
fn acceptance_7_optimizer_suites() {
    // Nelder-Mead on a 2-D convex quadratic.
    let quad = FnObjective {
        f: |x: &[f64]| (x[0] - 0.3).powi(2) + 4.0 * (x[1] + 0.2).powi(2),
        space: FreeParamSet::new(vec![
            abmcal::objective::FreeParam::new("delta", -2.0, 2.0, false).unwrap(),
            abmcal::objective::FreeParam::new("sigma_z", -2.0, 2.0, false).unwrap(),
        ])
        .unwrap(),
    };
    let mut rng = ChaCha12Rng::seed_from_u64(71);
    let vertices: Vec<Vec<f64>> = (0..3).map(|_| init_free_params(&quad.space, &mut rng)).collect();
    let mut simplex = Simplex::from_vertices(vertices, &quad, 1).unwrap();
    let mut steps_needed = None;
    for step in 1..=200 {
        nm_step(&mut simplex, &quad, 1).unwrap();
        let (best, _) = simplex.best();
        let dist = ((best[0] - 0.3).powi(2) + (best[1] + 0.2).powi(2)).sqrt();
        if dist < 1e-6 {
            steps_needed = Some(step);
            break;
        }
    }
    assert!(
        report(
            "criterion 7",
            steps_needed.is_some(),
            &format!("Nelder-Mead reached the quadratic minimizer to 1e-6 in {steps_needed:?} steps (budget 200)"),
        ),
        "simplex did not converge on the quadratic"
    );

    // Genetic algorithm on a 4-D sphere.
    let sphere = FnObjective {
        f: |x: &[f64]| x.iter().map(|v| v * v).sum(),
        space: FreeParamSet::new(
            ["delta", "sigma_z", "sigma_y", "lambda"]
                .iter()
                .map(|n| abmcal::objective::FreeParam::new(n, -5.0, 5.0, false).unwrap())
                .collect(),
        )
        .unwrap(),
    };
    let mut rng = ChaCha12Rng::seed_from_u64(72);
    let result = ga_run(&sphere, &GaConfig::default(), &mut rng).unwrap();
    let improvement = result.trace_best[0] / result.best_f;
    let monotone = result.trace_best.windows(2).all(|w| w[1] <= w[0]);
    assert!(
        report(
            "criterion 7",
            improvement >= 100.0 && monotone,
            &format!(
                "GA improved the 4-D sphere {improvement:.1}x over 100 generations (need >= 100x); elitism monotone: {monotone}"
            ),
        ),
        "genetic algorithm benchmark failed"
    );
}

// --- Criterion 8: data pipeline -------------------------------------------

#[test]
fn acceptance_8_data_pipeline_and_reproducibility() {
    // Synthetic five-day stream aggregates to exactly 2300 bars.
    let ticks = synth_ticks(&SynthConfig::default());
    let (bars, warnings) = bars_from_quotes(&ticks, DAY_START, DAY_END);
    let bars_ok = bars.len() == 2300 && warnings.is_empty();
    assert!(
        report("criterion 8", bars_ok, &format!("synthetic 5-day stream -> {} bars", bars.len())),
        "expected exactly 2300 bars"
    );

    // Hand-computed eight-point boxplot fixture.
    let series = [10.0, 12.0, 13.0, 15.0, 20.0, 21.0, 25.0, 40.0];
    let t = tukey_interval(&series).unwrap();
    let tukey_ok = (t.lo - (-1.125)).abs() < 1e-12
        && (t.hi - 35.875).abs() < 1e-12
        && t.is_outlier(40.0)
        && !t.is_outlier(25.0);
    assert!(
        report(
            "criterion 8",
            tukey_ok,
            &format!("Tukey interval [{}, {}] matches the hand computation", t.lo, t.hi),
        ),
        "Tukey fixture failed"
    );

    // End-to-end reproducibility: synth -> ingest -> weights -> calibrate,
    // twice, byte-identical outputs (wall time excluded).
    let base = std::env::temp_dir().join(format!("abmcal-acceptance-{}", std::process::id()));
    let run_pipeline = |tag: &str| -> (String, String) {
        let dir = base.join(tag);
        fs::create_dir_all(&dir).unwrap();
        let path = |name: &str| dir.join(name).to_string_lossy().into_owned();
        let config_path = path("params.json");
        let mut params = ModelParams::stylized_baseline();
        params.n_l = 300;
        params.n_h = 30;
        fs::write(&config_path, serde_json::to_string_pretty(&params).unwrap()).unwrap();

        let run = |args: &[&str]| {
            let mut argv = vec!["abmcal"];
            argv.extend_from_slice(args);
            let code = abmcal::cli::dispatch(argv);
            assert_eq!(code, 0, "pipeline step failed: {args:?}");
        };
        run(&["synth", "--days", "5", "--seed", "11", "--out", &path("ticks.csv")]);
        run(&["ingest", "--ticks", &path("ticks.csv"), "--out", &path("bars.csv")]);
        run(&[
            "weights", "--bars", &path("bars.csv"), "--b", "50", "--n", "300", "--seed", "12",
            "--out", &path("weights.json"),
        ]);
        run(&[
            "calibrate", "--method", "nm-ta", "--bars", &path("bars.csv"), "--config",
            &config_path, "--weights", &path("weights.json"), "--free", "delta,sigma_z",
            "--iters", "4", "--reps", "1", "--seed", "13", "--out", &path("result.json"),
        ]);
        let weights = fs::read_to_string(path("weights.json")).unwrap();
        let mut result: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(path("result.json")).unwrap()).unwrap();
        result["wall_time_s"] = serde_json::Value::from(0.0);
        (weights, serde_json::to_string(&result).unwrap())
    };

    let first = run_pipeline("a");
    let second = run_pipeline("b");
    let _ = fs::remove_dir_all(&base);
    let repro_ok = first == second;
    assert!(
        report(
            "criterion 8",
            repro_ok,
            "ingest -> weights -> calibrate reproduces identical JSON across two runs",
        ),
        "pipeline outputs diverged between identical runs"
    );
}

// --- Supporting check: Sobol prefix coverage used by the surface sweeps ---

#[test]
fn sobol_reference_prefix_has_net_property() {
    // The digital-net structure underpinning the low-discrepancy sweeps:
    // with the zero point restored, every 2^k prefix fills every dyadic
    // cell exactly once (brute force for k <= 6).
    for k in 1..=6u32 {
        let n = 1usize << k;
        let mut pts = vec![(0.0, 0.0)];
        pts.extend(sobol_2d(n - 1));
        for a in 0..=k {
            let (cols, rows) = (1usize << a, 1usize << (k - a));
            let mut counts = vec![0usize; cols * rows];
            for &(x, y) in &pts {
                counts[(y * rows as f64) as usize * cols + (x * cols as f64) as usize] += 1;
            }
            assert!(counts.iter().all(|&c| c == 1), "k={k}, cell shape {cols}x{rows}");
        }
    }
}
