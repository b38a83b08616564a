//! Replication study of log-return stylized facts: fat tails and volatility
//! clustering across Monte Carlo replications.

use abmcal::engine::run_replications;
use abmcal::moments::{stylized_report, DEFAULT_ACF_LAGS};
use abmcal::ModelParams;

fn main() {
    let mut params = ModelParams::stylized_baseline();
    params.n_l = 1000; // reduced-scale run; raise to 10000 for the full study
    let replications = 10;

    let results = run_replications(&params, 20260808, replications).expect("valid parameters");
    let report = stylized_report(&results, DEFAULT_ACF_LAGS).expect("report");

    println!("replications: {replications}, sessions each: {}", params.t);
    println!(
        "pooled log returns: mean {:.3e}, std {:.3e}, kurtosis {:.3} (normal = 3)",
        report.fitted_mean, report.fitted_std, report.pooled_kurtosis
    );

    let band = report.acf_returns.band;
    println!("\nlag   acf(returns)   acf(|returns|)   band +-{band:.4}");
    for lag in [1usize, 2, 3, 5, 10, 20, 50] {
        println!(
            "{lag:>3}   {:>12.4}   {:>14.4}",
            report.acf_returns.values[lag], report.acf_abs_returns.values[lag]
        );
    }
    let clustering = (1..=5).all(|k| report.acf_abs_returns.values[k] > band);
    println!("\nvolatility clustering (|returns| ACF above the band at lags 1-5): {clustering}");

    println!("\nhistogram: {} bins; widest-count bin:", report.histogram.len());
    if let Some(peak) = report.histogram.iter().max_by_key(|b| b.count) {
        println!(
            "  [{:.4e}, {:.4e}) count {} (fitted normal density {:.3})",
            peak.left, peak.right, peak.count, peak.normal_density
        );
    }
    let (theo, samp) = report.qq[report.qq.len() / 20];
    println!("qq 5% point: theoretical {theo:.4e}, sample {samp:.4e} (heavier tail below the line)");
}
