//! Data pipeline: synthetic ticks -> minute bars -> bootstrap moment
//! covariance -> inverse weight matrix.

use abmcal::dataio::{bars_from_quotes, synth_ticks, tukey_interval, SynthConfig, DAY_END, DAY_START};
use abmcal::moments::log_prices;
use abmcal::objective::{bootstrap_covariance, weight_matrix};

fn main() {
    let ticks = synth_ticks(&SynthConfig::default());
    println!("generated {} ticks over 5 trading days", ticks.len());

    let (bars, warnings) = bars_from_quotes(&ticks, DAY_START, DAY_END);
    assert!(warnings.is_empty());
    println!("aggregated {} one-minute mid-price bars", bars.len());

    let prices: Vec<f64> = bars.iter().map(|b| b.mid_price).collect();
    let interval = tukey_interval(&prices).unwrap();
    println!(
        "outlier screen: [{:.4}, {:.4}] (first price {:.4} is {})",
        interval.lo,
        interval.hi,
        prices[0],
        if interval.is_outlier(prices[0]) { "an outlier" } else { "not an outlier" }
    );

    // Moving block bootstrap of the log-price series (shortened here; the
    // production run uses b = 100 and n = 10000).
    let logs = log_prices(&prices).unwrap();
    let boot = bootstrap_covariance(&logs, 100, 2000, 7).unwrap();
    let w = weight_matrix(&boot.cov).unwrap();

    println!("\nmoment covariance diagonal (mean, std, kurtosis, KS, Hurst):");
    for i in 0..5 {
        print!("  {:.3e}", boot.cov[i][i]);
    }
    println!("\n\nweight matrix (inverse covariance):");
    for row in &w.entries {
        println!(
            "  [{:>11.4e} {:>11.4e} {:>11.4e} {:>11.4e} {:>11.4e}]",
            row[0], row[1], row[2], row[3], row[4]
        );
    }
    println!(
        "covariance condition number: {:.4e}{}",
        w.source_condition_number,
        if w.is_ill_conditioned() { " (ill-conditioned!)" } else { "" }
    );
}
