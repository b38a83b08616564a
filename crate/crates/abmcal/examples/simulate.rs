//! One simulation run: market prices, fundamentals, and trade activity.

use abmcal::engine::run_simulation;
use abmcal::moments::{basic_moments, log_returns};
use abmcal::ModelParams;

fn main() {
    let mut params = ModelParams::stylized_baseline();
    // Keep the example snappy; the baseline uses 10000 LF traders.
    params.t = 600;
    params.n_l = 1000;

    let result = run_simulation(&params, 42).expect("valid parameters");

    let prices = result.simulated_prices();
    let trades: u32 = result.trades_per_session.iter().sum();
    println!("sessions: {}, total trades: {trades}", result.sessions());
    println!(
        "price path: start {:.3}, end {:.3}, fundamental end {:.3}",
        prices[0],
        prices[prices.len() - 1],
        result.fundamentals.last().unwrap()
    );

    let returns = log_returns(prices).unwrap();
    let (mean, std, kurt) = basic_moments(&returns).unwrap();
    println!("minute log returns: mean {mean:.3e}, std {std:.3e}, kurtosis {kurt:.3}");

    // The same (params, seed) pair always reproduces the same path.
    let again = run_simulation(&params, 42).unwrap();
    assert_eq!(result, again);
    println!("re-running with the same seed reproduced the path bit for bit");

    let csv = result.to_csv();
    let preview: Vec<&str> = csv.lines().take(4).collect();
    println!("CSV head:\n{}", preview.join("\n"));
}
