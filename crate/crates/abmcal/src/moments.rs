//! Summary statistics of log-price series and stylized-fact diagnostics.
//!
//! The calibration pipeline compresses a log-price series into five numbers:
//! mean, standard deviation, kurtosis, the Kolmogorov-Smirnov distance to a
//! reference series, and the generalized Hurst exponent at q = 1. This module
//! also produces the replication-pooled histogram, Q-Q points, and
//! autocorrelation tables used to inspect return stylized facts.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::engine::SimulationResult;
use crate::stats::{norm_pdf, norm_quantile, quantile_sorted};

/// Default scale range for the generalized Hurst exponent estimator.
pub const GHE_TAU_MAX: usize = 19;
/// Default number of autocorrelation lags in stylized-fact reports.
pub const DEFAULT_ACF_LAGS: usize = 50;

/// The five statistics, in their fixed order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentVector {
    pub mean: f64,
    pub std_dev: f64,
    pub kurtosis: f64,
    pub ks_stat: f64,
    pub hurst: f64,
}

impl MomentVector {
    pub fn as_array(&self) -> [f64; 5] {
        [self.mean, self.std_dev, self.kurtosis, self.ks_stat, self.hurst]
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum MomentError {
    #[error("non-positive price at index {index}")]
    NonPositivePrice { index: usize },
    #[error("series too short: need at least {needed}, got {got}")]
    TooShort { needed: usize, got: usize },
    #[error("degenerate (constant) series")]
    ConstantSeries,
}

/// Natural log of each price; rejects non-positive entries with their index.
pub fn log_prices(prices: &[f64]) -> Result<Vec<f64>, MomentError> {
    prices
        .iter()
        .enumerate()
        .map(|(index, &p)| {
            if p > 0.0 && p.is_finite() {
                Ok(p.ln())
            } else {
                Err(MomentError::NonPositivePrice { index })
            }
        })
        .collect()
}

/// First differences of the log prices; length is one less than the input.
pub fn log_returns(prices: &[f64]) -> Result<Vec<f64>, MomentError> {
    let logs = log_prices(prices)?;
    Ok(logs.windows(2).map(|w| w[1] - w[0]).collect())
}

/// Which kurtosis definition to report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum KurtosisMode {
    /// Pearson kurtosis; 3 for a normal distribution.
    #[default]
    Raw,
    /// Pearson kurtosis minus 3.
    Excess,
}

/// Sample mean, sample standard deviation (n-1 denominator), and raw
/// kurtosis.
pub fn basic_moments(series: &[f64]) -> Result<(f64, f64, f64), MomentError> {
    let kurt = kurtosis(series, KurtosisMode::Raw)?;
    let (mean, std_dev) = mean_std(series)?;
    Ok((mean, std_dev, kurt))
}

fn mean_std(series: &[f64]) -> Result<(f64, f64), MomentError> {
    if series.len() < 2 {
        return Err(MomentError::TooShort { needed: 2, got: series.len() });
    }
    let n = series.len() as f64;
    let mean = series.iter().sum::<f64>() / n;
    let ss = series.iter().map(|x| (x - mean).powi(2)).sum::<f64>();
    Ok((mean, (ss / (n - 1.0)).sqrt()))
}

/// Kurtosis as `n * sum(d^4) / sum(d^2)^2` over centered values `d`.
pub fn kurtosis(series: &[f64], mode: KurtosisMode) -> Result<f64, MomentError> {
    if series.len() < 4 {
        return Err(MomentError::TooShort { needed: 4, got: series.len() });
    }
    let n = series.len() as f64;
    let mean = series.iter().sum::<f64>() / n;
    let (mut s2, mut s4) = (0.0, 0.0);
    for x in series {
        let d = x - mean;
        let d2 = d * d;
        s2 += d2;
        s4 += d2 * d2;
    }
    if s2 == 0.0 {
        return Err(MomentError::ConstantSeries);
    }
    let raw = n * s4 / (s2 * s2);
    Ok(match mode {
        KurtosisMode::Raw => raw,
        KurtosisMode::Excess => raw - 3.0,
    })
}

/// Exact Kolmogorov-Smirnov statistic: the sup-norm distance between the two
/// empirical CDFs, evaluated over the merged support.
pub fn ks_statistic(series_a: &[f64], series_b: &[f64]) -> f64 {
    assert!(!series_a.is_empty() && !series_b.is_empty());
    let mut a = series_a.to_vec();
    let mut b = series_b.to_vec();
    a.sort_unstable_by(|x, y| x.partial_cmp(y).unwrap());
    b.sort_unstable_by(|x, y| x.partial_cmp(y).unwrap());
    let (n, m) = (a.len(), b.len());
    let (mut i, mut j) = (0usize, 0usize);
    let mut d: f64 = 0.0;
    while i < n || j < m {
        let x = match (a.get(i), b.get(j)) {
            (Some(&x), Some(&y)) => x.min(y),
            (Some(&x), None) => x,
            (None, Some(&y)) => y,
            (None, None) => break,
        };
        while i < n && a[i] == x {
            i += 1;
        }
        while j < m && b[j] == x {
            j += 1;
        }
        d = d.max((i as f64 / n as f64 - j as f64 / m as f64).abs());
    }
    d
}

/// Generalized Hurst exponent at q = 1.
///
/// For each scale `tau` in `1..=tau_max`, the scaling function is the mean
/// absolute increment `K(tau) = mean_t |x(t + tau) - x(t)|`; the estimate is
/// the least-squares slope of `ln K` on `ln tau`.
pub fn hurst_ghe(series: &[f64], tau_max: usize) -> Result<f64, MomentError> {
    assert!(tau_max >= 2, "need at least two scales for a slope");
    if series.len() < 5 * tau_max {
        return Err(MomentError::TooShort { needed: 5 * tau_max, got: series.len() });
    }
    let mut log_tau = Vec::with_capacity(tau_max);
    let mut log_k = Vec::with_capacity(tau_max);
    for tau in 1..=tau_max {
        let mut acc = 0.0;
        let count = series.len() - tau;
        for t in 0..count {
            acc += (series[t + tau] - series[t]).abs();
        }
        let k = acc / count as f64;
        if k <= 0.0 {
            return Err(MomentError::ConstantSeries);
        }
        log_tau.push((tau as f64).ln());
        log_k.push(k.ln());
    }
    let n = tau_max as f64;
    let mx = log_tau.iter().sum::<f64>() / n;
    let my = log_k.iter().sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for (x, y) in log_tau.iter().zip(&log_k) {
        num += (x - mx) * (y - my);
        den += (x - mx) * (x - mx);
    }
    Ok(num / den)
}

/// The five statistics of a log-price series, with the KS entry measured
/// against a reference log-price series.
pub fn moment_vector(
    log_price_series: &[f64],
    reference_log_prices: &[f64],
) -> Result<MomentVector, MomentError> {
    let (mean, std_dev, kurtosis) = basic_moments(log_price_series)?;
    let ks_stat = ks_statistic(log_price_series, reference_log_prices);
    let hurst = hurst_ghe(log_price_series, GHE_TAU_MAX)?;
    Ok(MomentVector { mean, std_dev, kurtosis, ks_stat, hurst })
}

/// Sample autocorrelations at lags `0..=max_lag` plus the white-noise 95%
/// band `1.96 / sqrt(n)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AcfTable {
    pub values: Vec<f64>,
    pub band: f64,
}

impl AcfTable {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("lag,acf,band\n");
        for (lag, v) in self.values.iter().enumerate() {
            out.push_str(&format!("{lag},{v},{}\n", self.band));
        }
        out
    }
}

/// Standard sample ACF; a constant series reports zero autocorrelation at
/// every positive lag.
pub fn acf(series: &[f64], max_lag: usize) -> AcfTable {
    let n = series.len();
    assert!(n > max_lag, "series length must exceed max_lag");
    let mean = series.iter().sum::<f64>() / n as f64;
    let denom: f64 = series.iter().map(|x| (x - mean).powi(2)).sum();
    let mut values = Vec::with_capacity(max_lag + 1);
    values.push(1.0);
    for lag in 1..=max_lag {
        if denom == 0.0 {
            values.push(0.0);
            continue;
        }
        let num: f64 = (0..n - lag)
            .map(|t| (series[t] - mean) * (series[t + lag] - mean))
            .sum();
        values.push(num / denom);
    }
    AcfTable { values, band: 1.96 / (n as f64).sqrt() }
}

/// One histogram bin with the fitted normal density at its center.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistBin {
    pub left: f64,
    pub right: f64,
    pub count: u64,
    pub normal_density: f64,
}

/// Stylized-fact diagnostics over a set of Monte Carlo replications.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StylizedReport {
    /// Mean of the pooled log returns (the fitted normal location).
    pub fitted_mean: f64,
    /// Standard deviation of the pooled log returns (the fitted normal scale).
    pub fitted_std: f64,
    /// Raw kurtosis of the pooled log returns.
    pub pooled_kurtosis: f64,
    pub histogram: Vec<HistBin>,
    /// `(theoretical_q, sample_q)` pairs against the fitted normal.
    pub qq: Vec<(f64, f64)>,
    /// Mean ACF of returns across replications.
    pub acf_returns: AcfTable,
    /// Mean ACF of absolute returns across replications.
    pub acf_abs_returns: AcfTable,
}

impl StylizedReport {
    pub fn histogram_csv(&self) -> String {
        let mut out = String::from("bin_left,bin_right,count,normal_density\n");
        for b in &self.histogram {
            out.push_str(&format!("{},{},{},{}\n", b.left, b.right, b.count, b.normal_density));
        }
        out
    }

    pub fn qq_csv(&self) -> String {
        let mut out = String::from("theoretical_q,sample_q\n");
        for (t, s) in &self.qq {
            out.push_str(&format!("{t},{s}\n"));
        }
        out
    }
}

/// Build the pooled histogram, Q-Q points, and averaged ACF tables for a set
/// of simulation results.
pub fn stylized_report(
    results: &[SimulationResult],
    max_lag: usize,
) -> Result<StylizedReport, MomentError> {
    assert!(!results.is_empty(), "need at least one replication");
    let mut per_rep_returns = Vec::with_capacity(results.len());
    for r in results {
        per_rep_returns.push(log_returns(r.simulated_prices())?);
    }
    let pooled: Vec<f64> = per_rep_returns.iter().flatten().copied().collect();
    if pooled.len() < 4 {
        return Err(MomentError::TooShort { needed: 4, got: pooled.len() });
    }

    let (fitted_mean, fitted_std) = mean_std(&pooled)?;
    let pooled_kurtosis = kurtosis(&pooled, KurtosisMode::Raw).unwrap_or(f64::NAN);

    let mut sorted = pooled.clone();
    sorted.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
    let histogram = freedman_diaconis_hist(&sorted, fitted_mean, fitted_std);

    let qq_points = sorted.len().min(1000);
    let qq = (0..qq_points)
        .map(|i| {
            let p = (i as f64 + 0.5) / qq_points as f64;
            let theoretical = fitted_mean + fitted_std * norm_quantile(p);
            (theoretical, quantile_sorted(&sorted, p))
        })
        .collect();

    let lag = max_lag.min(per_rep_returns.iter().map(|r| r.len()).min().unwrap() - 1);
    let acf_returns = mean_acf(&per_rep_returns, lag, false);
    let acf_abs_returns = mean_acf(&per_rep_returns, lag, true);

    Ok(StylizedReport {
        fitted_mean,
        fitted_std,
        pooled_kurtosis,
        histogram,
        qq,
        acf_returns,
        acf_abs_returns,
    })
}

fn mean_acf(per_rep: &[Vec<f64>], max_lag: usize, absolute: bool) -> AcfTable {
    let mut sums = vec![0.0; max_lag + 1];
    let mut band = 0.0;
    for rep in per_rep {
        let series: Vec<f64> = if absolute {
            rep.iter().map(|x| x.abs()).collect()
        } else {
            rep.clone()
        };
        let table = acf(&series, max_lag);
        band = table.band;
        for (s, v) in sums.iter_mut().zip(&table.values) {
            *s += v;
        }
    }
    let k = per_rep.len() as f64;
    AcfTable {
        values: sums.into_iter().map(|s| s / k).collect(),
        band,
    }
}

fn freedman_diaconis_hist(sorted: &[f64], mean: f64, std_dev: f64) -> Vec<HistBin> {
    let n = sorted.len();
    let min = sorted[0];
    let max = sorted[n - 1];
    let iqr = quantile_sorted(sorted, 0.75) - quantile_sorted(sorted, 0.25);
    let width = 2.0 * iqr / (n as f64).cbrt();
    let bins = if width > 0.0 && max > min {
        (((max - min) / width).ceil() as usize).clamp(1, 10_000)
    } else {
        1
    };
    let width = if max > min { (max - min) / bins as f64 } else { 1.0 };
    let mut counts = vec![0u64; bins];
    for &x in sorted {
        let idx = (((x - min) / width) as usize).min(bins - 1);
        counts[idx] += 1;
    }
    counts
        .into_iter()
        .enumerate()
        .map(|(i, count)| {
            let left = min + i as f64 * width;
            let right = left + width;
            HistBin {
                left,
                right,
                count,
                normal_density: norm_pdf(0.5 * (left + right), mean, std_dev),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;
    use rand_distr::{Distribution, StandardNormal};

    #[test]
    fn log_series_basics() {
        let prices = [100.0, 100.0 * std::f64::consts::E];
        let lr = log_returns(&prices).unwrap();
        assert_eq!(lr.len(), 1);
        assert!((lr[0] - 1.0).abs() < 1e-12);

        let constant = [5.0; 10];
        assert!(log_returns(&constant).unwrap().iter().all(|&r| r == 0.0));

        let err = log_prices(&[1.0, -2.0, 3.0]).unwrap_err();
        assert_eq!(err, MomentError::NonPositivePrice { index: 1 });
    }

    #[test]
    fn basic_moments_hand_case() {
        let (mean, std, _) = basic_moments(&[1.0, 2.0, 3.0, 4.0, 5.0]).unwrap();
        assert!((mean - 3.0).abs() < 1e-12);
        assert!((std - 2.5f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn alternating_series_attains_minimum_kurtosis() {
        let series: Vec<f64> = (0..100).map(|i| if i % 2 == 0 { -1.0 } else { 1.0 }).collect();
        let k = kurtosis(&series, KurtosisMode::Raw).unwrap();
        assert!((k - 1.0).abs() < 1e-12);
        let ke = kurtosis(&series, KurtosisMode::Excess).unwrap();
        assert!((ke + 2.0).abs() < 1e-12);
    }

    #[test]
    fn normal_sample_kurtosis_near_three() {
        let mut rng = ChaCha12Rng::seed_from_u64(42);
        let series: Vec<f64> = (0..1_000_000).map(|_| StandardNormal.sample(&mut rng)).collect();
        let k = kurtosis(&series, KurtosisMode::Raw).unwrap();
        assert!((k - 3.0).abs() < 0.05, "kurtosis {k}");
    }

    #[test]
    fn constant_series_kurtosis_is_an_error() {
        assert_eq!(kurtosis(&[2.0; 8], KurtosisMode::Raw), Err(MomentError::ConstantSeries));
    }

    #[test]
    fn ks_analytic_cases() {
        assert_eq!(ks_statistic(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]), 0.0);
        assert_eq!(ks_statistic(&[1.0, 2.0], &[10.0, 11.0]), 1.0);
        let d = ks_statistic(&[1.0, 2.0], &[1.0, 2.0, 3.0]);
        assert!((d - 1.0 / 3.0).abs() < 1e-15);
    }

    /// Brute-force oracle: evaluate both empirical CDFs at every merged
    /// support point by counting.
    fn ks_brute(a: &[f64], b: &[f64]) -> f64 {
        let mut support: Vec<f64> = a.iter().chain(b).copied().collect();
        support.sort_unstable_by(|x, y| x.partial_cmp(y).unwrap());
        support.dedup();
        let mut d: f64 = 0.0;
        for &x in &support {
            let fa = a.iter().filter(|&&v| v <= x).count() as f64 / a.len() as f64;
            let fb = b.iter().filter(|&&v| v <= x).count() as f64 / b.len() as f64;
            d = d.max((fa - fb).abs());
        }
        d
    }

    #[test]
    fn ks_matches_brute_force_exactly() {
        let mut rng = ChaCha12Rng::seed_from_u64(9);
        for _ in 0..50 {
            let n = rng.random_range(1..40);
            let m = rng.random_range(1..40);
            // Coarse grid values force plenty of ties.
            let a: Vec<f64> = (0..n).map(|_| rng.random_range(0..10) as f64).collect();
            let b: Vec<f64> = (0..m).map(|_| rng.random_range(0..10) as f64).collect();
            assert_eq!(ks_statistic(&a, &b), ks_brute(&a, &b));
        }
    }

    #[test]
    fn hurst_of_linear_ramp_is_one() {
        let series: Vec<f64> = (0..200).map(|t| 0.37 * t as f64).collect();
        let h = hurst_ghe(&series, GHE_TAU_MAX).unwrap();
        assert!((h - 1.0).abs() < 1e-10, "H = {h}");
    }

    #[test]
    fn hurst_of_brownian_path_near_half() {
        let mut rng = ChaCha12Rng::seed_from_u64(4);
        let mut x = 0.0;
        let series: Vec<f64> = (0..10_000)
            .map(|_| {
                let step: f64 = StandardNormal.sample(&mut rng);
                x += step;
                x
            })
            .collect();
        let h = hurst_ghe(&series, GHE_TAU_MAX).unwrap();
        assert!((h - 0.5).abs() < 0.05, "H = {h}");
    }

    #[test]
    fn hurst_rejects_short_or_constant_series() {
        assert!(hurst_ghe(&[1.0; 20], GHE_TAU_MAX).is_err());
        let short: Vec<f64> = (0..50).map(|t| t as f64).collect();
        assert_eq!(
            hurst_ghe(&short, GHE_TAU_MAX),
            Err(MomentError::TooShort { needed: 95, got: 50 })
        );
    }

    #[test]
    fn moment_vector_against_itself_has_zero_ks() {
        let mut rng = ChaCha12Rng::seed_from_u64(5);
        let mut x = 5.0;
        let series: Vec<f64> = (0..500)
            .map(|_| {
                let step: f64 = StandardNormal.sample(&mut rng);
                x += 0.01 * step;
                x
            })
            .collect();
        let mv = moment_vector(&series, &series).unwrap();
        assert_eq!(mv.ks_stat, 0.0);
        let (mean, std, kurt) = basic_moments(&series).unwrap();
        assert_eq!(mv.mean, mean);
        assert_eq!(mv.std_dev, std);
        assert_eq!(mv.kurtosis, kurt);
        assert_eq!(mv.hurst, hurst_ghe(&series, GHE_TAU_MAX).unwrap());
    }

    #[test]
    fn acf_lag_zero_is_one_and_white_noise_stays_in_band() {
        let mut rng = ChaCha12Rng::seed_from_u64(6);
        let series: Vec<f64> = (0..10_000).map(|_| StandardNormal.sample(&mut rng)).collect();
        let table = acf(&series, 50);
        assert_eq!(table.values[0], 1.0);
        let inside = table.values[1..]
            .iter()
            .filter(|v| v.abs() <= table.band)
            .count();
        assert!(inside >= 47, "only {inside}/50 lags inside the band");
    }

    #[test]
    fn acf_of_ar1_matches_coefficient() {
        let phi = 0.9;
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        let mut x = 0.0;
        let series: Vec<f64> = (0..10_000)
            .map(|_| {
                let eps: f64 = StandardNormal.sample(&mut rng);
                x = phi * x + eps;
                x
            })
            .collect();
        let table = acf(&series, 5);
        assert!((table.values[1] - phi).abs() < 0.02, "acf(1) = {}", table.values[1]);
    }

    #[test]
    fn stylized_report_on_gaussian_input_sits_on_diagonal() {
        // Hand-build pseudo results whose "prices" produce Gaussian returns.
        let mut rng = ChaCha12Rng::seed_from_u64(8);
        let results: Vec<SimulationResult> = (0..4)
            .map(|k| {
                let mut log_p = 0.0;
                let mut prices = vec![100.0];
                for _ in 0..2000 {
                    let step: f64 = StandardNormal.sample(&mut rng);
                    log_p += 0.01 * step;
                    prices.push(100.0 * log_p.exp());
                }
                SimulationResult {
                    market_prices: prices.clone(),
                    fundamentals: vec![100.0; prices.len()],
                    trades_per_session: vec![0; prices.len()],
                    seed: k,
                }
            })
            .collect();
        let report = stylized_report(&results, DEFAULT_ACF_LAGS).unwrap();
        // Gaussian data: Q-Q points near the diagonal away from the extremes.
        for (t, s) in report.qq.iter().skip(20).take(report.qq.len() - 40) {
            assert!(
                (t - s).abs() < 6.0 * report.fitted_std / 10.0,
                "qq point ({t}, {s}) far from diagonal"
            );
        }
        // Counts sum to the pooled sample size (anchor row carries no return).
        let total: u64 = report.histogram.iter().map(|b| b.count).sum();
        assert_eq!(total, 4 * 1999);
        assert!((report.pooled_kurtosis - 3.0).abs() < 0.3);
    }

    proptest! {
        #[test]
        fn ks_symmetric_and_monotone_invariant(
            a in proptest::collection::vec(-50.0f64..50.0, 1..30),
            b in proptest::collection::vec(-50.0f64..50.0, 1..30),
        ) {
            let d1 = ks_statistic(&a, &b);
            let d2 = ks_statistic(&b, &a);
            prop_assert!((d1 - d2).abs() < 1e-15);
            // Apply a common strictly increasing transform.
            let ta: Vec<f64> = a.iter().map(|x| (x / 25.0).exp()).collect();
            let tb: Vec<f64> = b.iter().map(|x| (x / 25.0).exp()).collect();
            prop_assert!((ks_statistic(&ta, &tb) - d1).abs() < 1e-15);
            prop_assert!((0.0..=1.0).contains(&d1));
        }

        #[test]
        fn hurst_affine_invariant(scale in 0.5f64..3.0, shift in -10.0f64..10.0, seed in 0u64..50) {
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            let mut x = 0.0;
            let series: Vec<f64> = (0..300).map(|_| {
                let step: f64 = StandardNormal.sample(&mut rng);
                x += step;
                x
            }).collect();
            let transformed: Vec<f64> = series.iter().map(|v| scale * v + shift).collect();
            let h1 = hurst_ghe(&series, 10).unwrap();
            let h2 = hurst_ghe(&transformed, 10).unwrap();
            prop_assert!((h1 - h2).abs() < 1e-9);
        }

        #[test]
        fn moments_affine_equivariance(scale in 0.1f64..5.0, shift in -10.0f64..10.0, seed in 0u64..50) {
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            let series: Vec<f64> = (0..200).map(|_| -> f64 { StandardNormal.sample(&mut rng) }).collect();
            let transformed: Vec<f64> = series.iter().map(|v| scale * v + shift).collect();
            let (m1, s1, k1) = basic_moments(&series).unwrap();
            let (m2, s2, k2) = basic_moments(&transformed).unwrap();
            prop_assert!((m2 - (scale * m1 + shift)).abs() < 1e-9);
            prop_assert!((s2 - scale * s1).abs() < 1e-9);
            prop_assert!((k2 - k1).abs() < 1e-9, "kurtosis affine-invariant");
        }

        #[test]
        fn acf_values_bounded(seed in 0u64..30) {
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            let series: Vec<f64> = (0..200).map(|_| -> f64 { StandardNormal.sample(&mut rng) }).collect();
            let table = acf(&series, 40);
            prop_assert!(table.values.iter().all(|v| (-1.0..=1.0).contains(v)));
        }
    }
}
