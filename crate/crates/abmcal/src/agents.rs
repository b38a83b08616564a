//! Trader behavioral rules.
//!
//! Low-frequency (LF) traders activate on a chronological schedule and place
//! a single limit order sized by either a chartist rule (recent price change)
//! or a fundamentalist rule (deviation from fundamental value), at a price
//! set by a one-step geometric perturbation of the previous market price.
//! High-frequency (HF) traders activate on events (relative price moves
//! exceeding a per-trader threshold), size orders from the liquidity resting
//! on the opposite book side, and price them just beyond the current best
//! quote.
//!
//! All rules are pure functions over explicit RNG handles. Sign convention:
//! positive demand buys, negative demand sells.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lob::{LimitOrder, Side};

/// Full model parameter vector, including the session count and the initial
/// price anchors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    /// Number of trading sessions.
    #[serde(rename = "T")]
    pub t: u32,
    /// Number of low-frequency traders.
    #[serde(rename = "N_L")]
    pub n_l: u32,
    /// Number of high-frequency traders.
    #[serde(rename = "N_H")]
    pub n_h: u32,
    /// Mean LF trading frequency, in sessions.
    pub theta: f64,
    pub theta_min: f64,
    pub theta_max: f64,
    /// Chartist demand coefficient, in (0, 1).
    pub alpha_c: f64,
    /// Chartist demand noise scale.
    pub sigma_c: f64,
    /// Fundamentalist demand coefficient, in (0, 1).
    pub alpha_f: f64,
    /// Fundamentalist demand noise scale.
    pub sigma_f: f64,
    /// Fundamental-value shock scale.
    pub sigma_y: f64,
    /// Per-session drift of the fundamental value and LF order prices.
    pub delta: f64,
    /// LF order-price shock scale.
    pub sigma_z: f64,
    /// Intensity of strategy switching.
    pub zeta: f64,
    /// LF order lifetime, in sessions.
    #[serde(rename = "gamma_L")]
    pub gamma_l: u32,
    /// HF order lifetime, in sessions; must be below `gamma_L`.
    #[serde(rename = "gamma_H")]
    pub gamma_h: u32,
    /// HF activation-threshold bounds.
    pub eta_min: f64,
    pub eta_max: f64,
    /// HF order-size weight on opposite-side mean volume, in (0, 1).
    pub lambda: f64,
    /// HF price-perturbation bounds.
    pub kappa_min: f64,
    pub kappa_max: f64,
    /// Market-price lag seeds: the two prices preceding session 1.
    #[serde(rename = "P0")]
    pub p0: f64,
    #[serde(rename = "P1")]
    pub p1: f64,
    /// Initial fundamental value.
    #[serde(rename = "F0")]
    pub f0: f64,
}

#[derive(Debug, Error, PartialEq)]
pub enum ParamError {
    #[error("invalid parameters: {0}")]
    Invalid(String),
    #[error("unknown parameter name: {0}")]
    UnknownName(String),
}

impl ModelParams {
    /// Baseline parameterization that reproduces the usual log-return
    /// stylized facts (fat tails, volatility clustering) out of the box.
    pub fn stylized_baseline() -> Self {
        ModelParams {
            t: 1200,
            n_l: 10_000,
            n_h: 100,
            theta: 20.0,
            theta_min: 10.0,
            theta_max: 40.0,
            alpha_c: 0.04,
            sigma_c: 0.05,
            alpha_f: 0.04,
            sigma_f: 0.01,
            sigma_y: 0.01,
            delta: 0.0001,
            sigma_z: 0.01,
            zeta: 1.0,
            gamma_l: 20,
            gamma_h: 1,
            eta_min: 0.0,
            eta_max: 0.2,
            lambda: 0.625,
            kappa_min: 0.0,
            kappa_max: 0.01,
            p0: 100.0,
            p1: 100.0,
            f0: 100.0,
        }
    }

    pub fn validate(&self) -> Result<(), ParamError> {
        let fail = |msg: &str| Err(ParamError::Invalid(msg.to_string()));
        if self.t < 1 {
            return fail("T must be at least 1");
        }
        if self.n_l < 1 {
            return fail("N_L must be at least 1");
        }
        let outside_unit = |v: f64| v.is_nan() || v <= 0.0 || v >= 1.0;
        if outside_unit(self.alpha_c) {
            return fail("alpha_c must lie in (0, 1)");
        }
        if outside_unit(self.alpha_f) {
            return fail("alpha_f must lie in (0, 1)");
        }
        if self.delta.is_nan() || self.delta < 0.0 {
            return fail("delta must be non-negative");
        }
        if self.zeta.is_nan() || self.zeta <= 0.0 {
            return fail("zeta must be positive");
        }
        if self.gamma_h >= self.gamma_l {
            return fail("gamma_H must be below gamma_L");
        }
        if self.gamma_h < 1 {
            return fail("gamma_H must be at least 1");
        }
        if self.theta_min.is_nan() || self.theta_min < 1.0 {
            return fail("theta_min must be at least 1");
        }
        if self.theta.is_nan()
            || self.theta_max.is_nan()
            || self.theta < self.theta_min
            || self.theta > self.theta_max
        {
            return fail("theta must lie in [theta_min, theta_max]");
        }
        let bad_bounds = |lo: f64, hi: f64| lo.is_nan() || hi.is_nan() || lo > hi || lo < 0.0;
        if bad_bounds(self.eta_min, self.eta_max) {
            return fail("eta bounds must satisfy 0 <= eta_min <= eta_max");
        }
        if bad_bounds(self.kappa_min, self.kappa_max) {
            return fail("kappa bounds must satisfy 0 <= kappa_min <= kappa_max");
        }
        if outside_unit(self.lambda) {
            return fail("lambda must lie in (0, 1)");
        }
        for (name, v) in [
            ("sigma_c", self.sigma_c),
            ("sigma_f", self.sigma_f),
            ("sigma_y", self.sigma_y),
            ("sigma_z", self.sigma_z),
        ] {
            if v.is_nan() || v < 0.0 {
                return Err(ParamError::Invalid(format!("{name} must be non-negative")));
            }
        }
        for (name, v) in [("P0", self.p0), ("P1", self.p1), ("F0", self.f0)] {
            if v.is_nan() || v <= 0.0 || !v.is_finite() {
                return Err(ParamError::Invalid(format!("{name} must be positive")));
            }
        }
        Ok(())
    }

    /// Read a parameter by its serialized name.
    pub fn get(&self, name: &str) -> Result<f64, ParamError> {
        Ok(match name {
            "T" => self.t as f64,
            "N_L" => self.n_l as f64,
            "N_H" => self.n_h as f64,
            "theta" => self.theta,
            "theta_min" => self.theta_min,
            "theta_max" => self.theta_max,
            "alpha_c" => self.alpha_c,
            "sigma_c" => self.sigma_c,
            "alpha_f" => self.alpha_f,
            "sigma_f" => self.sigma_f,
            "sigma_y" => self.sigma_y,
            "delta" => self.delta,
            "sigma_z" => self.sigma_z,
            "zeta" => self.zeta,
            "gamma_L" => self.gamma_l as f64,
            "gamma_H" => self.gamma_h as f64,
            "eta_min" => self.eta_min,
            "eta_max" => self.eta_max,
            "lambda" => self.lambda,
            "kappa_min" => self.kappa_min,
            "kappa_max" => self.kappa_max,
            "P0" => self.p0,
            "P1" => self.p1,
            "F0" => self.f0,
            other => return Err(ParamError::UnknownName(other.to_string())),
        })
    }

    /// Set a parameter by its serialized name. Integer-valued fields round
    /// to the nearest integer.
    pub fn set(&mut self, name: &str, value: f64) -> Result<(), ParamError> {
        match name {
            "T" => self.t = value.round().max(1.0) as u32,
            "N_L" => self.n_l = value.round().max(0.0) as u32,
            "N_H" => self.n_h = value.round().max(0.0) as u32,
            "theta" => self.theta = value,
            "theta_min" => self.theta_min = value,
            "theta_max" => self.theta_max = value,
            "alpha_c" => self.alpha_c = value,
            "sigma_c" => self.sigma_c = value,
            "alpha_f" => self.alpha_f = value,
            "sigma_f" => self.sigma_f = value,
            "sigma_y" => self.sigma_y = value,
            "delta" => self.delta = value,
            "sigma_z" => self.sigma_z = value,
            "zeta" => self.zeta = value,
            "gamma_L" => self.gamma_l = value.round().max(1.0) as u32,
            "gamma_H" => self.gamma_h = value.round().max(1.0) as u32,
            "eta_min" => self.eta_min = value,
            "eta_max" => self.eta_max = value,
            "lambda" => self.lambda = value,
            "kappa_min" => self.kappa_min = value,
            "kappa_max" => self.kappa_max = value,
            "P0" => self.p0 = value,
            "P1" => self.p1 = value,
            "F0" => self.f0 = value,
            other => return Err(ParamError::UnknownName(other.to_string())),
        }
        Ok(())
    }
}

/// LF trading strategy for one activation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Strategy {
    Chartist,
    Fundamentalist,
}

/// The most recent order a trader placed, kept for profit evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LastOrder {
    pub session: u32,
    pub strategy: Strategy,
    pub price: f64,
    pub signed_size: f64,
}

/// A low-frequency trader.
#[derive(Debug, Clone, PartialEq)]
pub struct LfTrader {
    pub id: u64,
    /// Chronological trading frequency, in sessions.
    pub frequency: u32,
    pub strategy: Strategy,
    /// Probability of choosing the chartist strategy at the next activation.
    pub prob_chartist: f64,
    pub last_order: Option<LastOrder>,
    /// Next scheduled activation session. Initial phases are randomized per
    /// trader; anchoring every clock to session 1 would synchronize the
    /// population and leave most sessions without any LF activity (a trader
    /// with frequency f would act only when f divides t - 1).
    pub next_activation: u32,
}

impl LfTrader {
    pub fn sample<R: Rng>(id: u64, params: &ModelParams, rng: &mut R) -> Self {
        let frequency =
            sample_lf_frequency(rng, params.theta, params.theta_min, params.theta_max)
                .expect("validated params");
        let next_activation = 2 + rng.random_range(0..frequency);
        LfTrader {
            id,
            frequency,
            strategy: Strategy::Chartist,
            prob_chartist: 0.5,
            last_order: None,
            next_activation,
        }
    }
}

/// A high-frequency trader.
#[derive(Debug, Clone, PartialEq)]
pub struct HfTrader {
    pub id: u64,
    /// Relative price move that activates the trader.
    pub activation_threshold: f64,
}

impl HfTrader {
    pub fn sample<R: Rng>(id: u64, params: &ModelParams, rng: &mut R) -> Self {
        let activation_threshold = if params.eta_max > params.eta_min {
            rng.random_range(params.eta_min..params.eta_max)
        } else {
            params.eta_min
        };
        HfTrader {
            id,
            activation_threshold,
        }
    }
}

/// Inverse-CDF sample of an exponential with mean `mean`, restricted to
/// `[lo, hi]`.
pub fn truncated_exp<R: Rng>(rng: &mut R, mean: f64, lo: f64, hi: f64) -> f64 {
    debug_assert!(mean > 0.0 && lo <= hi);
    if lo == hi {
        return lo;
    }
    let u: f64 = rng.random();
    let flo = (-lo / mean).exp();
    let fhi = (-hi / mean).exp();
    -mean * (flo - u * (flo - fhi)).ln()
}

/// Sample an LF trading frequency: truncated exponential with mean `theta`
/// on `[theta_min, theta_max]`, rounded to the nearest whole session and
/// clamped back into the bounds.
pub fn sample_lf_frequency<R: Rng>(
    rng: &mut R,
    theta: f64,
    theta_min: f64,
    theta_max: f64,
) -> Result<u32, ParamError> {
    if theta_max < theta_min {
        return Err(ParamError::Invalid(
            "theta_max must not be below theta_min".to_string(),
        ));
    }
    let x = truncated_exp(rng, theta, theta_min, theta_max);
    Ok(x.round().clamp(theta_min, theta_max) as u32)
}

/// Chartist demand: responds to the most recent price change.
pub fn chartist_size<R: Rng>(
    alpha_c: f64,
    sigma_c: f64,
    p_prev: f64,
    p_prev2: f64,
    rng: &mut R,
) -> f64 {
    let eps: f64 = StandardNormal.sample(rng);
    alpha_c * (p_prev - p_prev2) + sigma_c * eps
}

/// Fundamentalist demand: responds to the gap between the fundamental value
/// and the last market price.
pub fn fundamentalist_size<R: Rng>(
    alpha_f: f64,
    sigma_f: f64,
    f_now: f64,
    p_prev: f64,
    rng: &mut R,
) -> f64 {
    let eps: f64 = StandardNormal.sample(rng);
    alpha_f * (f_now - p_prev) + sigma_f * eps
}

/// One step of the fundamental-value process.
pub fn update_fundamental<R: Rng>(f_prev: f64, delta: f64, sigma_y: f64, rng: &mut R) -> f64 {
    let y: f64 = StandardNormal.sample(rng);
    f_prev * (1.0 + delta) * (1.0 + sigma_y * y)
}

/// LF limit-order price: a one-step geometric perturbation of the previous
/// market price. Non-positive draws (possible since the shock is Gaussian)
/// are resampled.
pub fn lf_order_price<R: Rng>(p_prev: f64, delta: f64, sigma_z: f64, rng: &mut R) -> f64 {
    loop {
        let z: f64 = StandardNormal.sample(rng);
        let price = p_prev * (1.0 + delta) * (1.0 + sigma_z * z);
        if price > 0.0 {
            return price;
        }
    }
}

/// Convert a signed LF demand into a limit order; zero (or non-finite)
/// demand places none.
pub fn lf_to_order(
    signed_size: f64,
    price: f64,
    gamma_l: u32,
    session: u32,
    trader_id: u64,
    order_id: u64,
) -> Option<LimitOrder> {
    if signed_size == 0.0 || !signed_size.is_finite() || !price.is_finite() || price <= 0.0 {
        return None;
    }
    Some(LimitOrder {
        order_id,
        trader_id,
        side: if signed_size > 0.0 { Side::Buy } else { Side::Sell },
        price,
        size: signed_size.abs(),
        placed_session: session,
        lifetime: gamma_l,
    })
}

/// LF session profit for a signed demand.
pub fn lf_profit(market_price: f64, order_price: f64, signed_size: f64) -> f64 {
    (market_price - order_price) * signed_size
}

/// Probability of playing the chartist strategy next, from the two strategy
/// profits. Computed as an overflow-safe softmax in `pi / zeta`.
pub fn chartist_probability(pi_c: f64, pi_f: f64, zeta: f64) -> f64 {
    debug_assert!(zeta > 0.0);
    let a = pi_c / zeta;
    let b = pi_f / zeta;
    let m = a.max(b);
    let ea = (a - m).exp();
    let eb = (b - m).exp();
    ea / (ea + eb)
}

/// HF activation test: relative price move strictly above the threshold.
pub fn hf_is_active(p_prev: f64, p_prev2: f64, threshold: f64) -> bool {
    debug_assert!(p_prev2 > 0.0);
    ((p_prev - p_prev2) / p_prev2).abs() > threshold
}

/// HF order size: exponential with mean `lambda` times the mean resting size
/// on the opposite book side. An empty opposite side yields no order.
pub fn hf_order_size<R: Rng>(
    opposite_mean_size: Option<f64>,
    lambda: f64,
    rng: &mut R,
) -> Option<f64> {
    let mean = lambda * opposite_mean_size?;
    if mean.is_nan() || mean <= 0.0 || !mean.is_finite() {
        return None;
    }
    loop {
        let u: f64 = rng.random();
        let size = -mean * (1.0 - u).ln();
        if size == 0.0 {
            continue;
        }
        return size.is_finite().then_some(size);
    }
}

/// HF order price: a seller undercuts the best bid, a buyer overbids the
/// best ask, each by a uniform factor in `[kappa_min, kappa_max]`. Returns
/// `None` when the referenced side of the book is empty.
pub fn hf_order_price<R: Rng>(
    best_bid: Option<f64>,
    best_ask: Option<f64>,
    side: Side,
    kappa_min: f64,
    kappa_max: f64,
    rng: &mut R,
) -> Option<f64> {
    let reference = match side {
        Side::Sell => best_bid?,
        Side::Buy => best_ask?,
    };
    let kappa = if kappa_max > kappa_min {
        rng.random_range(kappa_min..kappa_max)
    } else {
        kappa_min
    };
    Some(match side {
        Side::Sell => reference * (1.0 - kappa),
        Side::Buy => reference * (1.0 + kappa),
    })
}

/// HF session profit; the sign convention matches `lf_profit` (buys gain
/// when the market price ends above the order price).
pub fn hf_profit(market_price: f64, order_price: f64, size: f64, side: Side) -> f64 {
    let signed = match side {
        Side::Buy => size,
        Side::Sell => -size,
    };
    (market_price - order_price) * signed
}
