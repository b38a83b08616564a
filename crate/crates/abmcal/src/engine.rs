//! The simulation loop and Monte Carlo replication harness.
//!
//! Session 1 is an opening auction in which every LF trader places an order
//! under a fair-coin initial strategy. Each later session runs, in order:
//! order expiry, LF activation and order placement, HF activation and order
//! placement, batch clearing, market-price bookkeeping (carrying the previous
//! price forward when no trades occur), profit calculation, and strategy
//! updates. A simulation is fully determined by `(params, seed)`; the master
//! seed splits into per-purpose substreams so LF draws, HF draws, and
//! fundamental shocks never interleave.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::agents::{
    self, HfTrader, LastOrder, LfTrader, ModelParams, ParamError, Strategy,
};
use crate::lob::{LimitOrder, OrderBook, Side};
use crate::rng::{derive_seed, stream_rng, Stream};

/// Market prices, fundamental values, and per-session trade counts for one
/// run. All three vectors have length `T + 1`; index 0 holds the pre-session
/// anchors (the market price entering session 1 and the initial fundamental
/// value) so index `t` lines up with session `t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationResult {
    pub market_prices: Vec<f64>,
    pub fundamentals: Vec<f64>,
    pub trades_per_session: Vec<u32>,
    pub seed: u64,
}

impl SimulationResult {
    /// Sessions simulated (excludes the prepended anchor row).
    pub fn sessions(&self) -> usize {
        self.market_prices.len() - 1
    }

    /// The simulated market-price path `P_1..P_T`, without the anchor.
    pub fn simulated_prices(&self) -> &[f64] {
        &self.market_prices[1..]
    }

    /// Serialize as CSV with columns `session,market_price,fundamental,trade_count`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("session,market_price,fundamental,trade_count\n");
        for (t, ((p, f), n)) in self
            .market_prices
            .iter()
            .zip(&self.fundamentals)
            .zip(&self.trades_per_session)
            .enumerate()
        {
            out.push_str(&format!("{t},{p},{f},{n}\n"));
        }
        out
    }
}

/// One recorded simulation event, for inspecting session structure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceEvent {
    pub session: u32,
    pub kind: TraceKind,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TraceKind {
    Expired { orders: u32 },
    LfActivated { trader: u64 },
    LfOrderPlaced { trader: u64, order: u64 },
    HfActivated { trader: u64 },
    HfOrderPlaced { trader: u64, order: u64 },
    Cleared { trades: u32 },
    PriceRecorded { price: f64 },
}

/// Run one simulation.
pub fn run_simulation(params: &ModelParams, seed: u64) -> Result<SimulationResult, ParamError> {
    run_inner(params, seed, None)
}

/// Run one simulation while recording an event trace.
pub fn run_simulation_traced(
    params: &ModelParams,
    seed: u64,
) -> Result<(SimulationResult, Vec<TraceEvent>), ParamError> {
    let mut trace = Vec::new();
    let result = run_inner(params, seed, Some(&mut trace))?;
    Ok((result, trace))
}

/// Run `replications` independent simulations with seeds derived from
/// `(master_seed, index)`. Results are identical regardless of how many
/// worker threads execute them.
pub fn run_replications(
    params: &ModelParams,
    master_seed: u64,
    replications: usize,
) -> Result<Vec<SimulationResult>, ParamError> {
    params.validate()?;
    (0..replications)
        .into_par_iter()
        .map(|k| run_simulation(params, derive_seed(master_seed, k as u64)))
        .collect()
}

struct HfPlacement {
    trader_idx: usize,
    side: Side,
    price: f64,
    size: f64,
}

fn run_inner(
    params: &ModelParams,
    seed: u64,
    mut trace: Option<&mut Vec<TraceEvent>>,
) -> Result<SimulationResult, ParamError> {
    params.validate()?;

    let mut lf_setup = stream_rng(seed, Stream::LfSetup);
    let mut hf_setup = stream_rng(seed, Stream::HfSetup);
    let mut fundamental_rng = stream_rng(seed, Stream::Fundamental);
    let mut lf_rng = stream_rng(seed, Stream::LfSession);
    let mut hf_rng = stream_rng(seed, Stream::HfSession);

    let mut lf_traders: Vec<LfTrader> = (0..params.n_l as u64)
        .map(|id| LfTrader::sample(id, params, &mut lf_setup))
        .collect();
    let hf_traders: Vec<HfTrader> = (0..params.n_h as u64)
        .map(|id| HfTrader::sample(id, params, &mut hf_setup))
        .collect();

    let t_total = params.t;
    let mut book = OrderBook::new();
    let mut next_order_id: u64 = 1;

    let mut market_prices = Vec::with_capacity(t_total as usize + 1);
    let mut fundamentals = Vec::with_capacity(t_total as usize + 1);
    let mut trades_per_session = Vec::with_capacity(t_total as usize + 1);
    market_prices.push(params.p1);
    fundamentals.push(params.f0);
    trades_per_session.push(0);

    // Lagged market prices entering session 1.
    let mut p_prev = params.p1;
    let mut p_prev2 = params.p0;
    let mut f_now = params.f0;

    let mut hf_placements: Vec<HfPlacement> = Vec::new();

    for t in 1..=t_total {
        // (a) Expire orders whose lifetime has elapsed.
        let expired = book.expire(t);
        if let Some(tr) = trace.as_deref_mut() {
            tr.push(TraceEvent {
                session: t,
                kind: TraceKind::Expired {
                    orders: expired.len() as u32,
                },
            });
        }

        // Exogenous fundamental-value step.
        f_now = agents::update_fundamental(f_now, params.delta, params.sigma_y, &mut fundamental_rng);

        // (b)-(c) LF traders activate and place orders. Session 1 is the
        // opening auction: everyone participates without consuming their
        // scheduled activation.
        for trader in lf_traders.iter_mut() {
            let active = t == 1 || t >= trader.next_activation;
            if !active {
                continue;
            }
            if t >= 2 {
                trader.next_activation = t + trader.frequency;
            }
            if let Some(tr) = trace.as_deref_mut() {
                tr.push(TraceEvent {
                    session: t,
                    kind: TraceKind::LfActivated { trader: trader.id },
                });
            }
            let strategy = if lf_rng.random::<f64>() < trader.prob_chartist {
                Strategy::Chartist
            } else {
                Strategy::Fundamentalist
            };
            trader.strategy = strategy;
            let signed_size = match strategy {
                Strategy::Chartist => {
                    agents::chartist_size(params.alpha_c, params.sigma_c, p_prev, p_prev2, &mut lf_rng)
                }
                Strategy::Fundamentalist => {
                    agents::fundamentalist_size(params.alpha_f, params.sigma_f, f_now, p_prev, &mut lf_rng)
                }
            };
            let price = agents::lf_order_price(p_prev, params.delta, params.sigma_z, &mut lf_rng);
            trader.last_order = Some(LastOrder {
                session: t,
                strategy,
                price,
                signed_size,
            });
            if let Some(order) =
                agents::lf_to_order(signed_size, price, params.gamma_l, t, trader.id, next_order_id)
            {
                next_order_id += 1;
                let order_id = order.order_id;
                book.insert(order).expect("fresh order id");
                if let Some(tr) = trace.as_deref_mut() {
                    tr.push(TraceEvent {
                        session: t,
                        kind: TraceKind::LfOrderPlaced {
                            trader: trader.id,
                            order: order_id,
                        },
                    });
                }
            }
        }

        // (d)-(e) HF traders; excluded from the opening auction because the
        // activation rule needs two prior market prices.
        hf_placements.clear();
        if t >= 2 {
            for (idx, trader) in hf_traders.iter().enumerate() {
                if !agents::hf_is_active(p_prev, p_prev2, trader.activation_threshold) {
                    continue;
                }
                if let Some(tr) = trace.as_deref_mut() {
                    tr.push(TraceEvent {
                        session: t,
                        kind: TraceKind::HfActivated { trader: trader.id },
                    });
                }
                let side = if hf_rng.random::<f64>() < 0.5 {
                    Side::Buy
                } else {
                    Side::Sell
                };
                // Size references the liquidity the order would trade
                // against; an empty opposite side means no order.
                let Some(size) =
                    agents::hf_order_size(book.mean_size(side.opposite()), params.lambda, &mut hf_rng)
                else {
                    continue;
                };
                let best_bid = book.best_bid().map(|o| o.price);
                let best_ask = book.best_ask().map(|o| o.price);
                let Some(price) = agents::hf_order_price(
                    best_bid,
                    best_ask,
                    side,
                    params.kappa_min,
                    params.kappa_max,
                    &mut hf_rng,
                ) else {
                    continue;
                };
                let order = LimitOrder {
                    order_id: next_order_id,
                    trader_id: params.n_l as u64 + trader.id,
                    side,
                    price,
                    size,
                    placed_session: t,
                    lifetime: params.gamma_h,
                };
                next_order_id += 1;
                let order_id = order.order_id;
                book.insert(order).expect("fresh order id");
                hf_placements.push(HfPlacement {
                    trader_idx: idx,
                    side,
                    price,
                    size,
                });
                if let Some(tr) = trace.as_deref_mut() {
                    tr.push(TraceEvent {
                        session: t,
                        kind: TraceKind::HfOrderPlaced {
                            trader: trader.id,
                            order: order_id,
                        },
                    });
                }
            }
        }

        // (f)-(g) Batch clearing and market-price bookkeeping.
        let (trades, session_price) = book.clear_session(t);
        let market_price = session_price.unwrap_or(p_prev);
        if let Some(tr) = trace.as_deref_mut() {
            tr.push(TraceEvent {
                session: t,
                kind: TraceKind::Cleared {
                    trades: trades.len() as u32,
                },
            });
            tr.push(TraceEvent {
                session: t,
                kind: TraceKind::PriceRecorded {
                    price: market_price,
                },
            });
        }

        // (h)-(i) Profits on this session's orders, then strategy updates.
        for trader in lf_traders.iter_mut() {
            let Some(last) = trader.last_order else { continue };
            if last.session != t {
                continue;
            }
            let profit = agents::lf_profit(market_price, last.price, last.signed_size);
            let (pi_c, pi_f) = match last.strategy {
                Strategy::Chartist => (profit, 0.0),
                Strategy::Fundamentalist => (0.0, profit),
            };
            let phi = agents::chartist_probability(pi_c, pi_f, params.zeta);
            if phi.is_finite() {
                trader.prob_chartist = phi;
            }
        }
        // HF profits do not feed back into behavior; evaluate them anyway so
        // the bookkeeping mirrors the session structure.
        let mut _hf_session_profit = 0.0;
        for placement in &hf_placements {
            let _ = hf_traders[placement.trader_idx].id;
            _hf_session_profit +=
                agents::hf_profit(market_price, placement.price, placement.size, placement.side);
        }

        market_prices.push(market_price);
        fundamentals.push(f_now);
        trades_per_session.push(trades.len() as u32);
        p_prev2 = p_prev;
        p_prev = market_price;
    }

    Ok(SimulationResult {
        market_prices,
        fundamentals,
        trades_per_session,
        seed,
    })
}
