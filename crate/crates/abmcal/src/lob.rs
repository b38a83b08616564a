//! Limit order book with price-time priority and per-session batch clearing.
//!
//! Orders rest in the book until matched or expired. Matching runs once per
//! session: while the best bid price is at or above the best ask price, the
//! two top orders trade at the arithmetic mean of their prices for the
//! smaller of their remaining sizes. Ties at a price level are broken by
//! placement session, then by order id, so the earliest order always executes
//! first. A partially filled order keeps its queue position with reduced
//! size.

use std::cmp::Reverse;
use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Order side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    Buy,
    Sell,
}

impl Side {
    /// The side a trader of this side trades against.
    pub fn opposite(self) -> Side {
        match self {
            Side::Buy => Side::Sell,
            Side::Sell => Side::Buy,
        }
    }
}

/// A resting limit order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitOrder {
    pub order_id: u64,
    pub trader_id: u64,
    pub side: Side,
    pub price: f64,
    pub size: f64,
    pub placed_session: u32,
    /// Sessions until expiry; an order placed in session `s` with lifetime
    /// `g` is removed at the start of session `s + g`.
    pub lifetime: u32,
}

impl LimitOrder {
    fn validate(&self) -> Result<(), LobError> {
        if self.price.is_nan() || self.price <= 0.0 || !self.price.is_finite() {
            return Err(LobError::InvalidOrder("price must be positive and finite"));
        }
        if self.size.is_nan() || self.size <= 0.0 || !self.size.is_finite() {
            return Err(LobError::InvalidOrder("size must be positive and finite"));
        }
        if self.lifetime < 1 {
            return Err(LobError::InvalidOrder("lifetime must be at least 1 session"));
        }
        Ok(())
    }
}

/// An executed match between one buy and one sell order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trade {
    pub price: f64,
    pub size: f64,
    pub session: u32,
    pub buy_order_id: u64,
    pub sell_order_id: u64,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LobError {
    #[error("duplicate order id {0}")]
    DuplicateOrderId(u64),
    #[error("invalid order: {0}")]
    InvalidOrder(&'static str),
}

/// Total order over positive finite prices via the IEEE-754 bit pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
struct PriceKey(u64);

impl PriceKey {
    fn new(price: f64) -> Self {
        debug_assert!(price > 0.0 && price.is_finite());
        PriceKey(price.to_bits())
    }
}

/// Bids sort by (price desc, session asc, id asc); asks by (price asc,
/// session asc, id asc). Both map onto ascending `BTreeMap` keys so the first
/// entry of either map is the best order on that side.
type BidKey = (Reverse<PriceKey>, u32, u64);
type AskKey = (PriceKey, u32, u64);

#[derive(Debug, Clone, Copy)]
enum StoredKey {
    Bid(BidKey),
    Ask(AskKey),
}

/// The central limit order book.
#[derive(Debug, Default, Clone)]
pub struct OrderBook {
    bids: BTreeMap<BidKey, LimitOrder>,
    asks: BTreeMap<AskKey, LimitOrder>,
    by_id: HashMap<u64, StoredKey>,
    bid_size_sum: f64,
    ask_size_sum: f64,
}

impl OrderBook {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.bids.len() + self.asks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bids.is_empty() && self.asks.is_empty()
    }

    pub fn best_bid(&self) -> Option<&LimitOrder> {
        self.bids.values().next()
    }

    pub fn best_ask(&self) -> Option<&LimitOrder> {
        self.asks.values().next()
    }

    pub fn bids(&self) -> impl Iterator<Item = &LimitOrder> {
        self.bids.values()
    }

    pub fn asks(&self) -> impl Iterator<Item = &LimitOrder> {
        self.asks.values()
    }

    /// Mean resting size on a side, `None` when the side is empty.
    ///
    /// The running sums can lose all significance when order sizes span
    /// hundreds of orders of magnitude (extreme drift regimes explored by
    /// the optimizers); a degraded non-positive sum reports as `None`.
    pub fn mean_size(&self, side: Side) -> Option<f64> {
        let (count, sum) = match side {
            Side::Buy => (self.bids.len(), self.bid_size_sum),
            Side::Sell => (self.asks.len(), self.ask_size_sum),
        };
        if count == 0 {
            return None;
        }
        let mean = sum / count as f64;
        (mean > 0.0 && mean.is_finite()).then_some(mean)
    }

    /// Insert an order at its priority position.
    pub fn insert(&mut self, order: LimitOrder) -> Result<(), LobError> {
        order.validate()?;
        if self.by_id.contains_key(&order.order_id) {
            return Err(LobError::DuplicateOrderId(order.order_id));
        }
        match order.side {
            Side::Buy => {
                let key = (
                    Reverse(PriceKey::new(order.price)),
                    order.placed_session,
                    order.order_id,
                );
                self.by_id.insert(order.order_id, StoredKey::Bid(key));
                self.bid_size_sum += order.size;
                self.bids.insert(key, order);
            }
            Side::Sell => {
                let key = (
                    PriceKey::new(order.price),
                    order.placed_session,
                    order.order_id,
                );
                self.by_id.insert(order.order_id, StoredKey::Ask(key));
                self.ask_size_sum += order.size;
                self.asks.insert(key, order);
            }
        }
        Ok(())
    }

    fn remove_by_id(&mut self, order_id: u64) -> Option<LimitOrder> {
        let removed = match self.by_id.remove(&order_id)? {
            StoredKey::Bid(key) => {
                let order = self.bids.remove(&key)?;
                self.bid_size_sum -= order.size;
                order
            }
            StoredKey::Ask(key) => {
                let order = self.asks.remove(&key)?;
                self.ask_size_sum -= order.size;
                order
            }
        };
        Some(removed)
    }

    /// Remove every order whose lifetime has elapsed by `current_session`,
    /// returning the removed orders.
    pub fn expire(&mut self, current_session: u32) -> Vec<LimitOrder> {
        let expired_ids: Vec<u64> = self
            .bids
            .values()
            .chain(self.asks.values())
            .filter(|o| current_session.saturating_sub(o.placed_session) >= o.lifetime)
            .map(|o| o.order_id)
            .collect();
        expired_ids
            .into_iter()
            .filter_map(|id| self.remove_by_id(id))
            .collect()
    }

    /// Batch-clear the book for one session.
    ///
    /// Returns the executed trades in order and the session market price,
    /// i.e. the price of the final trade (`None` when the spread never
    /// crossed). Afterwards the spread is uncrossed or one side is empty.
    pub fn clear_session(&mut self, session: u32) -> (Vec<Trade>, Option<f64>) {
        let mut trades = Vec::new();
        loop {
            let (bid_key, ask_key, trade) = {
                let (Some((bk, bid)), Some((ak, ask))) =
                    (self.bids.first_key_value(), self.asks.first_key_value())
                else {
                    break;
                };
                if bid.price < ask.price {
                    break;
                }
                let size = bid.size.min(ask.size);
                (
                    *bk,
                    *ak,
                    Trade {
                        price: 0.5 * (bid.price + ask.price),
                        size,
                        session,
                        buy_order_id: bid.order_id,
                        sell_order_id: ask.order_id,
                    },
                )
            };
            let size = trade.size;
            {
                let bid = self.bids.get_mut(&bid_key).expect("bid present");
                bid.size -= size;
                let exhausted = bid.size <= 0.0;
                self.bid_size_sum -= size;
                if exhausted {
                    let id = bid.order_id;
                    self.bids.remove(&bid_key);
                    self.by_id.remove(&id);
                }
            }
            {
                let ask = self.asks.get_mut(&ask_key).expect("ask present");
                ask.size -= size;
                let exhausted = ask.size <= 0.0;
                self.ask_size_sum -= size;
                if exhausted {
                    let id = ask.order_id;
                    self.asks.remove(&ask_key);
                    self.by_id.remove(&id);
                }
            }
            trades.push(trade);
        }
        let market_price = trades.last().map(|t| t.price);
        (trades, market_price)
    }
}
