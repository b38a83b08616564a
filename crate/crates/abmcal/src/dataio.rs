//! Tick-data ingestion and one-minute mid-price bars.
//!
//! The tick CSV schema (header required) is
//! `timestamp,kind,price,bid,ask,volume` with ISO-8601 millisecond
//! timestamps (`2013-11-01T09:10:00.123`), `kind` one of `TRADE`, `QUOTE`,
//! `AUCTION`, and optional fields left empty. Bars take the final quote mid
//! of each trading minute inside the 09:10-16:50 window (460 bars per day),
//! carrying the previous mid forward through quote-free minutes.
//!
//! A geometric-random-walk quote generator stands in for proprietary tick
//! history so every pipeline is runnable end to end from a seed.

use std::io::BufRead;

use chrono::{Datelike, NaiveDate, NaiveDateTime, NaiveTime, Weekday};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::stats::quantile_sorted;

pub const TICK_HEADER: &str = "timestamp,kind,price,bid,ask,volume";
pub const BAR_HEADER: &str = "minute,mid_price";
/// Trading-hour window: bars cover [09:10, 16:50).
pub const DAY_START: NaiveTime = match NaiveTime::from_hms_opt(9, 10, 0) {
    Some(t) => t,
    None => unreachable!(),
};
pub const DAY_END: NaiveTime = match NaiveTime::from_hms_opt(16, 50, 0) {
    Some(t) => t,
    None => unreachable!(),
};
/// Minutes per trading day inside the window.
pub const BARS_PER_DAY: usize = 460;

#[derive(Debug, Error)]
pub enum DataError {
    #[error("bad header: expected `{expected}`, found `{found}`")]
    BadHeader { expected: &'static str, found: String },
    #[error("row {line}: {message}")]
    BadRow { line: usize, message: String },
    #[error("need at least {needed} values, got {got}")]
    TooFew { needed: usize, got: usize },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TickKind {
    Trade,
    Quote,
    AuctionQuote,
}

impl TickKind {
    fn parse(s: &str) -> Option<TickKind> {
        match s {
            "TRADE" => Some(TickKind::Trade),
            "QUOTE" => Some(TickKind::Quote),
            "AUCTION" => Some(TickKind::AuctionQuote),
            _ => None,
        }
    }

    fn as_str(&self) -> &'static str {
        match self {
            TickKind::Trade => "TRADE",
            TickKind::Quote => "QUOTE",
            TickKind::AuctionQuote => "AUCTION",
        }
    }
}

/// One tick: a trade, a level-1 quote, or an auction quote.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TickRecord {
    pub timestamp: NaiveDateTime,
    pub kind: TickKind,
    pub price: Option<f64>,
    pub bid: Option<f64>,
    pub ask: Option<f64>,
    pub volume: Option<f64>,
}

impl TickRecord {
    /// Quote mid price, when both sides are present.
    pub fn mid(&self) -> Option<f64> {
        Some(0.5 * (self.bid? + self.ask?))
    }
}

/// One one-minute bar.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PriceBar {
    pub minute: NaiveDateTime,
    pub mid_price: f64,
}

/// Outcome of parsing a tick stream: per-row errors are collected rather
/// than fatal, and out-of-order input is stably sorted with a flag.
#[derive(Debug, Clone)]
pub struct ParsedTicks {
    pub records: Vec<TickRecord>,
    pub row_errors: Vec<(usize, String)>,
    pub was_sorted: bool,
}

fn parse_opt_f64(field: &str, name: &str) -> Result<Option<f64>, String> {
    if field.is_empty() {
        return Ok(None);
    }
    field
        .parse::<f64>()
        .map(Some)
        .map_err(|e| format!("bad {name} `{field}`: {e}"))
}

/// Parse a tick CSV stream. The header must match exactly; malformed rows
/// are reported with their line numbers without aborting the parse.
pub fn parse_ticks<R: BufRead>(reader: R) -> Result<ParsedTicks, DataError> {
    let mut lines = reader.lines();
    let header = lines.next().transpose()?.unwrap_or_default();
    if header.trim_end() != TICK_HEADER {
        return Err(DataError::BadHeader { expected: TICK_HEADER, found: header });
    }
    let mut records = Vec::new();
    let mut row_errors = Vec::new();
    for (idx, line) in lines.enumerate() {
        let line = line?;
        let line_no = idx + 2; // 1-based, after the header
        if line.trim().is_empty() {
            continue;
        }
        match parse_tick_row(&line) {
            Ok(rec) => records.push(rec),
            Err(msg) => row_errors.push((line_no, msg)),
        }
    }
    let was_sorted = records.windows(2).all(|w| w[0].timestamp <= w[1].timestamp);
    if !was_sorted {
        records.sort_by_key(|r| r.timestamp);
    }
    Ok(ParsedTicks { records, row_errors, was_sorted })
}

fn parse_tick_row(line: &str) -> Result<TickRecord, String> {
    let fields: Vec<&str> = line.trim_end().split(',').collect();
    if fields.len() != 6 {
        return Err(format!("expected 6 fields, found {}", fields.len()));
    }
    let timestamp = NaiveDateTime::parse_from_str(fields[0], "%Y-%m-%dT%H:%M:%S%.f")
        .map_err(|e| format!("bad timestamp `{}`: {e}", fields[0]))?;
    let kind = TickKind::parse(fields[1]).ok_or_else(|| format!("bad kind `{}`", fields[1]))?;
    let record = TickRecord {
        timestamp,
        kind,
        price: parse_opt_f64(fields[2], "price")?,
        bid: parse_opt_f64(fields[3], "bid")?,
        ask: parse_opt_f64(fields[4], "ask")?,
        volume: parse_opt_f64(fields[5], "volume")?,
    };
    if record.kind == TickKind::Quote {
        match (record.bid, record.ask) {
            (Some(b), Some(a)) if b > 0.0 && a > 0.0 => {}
            _ => return Err("quote rows need positive bid and ask".to_string()),
        }
    }
    Ok(record)
}

/// Serialize ticks back to the CSV schema.
pub fn ticks_to_csv(ticks: &[TickRecord]) -> String {
    let mut out = String::from(TICK_HEADER);
    out.push('\n');
    let field = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
    for t in ticks {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            t.timestamp.format("%Y-%m-%dT%H:%M:%S%.3f"),
            t.kind.as_str(),
            field(t.price),
            field(t.bid),
            field(t.ask),
            field(t.volume),
        ));
    }
    out
}

/// Aggregate timestamp-ordered ticks into one-minute mid-price bars over
/// `[day_start, day_end)`.
///
/// Each minute takes the mid of its last quote; minutes without quotes carry
/// the previous bar's mid forward (the leading gap backfills from the first
/// in-window quote). Days with ticks but no in-window quotes are skipped
/// with a warning. Every covered day yields exactly 460 bars under the
/// default window.
pub fn bars_from_quotes(
    ticks: &[TickRecord],
    day_start: NaiveTime,
    day_end: NaiveTime,
) -> (Vec<PriceBar>, Vec<String>) {
    let minutes_per_day = ((day_end - day_start).num_minutes()) as usize;
    let mut warnings = Vec::new();

    // Last quote mid per (day, minute slot).
    let mut days: Vec<(NaiveDate, Vec<Option<f64>>)> = Vec::new();
    let mut seen_dates: Vec<NaiveDate> = Vec::new();
    for t in ticks {
        let date = t.timestamp.date();
        if !seen_dates.contains(&date) {
            seen_dates.push(date);
        }
        if t.kind != TickKind::Quote {
            continue;
        }
        let time = t.timestamp.time();
        if time < day_start || time >= day_end {
            continue;
        }
        let Some(mid) = t.mid() else { continue };
        let slot = ((time - day_start).num_seconds() / 60) as usize;
        match days.last_mut() {
            Some((d, slots)) if *d == date => slots[slot] = Some(mid),
            _ => {
                let mut slots = vec![None; minutes_per_day];
                slots[slot] = Some(mid);
                days.push((date, slots));
            }
        }
    }
    for date in &seen_dates {
        if !days.iter().any(|(d, _)| d == date) {
            warnings.push(format!("day {date} has no quotes inside the trading window; skipped"));
        }
    }

    let mut bars = Vec::with_capacity(days.len() * minutes_per_day);
    let mut carry: Option<f64> = None;
    for (date, slots) in &days {
        // Backfill the leading gap of the very first day from its first quote.
        if carry.is_none() {
            carry = slots.iter().flatten().next().copied();
        }
        for (slot, mid) in slots.iter().enumerate() {
            if mid.is_some() {
                carry = *mid;
            }
            let minute = date.and_time(day_start) + chrono::Duration::minutes(slot as i64);
            bars.push(PriceBar {
                minute,
                mid_price: carry.expect("day retained only when it has a quote"),
            });
        }
    }
    (bars, warnings)
}

/// Serialize bars as `minute,mid_price` (minute precision timestamps,
/// shortest round-trip decimals).
pub fn bars_to_csv(bars: &[PriceBar]) -> String {
    let mut out = String::from(BAR_HEADER);
    out.push('\n');
    for b in bars {
        out.push_str(&format!("{},{}\n", b.minute.format("%Y-%m-%dT%H:%M"), b.mid_price));
    }
    out
}

/// Parse a bar CSV produced by `bars_to_csv` (bit-exact round trip).
pub fn bars_from_csv(text: &str) -> Result<Vec<PriceBar>, DataError> {
    let mut lines = text.lines();
    let header = lines.next().unwrap_or_default();
    if header != BAR_HEADER {
        return Err(DataError::BadHeader { expected: BAR_HEADER, found: header.to_string() });
    }
    lines
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(idx, line)| {
            let line_no = idx + 2;
            let (minute, price) = line.split_once(',').ok_or_else(|| DataError::BadRow {
                line: line_no,
                message: "expected `minute,mid_price`".to_string(),
            })?;
            let minute = NaiveDateTime::parse_from_str(minute, "%Y-%m-%dT%H:%M").map_err(|e| {
                DataError::BadRow { line: line_no, message: format!("bad minute `{minute}`: {e}") }
            })?;
            let mid_price: f64 = price.parse().map_err(|e| DataError::BadRow {
                line: line_no,
                message: format!("bad price `{price}`: {e}"),
            })?;
            Ok(PriceBar { minute, mid_price })
        })
        .collect()
}

/// The boxplot outlier interval `[Q1 - 1.5 IQR, Q3 + 1.5 IQR]` with
/// type-7 (linear interpolation) quartiles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TukeyInterval {
    pub lo: f64,
    pub hi: f64,
    pub q1: f64,
    pub q3: f64,
}

impl TukeyInterval {
    pub fn is_outlier(&self, value: f64) -> bool {
        value < self.lo || value > self.hi
    }
}

pub fn tukey_interval(prices: &[f64]) -> Result<TukeyInterval, DataError> {
    if prices.len() < 4 {
        return Err(DataError::TooFew { needed: 4, got: prices.len() });
    }
    let mut sorted = prices.to_vec();
    sorted.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
    let q1 = quantile_sorted(&sorted, 0.25);
    let q3 = quantile_sorted(&sorted, 0.75);
    let iqr = q3 - q1;
    Ok(TukeyInterval { lo: q1 - 1.5 * iqr, hi: q3 + 1.5 * iqr, q1, q3 })
}

/// Settings for the synthetic tick generator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthConfig {
    pub days: usize,
    pub start_date: NaiveDate,
    pub initial_mid: f64,
    /// Per-second relative volatility of the mid random walk.
    pub volatility: f64,
    /// Per-second relative drift.
    pub drift: f64,
    /// Relative bid-ask spread (must be positive).
    pub spread: f64,
    pub seed: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            days: 5,
            start_date: NaiveDate::from_ymd_opt(2013, 11, 1).unwrap(),
            initial_mid: 238.75,
            volatility: 2.0e-5,
            drift: 0.0,
            spread: 4.0e-4,
            seed: 0,
        }
    }
}

fn next_weekday(mut date: NaiveDate) -> NaiveDate {
    loop {
        date = date.succ_opt().expect("date range");
        if !matches!(date.weekday(), Weekday::Sat | Weekday::Sun) {
            return date;
        }
    }
}

fn quantize6(x: f64) -> f64 {
    (x * 1e6).round() / 1e6
}

/// Generate a deterministic per-second quote stream (with sprinkled trades
/// and an opening auction row) over `days` weekdays. Quotes cover 09:00 to
/// 17:00 so the trading-hour filter has something to cut.
pub fn synth_ticks(config: &SynthConfig) -> Vec<TickRecord> {
    assert!(config.spread > 0.0, "spread must be positive");
    assert!(config.volatility >= 0.0);
    let mut rng = ChaCha12Rng::seed_from_u64(config.seed);
    let mut ticks = Vec::new();
    let mut mid = config.initial_mid;
    let mut date = if matches!(config.start_date.weekday(), Weekday::Sat | Weekday::Sun) {
        next_weekday(config.start_date)
    } else {
        config.start_date
    };
    for _ in 0..config.days {
        let open = date.and_time(NaiveTime::from_hms_opt(9, 0, 0).unwrap());
        // Opening auction indication before continuous trading.
        ticks.push(TickRecord {
            timestamp: open - chrono::Duration::seconds(30),
            kind: TickKind::AuctionQuote,
            price: Some(quantize6(mid)),
            bid: Some(quantize6(mid * (1.0 - config.spread))),
            ask: Some(quantize6(mid * (1.0 + config.spread))),
            volume: None,
        });
        for second in 0..(8 * 3600) {
            let z: f64 = StandardNormal.sample(&mut rng);
            mid *= 1.0 + config.drift + config.volatility * z;
            let timestamp = open + chrono::Duration::seconds(second);
            let bid = quantize6(mid * (1.0 - 0.5 * config.spread));
            let ask = quantize6(mid * (1.0 + 0.5 * config.spread));
            ticks.push(TickRecord {
                timestamp,
                kind: TickKind::Quote,
                price: None,
                bid: Some(bid),
                ask: Some(ask),
                volume: None,
            });
            if second % 37 == 0 {
                ticks.push(TickRecord {
                    timestamp,
                    kind: TickKind::Trade,
                    price: Some(quantize6(mid)),
                    bid: None,
                    ask: None,
                    volume: Some((1.0 + rng.random_range(0..500) as f64).round()),
                });
            }
        }
        date = next_weekday(date);
    }
    ticks
}
