//! Direct order-book usage: price-time priority, expiry, and batch clearing.

use abmcal::lob::{LimitOrder, OrderBook, Side};

fn order(id: u64, side: Side, price: f64, size: f64, session: u32, lifetime: u32) -> LimitOrder {
    LimitOrder {
        order_id: id,
        trader_id: id,
        side,
        price,
        size,
        placed_session: session,
        lifetime,
    }
}

fn main() {
    let mut book = OrderBook::new();

    // Resting liquidity from session 1: two bids at the same price level
    // (earlier one keeps priority) and one deep ask.
    book.insert(order(1, Side::Buy, 100.0, 2.0, 1, 20)).unwrap();
    book.insert(order(2, Side::Buy, 100.0, 3.0, 1, 20)).unwrap();
    book.insert(order(3, Side::Sell, 103.0, 5.0, 1, 20)).unwrap();
    // A short-lived order that will expire before session 2 clears.
    book.insert(order(4, Side::Buy, 99.0, 1.0, 1, 1)).unwrap();

    let expired = book.expire(2);
    println!("expired at start of session 2: {:?}", expired.iter().map(|o| o.order_id).collect::<Vec<_>>());

    // Session 2 arrivals cross the spread.
    book.insert(order(5, Side::Sell, 99.5, 4.0, 2, 20)).unwrap();
    book.insert(order(6, Side::Buy, 104.0, 1.5, 2, 20)).unwrap();

    println!(
        "before clearing: best bid {:?}, best ask {:?}",
        book.best_bid().map(|o| (o.order_id, o.price)),
        book.best_ask().map(|o| (o.order_id, o.price)),
    );

    let (trades, market_price) = book.clear_session(2);
    for t in &trades {
        println!(
            "trade: buy #{} x sell #{} -> {:.3} @ {:.4}",
            t.buy_order_id, t.sell_order_id, t.size, t.price
        );
    }
    println!("session market price: {market_price:?}");
    println!(
        "after clearing: best bid {:?}, best ask {:?} ({} orders resting)",
        book.best_bid().map(|o| (o.order_id, o.price, o.size)),
        book.best_ask().map(|o| (o.order_id, o.price, o.size)),
        book.len(),
    );
}
