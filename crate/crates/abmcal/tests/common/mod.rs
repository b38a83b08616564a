//! Shared oracles and helpers for integration tests.

use abmcal::lob::{LimitOrder, Side, Trade};

/// Brute-force batch matcher, independent of the order-book implementation:
/// repeatedly scan a flat list for the best bid and best ask (price first,
/// then placement session, then order id), trade at the pair's mean price
/// for the smaller size, and keep going until the spread uncrosses.
pub fn brute_force_clear(
    mut orders: Vec<LimitOrder>,
    session: u32,
) -> (Vec<Trade>, Option<f64>, Vec<LimitOrder>) {
    fn best(orders: &[LimitOrder], side: Side) -> Option<usize> {
        let mut best: Option<usize> = None;
        for (i, o) in orders.iter().enumerate() {
            if o.side != side {
                continue;
            }
            best = Some(match best {
                None => i,
                Some(j) => {
                    let b = &orders[j];
                    let better = match side {
                        Side::Buy => {
                            o.price > b.price
                                || (o.price == b.price
                                    && (o.placed_session, o.order_id)
                                        < (b.placed_session, b.order_id))
                        }
                        Side::Sell => {
                            o.price < b.price
                                || (o.price == b.price
                                    && (o.placed_session, o.order_id)
                                        < (b.placed_session, b.order_id))
                        }
                    };
                    if better {
                        i
                    } else {
                        j
                    }
                }
            });
        }
        best
    }

    let mut trades = Vec::new();
    while let (Some(bi), Some(ai)) = (best(&orders, Side::Buy), best(&orders, Side::Sell)) {
        if orders[bi].price < orders[ai].price {
            break;
        }
        let size = orders[bi].size.min(orders[ai].size);
        trades.push(Trade {
            price: 0.5 * (orders[bi].price + orders[ai].price),
            size,
            session,
            buy_order_id: orders[bi].order_id,
            sell_order_id: orders[ai].order_id,
        });
        orders[bi].size -= size;
        orders[ai].size -= size;
        orders.retain(|o| o.size > 0.0);
    }
    let price = trades.last().map(|t| t.price);
    (trades, price, orders)
}

/// Spearman rank correlation with average ranks for ties.
pub fn spearman(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len());
    let rx = average_ranks(xs);
    let ry = average_ranks(ys);
    pearson(&rx, &ry)
}

fn average_ranks(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap());
    let mut ranks = vec![0.0; n];
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let rank = (i + j) as f64 / 2.0 + 1.0;
        for &idx in &order[i..=j] {
            ranks[idx] = rank;
        }
        i = j + 1;
    }
    ranks
}

fn pearson(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut vx = 0.0;
    let mut vy = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        cov += (x - mx) * (y - my);
        vx += (x - mx) * (x - mx);
        vy += (y - my) * (y - my);
    }
    cov / (vx * vy).sqrt()
}

#[allow(dead_code)]
pub fn assert_close(a: f64, b: f64, tol: f64, label: &str) {
    assert!((a - b).abs() <= tol, "{label}: {a} vs {b} (tol {tol})");
}
