//! The two-phase pipeline: enumerate candidate zero patterns for a given
//! order and weight, then try to sign each one. First per-order proof of
//! existence (order 7, weight 4) and of non-existence (order 3, weight 2).
//!
//! Run with: cargo run --example full_search

use oddgeom::{search_weighing, SearchBudget};

fn main() {
    // Order 7, weight 4: the pattern phase finds Fano planes and the sign
    // phase completes one. The stats aggregate both phases.
    let (found, stats) = search_weighing(7, 4, &SearchBudget::generous()).unwrap();
    println!("order 7, weight 4:");
    print!("{stats}");
    let matrix = found.expect("an order-7 weight-4 matrix exists");
    println!("\nfound:");
    print!("{}", matrix.to_text());
    assert!(matrix.verify().is_valid());

    // Order 3, weight 2: the allowed intersection sizes force all three
    // size-1 zero lines onto one point, which exceeds the degree bound —
    // the space is exhausted with no solution. That is a proof of
    // non-existence, and the completion field says so.
    let (none, stats) = search_weighing(3, 2, &SearchBudget::generous()).unwrap();
    println!("\norder 3, weight 2:");
    print!("{stats}");
    assert!(none.is_none());
    assert!(stats.completion.is_complete());
    println!("\nexhausted: no order-3 weight-2 matrix exists");
}
