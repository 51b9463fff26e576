//! Budgeted truncation and resume at the order-23 weight-16 target, whose
//! existence is open. Every run is budget-bounded; a truncated run reports
//! its unfinished roots, and a later run can pick them up exactly.
//!
//! Run with: cargo run --example budgeted_run

use oddgeom::search::{read_frontier, write_frontier, GeometrySearch};
use oddgeom::{OddGeometryParams, SearchBudget};

fn main() {
    let params = OddGeometryParams::w23();
    println!("target: {params}");

    // A deliberately small node budget: the run stops cleanly, says why,
    // and hands back the frontier of unfinished subtrees.
    let first = GeometrySearch::new(params.clone(), SearchBudget::new(500_000, 60, 1)).run();
    println!("\nfirst run:");
    print!("{}", first.stats);
    println!("unfinished roots: {}", first.pending.len());
    assert!(!first.stats.completion.is_complete());

    // The frontier round-trips through its text form (hex masks, one node
    // per line) — this is what the checkpoint file contains.
    let mut buf = Vec::new();
    write_frontier(&mut buf, &first.pending).unwrap();
    let roots = read_frontier(buf.as_slice()).unwrap();
    assert_eq!(roots, first.pending);
    println!("checkpoint text: {} bytes", buf.len());

    // Resume from the checkpoint with a fresh budget. The continuation
    // picks up exactly the pending subtrees (still truncated here — the
    // full space is astronomically larger than any desk-scale budget).
    let second = GeometrySearch::new(params, SearchBudget::new(500_000, 60, 1))
        .resume(roots)
        .unwrap()
        .run();
    println!("\nresumed run:");
    print!("{}", second.stats);
    println!("unfinished roots after resume: {}", second.pending.len());
}
