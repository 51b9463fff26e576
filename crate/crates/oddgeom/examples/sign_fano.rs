//! Complete a zero pattern into an actual matrix: assign ±1 to every
//! support cell so all row pairs are orthogonal. Exhaustion under the
//! gauge normalization is a proof that no signing exists.
//!
//! Run with: cargo run --example sign_fano

use oddgeom::search::{enumerate_geometries, sign_search};
use oddgeom::{OddGeometryParams, SearchBudget};

fn main() {
    // Take a Fano plane from the enumerator (any would do).
    let params = OddGeometryParams::fano();
    let (systems, _) = enumerate_geometries(&params, &SearchBudget::generous(), 1);
    let fano = &systems[0];
    println!("pattern to sign:");
    print!("{}", fano.to_text());

    // Find signs making it an order-7 weight-4 matrix.
    let (found, stats) = sign_search(fano, 7, 4, &SearchBudget::generous())
        .expect("pattern dimensions match the target");
    print!("{stats}");

    let matrix = found.expect("the Fano pattern is signable");
    println!("\nsigned matrix:");
    print!("{}", matrix.to_text());

    // The result verifies and reproduces the input pattern exactly.
    assert!(matrix.verify().is_valid());
    assert_eq!(matrix.zero_pattern().masks(), fano.masks());
    println!("verified; zero pattern round-trips: ok");

    // A pattern that fails the parity law is rejected without any search:
    // two rows sharing an odd number of support columns can never be
    // orthogonal.
    let bad = oddgeom::LineSystem::from_point_lists(3, &[vec![1], vec![1], vec![2]]).unwrap();
    let (none, stats) = sign_search(&bad, 3, 2, &SearchBudget::generous()).unwrap();
    assert!(none.is_none());
    assert!(stats.completion.is_complete());
    println!("\nparity-violating pattern: exhausted after {} nodes", stats.nodes_visited);
}
