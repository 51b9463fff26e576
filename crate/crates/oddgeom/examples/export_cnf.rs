//! Translate a signing problem into CNF for an external SAT solver, then
//! decode a satisfying assignment back into a verified matrix.
//!
//! Run with: cargo run --example export_cnf

use oddgeom::search::{decode_model, encode_cnf, sign_search};
use oddgeom::{LineSystem, SearchBudget, WeighingMatrix};

fn main() {
    // The unique 7-line zero pattern compatible with order 7, weight 4.
    let fano = LineSystem::from_point_lists(
        7,
        &[
            vec![1, 2, 3],
            vec![1, 4, 5],
            vec![1, 6, 7],
            vec![2, 4, 6],
            vec![2, 5, 7],
            vec![3, 4, 7],
            vec![3, 5, 6],
        ],
    )
    .unwrap();

    // One boolean variable per support cell (true = +1), plus auxiliary
    // counter variables for the exactly-half-agreements constraints.
    let enc = encode_cnf(&fano, 7, 4).unwrap();
    println!("cell variables: {}", enc.map.var_count());
    println!("total variables: {}", enc.var_count);
    println!("clauses: {}", enc.clauses.len());

    let dimacs = enc.to_dimacs();
    println!("\nfirst lines of the DIMACS text:");
    for line in dimacs.lines().take(6) {
        println!("  {line}");
    }

    // Stand in for the SAT solver: take a signing found by the built-in
    // backtracking search and read off its support cells as literals.
    let (found, _) = sign_search(&fano, 7, 4, &SearchBudget::generous()).unwrap();
    let matrix = found.expect("the 7-line pattern is signable at weight 4");
    let model: Vec<i32> = enc
        .map
        .cells()
        .iter()
        .enumerate()
        .map(|(idx, &(r, c))| {
            let var = (idx + 1) as i32;
            if matrix.entry(r, c) > 0 {
                var
            } else {
                -var
            }
        })
        .collect();

    // Decoding maps the literals back onto the pattern's support cells.
    let decoded: WeighingMatrix = decode_model(&enc.map, &model, &fano, 7, 4).unwrap();
    let report = decoded.verify();
    println!("\ndecoded matrix:");
    print!("{}", decoded.to_text());
    print!("{report}");
    assert!(report.is_valid());
    assert_eq!(decoded.to_text(), matrix.to_text());
}
