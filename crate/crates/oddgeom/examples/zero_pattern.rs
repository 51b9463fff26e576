//! Extract the zero-pattern line system of a matrix: line i is the set of
//! columns where row i is zero. Valid matrices of order n and weight k
//! give n lines of size n-k whose pairwise intersections all have the
//! parity of n.
//!
//! Run with: cargo run --example zero_pattern

use oddgeom::WeighingMatrix;

fn main() {
    let w74 = WeighingMatrix::circulant(&[1, -1, -1, 0, -1, 0, 0]).expect("length 7 first row");
    assert!(w74.verify().is_valid());

    let pattern = w74.zero_pattern();
    println!("zero pattern of the order-7 weight-4 circulant:");
    print!("{}", pattern.to_text());

    // Every pairwise intersection size is odd (7 is odd) — here always 1,
    // which makes this system a Fano plane.
    for i in 1..=7 {
        for j in i + 1..=7 {
            let size = pattern.intersection_size(i, j).unwrap();
            assert_eq!(size % 2, 1);
        }
    }
    println!("all pairwise intersection sizes are odd: ok");

    // Transposing the matrix dualizes the pattern: lines and points swap
    // roles. Both orders of the operations agree.
    let transposed_pattern = w74.transpose().zero_pattern();
    let dual = pattern.dual().expect("square system dualizes");
    assert_eq!(transposed_pattern.masks(), dual.masks());
    println!("transpose-then-pattern equals pattern-then-dual: ok");

    let degrees = pattern.point_degrees();
    println!("point degrees: {degrees:?} (each point on as many lines as a line has points)");
}
