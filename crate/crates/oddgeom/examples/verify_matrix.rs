//! Build small weighing matrices, verify them, and see how violations are
//! reported.
//!
//! Run with: cargo run --example verify_matrix

use oddgeom::WeighingMatrix;

fn main() {
    // An order-4 weight-3 matrix: one zero per row, rows pairwise
    // orthogonal. `verify` checks entries, row weights, and all row pairs.
    let w43 = WeighingMatrix::from_rows(
        4,
        3,
        &[
            vec![0, 1, 1, 1],
            vec![1, 0, 1, -1],
            vec![1, -1, 0, 1],
            vec![1, 1, -1, 0],
        ],
    )
    .expect("well-shaped rows");
    println!("order 4, weight 3:");
    println!("{}", w43.to_text());
    print!("{}", w43.verify());

    // Circulants make larger fixtures easy: each row is the previous one
    // shifted right. This first row gives an order-7 weight-4 matrix.
    let w74 = WeighingMatrix::circulant(&[1, -1, -1, 0, -1, 0, 0]).expect("length 7 first row");
    println!("\ncirculant with first row (+ - - 0 - 0 0):");
    print!("{}", w74.verify());

    // Breaking one sign breaks orthogonality with exact witnesses.
    let mut broken = w43.clone();
    broken.negate_row(2);
    let mut rows: Vec<Vec<i8>> = (0..4).map(|r| broken.row(r).to_vec()).collect();
    rows[1][3] = 1; // flip the (2,4) entry of the original matrix
    let broken = WeighingMatrix::from_rows(4, 3, &rows).unwrap();
    println!("\nafter flipping one entry:");
    print!("{}", broken.verify());

    // The text format round-trips exactly.
    let parsed = WeighingMatrix::parse(&w43.to_text()).expect("own output parses");
    assert_eq!(parsed.to_text(), w43.to_text());
    println!("\ntext round trip: ok");
}
