//! Run the full analysis stack on one system: axiom check, the
//! double-counting identity, per-line intersection profiles, and every
//! graph bound.
//!
//! Run with: cargo run --example analyze_fano

use oddgeom::geometry::profile_identity_check;
use oddgeom::graphs::gamma_report;
use oddgeom::{LineSystem, OddGeometryParams};

fn main() {
    // The Fano plane: 7 points, 7 lines of size 3, any two lines meeting
    // in exactly one point. It is the zero pattern of an order-7 weight-4
    // matrix, with parameters derived from that order and weight.
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
    .expect("valid point lists");
    let params = OddGeometryParams::for_weighing(7, 4).expect("consistent parameters");
    println!("params = {params}");

    // Axioms: line count and sizes, allowed intersections, point degrees,
    // and point-pair codegrees (the dual intersection condition).
    let check = fano.odd_geometry_check(&params);
    print!("{check}");
    assert!(check.is_valid());

    // Double counting pairs-inside-lines two ways always agrees; the
    // interesting part is the common value.
    let (lhs, rhs) = fano.counting_identity();
    println!("counting identity: {lhs} = {rhs}");

    // Each line's profile counts the other lines by intersection size and
    // must satisfy two linear identities fixed by the parameters.
    for i in 1..=fano.line_count() {
        let profile = fano.intersection_profile(i, &params.allowed).unwrap();
        assert!(profile_identity_check(&profile, &params));
        if i == 1 {
            println!("line 1 profile: {profile}");
        }
    }
    println!("profile identities hold for every line");

    // The graph bounds: edges at intersection size 1, weighted companion
    // for the larger sizes, triangle/diameter structure, and the
    // triple-coverage statistic.
    let report = gamma_report(&fano, &params).expect("consistent system");
    print!("{report}");
    assert!(report.all_pass());
}
