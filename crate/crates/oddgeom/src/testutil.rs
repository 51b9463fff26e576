//! Shared fixtures for the in-crate unit tests.

use crate::geometry::LineSystem;
use crate::matrix::WeighingMatrix;

/// A valid order-4 weight-3 matrix; its zero pattern is the diagonal.
pub(crate) fn w43() -> WeighingMatrix {
    WeighingMatrix::from_rows(
        4,
        3,
        &[
            vec![0, 1, 1, 1],
            vec![1, 0, 1, -1],
            vec![1, -1, 0, 1],
            vec![1, 1, -1, 0],
        ],
    )
    .unwrap()
}

/// A valid circulant order-7 weight-4 matrix whose zero pattern is a
/// Fano plane (zero positions of the first row: {4, 6, 7}, a planar
/// difference set mod 7).
pub(crate) fn w74() -> WeighingMatrix {
    WeighingMatrix::circulant(&[1, -1, -1, 0, -1, 0, 0]).unwrap()
}

/// The standard Fano plane on points 1..=7.
pub(crate) fn fano() -> LineSystem {
    LineSystem::from_point_lists(
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
    .unwrap()
}

/// Zero pattern of the identity: lines {2,3}, {1,3}, {1,2}.
pub(crate) fn i3_pattern() -> LineSystem {
    LineSystem::from_point_lists(3, &[vec![2, 3], vec![1, 3], vec![1, 2]]).unwrap()
}
