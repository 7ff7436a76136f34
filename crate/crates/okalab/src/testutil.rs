//! Fixtures shared by the module unit tests.

use crate::arrangement::Arrangement;
use crate::gaussian::GaussianRational;
use crate::linalg::Vector;
use crate::VectorQ;

pub(crate) fn qv(entries: &[i64]) -> VectorQ {
    Vector(entries.iter().map(|&x| GaussianRational::from_int(x)).collect())
}

pub(crate) fn arrangement(n: usize, rows: &[&[i64]]) -> Arrangement {
    Arrangement::new(n, rows.iter().map(|r| qv(r)).collect()).unwrap()
}

/// The first `count` coordinate hyperplanes of projective n-space.
pub(crate) fn coordinate_forms(n: usize, count: usize) -> Arrangement {
    let rows: Vec<VectorQ> = (0..count)
        .map(|j| {
            let mut e = vec![0i64; n + 1];
            e[j] = 1;
            qv(&e)
        })
        .collect();
    Arrangement::new(n, rows).unwrap()
}

/// Sides of the affine unit square: x1, x2, x1 - x0, x2 - x0, with x0 = 0
/// the line at infinity.
pub(crate) fn unit_square() -> Arrangement {
    arrangement(2, &[&[0, 1, 0], &[0, 0, 1], &[-1, 1, 0], &[-1, 0, 1]])
}

/// Three concurrent lines through [0:0:1]: x0, x1, x0 + x1.
pub(crate) fn concurrent_lines() -> Arrangement {
    arrangement(2, &[&[1, 0, 0], &[0, 1, 0], &[1, 1, 0]])
}

/// Five hyperplanes in projective 4-space whose first four sum to zero:
/// x0 - x2, x2 - x1, x1 - x3, x3 - x0, x4.
pub(crate) fn p4_chain() -> Arrangement {
    arrangement(
        4,
        &[
            &[1, 0, -1, 0, 0],
            &[0, -1, 1, 0, 0],
            &[0, 1, 0, -1, 0],
            &[-1, 0, 0, 1, 0],
            &[0, 0, 0, 0, 1],
        ],
    )
}
