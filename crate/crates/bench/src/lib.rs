//! Fixtures shared by the benchmarks.

use reciprocone::{Cone, IntMatrix, RationalPolytope};

pub fn pyramid() -> Cone {
    Cone::from_inequalities(IntMatrix::from_i64_rows(&[
        &[1, -1, 0],
        &[1, 0, -1],
        &[-2, 1, 0],
        &[-2, 0, 1],
    ]))
    .expect("valid cone")
}

/// Simplex with vertex denominators 2 and 3, period 6.
pub fn thin_simplex() -> RationalPolytope {
    RationalPolytope::from_fractions(&[
        &[(0, 1), (0, 1), (0, 1)],
        &[(3, 2), (0, 1), (0, 1)],
        &[(0, 1), (4, 3), (0, 1)],
        &[(0, 1), (0, 1), (5, 3)],
    ])
    .expect("valid polytope")
}
