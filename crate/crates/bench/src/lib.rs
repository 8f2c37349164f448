//! Fixtures shared by the benchmarks.

use harnack_core::{build_shift, family2, Complex64, ComplexSquareMatrix, GridSpec};

/// A dense, non-nilpotent 5×5 matrix with numerical radius below one.
pub fn dense_fixture() -> ComplexSquareMatrix {
    ComplexSquareMatrix::from_fn(5, |i, j| {
        let k = (3 * i + 5 * j) as f64;
        Complex64::new((0.7 * k).sin(), (1.3 * k).cos()).scale(0.12)
    })
}

pub fn shift5() -> ComplexSquareMatrix {
    build_shift(5, true).expect("dimension 5 is valid")
}

pub fn family_member() -> ComplexSquareMatrix {
    family2(0.9)
}

/// Smaller than the module defaults so a single iteration stays short.
pub fn bench_grid() -> GridSpec {
    GridSpec::new(vec![0.25, 0.5, 0.75, 0.9], 16, 64).expect("radii inside the disk")
}
