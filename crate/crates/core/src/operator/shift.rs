use std::f64::consts::PI;

use num_complex::Complex64;

use super::matrix::ComplexSquareMatrix;
use crate::error::{Error, Result};

/// Weight `1/cos(π/(n+1))` that puts the numerical radius of the `n×n` shift at one.
pub fn normalized_weight(dim_total: usize) -> f64 {
    1.0 / (PI / (dim_total as f64 + 1.0)).cos()
}

/// Truncated shift of size `dim_total` with constant superdiagonal.
///
/// The weight is [`normalized_weight`] when `normalized`, otherwise one.
pub fn build_shift(dim_total: usize, normalized: bool) -> Result<ComplexSquareMatrix> {
    if dim_total < 2 {
        return Err(Error::dim("dim_total >= 2", dim_total));
    }
    let weight = if normalized { normalized_weight(dim_total) } else { 1.0 };
    Ok(superdiagonal(&vec![Complex64::new(weight, 0.0); dim_total - 1]))
}

/// Matrix of size `entries.len() + 1` with the given superdiagonal.
pub fn superdiagonal(entries: &[Complex64]) -> ComplexSquareMatrix {
    ComplexSquareMatrix::from_fn(entries.len() + 1, |i, j| {
        if j == i + 1 {
            entries[i]
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

/// `U*·T·U` with `U = diag(e^{iφ_k})`, computed entrywise as
/// `e^{-iφ_j} T_jk e^{iφ_k}`.
pub fn conjugate_by_diagonal_unitary(t: &ComplexSquareMatrix, phases: &[f64]) -> Result<ComplexSquareMatrix> {
    if phases.len() != t.dim() {
        return Err(Error::dim(format!("{} phases", t.dim()), phases.len()));
    }
    let u: Vec<Complex64> = phases.iter().map(|&p| Complex64::from_polar(1.0, p)).collect();
    Ok(ComplexSquareMatrix::from_fn(t.dim(), |j, k| {
        u[j].conj() * t.get(j, k) * u[k]
    }))
}
