use num_complex::Complex64;
use serde::Serialize;

use super::matrix::ComplexSquareMatrix;
use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// `(A, R, B)` decomposition of a 5×5 matrix along `ℂe₀ ⊕ ℂ³ ⊕ ℂe₄`:
///
/// ```text
/// [ 0  A  0 ]
/// [ 0  R  B ]
/// [ 0  0  0 ]
/// ```
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockForm {
    /// Row `(a₁, a₂, a₃)`.
    pub a: [Complex64; 3],
    /// Middle 3×3 block.
    pub r: ComplexSquareMatrix,
    /// Column `(b₁, b₂, b₃)ᵀ`.
    pub b: [Complex64; 3],
    /// Largest modulus over the entries the block form forces to zero.
    pub pattern_residual: f64,
}

/// Positions that must vanish: column 0, row 4, and the corner `(0, 4)`.
pub fn is_zero_position(row: usize, col: usize) -> bool {
    col == 0 || row == 4 || (row == 0 && col == 4)
}

/// Reads `(A, R, B)` out of a 5×5 matrix. The residual is reported, not enforced.
pub fn block_decompose(t: &ComplexSquareMatrix) -> Result<BlockForm> {
    if t.dim() != 5 {
        return Err(Error::dim("5", t.dim()));
    }
    let mut pattern_residual = 0.0_f64;
    for i in 0..5 {
        for j in 0..5 {
            if is_zero_position(i, j) {
                pattern_residual = pattern_residual.max(t.get(i, j).norm());
            }
        }
    }
    Ok(BlockForm {
        a: [t.get(0, 1), t.get(0, 2), t.get(0, 3)],
        r: t.block(1, 1, 3),
        b: [t.get(1, 4), t.get(2, 4), t.get(3, 4)],
        pattern_residual,
    })
}

impl BlockForm {
    /// Block form with zero pattern residual.
    pub fn from_parts(a: [Complex64; 3], r: ComplexSquareMatrix, b: [Complex64; 3]) -> Result<Self> {
        if r.dim() != 3 {
            return Err(Error::dim("3", r.dim()));
        }
        Ok(Self {
            a,
            r,
            b,
            pattern_residual: 0.0,
        })
    }

    /// The 5×5 matrix with the mandated zeros in place.
    pub fn reassemble(&self) -> ComplexSquareMatrix {
        ComplexSquareMatrix::from_fn(5, |i, j| match (i, j) {
            _ if is_zero_position(i, j) => ZERO,
            (0, j) => self.a[j - 1],
            (i, 4) => self.b[i - 1],
            (i, j) => self.r.get(i - 1, j - 1),
        })
    }

    /// `‖A‖²`.
    pub fn a_norm_sqr(&self) -> f64 {
        self.a.iter().map(|c| c.norm_sqr()).sum()
    }

    /// `‖B‖²`.
    pub fn b_norm_sqr(&self) -> f64 {
        self.b.iter().map(|c| c.norm_sqr()).sum()
    }

    /// `M = I₃ − ¼(A*A + BB*)`.
    pub fn m_matrix(&self) -> ComplexSquareMatrix {
        ComplexSquareMatrix::from_fn(3, |i, j| {
            let id = if i == j { 1.0 } else { 0.0 };
            let aa = self.a[i].conj() * self.a[j];
            let bb = self.b[i] * self.b[j].conj();
            Complex64::new(id, 0.0) - (aa + bb) * 0.25
        })
    }

    /// `1 + max modulus` over all block entries.
    pub fn entry_scale(&self) -> f64 {
        let m = self
            .a
            .iter()
            .chain(self.b.iter())
            .map(|c| c.norm())
            .fold(self.r.max_abs(), f64::max);
        1.0 + m
    }
}
