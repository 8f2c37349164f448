use std::sync::OnceLock;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::matrix::ComplexSquareMatrix;
use crate::error::{Error, Result};

/// Relative Hermiticity defect accepted by [`HermitianForm::new`].
pub const HERMITIAN_TOL: f64 = 1e-12;

#[derive(Debug, Clone)]
struct Spectrum {
    /// Ascending.
    values: Vec<f64>,
    /// Orthonormal eigenvectors as columns, matching `values`.
    vectors: DMatrix<Complex64>,
}

/// Hermitian matrix with a lazily computed, ascending real spectrum.
#[derive(Debug, Clone)]
pub struct HermitianForm {
    matrix: ComplexSquareMatrix,
    spectrum: OnceLock<Spectrum>,
}

impl HermitianForm {
    /// Accepts `x` if `‖x − x*‖_max ≤ 1e-12·(1 + ‖x‖_max)`; the stored form is
    /// the exact Hermitian part.
    pub fn new(x: ComplexSquareMatrix) -> Result<Self> {
        let defect = x.max_abs_diff(&x.adjoint());
        let bound = HERMITIAN_TOL * (1.0 + x.max_abs());
        if defect > bound {
            return Err(Error::Input(format!(
                "matrix is not Hermitian: defect {defect:e} exceeds {bound:e}"
            )));
        }
        Ok(Self::symmetrize(&x))
    }

    /// Hermitian part `(x + x*)/2`, without any tolerance check.
    pub fn symmetrize(x: &ComplexSquareMatrix) -> Self {
        Self {
            matrix: x.hermitian_part(),
            spectrum: OnceLock::new(),
        }
    }

    pub fn matrix(&self) -> &ComplexSquareMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    fn spectrum(&self) -> &Spectrum {
        self.spectrum.get_or_init(|| {
            let eig = self.matrix.as_nalgebra().clone().symmetric_eigen();
            let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
            order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
            let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
            let n = self.dim();
            let vectors = DMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
            Spectrum { values, vectors }
        })
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.spectrum().values
    }

    /// Unit eigenvector for the `k`-th smallest eigenvalue.
    pub fn eigenvector(&self, k: usize) -> Vec<Complex64> {
        self.spectrum().vectors.column(k).iter().copied().collect()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }

    pub fn max_eigenvalue(&self) -> f64 {
        *self.eigenvalues().last().expect("non-empty spectrum")
    }

    /// Spectral norm, `max |λ|`.
    pub fn norm(&self) -> f64 {
        self.min_eigenvalue().abs().max(self.max_eigenvalue().abs())
    }

    /// `V · diag(f(λ)) · V*` over the eigenpairs selected by `keep`.
    pub fn spectral_map(&self, keep: impl Fn(f64) -> bool, f: impl Fn(f64) -> f64) -> ComplexSquareMatrix {
        let sp = self.spectrum();
        let n = self.dim();
        let mut out = DMatrix::<Complex64>::zeros(n, n);
        for (k, &lambda) in sp.values.iter().enumerate() {
            if !keep(lambda) {
                continue;
            }
            let v = sp.vectors.column(k);
            out += (v * v.adjoint()) * Complex64::new(f(lambda), 0.0);
        }
        ComplexSquareMatrix::wrap(out)
    }

    /// Rebuilds the matrix from its eigenpairs.
    pub fn reconstruct(&self) -> ComplexSquareMatrix {
        self.spectral_map(|_| true, |l| l)
    }

    /// Absolute eigenvalue threshold `rank_tol·(1 + ‖K‖)`.
    pub fn rank_threshold(&self, rank_tol: f64) -> f64 {
        rank_tol * (1.0 + self.norm())
    }

    /// Orthonormal basis of the eigenspaces with `|λ| ≤ rank_tol·(1 + ‖K‖)`.
    pub fn null_space(&self, rank_tol: f64) -> Vec<Vec<Complex64>> {
        let cut = self.rank_threshold(rank_tol);
        self.eigenvalues()
            .iter()
            .enumerate()
            .filter(|(_, l)| l.abs() <= cut)
            .map(|(k, _)| self.eigenvector(k))
            .collect()
    }

    /// Pseudo-inverse square root on the eigenspaces with `λ > rank_tol·(1 + ‖K‖)`.
    pub fn pseudo_inverse_sqrt(&self, rank_tol: f64) -> ComplexSquareMatrix {
        let cut = self.rank_threshold(rank_tol);
        self.spectral_map(|l| l > cut, |l| 1.0 / l.sqrt())
    }
}
