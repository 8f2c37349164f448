use std::fmt;
use std::ops::{Add, Mul, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Condition estimate above which a matrix is treated as numerically singular.
pub const SINGULAR_CONDITION: f64 = 1e14;

/// Dense square complex matrix.
///
/// Entries are always finite. Arithmetic goes through `nalgebra`; the
/// wrapper exists so the invariants (square, finite) hold everywhere and
/// so the JSON wire format is fixed in one place.
#[derive(Clone, PartialEq)]
pub struct ComplexSquareMatrix {
    inner: DMatrix<Complex64>,
}

impl ComplexSquareMatrix {
    /// Builds a matrix from row-major entries.
    pub fn from_row_major(dim: usize, entries: &[Complex64]) -> Result<Self> {
        if dim == 0 {
            return Err(Error::dim("dim >= 1", 0));
        }
        if entries.len() != dim * dim {
            return Err(Error::dim(format!("{} entries", dim * dim), entries.len()));
        }
        if let Some(k) = entries.iter().position(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::Input(format!("entry ({}, {}) is not finite", k / dim, k % dim)));
        }
        Ok(Self {
            inner: DMatrix::from_row_slice(dim, dim, entries),
        })
    }

    /// Builds a matrix from nested rows.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let dim = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != dim) {
            return Err(Error::dim(format!("{dim} columns per row"), bad.len()));
        }
        let flat: Vec<Complex64> = rows.iter().flatten().copied().collect();
        Self::from_row_major(dim, &flat)
    }

    /// Builds a matrix entry by entry. Panics if `f` yields a non-finite value.
    pub fn from_fn(dim: usize, f: impl FnMut(usize, usize) -> Complex64) -> Self {
        assert!(dim >= 1, "matrix dimension must be positive");
        let inner = DMatrix::from_fn(dim, dim, f);
        assert!(
            inner.iter().all(|c| c.re.is_finite() && c.im.is_finite()),
            "matrix entries must be finite"
        );
        Self { inner }
    }

    pub fn from_nalgebra(inner: DMatrix<Complex64>) -> Result<Self> {
        if !inner.is_square() {
            return Err(Error::dim(
                format!("square matrix with {} rows", inner.nrows()),
                inner.ncols(),
            ));
        }
        let n = inner.nrows();
        let flat: Vec<Complex64> = inner.transpose().iter().copied().collect();
        Self::from_row_major(n, &flat)
    }

    pub(crate) fn wrap(inner: DMatrix<Complex64>) -> Self {
        debug_assert!(inner.is_square());
        Self { inner }
    }

    pub fn zeros(dim: usize) -> Self {
        Self::from_fn(dim, |_, _| Complex64::new(0.0, 0.0))
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            inner: DMatrix::identity(dim, dim),
        }
    }

    /// Diagonal matrix with the given entries.
    pub fn diagonal(entries: &[Complex64]) -> Self {
        Self::from_fn(entries.len(), |i, j| {
            if i == j {
                entries[i]
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    pub fn dim(&self) -> usize {
        self.inner.nrows()
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.inner[(row, col)]
    }

    pub fn as_nalgebra(&self) -> &DMatrix<Complex64> {
        &self.inner
    }

    pub fn into_nalgebra(self) -> DMatrix<Complex64> {
        self.inner
    }

    /// Row-major copy of the entries.
    pub fn to_row_major(&self) -> Vec<Complex64> {
        let n = self.dim();
        (0..n * n).map(|k| self.inner[(k / n, k % n)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self {
            inner: self.inner.adjoint(),
        }
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            inner: &self.inner * factor,
        }
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        self.scale(Complex64::new(factor, 0.0))
    }

    /// Non-negative integer power; `pow(0)` is the identity.
    pub fn pow(&self, exponent: u32) -> Self {
        let mut acc = Self::identity(self.dim());
        for _ in 0..exponent {
            acc = &acc * self;
        }
        acc
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.inner.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Largest entry modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim(), other.dim());
        self.inner
            .iter()
            .zip(other.inner.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn trace(&self) -> Complex64 {
        self.inner.trace()
    }

    pub fn determinant(&self) -> Complex64 {
        self.inner.determinant()
    }

    /// Singular values in descending order.
    pub fn singular_values(&self) -> Vec<f64> {
        let mut s: Vec<f64> = self
            .inner
            .clone()
            .svd(false, false)
            .singular_values
            .iter()
            .copied()
            .collect();
        s.sort_by(|a, b| b.total_cmp(a));
        s
    }

    /// Eigenvalues from a complex Schur decomposition, unordered.
    pub fn eigenvalues(&self) -> Vec<Complex64> {
        if is_upper_triangular(&self.inner) {
            return self.inner.diagonal().iter().copied().collect();
        }
        let schur = self.inner.clone().schur();
        let (_, t) = schur.unpack();
        t.diagonal().iter().copied().collect()
    }

    /// Hermitian part `(X + X*) / 2`.
    pub fn hermitian_part(&self) -> Self {
        Self {
            inner: (&self.inner + self.inner.adjoint()) * Complex64::new(0.5, 0.0),
        }
    }

    /// One-norm (maximum absolute column sum).
    pub fn norm_one(&self) -> f64 {
        self.inner
            .column_iter()
            .map(|c| c.iter().map(|x| x.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Inverse together with a one-norm condition estimate.
    ///
    /// Fails with [`Error::Singular`] if the LU factorisation breaks down or
    /// the condition estimate exceeds [`SINGULAR_CONDITION`].
    pub fn inverse_with_condition(&self) -> Result<(Self, f64)> {
        let inv = self.inner.clone().try_inverse().ok_or(Error::Singular {
            condition: f64::INFINITY,
        })?;
        let inv = Self { inner: inv };
        let condition = self.norm_one() * inv.norm_one();
        if !condition.is_finite() || condition > SINGULAR_CONDITION {
            return Err(Error::Singular { condition });
        }
        Ok((inv, condition))
    }

    pub fn inverse(&self) -> Result<Self> {
        self.inverse_with_condition().map(|(inv, _)| inv)
    }

    /// Square sub-block of side `size` with top-left corner `(row, col)`.
    pub fn block(&self, row: usize, col: usize, size: usize) -> Self {
        Self {
            inner: self.inner.view((row, col), (size, size)).into_owned(),
        }
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.dim());
        let n = self.dim();
        (0..n)
            .map(|i| (0..n).map(|j| self.inner[(i, j)] * v[j]).sum())
            .collect()
    }

    /// Left product `vᵀ · X` for a row vector `v`.
    pub fn apply_left(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.dim());
        let n = self.dim();
        (0..n)
            .map(|j| (0..n).map(|i| v[i] * self.inner[(i, j)]).sum())
            .collect()
    }
}

fn is_upper_triangular(m: &DMatrix<Complex64>) -> bool {
    let n = m.nrows();
    (0..n).all(|i| (0..i).all(|j| m[(i, j)] == Complex64::new(0.0, 0.0)))
}

/// Euclidean norm of a complex vector.
pub fn vector_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

impl fmt::Debug for ComplexSquareMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexSquareMatrix({}x{})", self.dim(), self.dim())?;
        for i in 0..self.dim() {
            let row: Vec<String> = (0..self.dim())
                .map(|j| {
                    let c = self.get(i, j);
                    format!("{:+.6}{:+.6}i", c.re, c.im)
                })
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl<'a> Mul<&'a ComplexSquareMatrix> for &'a ComplexSquareMatrix {
    type Output = ComplexSquareMatrix;
    fn mul(self, rhs: &'a ComplexSquareMatrix) -> ComplexSquareMatrix {
        ComplexSquareMatrix::wrap(&self.inner * &rhs.inner)
    }
}

impl<'a> Add<&'a ComplexSquareMatrix> for &'a ComplexSquareMatrix {
    type Output = ComplexSquareMatrix;
    fn add(self, rhs: &'a ComplexSquareMatrix) -> ComplexSquareMatrix {
        ComplexSquareMatrix::wrap(&self.inner + &rhs.inner)
    }
}

impl<'a> Sub<&'a ComplexSquareMatrix> for &'a ComplexSquareMatrix {
    type Output = ComplexSquareMatrix;
    fn sub(self, rhs: &'a ComplexSquareMatrix) -> ComplexSquareMatrix {
        ComplexSquareMatrix::wrap(&self.inner - &rhs.inner)
    }
}

/// Wire form of a matrix: `{"rows": n, "cols": n, "data": [[re, im], ...]}`,
/// row-major.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<[f64; 2]>,
}

impl From<&ComplexSquareMatrix> for MatrixJson {
    fn from(m: &ComplexSquareMatrix) -> Self {
        MatrixJson {
            rows: m.dim(),
            cols: m.dim(),
            data: m.to_row_major().iter().map(|c| [c.re, c.im]).collect(),
        }
    }
}

impl From<ComplexSquareMatrix> for MatrixJson {
    fn from(m: ComplexSquareMatrix) -> Self {
        MatrixJson::from(&m)
    }
}

impl TryFrom<MatrixJson> for ComplexSquareMatrix {
    type Error = Error;

    fn try_from(json: MatrixJson) -> Result<Self> {
        if json.rows == 0 {
            return Err(Error::Input("field `rows`: must be positive".into()));
        }
        if json.cols != json.rows {
            return Err(Error::Input(format!(
                "field `cols`: expected {} (square matrix), found {}",
                json.rows, json.cols
            )));
        }
        let expected = json.rows * json.cols;
        if json.data.len() != expected {
            return Err(Error::Input(format!(
                "field `data`: expected {expected} entries (rows*cols), found {}",
                json.data.len()
            )));
        }
        if let Some(k) = json.data.iter().position(|[re, im]| !re.is_finite() || !im.is_finite()) {
            return Err(Error::Input(format!("field `data`: entry {k} is not finite")));
        }
        let entries: Vec<Complex64> = json.data.iter().map(|&[re, im]| Complex64::new(re, im)).collect();
        ComplexSquareMatrix::from_row_major(json.rows, &entries)
    }
}

impl Serialize for ComplexSquareMatrix {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixJson::from(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ComplexSquareMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let json = MatrixJson::deserialize(deserializer)?;
        ComplexSquareMatrix::try_from(json).map_err(serde::de::Error::custom)
    }
}

impl ComplexSquareMatrix {
    /// Parses the matrix JSON format.
    pub fn from_json_str(text: &str) -> Result<Self> {
        let json: MatrixJson = serde_json::from_str(text).map_err(|e| Error::Input(format!("matrix JSON: {e}")))?;
        Self::try_from(json)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&MatrixJson::from(self)).expect("matrix JSON serialisation")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(ComplexSquareMatrix::from_row_major(0, &[]).is_err());
        assert!(ComplexSquareMatrix::from_row_major(2, &[c(1.0, 0.0); 3]).is_err());
        assert!(ComplexSquareMatrix::from_row_major(1, &[c(f64::NAN, 0.0)]).is_err());
    }

    #[test]
    fn adjoint_is_involutive() {
        let m = ComplexSquareMatrix::from_fn(3, |i, j| c(i as f64 - 0.3 * j as f64, (i * j) as f64 + 0.7));
        assert_eq!(m.adjoint().adjoint(), m);
        assert_eq!(m.adjoint().get(0, 2), m.get(2, 0).conj());
    }

    #[test]
    fn json_round_trip_and_field_errors() {
        let m = ComplexSquareMatrix::from_fn(2, |i, j| c(i as f64 + 0.5, -(j as f64)));
        let text = m.to_json_string();
        assert_eq!(
            text,
            r#"{"rows":2,"cols":2,"data":[[0.5,-0.0],[0.5,-1.0],[1.5,-0.0],[1.5,-1.0]]}"#
        );
        assert_eq!(ComplexSquareMatrix::from_json_str(&text).unwrap(), m);

        let short = r#"{"rows":2,"cols":2,"data":[[0,0],[0,0],[0,0]]}"#;
        let err = ComplexSquareMatrix::from_json_str(short).unwrap_err();
        assert!(err.to_string().contains("field `data`"), "{err}");

        let rect = r#"{"rows":2,"cols":3,"data":[[0,0],[0,0],[0,0],[0,0],[0,0],[0,0]]}"#;
        let err = ComplexSquareMatrix::from_json_str(rect).unwrap_err();
        assert!(err.to_string().contains("field `cols`"), "{err}");
    }

    #[test]
    fn inverse_reports_singularity() {
        let m = ComplexSquareMatrix::from_fn(2, |_, _| c(1.0, 0.0));
        assert!(matches!(m.inverse(), Err(Error::Singular { .. })));
        let (inv, cond) = ComplexSquareMatrix::identity(3).inverse_with_condition().unwrap();
        assert_eq!(inv, ComplexSquareMatrix::identity(3));
        assert!((cond - 1.0).abs() < 1e-15);
    }

    #[test]
    fn eigenvalues_of_general_complex_matrix() {
        // Similarity of diag(0.3, -0.7i, 0.2+0.1i) by a fixed invertible matrix.
        let d = ComplexSquareMatrix::diagonal(&[c(0.3, 0.0), c(0.0, -0.7), c(0.2, 0.1)]);
        let p = ComplexSquareMatrix::from_fn(3, |i, j| {
            c(1.0 + (i + 2 * j) as f64 * 0.1, if i == j { 0.5 } else { -0.2 })
        });
        let m = &(&p * &d) * &p.inverse().unwrap();
        let mut eig = m.eigenvalues();
        eig.sort_by(|a, b| a.re.total_cmp(&b.re));
        let expected = [c(0.0, -0.7), c(0.2, 0.1), c(0.3, 0.0)];
        for (got, want) in eig.iter().zip(expected.iter()) {
            assert!((got - want).norm() < 1e-10, "{got} vs {want}");
        }
    }
}
