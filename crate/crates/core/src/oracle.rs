//! Brute-force checks of the polynomial identities and scalar relations
//! satisfied by the blocks `(A, R, B)` of a Harnack-equivalent candidate.
//!
//! Identities are tested by evaluation at roots of unity: a polynomial of
//! degree `d` that vanishes at `d + 1` distinct points is zero.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::{BlockForm, ComplexSquareMatrix, NullVectorParams};
use crate::report::ConditionEntry;

/// Relative tolerance of identity residuals; multiplied by the block scale.
pub const IDENTITY_TOL: f64 = 1e-9;
/// Tolerance on the minimal-polynomial hypothesis `R³ = λR²`.
pub const MINPOLY_TOL: f64 = 1e-8;
/// Tolerance of the scalar relations and trace checks.
pub const RELATION_TOL: f64 = 1e-9;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IdentityId {
    Eq1,
    Eq2,
    Eq3,
    Eq4,
}

impl IdentityId {
    pub const ALL: [IdentityId; 4] = [IdentityId::Eq1, IdentityId::Eq2, IdentityId::Eq3, IdentityId::Eq4];

    pub fn max_degree(self) -> usize {
        match self {
            IdentityId::Eq2 => 6,
            _ => 4,
        }
    }

    /// Number of components (the second identity is vector valued).
    pub fn width(self) -> usize {
        match self {
            IdentityId::Eq2 => 3,
            _ => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PolyIdentityCheck {
    pub identity_id: IdentityId,
    pub max_degree: usize,
    /// Residual value at each sample point (first component for eq2).
    #[serde(serialize_with = "ser_complex_list")]
    pub sample_values: Vec<Complex64>,
    /// Euclidean norm of the residual at each sample point.
    pub residuals: Vec<f64>,
    /// Recovered coefficients, `coefficients[k][c]` for `z^k` and component `c`.
    #[serde(skip)]
    pub coefficients: Vec<Vec<Complex64>>,
    pub scale: f64,
    pub max_residual: f64,
    pub pass: bool,
}

impl PolyIdentityCheck {
    /// Degrees whose recovered coefficient exceeds the tolerance.
    pub fn failing_degrees(&self) -> Vec<usize> {
        let tol = IDENTITY_TOL * self.scale;
        self.coefficients
            .iter()
            .enumerate()
            .filter(|(_, c)| c.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt() > tol)
            .map(|(k, _)| k)
            .collect()
    }
}

fn ser_complex_list<S: serde::Serializer>(v: &[Complex64], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for c in v {
        seq.serialize_element(&[c.re, c.im])?;
    }
    seq.end()
}

type Vec3 = [Complex64; 3];

fn dot(row: &Vec3, col: &Vec3) -> Complex64 {
    row.iter().zip(col).map(|(a, b)| a * b).sum()
}

fn mat_vec(m: &ComplexSquareMatrix, v: &Vec3) -> Vec3 {
    let w = m.apply(v);
    [w[0], w[1], w[2]]
}

fn row_mat(v: &Vec3, m: &ComplexSquareMatrix) -> Vec3 {
    let w = m.apply_left(v);
    [w[0], w[1], w[2]]
}

fn conj3(v: &Vec3) -> Vec3 {
    v.map(|c| c.conj())
}

fn axpy(acc: &mut Vec3, s: Complex64, v: &Vec3) {
    for (a, x) in acc.iter_mut().zip(v) {
        *a += s * x;
    }
}

/// The two resolvent numerators of the identities, `P(z)` and `Q(z)`.
struct Numerators<'a> {
    r: &'a ComplexSquareMatrix,
    r2: ComplexSquareMatrix,
    rs: ComplexSquareMatrix,
    rs2: ComplexSquareMatrix,
    lambda: Complex64,
}

impl<'a> Numerators<'a> {
    fn new(r: &'a ComplexSquareMatrix, lambda: Complex64) -> Self {
        let rs = r.adjoint();
        Self {
            r,
            r2: r * r,
            rs2: &rs * &rs,
            rs,
            lambda,
        }
    }

    /// `P(z) = z(z−λ)I + (z−λ)R + R²`.
    fn p(&self, z: Complex64) -> ComplexSquareMatrix {
        let l = self.lambda;
        let id = ComplexSquareMatrix::identity(3).scale(z * (z - l));
        &(&id + &self.r.scale(z - l)) + &self.r2
    }

    /// `Q(z) = (1−λ̄z)I + z(1−λ̄z)R* + z²R*²`.
    fn q(&self, z: Complex64) -> ComplexSquareMatrix {
        let f = ONE - self.lambda.conj() * z;
        let id = ComplexSquareMatrix::identity(3).scale(f);
        &(&id + &self.rs.scale(z * f)) + &self.rs2.scale(z * z)
    }
}

fn identity_value(
    blocks: &BlockForm,
    params: &NullVectorParams,
    num: &Numerators<'_>,
    id: IdentityId,
    z: Complex64,
) -> Vec<Complex64> {
    let (v0, v1) = (params.v0, params.v1);
    let l = num.lambda;
    let a = &blocks.a;
    let b = &blocks.b;
    let w: Vec3 = [ONE, ZERO, -z * z];
    let f = ONE - l.conj() * z;
    match id {
        IdentityId::Eq1 => {
            let p = num.p(z);
            let ap = row_mat(a, &p);
            vec![v0 * 2.0 * z * (z - l) + v1 * dot(&ap, &w) - v0 * z * z * dot(&ap, b)]
        }
        IdentityId::Eq2 => {
            let p = num.p(z);
            let q = num.q(z);
            let mut out = [ZERO; 3];
            axpy(&mut out, v0 * z * (z - l), &mat_vec(&q, &conj3(a)));
            axpy(&mut out, v1 * z * (z - l), &mat_vec(&q, &w));
            axpy(&mut out, v1 * f, &mat_vec(&p, &w));
            axpy(&mut out, -v0 * z * z * f, &mat_vec(&p, b));
            out.to_vec()
        }
        IdentityId::Eq3 => {
            let q = num.q(z);
            let bq = row_mat(&conj3(b), &q);
            vec![v0 * dot(&bq, &conj3(a)) + v1 * dot(&bq, &w) - v0 * 2.0 * z * z * f]
        }
        IdentityId::Eq4 => {
            let p = num.p(z);
            let lhs = dot(&row_mat(a, &p), &w);
            let rhs = dot(&[-z * z, ZERO, ONE], &mat_vec(&p, b));
            vec![lhs - rhs]
        }
    }
}

fn check_minimal_polynomial(r: &ComplexSquareMatrix, lambda: Complex64) -> Result<()> {
    if r.dim() != 3 {
        return Err(Error::dim("3", r.dim()));
    }
    let r2 = r * r;
    let defect = (&(&r2 * r) - &r2.scale(lambda)).max_abs();
    if defect > MINPOLY_TOL {
        return Err(Error::Precondition(format!(
            "R³ = λR² fails for λ = {lambda} (defect {defect:e})"
        )));
    }
    Ok(())
}

/// Evaluates one identity at the `(d+1)`-th roots of unity.
pub fn check_polynomial_identity(
    blocks: &BlockForm,
    params: &NullVectorParams,
    lambda: Complex64,
    id: IdentityId,
) -> Result<PolyIdentityCheck> {
    check_polynomial_identity_at(blocks, params, lambda, id, id.max_degree() + 1)
}

/// As [`check_polynomial_identity`] with `points` roots of unity
/// (`points > max_degree`).
pub fn check_polynomial_identity_at(
    blocks: &BlockForm,
    params: &NullVectorParams,
    lambda: Complex64,
    id: IdentityId,
    points: usize,
) -> Result<PolyIdentityCheck> {
    let d = id.max_degree();
    if points <= d {
        return Err(Error::Input(format!(
            "{points} points cannot certify a degree-{d} identity"
        )));
    }
    check_minimal_polynomial(&blocks.r, lambda)?;
    let num = Numerators::new(&blocks.r, lambda);
    let nodes: Vec<Complex64> = (0..points)
        .map(|k| Complex64::from_polar(1.0, TAU * k as f64 / points as f64))
        .collect();
    let values: Vec<Vec<Complex64>> = nodes
        .iter()
        .map(|&z| identity_value(blocks, params, &num, id, z))
        .collect();

    // inverse DFT; exact for degree < points
    let width = id.width();
    let coefficients: Vec<Vec<Complex64>> = (0..points)
        .map(|k| {
            (0..width)
                .map(|c| {
                    values
                        .iter()
                        .zip(&nodes)
                        .map(|(v, z)| v[c] * z.conj().powu(k as u32))
                        .sum::<Complex64>()
                        / points as f64
                })
                .collect()
        })
        .collect();

    let residuals: Vec<f64> = values
        .iter()
        .map(|v| v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt())
        .collect();
    let scale = blocks.entry_scale();
    let max_residual = residuals.iter().copied().fold(0.0, f64::max);
    Ok(PolyIdentityCheck {
        identity_id: id,
        max_degree: d,
        sample_values: values.iter().map(|v| v[0]).collect(),
        residuals,
        coefficients,
        scale,
        max_residual,
        pass: max_residual <= IDENTITY_TOL * scale,
    })
}

/// All four identities at `λ = Tr R`.
pub fn check_all_identities(blocks: &BlockForm, params: &NullVectorParams) -> Result<Vec<PolyIdentityCheck>> {
    let lambda = blocks.r.trace();
    IdentityId::ALL
        .iter()
        .map(|&id| check_polynomial_identity(blocks, params, lambda, id))
        .collect()
}

/// Coefficients of `z⁰ … z⁴` in (left side − right side) of the fourth
/// identity, expanded by hand.
pub fn eq4_coefficients(blocks: &BlockForm, lambda: Complex64) -> [Complex64; 5] {
    let r = &blocks.r;
    let id = ComplexSquareMatrix::identity(3);
    let p1 = r - &id.scale(lambda);
    let p0 = &(r * r) - &r.scale(lambda);
    let a = &blocks.a;
    let b = &blocks.b;
    let e1: Vec3 = [ONE, ZERO, ZERO];
    let e3: Vec3 = [ZERO, ZERO, ONE];
    let form = |m: &ComplexSquareMatrix, u: &Vec3, v: &Vec3| dot(&row_mat(u, m), v);
    [
        form(&p0, a, &e1) - form(&p0, &e3, b),
        form(&p1, a, &e1) - form(&p1, &e3, b),
        a[0] - form(&p0, a, &e3) - b[2] + form(&p0, &e1, b),
        -form(&p1, a, &e3) + form(&p1, &e1, b),
        -a[2] + b[0],
    ]
}

/// Roots of `v₀x² + v₁x − 2v₀ = 0`, larger real part first.
pub fn closure_roots(params: &NullVectorParams) -> Result<[Complex64; 2]> {
    let (v0, v1) = (params.v0, params.v1);
    if v0.norm() == 0.0 {
        return Err(Error::Domain("closure quadratic degenerates for v0 = 0".into()));
    }
    let disc = (v1 * v1 + v0 * v0 * 8.0).sqrt();
    let x1 = (-v1 + disc) / (v0 * 2.0);
    let x2 = (-v1 - disc) / (v0 * 2.0);
    Ok(if x1.re >= x2.re { [x1, x2] } else { [x2, x1] })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalarRelationReport {
    /// `a₃ = b₁`.
    pub a3_b1: ConditionEntry,
    /// `Re a₁ = Re b₃`.
    pub re_a1_b3: ConditionEntry,
    /// `λ(3v₁ + v₀(ā₁ + b̄₃)) + v₁r₂₂ = 0` with `λ = Tr R`.
    pub trace_relation: ConditionEntry,
    /// `v₀x² + v₁x − 2v₀ = 0` at `x = a₁`.
    pub closure: ConditionEntry,
    /// `|r|² = 2 − x²/2`, present when `R` is `superdiag(r, r̄)`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r_modulus: Option<ConditionEntry>,
}

impl ScalarRelationReport {
    pub fn pass(&self) -> bool {
        [self.a3_b1, self.re_a1_b3, self.trace_relation, self.closure]
            .iter()
            .chain(self.r_modulus.iter())
            .all(|e| e.pass)
    }
}

fn superdiagonal_pair(r: &ComplexSquareMatrix) -> Option<Complex64> {
    let off = (0..3)
        .flat_map(|i| (0..3).map(move |j| (i, j)))
        .filter(|&(i, j)| j != i + 1)
        .map(|(i, j)| r.get(i, j).norm())
        .fold(0.0, f64::max);
    let r12 = r.get(0, 1);
    (off <= RELATION_TOL && (r.get(1, 2) - r12.conj()).norm() <= RELATION_TOL).then_some(r12)
}

pub fn check_scalar_relations(blocks: &BlockForm, params: &NullVectorParams) -> ScalarRelationReport {
    let (v0, v1) = (params.v0, params.v1);
    let [a1, _, a3] = blocks.a;
    let [b1, _, b3] = blocks.b;
    let lambda = blocks.r.trace();
    let trace_rel = lambda * (v1 * 3.0 + v0 * (a1.conj() + b3.conj())) + v1 * blocks.r.get(1, 1);
    let closure = v0 * a1 * a1 + v1 * a1 - v0 * 2.0;
    let r_modulus = superdiagonal_pair(&blocks.r).map(|r| {
        let x = a1;
        ConditionEntry::within(
            (Complex64::new(r.norm_sqr(), 0.0) - (2.0 - x * x * 0.5)).norm(),
            RELATION_TOL,
        )
    });
    ScalarRelationReport {
        a3_b1: ConditionEntry::within((a3 - b1).norm(), RELATION_TOL),
        re_a1_b3: ConditionEntry::within((a1.re - b3.re).abs(), RELATION_TOL),
        trace_relation: ConditionEntry::within(trace_rel.norm(), RELATION_TOL),
        closure: ConditionEntry::within(closure.norm(), RELATION_TOL),
        r_modulus,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TraceCrossCheck {
    /// `Tr(R² − σ₁R)`, expected `−2σ₂`.
    #[serde(serialize_with = "ser_complex")]
    pub first: Complex64,
    /// `Tr(R² − σ₁R − σ₂I)`, expected `−5σ₂`.
    #[serde(serialize_with = "ser_complex")]
    pub second: Complex64,
    pub first_residual: f64,
    pub second_residual: f64,
    pub pass: bool,
}

fn ser_complex<S: serde::Serializer>(c: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
    [c.re, c.im].serialize(s)
}

/// Trace identities for `σ(R) = {0, λ₁, λ₂}` given through
/// `σ₁ = λ₁ + λ₂` and `σ₂ = λ₁λ₂`.
pub fn trace_cross_check(r: &ComplexSquareMatrix, sigma1: Complex64, sigma2: Complex64) -> Result<TraceCrossCheck> {
    if r.dim() != 3 {
        return Err(Error::dim("3", r.dim()));
    }
    let r2 = r * r;
    let tr = r.trace();
    let e2 = (tr * tr - r2.trace()) * 0.5;
    let mismatch = (tr - sigma1)
        .norm()
        .max((e2 - sigma2).norm())
        .max(r.determinant().norm());
    if mismatch > MINPOLY_TOL {
        return Err(Error::Precondition(format!(
            "spectrum of R is not {{0, λ₁, λ₂}} with the given σ₁, σ₂ (mismatch {mismatch:e})"
        )));
    }
    let first = r2.trace() - sigma1 * tr;
    let second = first - sigma2 * 3.0;
    let first_residual = (first + sigma2 * 2.0).norm();
    let second_residual = (second + sigma2 * 5.0).norm();
    Ok(TraceCrossCheck {
        first,
        second,
        first_residual,
        second_residual,
        pass: first_residual <= RELATION_TOL && second_residual <= RELATION_TOL,
    })
}
