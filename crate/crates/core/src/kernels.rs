//! The operator-valued ρ-kernel `K_z^ρ(T) = (I − z̄T)⁻¹ + (I − zT*)⁻¹ + (ρ − 2)I`,
//! its boundary null space, and the quadratic resolvent expansion for 3×3
//! blocks with spectrum `{0, λ₁, λ₂}`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::boundary_points;
use crate::operator::{vector_norm, ComplexSquareMatrix, HermitianForm, MatrixJson, NullVectorParams};
use crate::radii::spectral_radius;
use crate::report::ConditionEntry;

/// Default rank tolerance for null spaces and pseudo-inverses.
pub const RANK_TOL: f64 = 1e-8;
/// Residual bound for the boundary null-vector condition.
pub const KER_TOL: f64 = 1e-8;
/// Gap below which `λ₁`, `λ₂` are treated as one repeated eigenvalue.
pub const CONFLUENT_GAP: f64 = 1e-10;
/// Upper end of the band in which both coefficient branches are evaluated.
pub const CROSS_CHECK_GAP: f64 = 1e-6;

/// A kernel sample `K_z^ρ(T)`.
#[derive(Debug, Clone)]
pub struct KernelEvaluation {
    pub z: Complex64,
    pub rho: f64,
    pub k: HermitianForm,
    pub min_eigenvalue: f64,
    /// `‖K − K*‖_max` before symmetrisation.
    pub symmetrization_defect: f64,
}

#[derive(Serialize)]
struct KernelEvaluationJson {
    #[serde(flatten)]
    matrix: MatrixJson,
    z: [f64; 2],
    rho: f64,
    min_eig: f64,
}

impl Serialize for KernelEvaluation {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        KernelEvaluationJson {
            matrix: MatrixJson::from(self.k.matrix()),
            z: [self.z.re, self.z.im],
            rho: self.rho,
            min_eig: self.min_eigenvalue,
        }
        .serialize(serializer)
    }
}

/// Reusable kernel evaluator for a fixed `(T, ρ)`.
///
/// Nilpotent operators are evaluated through the finite Neumann sum
/// `Σ_{k<n} z̄ᵏTᵏ`, which stays exact on the unit circle.
#[derive(Debug, Clone)]
pub struct KernelEvaluator {
    t: ComplexSquareMatrix,
    t_adj: ComplexSquareMatrix,
    rho: f64,
    /// `T⁰ … Tⁿ⁻¹` when `T` is nilpotent.
    powers: Option<Vec<ComplexSquareMatrix>>,
    spectral_radius: f64,
}

/// `‖Tⁿ‖_max ≤ 1e-12·max(1, ‖T‖_max)ⁿ`.
pub fn is_nilpotent(t: &ComplexSquareMatrix) -> bool {
    let n = t.dim() as u32;
    let scale = t.max_abs().max(1.0).powi(n as i32);
    t.pow(n).max_abs() <= 1e-12 * scale
}

impl KernelEvaluator {
    pub fn new(t: &ComplexSquareMatrix, rho: f64) -> Result<Self> {
        if !(rho > 0.0 && rho.is_finite()) {
            return Err(Error::Input(format!("rho must be positive, got {rho}")));
        }
        let powers = is_nilpotent(t).then(|| {
            let mut acc = vec![ComplexSquareMatrix::identity(t.dim())];
            for k in 1..t.dim() {
                let next = &acc[k - 1] * t;
                acc.push(next);
            }
            acc
        });
        let spectral_radius = if powers.is_some() {
            0.0
        } else {
            spectral_radius(t).value
        };
        Ok(Self {
            t: t.clone(),
            t_adj: t.adjoint(),
            rho,
            powers,
            spectral_radius,
        })
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn is_nilpotent(&self) -> bool {
        self.powers.is_some()
    }

    pub fn operator(&self) -> &ComplexSquareMatrix {
        &self.t
    }

    /// `(I − z̄T)⁻¹`.
    pub fn resolvent(&self, z: Complex64) -> Result<ComplexSquareMatrix> {
        self.resolvent_pair(z).map(|(x, _)| x)
    }

    fn resolvent_pair(&self, z: Complex64) -> Result<(ComplexSquareMatrix, ComplexSquareMatrix)> {
        let n = self.t.dim();
        if let Some(powers) = &self.powers {
            let zb = z.conj();
            let mut x = ComplexSquareMatrix::zeros(n);
            let mut y = ComplexSquareMatrix::zeros(n);
            let mut zb_k = Complex64::new(1.0, 0.0);
            for p in powers {
                x = &x + &p.scale(zb_k);
                y = &y + &p.adjoint().scale(zb_k.conj());
                zb_k *= zb;
            }
            return Ok((x, y));
        }
        if z.norm() >= 1.0 - 1e-15 && self.spectral_radius >= 1.0 {
            return Err(Error::Precondition(format!(
                "boundary kernel needs r(T) < 1 or nilpotent T (r(T) = {})",
                self.spectral_radius
            )));
        }
        let id = ComplexSquareMatrix::identity(n);
        let x = (&id - &self.t.scale(z.conj())).inverse()?;
        let y = (&id - &self.t_adj.scale(z)).inverse()?;
        Ok((x, y))
    }

    pub fn evaluate(&self, z: Complex64) -> Result<KernelEvaluation> {
        if z.norm() > 1.0 + 1e-12 {
            return Err(Error::Precondition(format!("kernel needs |z| <= 1, got {}", z.norm())));
        }
        let n = self.t.dim();
        let (x, y) = self.resolvent_pair(z)?;
        let shift = ComplexSquareMatrix::identity(n).scale_real(self.rho - 2.0);
        let raw = &(&x + &y) + &shift;
        let symmetrization_defect = raw.max_abs_diff(&raw.adjoint());
        let k = HermitianForm::symmetrize(&raw);
        let min_eigenvalue = k.min_eigenvalue();
        Ok(KernelEvaluation {
            z,
            rho: self.rho,
            k,
            min_eigenvalue,
            symmetrization_defect,
        })
    }
}

/// `K_z^ρ(T)` at a single point.
pub fn rho_kernel(t: &ComplexSquareMatrix, z: Complex64, rho: f64) -> Result<KernelEvaluation> {
    KernelEvaluator::new(t, rho)?.evaluate(z)
}

/// Orthonormal basis of the eigenvectors with `|λ| ≤ rank_tol·(1 + ‖K‖)`.
pub fn kernel_null_space(k: &KernelEvaluation, rank_tol: f64) -> Vec<Vec<Complex64>> {
    k.k.null_space(rank_tol)
}

/// Worst relative residual `‖K_z²(T)v(z)‖/‖v(z)‖` over `boundary_angles`
/// equally spaced points of the unit circle; passes at `≤ 1e-8`.
pub fn verify_ker_condition(
    t: &ComplexSquareMatrix,
    params: &NullVectorParams,
    boundary_angles: usize,
) -> Result<ConditionEntry> {
    if t.dim() != 5 {
        return Err(Error::dim("5", t.dim()));
    }
    if boundary_angles == 0 {
        return Err(Error::Precondition("boundary_angles must be positive".into()));
    }
    let eval = KernelEvaluator::new(t, 2.0)?;
    let mut worst = 0.0_f64;
    for p in boundary_points(boundary_angles) {
        let k = eval.evaluate(p.z)?;
        let v = params.vector(p.z);
        let kv = k.k.matrix().apply(&v);
        worst = worst.max(vector_norm(&kv) / vector_norm(&v));
    }
    Ok(ConditionEntry::within(worst, KER_TOL))
}

/// Which formula produced a pair of power coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CoeffBranch {
    /// Divided-difference quotients.
    Distinct,
    /// Gap inside the cross-check band; distinct values from the
    /// cancellation-free sum, compared against the confluent formula.
    CrossChecked,
    /// Hermite (repeated eigenvalue) formulas.
    Confluent,
}

/// Coefficients of `Rⁿ = Aₙ R² + Bₙ R`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerCoeffs {
    pub a: Complex64,
    pub b: Complex64,
    pub branch: CoeffBranch,
    /// Distance between the two branches; only computed in the cross-check band.
    pub branch_discrepancy: Option<f64>,
}

/// Complete homogeneous symmetric polynomial `Σ_{j=0}^{m} λ₁ʲ λ₂^{m−j}`.
fn complete_homogeneous(l1: Complex64, l2: Complex64, m: i64) -> Complex64 {
    if m < 0 {
        return Complex64::new(0.0, 0.0);
    }
    let mut acc = Complex64::new(0.0, 0.0);
    let mut p1 = Complex64::new(1.0, 0.0);
    for j in 0..=m {
        acc += p1 * l2.powu((m - j) as u32);
        p1 *= l1;
    }
    acc
}

fn confluent_coeffs(lambda: Complex64, n: u32) -> (Complex64, Complex64) {
    let nf = n as f64;
    let a = lambda.powu(n - 2) * (nf - 1.0);
    let b = -lambda.powu(n - 1) * (nf - 2.0);
    (a, b)
}

/// `(Aₙ, Bₙ)` with `Rⁿ = Aₙ R² + Bₙ R` for `σ(R) = {0, λ₁, λ₂}`.
///
/// # Panics
/// If `n == 0`.
pub fn resolvent_power_coeffs(l1: Complex64, l2: Complex64, n: u32) -> PowerCoeffs {
    assert!(n >= 1, "power index must be at least 1");
    let gap = (l1 - l2).norm();
    let branch = if gap <= CONFLUENT_GAP {
        CoeffBranch::Confluent
    } else if gap <= CROSS_CHECK_GAP {
        CoeffBranch::CrossChecked
    } else {
        CoeffBranch::Distinct
    };
    if n == 1 {
        return PowerCoeffs {
            a: Complex64::new(0.0, 0.0),
            b: Complex64::new(1.0, 0.0),
            branch,
            branch_discrepancy: None,
        };
    }
    match branch {
        CoeffBranch::Confluent => {
            let (a, b) = confluent_coeffs((l1 + l2) * 0.5, n);
            PowerCoeffs {
                a,
                b,
                branch,
                branch_discrepancy: None,
            }
        }
        CoeffBranch::Distinct => {
            let quotient = |m: u32| (l1.powu(m) - l2.powu(m)) / (l1 - l2);
            PowerCoeffs {
                a: quotient(n - 1),
                b: -l1 * l2 * quotient(n - 2),
                branch,
                branch_discrepancy: None,
            }
        }
        CoeffBranch::CrossChecked => {
            let a = complete_homogeneous(l1, l2, n as i64 - 2);
            let b = -l1 * l2 * complete_homogeneous(l1, l2, n as i64 - 3);
            let (ca, cb) = confluent_coeffs((l1 + l2) * 0.5, n);
            PowerCoeffs {
                a,
                b,
                branch,
                branch_discrepancy: Some((a - ca).norm().max((b - cb).norm())),
            }
        }
    }
}

/// Checks `σ(R) = {0, λ₁, λ₂}` through the characteristic polynomial
/// `t³ − σ₁t² + σ₂t`, comparing trace, second invariant and determinant.
pub fn check_block_spectrum(r: &ComplexSquareMatrix, l1: Complex64, l2: Complex64, tol: f64) -> Result<()> {
    if r.dim() != 3 {
        return Err(Error::dim("3", r.dim()));
    }
    let s = 1.0 + r.max_abs();
    let tr = r.trace();
    let e2 = (tr * tr - (r * r).trace()) * 0.5;
    let det = r.determinant();
    let errs = [
        (tr - (l1 + l2)).norm() / s,
        (e2 - l1 * l2).norm() / (s * s),
        det.norm() / (s * s * s),
    ];
    let worst = errs.iter().copied().fold(0.0, f64::max);
    if worst > tol {
        return Err(Error::Precondition(format!(
            "spectrum of R does not match {{0, {l1}, {l2}}} (invariant mismatch {worst:e})"
        )));
    }
    Ok(())
}

/// `(I − z̄R)⁻¹ = I + c₁(z)R + c₂(z)R²` with
/// `c₁ = (z̄ − z̄²(λ₁+λ₂))/((1−z̄λ₁)(1−z̄λ₂))` and `c₂ = z̄²/((1−z̄λ₁)(1−z̄λ₂))`.
pub fn resolvent_via_expansion(
    r: &ComplexSquareMatrix,
    l1: Complex64,
    l2: Complex64,
    z: Complex64,
) -> Result<ComplexSquareMatrix> {
    check_block_spectrum(r, l1, l2, 1e-8)?;
    if z.norm() > 1.0 + 1e-12 {
        return Err(Error::Precondition(format!(
            "expansion needs |z| <= 1, got {}",
            z.norm()
        )));
    }
    let (c1, c2) = expansion_coefficients(l1, l2, z);
    let r2 = r * r;
    let id = ComplexSquareMatrix::identity(3);
    Ok(&(&id + &r.scale(c1)) + &r2.scale(c2))
}

/// `(c₁(z), c₂(z))`; the confluent denominator is `(1 − z̄λ)²`.
pub fn expansion_coefficients(l1: Complex64, l2: Complex64, z: Complex64) -> (Complex64, Complex64) {
    let zb = z.conj();
    let denom = if (l1 - l2).norm() <= CONFLUENT_GAP {
        let l = (l1 + l2) * 0.5;
        (Complex64::new(1.0, 0.0) - zb * l).powu(2)
    } else {
        (Complex64::new(1.0, 0.0) - zb * l1) * (Complex64::new(1.0, 0.0) - zb * l2)
    };
    let c1 = (zb - zb * zb * (l1 + l2)) / denom;
    let c2 = zb * zb / denom;
    (c1, c2)
}
