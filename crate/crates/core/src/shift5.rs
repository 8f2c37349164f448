//! Membership conditions for the Harnack part of the normalized 5×5 shift,
//! the two explicit solution families, lower-dimensional reference
//! families, and the classifier.

use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{boundary_points, GridSpec};
use crate::kernels::verify_ker_condition;
use crate::operator::{
    block_decompose, build_shift, conjugate_by_diagonal_unitary, normalized_weight, superdiagonal, BlockForm,
    ComplexSquareMatrix, HermitianForm, NullVectorParams,
};
use crate::radii::spectral_radius;
use crate::report::ConditionEntry;

/// Default residual tolerance for condition entries.
pub const CONDITION_TOL: f64 = 1e-8;
/// Required slack in the strict trace inequality.
pub const P5_MARGIN: f64 = 1e-9;
/// Default entry-matching tolerance of [`classify`].
pub const CLASSIFY_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ConditionId {
    #[serde(rename = "blockform")]
    BlockForm,
    #[serde(rename = "spectrum_R")]
    SpectrumR,
    #[serde(rename = "ker")]
    Ker,
    #[serde(rename = "p1")]
    P1,
    #[serde(rename = "p2")]
    P2,
    #[serde(rename = "p3")]
    P3,
    #[serde(rename = "p4")]
    P4,
    #[serde(rename = "p5")]
    P5,
    #[serde(rename = "p2S5")]
    P2S5,
    #[serde(rename = "nilpotent5")]
    Nilpotent5,
}

impl ConditionId {
    pub const ALL: [ConditionId; 10] = [
        ConditionId::BlockForm,
        ConditionId::SpectrumR,
        ConditionId::Ker,
        ConditionId::P1,
        ConditionId::P2,
        ConditionId::P3,
        ConditionId::P4,
        ConditionId::P5,
        ConditionId::P2S5,
        ConditionId::Nilpotent5,
    ];
}

/// Per-condition outcomes. Serialises as a flat object keyed by condition id.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct ConditionReport {
    pub entries: BTreeMap<ConditionId, ConditionEntry>,
}

impl ConditionReport {
    /// Conjunction of all entries.
    pub fn verdict(&self) -> bool {
        self.entries.values().all(|e| e.pass)
    }

    pub fn get(&self, id: ConditionId) -> &ConditionEntry {
        &self.entries[&id]
    }

    pub fn failing(&self) -> Vec<ConditionId> {
        self.entries
            .iter()
            .filter(|(_, e)| !e.pass)
            .map(|(id, _)| *id)
            .collect()
    }

    /// Largest residual among passing entries.
    pub fn worst_passing_residual(&self) -> f64 {
        self.entries
            .values()
            .filter(|e| e.pass)
            .map(|e| e.residual)
            .fold(0.0, f64::max)
    }
}

/// `det(X e₁, Y e₂, Z e₃)`: the determinant whose columns are taken from
/// three different matrices.
pub fn mixed_det(x: &ComplexSquareMatrix, y: &ComplexSquareMatrix, z: &ComplexSquareMatrix) -> Complex64 {
    let m = ComplexSquareMatrix::from_fn(3, |i, j| match j {
        0 => x.get(i, 0),
        1 => y.get(i, 1),
        _ => z.get(i, 2),
    });
    m.determinant()
}

/// Determinant sums `(p2, p3, p4)` for the block form.
pub fn determinant_conditions(blocks: &BlockForm) -> (Complex64, Complex64, Complex64) {
    let r = &blocks.r;
    let rs = r.adjoint();
    let m = blocks.m_matrix();
    let d = mixed_det;
    let p2 = d(&rs, &rs, &m) + d(&rs, &m, &rs) + d(&m, &rs, &rs);
    let p3 = d(&rs, &m, &m) + d(&m, &m, &rs) + (d(r, &rs, &rs) + d(&rs, r, &rs) + d(&rs, &rs, r)) * 0.25;
    let p4 = m.determinant()
        + (d(&rs, r, &m) + d(r, &rs, &m) + d(&m, &rs, r) + d(&m, r, &rs) + d(&rs, &m, r) + d(r, &m, &rs)) * 0.25;
    (p2, p3, p4)
}

/// `min_z λ_min(M − Re(z̄R))` over `boundary_angles` points of the circle.
pub fn boundary_m_min_eigenvalue(blocks: &BlockForm, boundary_angles: usize) -> f64 {
    let m = blocks.m_matrix();
    boundary_points(boundary_angles)
        .map(|p| {
            let re = blocks.r.scale(p.z.conj()).hermitian_part();
            HermitianForm::symmetrize(&(&m - &re)).min_eigenvalue()
        })
        .fold(f64::INFINITY, f64::min)
}

/// Evaluates every membership condition on `t`.
pub fn check_corollary_conditions(
    t: &ComplexSquareMatrix,
    params: &NullVectorParams,
    grid: &GridSpec,
    tol: f64,
) -> Result<ConditionReport> {
    let blocks = block_decompose(t)?;
    let mut entries = BTreeMap::new();
    entries.insert(
        ConditionId::BlockForm,
        ConditionEntry::within(blocks.pattern_residual, tol),
    );

    let r_radius = spectral_radius(&blocks.r).value;
    entries.insert(ConditionId::SpectrumR, ConditionEntry::with_margin(1.0 - r_radius, 0.0));

    let ker = verify_ker_condition(t, params, grid.boundary_angles.max(1))
        .unwrap_or_else(|_| ConditionEntry::failed(f64::INFINITY));
    entries.insert(ConditionId::Ker, ker);

    entries.insert(
        ConditionId::P1,
        ConditionEntry::within(blocks.r.determinant().norm(), tol),
    );
    let (p2, p3, p4) = determinant_conditions(&blocks);
    entries.insert(ConditionId::P2, ConditionEntry::within(p2.norm(), tol));
    entries.insert(ConditionId::P3, ConditionEntry::within(p3.norm(), tol));
    entries.insert(ConditionId::P4, ConditionEntry::within(p4.norm(), tol));

    let p5 = 3.0 - 0.25 * (blocks.a_norm_sqr() + blocks.b_norm_sqr()) - blocks.r.trace().norm();
    entries.insert(ConditionId::P5, ConditionEntry::with_margin(p5, P5_MARGIN));

    let m_min = boundary_m_min_eigenvalue(&blocks, grid.boundary_angles.max(1));
    entries.insert(
        ConditionId::P2S5,
        ConditionEntry {
            pass: m_min >= -tol,
            residual: (-m_min).max(0.0),
            margin: Some(m_min),
        },
    );

    entries.insert(ConditionId::Nilpotent5, ConditionEntry::within(t.pow(5).max_abs(), tol));
    Ok(ConditionReport { entries })
}

/// First solution family: `(2/√3)·superdiag(1, e^{iθ}, e^{−iθ}, 1)`.
pub fn family1(theta: f64) -> ComplexSquareMatrix {
    let a = 2.0 / 3f64.sqrt();
    superdiagonal(&[
        Complex64::new(a, 0.0),
        Complex64::from_polar(a, theta),
        Complex64::from_polar(a, -theta),
        Complex64::new(a, 0.0),
    ])
}

/// Second solution family: `superdiag(−√3, e^{iθ}/√2, e^{−iθ}/√2, −√3)`.
pub fn family2(theta: f64) -> ComplexSquareMatrix {
    let x = -(3f64.sqrt());
    let r = 1.0 / 2f64.sqrt();
    superdiagonal(&[
        Complex64::new(x, 0.0),
        Complex64::from_polar(r, theta),
        Complex64::from_polar(r, -theta),
        Complex64::new(x, 0.0),
    ])
}

/// `superdiag(√3, 1/√2, 1/√2, √3)`, the positive representative of the
/// second family's unitary orbit.
pub fn family2_representative() -> ComplexSquareMatrix {
    let x = 3f64.sqrt();
    let r = 1.0 / 2f64.sqrt();
    superdiagonal(&[x, r, r, x].map(|v| Complex64::new(v, 0.0)))
}

/// Phases of `diag(1, 1, e^{iθ}, 1, 1)`: conjugating `S` gives `family1(θ)`.
pub fn family1_phases(theta: f64) -> [f64; 5] {
    [0.0, 0.0, theta, 0.0, 0.0]
}

/// Phases of `diag(1, −1, −e^{iθ}, −1, 1)`: conjugating
/// [`family2_representative`] gives `family2(θ)`.
pub fn family2_phases(theta: f64) -> [f64; 5] {
    [0.0, PI, PI + theta, PI, 0.0]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Family1,
    Family2,
    ShiftItself,
    None,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Family1 => "family1",
            Family::Family2 => "family2",
            Family::ShiftItself => "shift_itself",
            Family::None => "none",
        }
    }
}

/// Classification outcome, `{"family": name, "theta": value}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FamilyTag {
    pub family: Family,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub theta: Option<f64>,
}

impl FamilyTag {
    pub fn none() -> Self {
        Self {
            family: Family::None,
            theta: None,
        }
    }

    /// Whether this tag names `family(theta)`. The shift itself is the
    /// `θ ≡ 0` member of the first family.
    pub fn represents(&self, family: Family, theta: f64, tol: f64) -> bool {
        match (self.family, family) {
            (Family::ShiftItself, Family::Family1) => angle_distance(theta, 0.0) <= tol,
            (Family::ShiftItself, Family::ShiftItself) => true,
            (a, b) if a == b => match self.theta {
                Some(t) => angle_distance(t, theta) <= tol,
                None => b == Family::None,
            },
            _ => false,
        }
    }
}

/// Distance between two angles on the circle.
pub fn angle_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

/// Principal argument in `[0, 2π)`.
fn principal_arg(z: Complex64) -> f64 {
    let t = z.arg().rem_euclid(TAU);
    if t >= TAU {
        0.0
    } else {
        t
    }
}

/// Runs the condition checks, then matches the superdiagonal pattern
/// `(x, r, r̄, x)` against the two families.
pub fn classify(t: &ComplexSquareMatrix, tol: f64) -> Result<(FamilyTag, ConditionReport)> {
    classify_with(t, tol, &GridSpec::harnack_default(), CONDITION_TOL)
}

/// [`classify`] with an explicit grid and condition tolerance.
pub fn classify_with(
    t: &ComplexSquareMatrix,
    tol: f64,
    grid: &GridSpec,
    condition_tol: f64,
) -> Result<(FamilyTag, ConditionReport)> {
    let report = check_corollary_conditions(t, &NullVectorParams::shift5(), grid, condition_tol)?;
    if !report.verdict() {
        return Ok((FamilyTag::none(), report));
    }
    Ok((match_pattern(t, tol), report))
}

fn match_pattern(t: &ComplexSquareMatrix, tol: f64) -> FamilyTag {
    let x = t.get(0, 1);
    let r = t.get(1, 2);
    let off_pattern = (0..5)
        .flat_map(|i| (0..5).map(move |j| (i, j)))
        .filter(|&(i, j)| j != i + 1)
        .map(|(i, j)| t.get(i, j).norm())
        .fold(0.0, f64::max);
    let structured = off_pattern <= tol
        && (t.get(2, 3) - r.conj()).norm() <= tol
        && (t.get(3, 4) - x).norm() <= tol
        && x.im.abs() <= tol;
    if !structured {
        return FamilyTag::none();
    }
    let a = normalized_weight(5);
    let theta = principal_arg(r);
    if (x.re - a).abs() <= tol && (r.norm() - a).abs() <= tol {
        if angle_distance(theta, 0.0) <= tol {
            return FamilyTag {
                family: Family::ShiftItself,
                theta: None,
            };
        }
        return FamilyTag {
            family: Family::Family1,
            theta: Some(theta),
        };
    }
    if (x.re + 3f64.sqrt()).abs() <= tol && (r.norm() - 0.5f64.sqrt()).abs() <= tol {
        return FamilyTag {
            family: Family::Family2,
            theta: Some(theta),
        };
    }
    FamilyTag::none()
}

/// Known Harnack-part members of the normalized shift in dimensions 2–4.
///
/// dim 2: `{S₂}`; dim 3: `{U_θ* S₃ U_θ}` with `U_θ = diag(e^{iθ}, 1, e^{iθ})`;
/// dim 4: `{S₄, 2·superdiag(−1/a, 1 − 1/a², −1/a)}` with `a = 1/cos(π/5)`.
pub fn reference_family(dim: usize, theta: f64) -> Result<Vec<ComplexSquareMatrix>> {
    match dim {
        2 => Ok(vec![build_shift(2, true)?]),
        3 => {
            let s3 = build_shift(3, true)?;
            Ok(vec![conjugate_by_diagonal_unitary(&s3, &[theta, 0.0, theta])?])
        }
        4 => {
            let a = normalized_weight(4);
            let second =
                superdiagonal(&[-2.0 / a, 2.0 * (1.0 - 1.0 / (a * a)), -2.0 / a].map(|v| Complex64::new(v, 0.0)));
            Ok(vec![build_shift(4, true)?, second])
        }
        _ => Err(Error::Domain(format!(
            "reference families exist for dims 2, 3, 4; got {dim}"
        ))),
    }
}
