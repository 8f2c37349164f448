//! Pipeline run by `verify-theorem`: for dimension 5 both solution families
//! are pushed through the condition checks, the equivalence test against the
//! shift, the classifier and the polynomial identities; for dimensions 2–4
//! the reference members are tested for equivalence with the shift.

use std::f64::consts::TAU;

use harnack_core::harnack::domination_constant_with_cap;
use harnack_core::oracle::check_all_identities;
use harnack_core::shift5::CLASSIFY_TOL;
use harnack_core::{
    block_decompose, build_shift, check_corollary_conditions, check_scalar_relations, classify_with, family1, family2,
    reference_family, ComplexSquareMatrix, Error, Family, FamilyTag, GridSpec, NullVectorParams,
};
use serde::Serialize;

/// Angular tolerance of the classifier round trip.
pub const ROUND_TRIP_TOL: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub rho: f64,
    pub cap: f64,
    pub tol: f64,
    pub grid: GridSpec,
    pub thetas: Vec<f64>,
}

/// `θ_k = 2πk/n`, `k = 0, …, n−1`.
pub fn uniform_thetas(n: usize) -> Vec<f64> {
    (0..n).map(|k| TAU * k as f64 / n as f64).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct Equivalence {
    pub equivalent: bool,
    pub c_forward: Option<f64>,
    pub c_backward: Option<f64>,
    pub null_residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct FamilyCheck {
    pub family: &'static str,
    pub theta: f64,
    pub conditions_pass: bool,
    pub condition_residual: f64,
    pub equivalence: Equivalence,
    pub classified: FamilyTag,
    pub round_trip: bool,
    pub identities_pass: bool,
    pub identity_residual: f64,
    pub scalar_relations_pass: bool,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct MemberCheck {
    pub member: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    pub equivalence: Equivalence,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum Checks {
    Families(Vec<FamilyCheck>),
    Members(Vec<MemberCheck>),
}

#[derive(Debug, Clone, Serialize)]
pub struct Worst {
    pub condition_residual: f64,
    pub identity_residual: f64,
    pub null_residual: f64,
    pub c: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub verdict: bool,
    pub dim: usize,
    pub rho: f64,
    pub thetas: Vec<f64>,
    pub grid: GridSpec,
    pub passed: usize,
    pub failed: usize,
    pub worst: Worst,
    pub checks: Checks,
}

fn equivalence(t: &ComplexSquareMatrix, s: &ComplexSquareMatrix, opts: &VerifyOptions) -> Result<Equivalence, Error> {
    let fwd = domination_constant_with_cap(t, s, opts.rho, &opts.grid, opts.tol, opts.cap)?;
    let bwd = domination_constant_with_cap(s, t, opts.rho, &opts.grid, opts.tol, opts.cap)?;
    Ok(Equivalence {
        equivalent: fwd.feasible && bwd.feasible,
        c_forward: fwd.c,
        c_backward: bwd.c,
        null_residual: fwd.max_null_residual().max(bwd.max_null_residual()),
    })
}

fn family_check(
    family: Family,
    theta: f64,
    s: &ComplexSquareMatrix,
    opts: &VerifyOptions,
) -> Result<FamilyCheck, Error> {
    let t = match family {
        Family::Family1 => family1(theta),
        _ => family2(theta),
    };
    let params = NullVectorParams::shift5();
    let conditions = check_corollary_conditions(&t, &params, &opts.grid, opts.tol)?;
    let equivalence = equivalence(&t, s, opts)?;
    let (classified, _) = classify_with(&t, CLASSIFY_TOL, &opts.grid, opts.tol)?;
    let round_trip = classified.represents(family, theta, ROUND_TRIP_TOL);
    let blocks = block_decompose(&t)?;
    let identities = check_all_identities(&blocks, &params)?;
    let identities_pass = identities.iter().all(|c| c.pass);
    let scalar_relations_pass = check_scalar_relations(&blocks, &params).pass();
    let pass = conditions.verdict() && equivalence.equivalent && round_trip && identities_pass && scalar_relations_pass;
    Ok(FamilyCheck {
        family: family.name(),
        theta,
        conditions_pass: conditions.verdict(),
        condition_residual: conditions.entries.values().map(|e| e.residual).fold(0.0, f64::max),
        equivalence,
        classified,
        round_trip,
        identities_pass,
        identity_residual: identities.iter().map(|c| c.max_residual).fold(0.0, f64::max),
        scalar_relations_pass,
        pass,
    })
}

fn worst_equivalence<'a>(eqs: impl Iterator<Item = &'a Equivalence>) -> (f64, f64) {
    eqs.fold((0.0, 1.0), |(null, c), e| {
        let ec = e
            .c_forward
            .unwrap_or(f64::INFINITY)
            .max(e.c_backward.unwrap_or(f64::INFINITY));
        (null.max(e.null_residual), c.max(ec))
    })
}

/// Runs the verification pipeline for `dim ∈ {2, 3, 4, 5}`.
pub fn verify_theorem(dim: usize, opts: &VerifyOptions) -> Result<VerifyReport, Error> {
    if opts.thetas.is_empty() {
        return Err(Error::Input("at least one θ sample is required".into()));
    }
    if !(2..=5).contains(&dim) {
        return Err(Error::Domain(format!("verify-theorem covers dims 2 to 5, got {dim}")));
    }
    let s = build_shift(dim, true)?;
    let (checks, passed, worst) = if dim == 5 {
        let mut out = Vec::with_capacity(2 * opts.thetas.len());
        for &theta in &opts.thetas {
            for family in [Family::Family1, Family::Family2] {
                out.push(family_check(family, theta, &s, opts)?);
            }
        }
        let (null, c) = worst_equivalence(out.iter().map(|f| &f.equivalence));
        let worst = Worst {
            condition_residual: out.iter().map(|f| f.condition_residual).fold(0.0, f64::max),
            identity_residual: out.iter().map(|f| f.identity_residual).fold(0.0, f64::max),
            null_residual: null,
            c,
        };
        let passed = out.iter().filter(|f| f.pass).count();
        (Checks::Families(out), passed, worst)
    } else {
        let members: Vec<(Option<f64>, ComplexSquareMatrix)> = match dim {
            3 => opts
                .thetas
                .iter()
                .map(|&th| Ok((Some(th), reference_family(3, th)?.remove(0))))
                .collect::<Result<_, Error>>()?,
            _ => reference_family(dim, 0.0)?.into_iter().map(|m| (None, m)).collect(),
        };
        let mut out = Vec::with_capacity(members.len());
        for (member, (theta, t)) in members.into_iter().enumerate() {
            let equivalence = equivalence(&t, &s, opts)?;
            out.push(MemberCheck {
                member,
                theta,
                pass: equivalence.equivalent,
                equivalence,
            });
        }
        let (null, c) = worst_equivalence(out.iter().map(|m| &m.equivalence));
        let worst = Worst {
            condition_residual: 0.0,
            identity_residual: 0.0,
            null_residual: null,
            c,
        };
        let passed = out.iter().filter(|m| m.pass).count();
        (Checks::Members(out), passed, worst)
    };
    let total = match &checks {
        Checks::Families(f) => f.len(),
        Checks::Members(m) => m.len(),
    };
    Ok(VerifyReport {
        verdict: passed == total,
        dim,
        rho: opts.rho,
        thetas: opts.thetas.clone(),
        grid: opts.grid.clone(),
        passed,
        failed: total - passed,
        worst,
        checks,
    })
}
