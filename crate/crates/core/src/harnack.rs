//! Harnack domination `K_z^ρ(T₁) ≤ c²·K_z^ρ(T₀)` checked on a sampled disk.
//!
//! On the boundary `K_z^ρ(T₀)` may be singular. A sample is feasible when
//! the null space of `K₀` is (numerically) annihilated by `K₁`; the
//! minimal constant on the range is the top eigenvalue of
//! `K₀^{+1/2} K₁ K₀^{+1/2}` with the pseudo-inverse square root cut at the
//! rank tolerance.

use num_complex::Complex64;
use serde::ser::SerializeStruct;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::kernels::{KernelEvaluator, RANK_TOL};
use crate::operator::{vector_norm, ComplexSquareMatrix, HermitianForm};
use crate::radii::{rho_radius, spectral_radius, BISECTION_TOL};

/// `c²` above this at any sample makes the certificate infeasible.
pub const INFEASIBILITY_CAP: f64 = 1e6;
/// Default null-containment tolerance.
pub const NULL_TOL: f64 = 1e-8;
/// Margin below one required for membership in the zero part.
pub const ZERO_PART_MARGIN: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DominationSample {
    pub z: Complex64,
    /// `None` when the sample is infeasible.
    pub c_squared_min: Option<f64>,
    /// Largest `‖K₁u‖` over the null basis `u` of `K₀`.
    pub null_residual: f64,
}

impl Serialize for DominationSample {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("DominationSample", 3)?;
        st.serialize_field("z", &[self.z.re, self.z.im])?;
        st.serialize_field("c2_min", &self.c_squared_min)?;
        st.serialize_field("null_residual", &self.null_residual)?;
        st.end()
    }
}

/// Grid certificate for `T₁ ≺ T₀`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DominationCertificate {
    pub feasible: bool,
    /// `max(1, sup √c²_min)`; `None` when infeasible.
    pub c: Option<f64>,
    pub rho: f64,
    pub cap: f64,
    pub grid: GridSpec,
    pub samples: Vec<DominationSample>,
}

impl DominationCertificate {
    /// Largest per-sample `c²_min` among feasible samples.
    pub fn max_c_squared(&self) -> Option<f64> {
        self.samples.iter().filter_map(|s| s.c_squared_min).reduce(f64::max)
    }

    pub fn max_null_residual(&self) -> f64 {
        self.samples.iter().map(|s| s.null_residual).fold(0.0, f64::max)
    }
}

fn check_spectrum(t: &ComplexSquareMatrix, name: &str) -> Result<()> {
    let r = spectral_radius(t).value;
    if r > 1.0 + 1e-8 {
        return Err(Error::Precondition(format!(
            "spectrum of {name} leaves the closed disk (r = {r})"
        )));
    }
    Ok(())
}

fn sample(k1: &HermitianForm, k0: &HermitianForm, tol: f64, cap: f64) -> (Option<f64>, f64) {
    let null = k0.null_space(RANK_TOL);
    let null_residual = null
        .iter()
        .map(|u| vector_norm(&k1.matrix().apply(u)))
        .fold(0.0, f64::max);
    if null_residual > tol * (1.0 + k1.norm()) {
        return (None, null_residual);
    }
    let root = k0.pseudo_inverse_sqrt(RANK_TOL);
    let pencil = &(&root * k1.matrix()) * &root;
    let c2 = HermitianForm::symmetrize(&pencil).max_eigenvalue();
    ((c2 <= cap).then_some(c2), null_residual)
}

/// Certificate for `T₁ ≺ T₀` with the default cap.
pub fn domination_constant(
    t1: &ComplexSquareMatrix,
    t0: &ComplexSquareMatrix,
    rho: f64,
    grid: &GridSpec,
    tol: f64,
) -> Result<DominationCertificate> {
    domination_constant_with_cap(t1, t0, rho, grid, tol, INFEASIBILITY_CAP)
}

pub fn domination_constant_with_cap(
    t1: &ComplexSquareMatrix,
    t0: &ComplexSquareMatrix,
    rho: f64,
    grid: &GridSpec,
    tol: f64,
    cap: f64,
) -> Result<DominationCertificate> {
    if t1.dim() != t0.dim() {
        return Err(Error::dim(t0.dim().to_string(), t1.dim()));
    }
    if !(tol > 0.0 && cap > 0.0) {
        return Err(Error::Input("domination tolerance and cap must be positive".into()));
    }
    grid.validate()?;
    check_spectrum(t1, "T1")?;
    check_spectrum(t0, "T0")?;
    let e1 = KernelEvaluator::new(t1, rho)?;
    let e0 = KernelEvaluator::new(t0, rho)?;

    let mut samples = Vec::with_capacity(grid.len());
    for p in grid.points() {
        let k1 = e1.evaluate(p.z)?;
        let k0 = e0.evaluate(p.z)?;
        let (c_squared_min, null_residual) = sample(&k1.k, &k0.k, tol, cap);
        samples.push(DominationSample {
            z: p.z,
            c_squared_min,
            null_residual,
        });
    }
    let feasible = samples.iter().all(|s| s.c_squared_min.is_some());
    let c = feasible.then(|| {
        let worst = samples.iter().filter_map(|s| s.c_squared_min).fold(1.0, f64::max);
        worst.sqrt().max(1.0)
    });
    Ok(DominationCertificate {
        feasible,
        c,
        rho,
        cap,
        grid: grid.clone(),
        samples,
    })
}

/// Mutual domination. Returns `(equivalent, T₁ ≺ T₀, T₀ ≺ T₁)`.
pub fn is_equivalent(
    t1: &ComplexSquareMatrix,
    t0: &ComplexSquareMatrix,
    rho: f64,
    grid: &GridSpec,
) -> Result<(bool, DominationCertificate, DominationCertificate)> {
    let forward = domination_constant(t1, t0, rho, grid, NULL_TOL)?;
    let backward = domination_constant(t0, t1, rho, grid, NULL_TOL)?;
    Ok((forward.feasible && backward.feasible, forward, backward))
}

/// Strict ρ-contraction test, `w_ρ(T) < 1 − 1e-7`.
pub fn in_zero_part(t: &ComplexSquareMatrix, rho: f64) -> Result<bool> {
    let w = rho_radius(t, rho, &GridSpec::radius_default(), BISECTION_TOL)?;
    Ok(w.value < 1.0 - ZERO_PART_MARGIN)
}
