//! Operator norm, spectral radius, numerical radius and the ρ-numerical
//! radius `w_ρ`.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::{GridSpec, SamplePoint};
use crate::kernels::KernelEvaluator;
use crate::operator::{ComplexSquareMatrix, HermitianForm};

/// Default bisection width for [`rho_radius`].
pub const BISECTION_TOL: f64 = 1e-7;
/// Stopping width (radians) of the golden-section refinements.
pub const ANGLE_TOL: f64 = 1e-10;
/// Relative PSD slack in disk positivity checks.
pub const PSD_SLACK: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RadiusMethod {
    Norm,
    Spectral,
    Numerical,
    RhoBisection,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RadiusResult {
    pub value: f64,
    pub method: RadiusMethod,
    pub iterations: usize,
    pub residual: f64,
}

/// Largest singular value.
pub fn operator_norm(t: &ComplexSquareMatrix) -> RadiusResult {
    RadiusResult {
        value: t.singular_values()[0],
        method: RadiusMethod::Norm,
        iterations: 0,
        residual: 0.0,
    }
}

/// Largest eigenvalue modulus.
pub fn spectral_radius(t: &ComplexSquareMatrix) -> RadiusResult {
    let value = t.eigenvalues().iter().map(|l| l.norm()).fold(0.0, f64::max);
    RadiusResult {
        value,
        method: RadiusMethod::Spectral,
        iterations: 0,
        residual: 0.0,
    }
}

/// `λ_max(Re(e^{−iθ}T))`.
fn support_value(t: &ComplexSquareMatrix, theta: f64) -> f64 {
    let rotated = t.scale(Complex64::from_polar(1.0, -theta));
    HermitianForm::symmetrize(&rotated).max_eigenvalue()
}

/// Golden-section search for a maximum of `f` on `[lo, hi]`.
///
/// Returns `(argmax, value, iterations, spread)` where `spread` is the
/// difference of the two final probe values.
pub(crate) fn golden_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, width: f64) -> (f64, f64, usize, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let mut iterations = 0;
    while hi - lo > width {
        iterations += 1;
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        }
    }
    let (x, v) = if f1 >= f2 { (x1, f1) } else { (x2, f2) };
    (x, v, iterations, (f1 - f2).abs())
}

/// Indices of the grid values that are local maxima (cyclically), best first.
fn cyclic_local_maxima(values: &[f64], keep: usize) -> Vec<usize> {
    let n = values.len();
    let mut idx: Vec<usize> = (0..n)
        .filter(|&j| {
            let prev = values[(j + n - 1) % n];
            let next = values[(j + 1) % n];
            values[j] >= prev && values[j] >= next
        })
        .collect();
    idx.sort_by(|&a, &b| values[b].total_cmp(&values[a]).then(a.cmp(&b)));
    idx.truncate(keep);
    idx
}

/// `w(T) = max_θ λ_max(Re(e^{−iθ}T))`: uniform grid of `angle_samples`
/// angles, then golden-section refinement around the best grid maxima.
pub fn numerical_radius(t: &ComplexSquareMatrix, angle_samples: usize) -> Result<RadiusResult> {
    if angle_samples < 8 {
        return Err(Error::Precondition(format!(
            "numerical radius needs at least 8 angle samples, got {angle_samples}"
        )));
    }
    let step = TAU / angle_samples as f64;
    let values: Vec<f64> = (0..angle_samples).map(|j| support_value(t, step * j as f64)).collect();
    let mut best = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut iterations = 0;
    let mut residual = 0.0;
    for j in cyclic_local_maxima(&values, 3) {
        let centre = step * j as f64;
        let (_, v, it, spread) = golden_max(|th| support_value(t, th), centre - step, centre + step, ANGLE_TOL);
        iterations += it;
        if v >= best {
            best = v;
            residual = spread;
        }
    }
    Ok(RadiusResult {
        value: best.max(0.0),
        method: RadiusMethod::Numerical,
        iterations,
        residual,
    })
}

/// Smallest PSD margin `λ_min(K) + ε` over the grid, with `ε = 1e-8·(1 + ‖K‖)`.
///
/// The worst boundary sample is refined by golden-section search over the
/// neighbouring angular bracket. Returns early on the first negative margin.
pub fn kernel_psd_margin(eval: &KernelEvaluator, grid: &GridSpec) -> Result<f64> {
    let margin_at = |z: Complex64| -> Result<f64> {
        let k = eval.evaluate(z)?;
        Ok(k.min_eigenvalue + PSD_SLACK * (1.0 + k.k.norm()))
    };
    let points = grid.points();
    let (boundary, interior): (Vec<SamplePoint>, Vec<SamplePoint>) = points.into_iter().partition(|p| p.boundary);

    let mut worst = f64::INFINITY;
    let mut worst_boundary: Option<(usize, f64)> = None;
    for (k, p) in boundary.iter().enumerate() {
        let m = margin_at(p.z)?;
        if m < 0.0 {
            return Ok(m);
        }
        if worst_boundary.is_none_or(|(_, w)| m < w) {
            worst_boundary = Some((k, m));
        }
        worst = worst.min(m);
    }
    for p in &interior {
        let m = margin_at(p.z)?;
        if m < 0.0 {
            return Ok(m);
        }
        worst = worst.min(m);
    }
    if let Some((k, _)) = worst_boundary {
        let step = TAU / boundary.len() as f64;
        let centre = boundary[k].angle;
        let probe = |th: f64| -> f64 { margin_at(Complex64::from_polar(1.0, th)).map_or(f64::NEG_INFINITY, |m| -m) };
        let (_, neg, _, _) = golden_max(probe, centre - step, centre + step, ANGLE_TOL);
        worst = worst.min(-neg);
    }
    Ok(worst)
}

/// `(1/γ)T ∈ C_ρ` on the sampled disk: spectrum in the closed disk and
/// `K_z^ρ((1/γ)T) ⪰ −ε` at every grid point. Singular resolvents count as
/// infeasible.
fn scaled_is_contraction(
    t: &ComplexSquareMatrix,
    spectral: f64,
    gamma: f64,
    rho: f64,
    grid: &GridSpec,
) -> Result<bool> {
    if spectral / gamma > 1.0 + 1e-12 {
        return Ok(false);
    }
    let eval = KernelEvaluator::new(&t.scale_real(1.0 / gamma), rho)?;
    match kernel_psd_margin(&eval, grid) {
        Ok(m) => Ok(m >= 0.0),
        Err(Error::Singular { .. }) | Err(Error::Precondition(_)) => Ok(false),
        Err(e) => Err(e),
    }
}

/// `w_ρ(T)` by bisection on `γ` over `[r(T), ‖T‖·max(1, 2/ρ) + 1]`.
pub fn rho_radius(t: &ComplexSquareMatrix, rho: f64, grid: &GridSpec, bisection_tol: f64) -> Result<RadiusResult> {
    if !(rho > 0.0 && rho.is_finite()) {
        return Err(Error::Input(format!("rho must be positive, got {rho}")));
    }
    if bisection_tol.is_nan() || bisection_tol <= 0.0 {
        return Err(Error::Input(format!(
            "bisection tolerance must be positive, got {bisection_tol}"
        )));
    }
    grid.validate()?;
    let result = |value: f64, iterations: usize, residual: f64| RadiusResult {
        value,
        method: RadiusMethod::RhoBisection,
        iterations,
        residual,
    };
    if t.max_abs() == 0.0 {
        return Ok(result(0.0, 0, 0.0));
    }
    let spectral = spectral_radius(t).value;
    let mut lo = spectral;
    let mut hi = operator_norm(t).value * (2.0 / rho).max(1.0) + 1.0;
    if lo > 0.0 && scaled_is_contraction(t, spectral, lo, rho, grid)? {
        return Ok(result(lo, 0, 0.0));
    }
    let mut iterations = 0;
    while hi - lo > bisection_tol {
        iterations += 1;
        let mid = 0.5 * (lo + hi);
        if scaled_is_contraction(t, spectral, mid, rho, grid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(result(hi, iterations, hi - lo))
}
