use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sampling grid for disk-wide positivity checks: a polar interior grid plus
/// the unit circle.
///
/// Wire form: `{"radii": [...], "angles": k, "boundary_angles": m}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub radii: Vec<f64>,
    pub angles: usize,
    pub boundary_angles: usize,
}

/// One sample point of a [`GridSpec`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplePoint {
    pub z: Complex64,
    /// On the unit circle.
    pub boundary: bool,
    /// Angle in radians.
    pub angle: f64,
}

impl GridSpec {
    pub fn new(radii: Vec<f64>, angles: usize, boundary_angles: usize) -> Result<Self> {
        let grid = Self {
            radii,
            angles,
            boundary_angles,
        };
        grid.validate()?;
        Ok(grid)
    }

    /// Radii 0.05, 0.15, …, 0.95 at 64 angles, boundary at 256 angles.
    pub fn radius_default() -> Self {
        Self {
            radii: (0..10).map(|k| (2 * k + 1) as f64 / 20.0).collect(),
            angles: 64,
            boundary_angles: 256,
        }
    }

    /// Radii 0.1, 0.2, …, 0.9 at 32 angles, boundary at 128 angles.
    pub fn harnack_default() -> Self {
        Self {
            radii: (1..=9).map(|k| k as f64 / 10.0).collect(),
            angles: 32,
            boundary_angles: 128,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(r) = self.radii.iter().find(|r| !(0.0..1.0).contains(*r)) {
            return Err(Error::Input(format!("grid radius {r} outside [0, 1)")));
        }
        if !self.radii.is_empty() && self.angles == 0 {
            return Err(Error::Input("grid needs at least one interior angle".into()));
        }
        Ok(())
    }

    /// Interior points in radius-major order, then the boundary circle.
    pub fn points(&self) -> Vec<SamplePoint> {
        let mut out = Vec::with_capacity(self.len());
        for &r in &self.radii {
            for j in 0..self.angles {
                let angle = TAU * j as f64 / self.angles as f64;
                out.push(SamplePoint {
                    z: Complex64::from_polar(r, angle),
                    boundary: false,
                    angle,
                });
            }
        }
        out.extend(boundary_points(self.boundary_angles));
        out
    }

    pub fn len(&self) -> usize {
        self.radii.len() * self.angles + self.boundary_angles
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// `m` equally spaced points `e^{2πik/m}` on the unit circle.
pub fn boundary_points(m: usize) -> impl Iterator<Item = SamplePoint> {
    (0..m).map(move |k| {
        let angle = TAU * k as f64 / m as f64;
        SamplePoint {
            z: Complex64::from_polar(1.0, angle),
            boundary: true,
            angle,
        }
    })
}
