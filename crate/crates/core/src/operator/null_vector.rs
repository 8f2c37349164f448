use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::shift::normalized_weight;
use crate::error::{Error, Result};

/// Coefficients of the boundary null vector
/// `v(z) = (v₀, v₁z, 0, −v₁z³, −v₀z⁴)ᵀ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NullVectorParams {
    pub v0: Complex64,
    pub v1: Complex64,
}

impl NullVectorParams {
    pub fn new(v0: Complex64, v1: Complex64) -> Result<Self> {
        if v0.norm() == 0.0 && v1.norm() == 0.0 {
            return Err(Error::Input(
                "null vector parameters (v0, v1) must not both vanish".into(),
            ));
        }
        if !(v0.re.is_finite() && v0.im.is_finite() && v1.re.is_finite() && v1.im.is_finite()) {
            return Err(Error::Input("null vector parameters must be finite".into()));
        }
        Ok(Self { v0, v1 })
    }

    /// `v₀ > 0` real, `v₁ = ratio·v₀`, `|v₀|² + |v₁|² = 1`.
    pub fn from_ratio(ratio: Complex64) -> Self {
        let v0 = 1.0 / (1.0 + ratio.norm_sqr()).sqrt();
        Self {
            v0: Complex64::new(v0, 0.0),
            v1: ratio * v0,
        }
    }

    /// Parameters carried by the normalized 5×5 shift: `v₁/v₀ = 2/a − a = 1/√3`.
    pub fn shift5() -> Self {
        let a = normalized_weight(5);
        Self::from_ratio(Complex64::new(2.0 / a - a, 0.0))
    }

    pub fn ratio(&self) -> Option<Complex64> {
        (self.v0.norm() > 0.0).then(|| self.v1 / self.v0)
    }

    /// `v(z)`.
    pub fn vector(&self, z: Complex64) -> [Complex64; 5] {
        let zero = Complex64::new(0.0, 0.0);
        [self.v0, self.v1 * z, zero, -self.v1 * z.powu(3), -self.v0 * z.powu(4)]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shift5_normalisation() {
        let p = NullVectorParams::shift5();
        assert!((p.v0.re - 3f64.sqrt() / 2.0).abs() < 1e-15);
        assert!((p.v1.re - 0.5).abs() < 1e-15);
        assert!((p.ratio().unwrap().re - 1.0 / 3f64.sqrt()).abs() < 1e-15);
        assert!(NullVectorParams::new(Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)).is_err());
    }
}
