//! Box-plus-magnetic-length geometry shared by every model-facing module.

use crate::error::{Error, Result};

/// Square box of half-width `l` with magnetic length `ell`; units ħ = 1 and
/// energies measured so the hyperbolic-mode quantum is 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelGeometry {
    l: f64,
    ell: f64,
}

impl ModelGeometry {
    pub fn new(l: f64, ell: f64) -> Result<ModelGeometry> {
        if !(l.is_finite() && ell.is_finite() && l > 0.0 && ell > 0.0) {
            return Err(Error::Domain(format!("geometry lengths must be positive finite, got L={l}, ell={ell}")));
        }
        if l / ell <= 1.0 {
            return Err(Error::Domain(format!("box must exceed the magnetic length: L/ell = {}", l / ell)));
        }
        Ok(ModelGeometry { l, ell })
    }

    /// Geometry with a prescribed value of ln(L²/2πℓ²) (the state-count ratio).
    pub fn from_log_box_ratio(log_ratio: f64, ell: f64) -> Result<ModelGeometry> {
        let l = (2.0 * std::f64::consts::PI * log_ratio.exp()).sqrt() * ell;
        ModelGeometry::new(l, ell)
    }

    pub fn l(&self) -> f64 {
        self.l
    }

    pub fn ell(&self) -> f64 {
        self.ell
    }

    /// Classical energy ceiling L²/ℓ² (hyperbola xy = Eℓ² leaves the box above it).
    pub fn e_max(&self) -> f64 {
        (self.l / self.ell).powi(2)
    }

    /// ln(L²/2πℓ²): one quantum state per phase-space cell 2πℓ².
    pub fn log_box_ratio(&self) -> f64 {
        ((self.l / self.ell).powi(2) / (2.0 * std::f64::consts::PI)).ln()
    }

    /// ln(L²/2ℓ²): the ratio appearing in the odd-sector condition.
    pub fn log_odd_ratio(&self) -> f64 {
        ((self.l / self.ell).powi(2) / 2.0).ln()
    }
}

impl Default for ModelGeometry {
    fn default() -> Self {
        let d = &crate::defaults::DEFAULTS;
        ModelGeometry::from_log_box_ratio(d.log_box_ratio, d.ell).expect("default geometry is valid")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratio_roundtrip() {
        let g = ModelGeometry::from_log_box_ratio(10.0, 1.0).unwrap();
        assert!((g.log_box_ratio() - 10.0).abs() < 1e-12);
        assert!((g.e_max() - 2.0 * std::f64::consts::PI * 10.0f64.exp()).abs() < 1e-6);
        // odd ratio differs from the even one by exactly ln π
        assert!((g.log_odd_ratio() - g.log_box_ratio() - std::f64::consts::PI.ln()).abs() < 1e-12);
    }

    #[test]
    fn invalid_geometries_rejected() {
        assert!(ModelGeometry::new(-1.0, 1.0).is_err());
        assert!(ModelGeometry::new(1.0, 0.0).is_err());
        assert!(ModelGeometry::new(1.0, 2.0).is_err());
        assert!(ModelGeometry::new(f64::NAN, 1.0).is_err());
    }
}
