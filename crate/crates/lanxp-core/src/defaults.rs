//! Versioned table of the library-wide defaults. Everything configurable at
//! the CLI reads its fallback from here so there is exactly one place to
//! audit when a default changes.

use crate::accuracy::AccuracySpec;
use crate::geometry::ModelGeometry;

/// Bump when any default below changes meaning or value.
pub const DEFAULTS_VERSION: u32 = 1;

pub struct Defaults {
    /// ln(L²/2πℓ²) of the default geometry.
    pub log_box_ratio: f64,
    /// Magnetic length ℓ.
    pub ell: f64,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_terms: usize,
    /// Height ceiling for critical-line zeta work.
    pub desk_ceiling: f64,
    pub mc_samples: u64,
    pub seed: u64,
    /// Grid resolution per axis for field emission.
    pub grid_n: usize,
}

pub static DEFAULTS: Defaults = Defaults {
    log_box_ratio: 10.0,
    ell: 1.0,
    rel_tol: 1e-12,
    abs_tol: 1e-14,
    max_terms: 40_000,
    desk_ceiling: 500.0,
    mc_samples: 1_000_000,
    seed: 0,
    grid_n: 200,
};

impl Defaults {
    pub fn accuracy(&self) -> AccuracySpec {
        AccuracySpec::new(self.rel_tol, self.abs_tol, self.max_terms)
    }

    pub fn geometry(&self) -> ModelGeometry {
        ModelGeometry::from_log_box_ratio(self.log_box_ratio, self.ell).expect("default geometry is valid")
    }
}
