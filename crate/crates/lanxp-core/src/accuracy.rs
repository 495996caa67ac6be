//! Accuracy plumbing: every series/quadrature loop in the crate is bounded by
//! an [`AccuracySpec`] so callers can trade precision for speed explicitly.

/// Tolerances and budgets for iterative numerics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AccuracySpec {
    /// Relative tolerance target for series and quadrature results.
    pub rel_tol: f64,
    /// Absolute floor used where a relative target is meaningless (values near zero).
    pub abs_tol: f64,
    /// Hard cap on series terms / subdivision counts.
    pub max_terms: usize,
}

impl AccuracySpec {
    pub const fn new(rel_tol: f64, abs_tol: f64, max_terms: usize) -> Self {
        Self { rel_tol, abs_tol, max_terms }
    }

    /// Mixed tolerance against a reference magnitude.
    pub fn tol_for(&self, scale: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * scale.abs())
    }
}

impl Default for AccuracySpec {
    fn default() -> Self {
        crate::defaults::DEFAULTS.accuracy()
    }
}
