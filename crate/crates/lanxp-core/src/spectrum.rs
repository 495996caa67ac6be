//! Quantized levels from the twisted boundary condition.
//!
//! Each parity sector has a phase function f(E), strictly decreasing across
//! the classical band, whose crossings of −2πk are the eigenvalues. The even
//! sector uses the principal phase θ(E) against log(L²/2πℓ²); the odd sector
//! uses the shifted phase θ₋(E) = Im log Γ(3/4 + iE/2) against log(L²/2ℓ²),
//! which is what the odd edge asymptotics leave behind once the η = −1
//! boundary phase cancels the −i prefactor.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::exec;
use crate::geometry::ModelGeometry;
use crate::special::log_gamma::{rs_theta, rs_theta_odd};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn sign(self) -> f64 {
        match self {
            Parity::Even => 1.0,
            Parity::Odd => -1.0,
        }
    }
}

impl std::fmt::Display for Parity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Parity::Even => write!(f, "even"),
            Parity::Odd => write!(f, "odd"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenvalueRecord {
    pub parity: Parity,
    pub k: usize,
    pub e_k: f64,
    pub residual: f64,
}

/// The sector phase f(E); eigenvalues solve f(E) = −2πk, k = 1, 2, …
pub fn quantization_phase(e: f64, geom: &ModelGeometry, parity: Parity) -> Result<f64> {
    if !(e >= 0.0) {
        return Err(Error::Domain(format!("quantization phase needs E >= 0, got {e}")));
    }
    match parity {
        Parity::Even => Ok(2.0 * rs_theta(e)? - e * geom.log_box_ratio()),
        Parity::Odd => Ok(2.0 * rs_theta_odd(e)? - e * geom.log_odd_ratio()),
    }
}

/// All eigenvalues below `e_max`, k-indexed from the bottom of the band.
/// Each branch is refined independently by bisection on [0, e_max]; the
/// phase residual |f(E_k) + 2πk| is carried in the record.
pub fn solve_spectrum(e_max: f64, geom: &ModelGeometry, parity: Parity) -> Result<Vec<EigenvalueRecord>> {
    if !(e_max > 0.0) {
        return Err(Error::Domain(format!("spectrum needs E_max > 0, got {e_max}")));
    }
    if e_max > geom.e_max() {
        return Err(Error::Bracketing(format!(
            "E_max = {e_max} is beyond the classical band {}; the sector phase turns around there",
            geom.e_max()
        )));
    }
    let f_end = quantization_phase(e_max, geom, parity)?;
    if f_end >= 0.0 {
        // phase never reached −2π: no state fits below e_max
        return Ok(Vec::new());
    }
    let k_max = (-f_end / (2.0 * PI)).floor() as usize;
    let ks: Vec<usize> = (1..=k_max).collect();
    let roots = exec::map_collect(&ks, |&k| -> Result<EigenvalueRecord> {
        let target = -2.0 * PI * k as f64;
        let g = |e: f64| -> Result<f64> { Ok(quantization_phase(e, geom, parity)? - target) };
        let (mut lo, mut hi) = (0.0f64, e_max);
        if g(lo)? <= 0.0 || g(hi)? > 0.0 {
            return Err(Error::Bracketing(format!(
                "sector phase is not decreasing across [0, {e_max}] for branch {k}"
            )));
        }
        while hi - lo > f64::EPSILON * (1.0 + hi) {
            let mid = 0.5 * (lo + hi);
            if g(mid)? > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let e_k = 0.5 * (lo + hi);
        Ok(EigenvalueRecord { parity, k, e_k, residual: g(e_k)?.abs() })
    });
    let records: Vec<EigenvalueRecord> = roots.into_iter().collect::<Result<_>>()?;
    if records.windows(2).any(|w| w[0].e_k >= w[1].e_k) {
        return Err(Error::Bracketing("branch roots are not strictly increasing".into()));
    }
    Ok(records)
}

/// One staircase row: level count below E against the regularized continuum
/// term E/2π·log(L²/2πℓ²) + 1; their difference estimates N̄(E).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StaircaseRow {
    pub e: f64,
    pub count: usize,
    pub continuum: f64,
    pub missing: f64,
}

pub fn spectral_staircase(e_grid: &[f64], geom: &ModelGeometry, parity: Parity) -> Result<Vec<StaircaseRow>> {
    let mut top = 0.0f64;
    for &e in e_grid {
        if !(e >= 0.0) || e > geom.e_max() {
            return Err(Error::Domain(format!(
                "staircase grid point {e} outside [0, {}]",
                geom.e_max()
            )));
        }
        top = top.max(e);
    }
    let levels = if top > 0.0 {
        solve_spectrum(top, geom, parity)?
    } else {
        Vec::new()
    };
    e_grid
        .iter()
        .map(|&e| {
            let count = levels.iter().take_while(|r| r.e_k <= e).count();
            let continuum = e / (2.0 * PI) * geom.log_box_ratio() + 1.0;
            Ok(StaircaseRow { e, count, continuum, missing: continuum - count as f64 })
        })
        .collect()
}
