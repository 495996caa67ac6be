//! Zero-counting on the critical line and the phase-space state counts the
//! spectrum is measured against.
//!
//! The exact count N(E) splits as N = N̄ + S: a smooth part driven by the
//! phase θ(E) and a fluctuation S(E) obtained by tracking arg ζ continuously
//! from deep in the convergent half-plane to the critical line. The
//! semiclassical side counts phase-space cells of area 2πℓ² in the region
//! bounded by the hyperbola xy = Eℓ² and the box.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::defaults::DEFAULTS;
use crate::error::{Error, Result};
use crate::exec;
use crate::geometry::ModelGeometry;
use crate::quad;
use crate::special::log_gamma::rs_theta;
use crate::special::zeta::{hardy_z, zeta_em};

/// N̄(E) = θ(E)/π + 1.
pub fn smooth_count(e: f64) -> Result<f64> {
    if !(e >= 0.0) {
        return Err(Error::Domain(format!("smooth count needs E >= 0, got {e}")));
    }
    Ok(rs_theta(e)? / PI + 1.0)
}

/// S(E) = (1/π)·Im log ζ(1/2 + iE), the branch fixed by continuous argument
/// tracking along the horizontal path from σ = 3 (where |ζ − 1| ≤ 0.2021, so
/// the principal argument is safe) down to σ = 1/2.
pub fn fluctuation(e: f64) -> Result<f64> {
    if !(e > 0.0) {
        return Err(Error::Domain(format!("fluctuation needs E > 0, got {e}")));
    }
    let acc = DEFAULTS.accuracy();
    let mut sigma = 3.0;
    let mut prev = zeta_em(Complex64::new(sigma, e), &acc)?;
    let mut arg = prev.arg();
    let mut step = 0.25f64;
    while sigma > 0.5 {
        let h = step.min(sigma - 0.5);
        let next = zeta_em(Complex64::new(sigma - h, e), &acc)?;
        let delta = (next / prev).arg();
        if delta.abs() > FRAC_PI_2 {
            // phase moved too fast to certify the branch; halve and retry
            if h < 1e-7 {
                return Err(Error::ZeroProximity { sigma: sigma - h, e });
            }
            step = h / 2.0;
            continue;
        }
        arg += delta;
        sigma -= h;
        prev = next;
        step = (h * 2.0).min(0.25);
    }
    if prev.norm() < acc.abs_tol {
        return Err(Error::ZeroProximity { sigma: 0.5, e });
    }
    Ok(arg / PI)
}

/// Sign changes of the Hardy function on (t0, e) at spacing `h`.
fn count_sign_changes(e: f64, h: f64) -> Result<usize> {
    let acc = DEFAULTS.accuracy();
    let n = (e / h).ceil() as usize;
    let ts: Vec<f64> = (0..=n).map(|i| (i as f64 * h).min(e)).collect();
    let signs = exec::map_collect(&ts, |&t| hardy_z(t, &acc).map(|z| z.re.is_sign_positive()));
    let mut count = 0;
    let mut prev: Option<bool> = None;
    for s in signs {
        let s = s?;
        if let Some(p) = prev {
            if p != s {
                count += 1;
            }
        }
        prev = Some(s);
    }
    Ok(count)
}

/// N(E): zeros of ζ with imaginary part in (0, E), counted as sign changes
/// of Z and cross-checked against round(N̄ + S) under grid refinement
/// (desk-scale zeros are simple and on the line, so the two must agree).
pub fn exact_count(e: f64) -> Result<usize> {
    let ceiling = DEFAULTS.desk_ceiling;
    if !(e > 0.0 && e <= ceiling) {
        return Err(Error::CeilingExceeded { e, ceiling });
    }
    let expected = smooth_count(e)? + fluctuation(e)?;
    let target = expected.round();
    let mut h = 0.25;
    let mut scanned = 0;
    for _ in 0..6 {
        scanned = count_sign_changes(e, h)?;
        if (scanned as f64 - target).abs() < 0.5 {
            return Ok(scanned);
        }
        h /= 2.0;
    }
    Err(Error::RefinementFailure { scanned, expected: target as i64 })
}

/// All sign-change abscissae of Z below `e_max`, bisected to 1e-9.
pub fn locate_zeros(e_max: f64) -> Result<Vec<f64>> {
    let ceiling = DEFAULTS.desk_ceiling;
    if !(e_max > 0.0 && e_max <= ceiling) {
        return Err(Error::CeilingExceeded { e: e_max, ceiling });
    }
    let acc = DEFAULTS.accuracy();
    let z_sign = |t: f64| -> Result<bool> { Ok(hardy_z(t, &acc)?.re.is_sign_positive()) };

    // refine the scan until the bracket count is stable under halving
    let mut h = 0.25;
    let mut brackets = scan_brackets(e_max, h)?;
    for _ in 0..6 {
        let finer = scan_brackets(e_max, h / 2.0)?;
        if finer.len() == brackets.len() {
            brackets = finer;
            break;
        }
        h /= 2.0;
        brackets = finer;
    }

    let mut zeros = Vec::with_capacity(brackets.len());
    for (mut lo, mut hi) in brackets {
        let s_lo = z_sign(lo)?;
        while hi - lo > 1e-9 {
            let mid = 0.5 * (lo + hi);
            if z_sign(mid)? == s_lo {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        zeros.push(0.5 * (lo + hi));
    }
    Ok(zeros)
}

fn scan_brackets(e_max: f64, h: f64) -> Result<Vec<(f64, f64)>> {
    let acc = DEFAULTS.accuracy();
    let n = (e_max / h).ceil() as usize;
    let ts: Vec<f64> = (0..=n).map(|i| (i as f64 * h).min(e_max)).collect();
    let signs = exec::map_collect(&ts, |&t| hardy_z(t, &acc).map(|z| z.re.is_sign_positive()));
    let mut out = Vec::new();
    let mut prev: Option<(f64, bool)> = None;
    for (t, s) in ts.iter().zip(signs) {
        let s = s?;
        if let Some((tp, sp)) = prev {
            if sp != s {
                out.push((tp, *t));
            }
        }
        prev = Some((*t, s));
    }
    Ok(out)
}

/// Closed-form phase-space count: E/2π·[ln(L²/2πℓ²) − ln(E/2π) + 1].
pub fn semiclassical_count(e: f64, geom: &ModelGeometry) -> Result<f64> {
    if !(e > 0.0) {
        return Err(Error::Domain(format!("semiclassical count needs E > 0, got {e}")));
    }
    if e > geom.e_max() {
        return Err(Error::Domain(format!(
            "E = {e} exceeds the classical bound L²/ell² = {}",
            geom.e_max()
        )));
    }
    let x = e / (2.0 * PI);
    Ok(x * (geom.log_box_ratio() - x.ln() + 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AreaMethod {
    Quadrature,
    MonteCarlo,
}

/// Area of {0 < x < L, 0 < y < L, xy < Eℓ²} divided by 2πℓ², by adaptive
/// quadrature of min(L, Eℓ²/x) or by seeded Monte Carlo with the default
/// sample budget.
pub fn area_count_numeric(e: f64, geom: &ModelGeometry, method: AreaMethod, seed: u64) -> Result<f64> {
    match method {
        AreaMethod::Quadrature => area_count_quadrature(e, geom),
        AreaMethod::MonteCarlo => area_count_monte_carlo(e, geom, DEFAULTS.mc_samples, seed),
    }
}

fn area_count_quadrature(e: f64, geom: &ModelGeometry) -> Result<f64> {
    if !(e > 0.0) {
        return Err(Error::Domain(format!("area count needs E > 0, got {e}")));
    }
    let l = geom.l();
    let cap = e * geom.ell() * geom.ell();
    let area = quad::integrate_real(|x| l.min(cap / x), 0.0, l, 5e-13, 0.0, 100_000)?;
    Ok(area / (2.0 * PI * geom.ell() * geom.ell()))
}

/// Monte Carlo variant with an explicit sample budget. Samples are jittered
/// on an m×m stratification grid (m = ⌊√n⌋) and drawn from per-row RNG
/// streams, so the count is reproducible under any parallel schedule.
pub fn area_count_monte_carlo(e: f64, geom: &ModelGeometry, samples: u64, seed: u64) -> Result<f64> {
    if !(e > 0.0) {
        return Err(Error::Domain(format!("area count needs E > 0, got {e}")));
    }
    let m = (samples as f64).sqrt().floor() as u64;
    if m < 2 {
        return Err(Error::Domain(format!("sample budget too small: {samples}")));
    }
    let l = geom.l();
    let cap = e * geom.ell() * geom.ell();
    let cell = l / m as f64;
    let rows: Vec<u64> = (0..m).collect();
    let hits: u64 = exec::map_collect(&rows, |&row| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(row + 1);
        let mut h = 0u64;
        for col in 0..m {
            let x = (row as f64 + rng.gen::<f64>()) * cell;
            let y = (col as f64 + rng.gen::<f64>()) * cell;
            if x * y < cap {
                h += 1;
            }
        }
        h
    })
    .into_iter()
    .sum();
    let area = l * l * hits as f64 / (m * m) as f64;
    Ok(area / (2.0 * PI * geom.ell() * geom.ell()))
}

/// The regularized-continuum split: (E/2π·ln(L²/2πℓ²) + 1, N̄(E)). Their
/// difference is the integer N_E when E sits on the even spectrum.
pub fn missing_states(e: f64, geom: &ModelGeometry) -> Result<(f64, f64)> {
    if !(e >= 0.0) || e > geom.e_max() {
        return Err(Error::Domain(format!("missing-states count needs 0 <= E <= {}, got {e}", geom.e_max())));
    }
    let continuum = e / (2.0 * PI) * geom.log_box_ratio() + 1.0;
    Ok((continuum, smooth_count(e)?))
}

/// Coherent-gyration parameters: γ = ω_c/|ω_h| and the (real) coherent
/// eigenvalue z.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HigherLevelParams {
    pub gamma: f64,
    pub z_coh: f64,
}

impl HigherLevelParams {
    pub fn new(gamma: f64, z_coh: f64) -> Result<HigherLevelParams> {
        let hl = HigherLevelParams { gamma, z_coh };
        hl.validate()?;
        Ok(hl)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma > 1.0 && self.z_coh >= 0.0 && self.gamma.is_finite() && self.z_coh.is_finite()) {
            return Err(Error::Domain(format!(
                "higher-level params need gamma > 1 and z >= 0, got gamma={}, z={}",
                self.gamma, self.z_coh
            )));
        }
        Ok(())
    }
}

/// Semiclassical count with the gyration correction:
/// (E + γz²)/2π·ln(L²/2πℓ²) − E/2π·ln(E/2π) + E/2π − γz²/2π·ln(E/2π),
/// grouped as semiclassical_count + γz²/2π·[ln(L²/2πℓ²) − ln(E/2π)] so the
/// z = 0 reduction is exact.
pub fn higher_level_count(e: f64, geom: &ModelGeometry, hl: &HigherLevelParams) -> Result<f64> {
    hl.validate()?;
    let base = semiclassical_count(e, geom)?;
    let gz = hl.gamma * hl.z_coh * hl.z_coh;
    Ok(base + gz / (2.0 * PI) * (geom.log_box_ratio() - (e / (2.0 * PI)).ln()))
}

/// One row of the counting table: every count at a single height.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CountingBreakdown {
    pub e: f64,
    pub theta: f64,
    pub n_smooth: f64,
    pub s_fluct: f64,
    pub n_exact: usize,
    pub n_sc: f64,
}

pub fn breakdown(e: f64, geom: &ModelGeometry) -> Result<CountingBreakdown> {
    let theta = rs_theta(e)?;
    let n_smooth = theta / PI + 1.0;
    let s_fluct = fluctuation(e)?;
    let n_exact = exact_count(e)?;
    let n_sc = semiclassical_count(e, geom)?;
    Ok(CountingBreakdown { e, theta, n_smooth, s_fluct, n_exact, n_sc })
}
