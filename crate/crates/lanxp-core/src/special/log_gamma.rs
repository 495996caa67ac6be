//! Complex log-Gamma, computed directly (never as log of Gamma) so the
//! imaginary part is branch-continuous in the right half-plane.
//!
//! Strategy: recurrence-shift the argument until |z| is large enough for the
//! Stirling series, then subtract the accumulated logs:
//!     log Γ(z) = log Γ(z + n) − Σ_{k=0}^{n−1} Log(z + k).
//! For Re z > 0 every shifted point stays in the right half-plane, so the
//! principal logs sum to a continuous phase.

use num_complex::Complex64;

use crate::dd::{CDd, Dd, LN_PI};
use crate::error::{Error, Result};

/// B_{2k} / ((2k)(2k−1)) for k = 1..=11 — Stirling tail coefficients.
const STIRLING: [f64; 11] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
    43867.0 / 244188.0,
    -174611.0 / 125400.0,
    854513.0 / 63756.0,
];

/// Same coefficients as exact integer ratios, extended to k = 16 for the
/// double-double evaluation.
const STIRLING_RATIO: [(f64, f64); 16] = [
    (1.0, 12.0),
    (-1.0, 360.0),
    (1.0, 1260.0),
    (-1.0, 1680.0),
    (1.0, 1188.0),
    (-691.0, 360360.0),
    (1.0, 156.0),
    (-3617.0, 122400.0),
    (43867.0, 244188.0),
    (-174611.0, 125400.0),
    (854513.0, 63756.0),
    (-236364091.0, 1506960.0),
    (8553103.0, 3900.0),
    (-23749461029.0, 657720.0),
    (8615841276005.0, 12460140.0),
    (-7709321041217.0, 505920.0),
];

/// Shift radius for the f64 path; the k = 11 Stirling term is ~1e-17 relative there.
const SHIFT_RADIUS: f64 = 10.0;
/// Shift radius for the dd path; the k = 16 term is ~1e-43 relative there.
const SHIFT_RADIUS_DD: f64 = 40.0;

fn is_nonpositive_integer(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re.fract() == 0.0
}

/// Principal branch of log Γ(z), Im continuous for Re z > 0.
pub fn log_gamma(z: Complex64) -> Result<Complex64> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::Domain(format!("non-finite argument ({}, {})", z.re, z.im)));
    }
    if is_nonpositive_integer(z) {
        return Err(Error::Pole { re: z.re, im: z.im });
    }
    let mut zs = z;
    let mut shifted = Complex64::new(0.0, 0.0);
    while zs.norm() <= SHIFT_RADIUS {
        if zs.norm() < 1e-290 {
            return Err(Error::Pole { re: z.re, im: z.im });
        }
        shifted += zs.ln();
        zs += 1.0;
    }
    let out = stirling(zs) - shifted;
    if !out.re.is_finite() || !out.im.is_finite() {
        return Err(Error::Overflow { what: "log_gamma" });
    }
    Ok(out)
}

fn stirling(z: Complex64) -> Complex64 {
    // (z − 1/2) Log z − z + ln(2π)/2 + Σ c_k z^{1−2k}
    let half_ln_2pi = 0.918_938_533_204_672_7;
    let mut acc = (z - 0.5) * z.ln() - z + half_ln_2pi;
    let inv = 1.0 / z;
    let inv2 = inv * inv;
    let mut p = inv;
    for c in STIRLING {
        acc += c * p;
        p *= inv2;
    }
    acc
}

/// Double-double log Γ for validation work: identical algorithm at a wider
/// shift radius and a longer Stirling tail (~1e-30 relative at desk scale).
/// Caller must keep the argument away from the poles.
pub fn log_gamma_dd(z: CDd) -> CDd {
    let mut zs = z;
    let mut shifted = CDd::ZERO;
    while zs.abs().hi <= SHIFT_RADIUS_DD {
        shifted = shifted + zs.ln();
        zs = zs + CDd::ONE;
    }
    stirling_dd(zs) - shifted
}

fn stirling_dd(z: CDd) -> CDd {
    let half = CDd::new(Dd::from_ratio(1.0, 2.0), Dd::ZERO);
    let ln_z = z.ln();
    let half_ln_2pi = crate::dd::TWO_PI.ln().mul_pow2(-1);
    let mut acc = (z - half) * ln_z - z + CDd::new(half_ln_2pi, Dd::ZERO);
    let inv = CDd::ONE / z;
    let inv2 = inv * inv;
    let mut p = inv;
    for (num, den) in STIRLING_RATIO {
        let c = Dd::from_ratio(num, den);
        acc = acc + p.scale(c);
        p = p * inv2;
    }
    acc
}

/// Phase of the critical-line zeta factor: θ(E) = Im log Γ(1/4 + iE/2) − (E/2) ln π.
/// Odd in E and continuous; θ(0) = 0.
pub fn rs_theta(e: f64) -> Result<f64> {
    let lg = log_gamma(Complex64::new(0.25, 0.5 * e))?;
    Ok(lg.im - 0.5 * e * LN_PI.hi)
}

/// Odd-sector phase: Im log Γ(3/4 + iE/2). Plays the role of θ for the
/// antisymmetric eigenfunction family (no π-log subtraction; the box-ratio
/// logarithm that pairs with it carries the difference).
pub fn rs_theta_odd(e: f64) -> Result<f64> {
    let lg = log_gamma(Complex64::new(0.75, 0.5 * e))?;
    Ok(lg.im)
}

/// θ(E) in double-double (validation reference).
pub fn rs_theta_dd(e: f64) -> Dd {
    let z = CDd::new(Dd::from_ratio(1.0, 4.0), Dd::from_f64(e).mul_pow2(-1));
    let lg = log_gamma_dd(z);
    lg.im - LN_PI * Dd::from_f64(e).mul_pow2(-1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn gamma_one_is_zero() {
        let v = log_gamma(c(1.0, 0.0)).unwrap();
        assert!(v.norm() < 1e-14, "log Γ(1) = {v}");
    }

    #[test]
    fn gamma_half_is_half_log_pi() {
        let v = log_gamma(c(0.5, 0.0)).unwrap();
        assert!((v.re - 0.5 * std::f64::consts::PI.ln()).abs() < 1e-14);
        assert!(v.im.abs() < 1e-14);
    }

    #[test]
    fn poles_rejected() {
        for re in [0.0, -1.0, -7.0] {
            assert!(matches!(log_gamma(c(re, 0.0)), Err(Error::Pole { .. })));
        }
        // nearby non-integer points are fine
        assert!(log_gamma(c(-0.5, 0.0)).is_ok());
    }

    #[test]
    fn matches_extended_precision_at_quarter_plus_7i() {
        // Reference: the same shifted-recurrence + Stirling algorithm run in
        // double-double with a 4x shift radius and longer tail.
        let z = c(0.25, 7.0);
        let v = log_gamma(z).unwrap();
        let r = log_gamma_dd(CDd::from_f64(0.25, 7.0)).to_c64();
        assert!(
            (v - r).norm() < 1e-12,
            "f64 {v} vs dd {r}, diff {:e}",
            (v - r).norm()
        );
    }

    #[test]
    fn recurrence_identity_randomized() {
        // exp(logΓ(z+1) − logΓ(z)) = z over a strip, 1e-10 relative.
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..1000 {
            let z = c(0.1 + 9.9 * next(), 100.0 * next() - 50.0);
            let d = log_gamma(z + 1.0).unwrap() - log_gamma(z).unwrap();
            let ratio = d.exp() / z;
            assert!(
                (ratio - 1.0).norm() < 1e-10,
                "recurrence failed at {z}: ratio {ratio}"
            );
        }
    }

    #[test]
    fn theta_is_odd_and_zero_at_origin() {
        assert_eq!(rs_theta(0.0).unwrap(), 0.0);
        let mut state = 12345u64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..100 {
            let e = 200.0 * next() - 100.0;
            let s = rs_theta(e).unwrap() + rs_theta(-e).unwrap();
            assert!(s.abs() < 1e-12, "θ({e}) + θ(−{e}) = {s:e}");
        }
        // conjugation symmetry at the documented sample point
        let s = rs_theta(25.0).unwrap() + rs_theta(-25.0).unwrap();
        assert!(s.abs() < 1e-12);
    }

    #[test]
    fn theta_root_bracketed_and_matches_reference() {
        // Smallest root above E = 10: bisect the f64 θ and the dd reference θ;
        // both must land in (17.8, 17.9) and agree.
        let bisect = |f: &dyn Fn(f64) -> f64| {
            let (mut lo, mut hi) = (10.0, 30.0);
            assert!(f(lo) < 0.0 && f(hi) > 0.0);
            for _ in 0..64 {
                let mid = 0.5 * (lo + hi);
                if f(mid) < 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            0.5 * (lo + hi)
        };
        let root = bisect(&|e| rs_theta(e).unwrap());
        let root_dd = bisect(&|e| rs_theta_dd(e).to_f64());
        assert!(root > 17.8 && root < 17.9, "θ root at {root}");
        assert!((root - root_dd).abs() < 1e-9, "f64 {root} vs dd {root_dd}");
    }

    #[test]
    fn dd_and_f64_agree_on_a_line() {
        for i in 1..=20 {
            let e = i as f64 * 9.7;
            let v = rs_theta(e).unwrap();
            let r = rs_theta_dd(e).to_f64();
            assert!((v - r).abs() < 1e-10 * r.abs().max(1.0), "θ({e}): {v} vs {r}");
        }
    }
}
