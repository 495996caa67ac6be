//! ζ(s) near the critical strip by Euler–Maclaurin summation with a rigorous
//! tail bound, plus the real Hardy function Z(E) = e^{iθ(E)} ζ(1/2 + iE).
//!
//! Euler–Maclaurin keeps the error analysis elementary at desk scale
//! (heights up to the configurable ceiling, default 500):
//!     ζ(s) = Σ_{n<N} n^{−s} + N^{−s}/2 + N^{1−s}/(s−1)
//!             + Σ_{k=1}^{K} B_{2k}/(2k)! · (s)_{2k−1} · N^{1−s−2k} + R_K,
//!     |R_K| ≤ |B_{2K+2}/(2K+2)! · (s)_{2K+1} · N^{1−s−2K−2}| · |s+2K+1|/(σ+2K+1).

use num_complex::Complex64;

use crate::accuracy::AccuracySpec;
use crate::dd::{CDd, Dd};
use crate::error::{Error, Result};
use crate::special::log_gamma::{rs_theta, rs_theta_dd};

/// B_{2k} as exact integer ratios, k = 1..=15.
const BERNOULLI: [(f64, f64); 15] = [
    (1.0, 6.0),
    (-1.0, 30.0),
    (1.0, 42.0),
    (-1.0, 30.0),
    (5.0, 66.0),
    (-691.0, 2730.0),
    (7.0, 6.0),
    (-3617.0, 510.0),
    (43867.0, 798.0),
    (-174611.0, 330.0),
    (854513.0, 138.0),
    (-236364091.0, 2730.0),
    (8553103.0, 6.0),
    (-23749461029.0, 870.0),
    (8615841276005.0, 14322.0),
];

/// Correction order for the f64 path (uses B_2..B_24; B_26 bounds the remainder).
const K_F64: usize = 12;

/// ζ(σ + it) for σ in the strip the crate uses (0.4 ≤ σ ≤ 4). Crate-private:
/// the public zeta surface is the critical line; the argument-tracking path
/// through the strip reuses this evaluator.
pub(crate) fn zeta_em(s: Complex64, acc: &AccuracySpec) -> Result<Complex64> {
    debug_assert!((0.4..=4.0).contains(&s.re), "strip evaluator got sigma {}", s.re);
    let t = s.im.abs();
    let mut n = ((0.7 * t).ceil() as usize + 32).max(32);
    for _ in 0..6 {
        let (value, bound) = em_pass(s, n);
        if bound <= acc.tol_for(value.norm()) {
            return Ok(value);
        }
        n = n * 3 / 2;
    }
    Err(Error::NonConvergence { what: "euler-maclaurin zeta", budget: n })
}

fn em_pass(s: Complex64, n: usize) -> (Complex64, f64) {
    // main sum with Neumaier compensation per component
    let (mut sr, mut cr) = (0.0f64, 0.0f64);
    let (mut si, mut ci) = (0.0f64, 0.0f64);
    let add = |acc: &mut f64, comp: &mut f64, x: f64| {
        let t = *acc + x;
        if acc.abs() >= x.abs() {
            *comp += (*acc - t) + x;
        } else {
            *comp += (x - t) + *acc;
        }
        *acc = t;
    };
    for k in 1..n {
        let lnk = (k as f64).ln();
        let m = (-s.re * lnk).exp();
        let (sin, cos) = (s.im * lnk).sin_cos();
        add(&mut sr, &mut cr, m * cos);
        add(&mut si, &mut ci, -m * sin);
    }
    let mut value = Complex64::new(sr + cr, si + ci);

    let nf = n as f64;
    let ln_n = nf.ln();
    let n_pow_ms = Complex64::new(0.0, -s.im * ln_n).exp() * (-s.re * ln_n).exp(); // N^{−s}
    value += 0.5 * n_pow_ms;
    value += n_pow_ms * nf / (s - 1.0); // N^{1−s}/(s−1)

    // correction terms
    let mut poch = s; // (s)_1
    let mut npow = n_pow_ms / nf; // N^{−s−1}
    let inv_n2 = 1.0 / (nf * nf);
    let mut fact = 2.0f64; // (2k)!
    let mut j = 2.0f64;
    for k in 1..=K_F64 {
        let (bn, bd) = BERNOULLI[k - 1];
        value += (bn / bd / fact) * poch * npow;
        // advance: (s)_{2k+1} = (s)_{2k−1} (s+2k−1)(s+2k), (2k+2)!, N^{−s−2k−1}
        poch *= (s + (j - 1.0)) * (s + j);
        fact *= (j + 1.0) * (j + 2.0);
        j += 2.0;
        npow *= inv_n2;
    }
    // remainder bound with K = K_F64 (poch/fact/npow now carry k = K+1 values)
    let (bn, bd) = BERNOULLI[K_F64];
    let sigma = s.re;
    let two_k1 = (2 * K_F64 + 1) as f64;
    let bound = (bn / bd / fact * poch.norm() * npow.norm()) * ((s + two_k1).norm() / (sigma + two_k1));
    (value, bound.abs())
}

/// ζ(1/2 + iE) with the desk-scale ceiling enforced.
pub fn zeta_critical_line(e: f64, acc: &AccuracySpec) -> Result<Complex64> {
    let ceiling = crate::defaults::DEFAULTS.desk_ceiling;
    if !(0.0..=ceiling).contains(&e) {
        return Err(Error::CeilingExceeded { e, ceiling });
    }
    zeta_em(Complex64::new(0.5, e), acc)
}

/// Hardy function Z(E) = e^{iθ(E)} ζ(1/2 + iE). Mathematically real; the
/// imaginary component is returned so callers can audit rounding noise.
pub fn hardy_z(e: f64, acc: &AccuracySpec) -> Result<Complex64> {
    let zeta = zeta_critical_line(e, acc)?;
    let theta = rs_theta(e)?;
    Ok(Complex64::from_polar(1.0, theta) * zeta)
}

/// Double-double critical-line ζ for validation: same Euler–Maclaurin
/// algorithm with `n_factor`× the term count and a longer correction tail.
pub fn zeta_critical_line_dd(e: f64, n_factor: f64) -> CDd {
    let n = (((0.7 * e).ceil() + 32.0) * n_factor.max(1.0)) as usize;
    let ed = Dd::from_f64(e);

    let mut sum = CDd::ZERO;
    for k in 1..n {
        let kd = Dd::from_f64(k as f64);
        let lnk = kd.ln();
        let m = kd.sqrt().recip(); // k^{−1/2}
        let (sin, cos) = (ed * lnk).sin_cos();
        sum = sum + CDd::new(m * cos, -(m * sin));
    }

    let nd = Dd::from_f64(n as f64);
    let ln_n = nd.ln();
    let (sn, cn) = (ed * ln_n).sin_cos();
    let n_pow_ms = CDd::new(nd.sqrt().recip() * cn, -(nd.sqrt().recip() * sn)); // N^{−s}
    sum = sum + n_pow_ms.scale(Dd::from_ratio(1.0, 2.0));
    let s = CDd::new(Dd::from_ratio(1.0, 2.0), ed);
    let s_minus_1 = s - CDd::ONE;
    sum = sum + (n_pow_ms.scale(nd)) / s_minus_1;

    let mut poch = s;
    let mut npow = CDd::new(n_pow_ms.re / nd, n_pow_ms.im / nd);
    let inv_n2 = (nd * nd).recip();
    let mut fact = Dd::from_f64(2.0);
    let mut j = 2.0f64;
    for k in 1..=14usize {
        let (bn, bd) = BERNOULLI[k - 1];
        let coef = Dd::from_ratio(bn, bd) / fact;
        sum = sum + (poch * npow).scale(coef);
        let jm1 = CDd::from_f64(j - 1.0, 0.0);
        let jj = CDd::from_f64(j, 0.0);
        poch = poch * (s + jm1) * (s + jj);
        fact = fact * Dd::from_f64(j + 1.0) * Dd::from_f64(j + 2.0);
        j += 2.0;
        npow = npow.scale(inv_n2);
    }
    sum
}

/// Hardy Z in double-double (validation reference).
pub fn hardy_z_dd(e: f64, n_factor: f64) -> CDd {
    let zeta = zeta_critical_line_dd(e, n_factor);
    let (sin, cos) = rs_theta_dd(e).sin_cos();
    CDd::new(cos, sin) * zeta
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zeta_half_matches_doubled_term_reference_and_is_negative() {
        let acc = AccuracySpec::default();
        let v = zeta_critical_line(0.0, &acc).unwrap();
        let r = zeta_critical_line_dd(0.0, 2.0).to_c64();
        assert!(v.re < -1.0, "ζ(1/2) should be ≈ −1.46, got {v}");
        assert!(v.im.abs() < 1e-14);
        assert!((v - r).norm() < 1e-13, "f64 {v} vs dd {r}");
    }

    #[test]
    fn modulus_equals_hardy_modulus_at_30() {
        let acc = AccuracySpec::default();
        let z = zeta_critical_line(30.0, &acc).unwrap();
        let h = hardy_z(30.0, &acc).unwrap();
        assert!((z.norm() - h.norm()).abs() < 1e-13 * z.norm());
    }

    #[test]
    fn hardy_z_changes_sign_once_in_first_zero_window() {
        // fine sign scan over (14.0, 14.3)
        let acc = AccuracySpec::default();
        let mut changes = 0;
        let mut prev = hardy_z(14.0, &acc).unwrap().re;
        let steps = 300;
        for i in 1..=steps {
            let e = 14.0 + 0.3 * i as f64 / steps as f64;
            let cur = hardy_z(e, &acc).unwrap().re;
            if prev.signum() != cur.signum() {
                changes += 1;
            }
            prev = cur;
        }
        assert_eq!(changes, 1, "expected exactly one sign change in (14.0, 14.3)");
    }

    #[test]
    fn hardy_z_matches_dd_reference_on_a_grid() {
        let acc = AccuracySpec::default();
        for i in 0..20 {
            let e = 3.0 + 9.3 * i as f64;
            let v = hardy_z(e, &acc).unwrap().re;
            let r = hardy_z_dd(e, 2.0).re.to_f64();
            assert!(
                (v - r).abs() < 1e-11 * r.abs().max(1.0),
                "Z({e}): {v} vs reference {r}"
            );
        }
    }

    #[test]
    fn hardy_z_imaginary_part_is_rounding_level() {
        let acc = AccuracySpec::new(1e-12, 1e-11, 20000);
        let mut state = 777u64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..100 {
            let e = 200.0 * next();
            let z = hardy_z(e, &acc).unwrap();
            assert!(z.im.abs() <= acc.abs_tol, "Im Z({e}) = {:e}", z.im);
        }
    }

    #[test]
    fn ceiling_is_enforced() {
        let acc = AccuracySpec::default();
        assert!(matches!(
            zeta_critical_line(501.0, &acc),
            Err(Error::CeilingExceeded { .. })
        ));
        assert!(matches!(
            zeta_critical_line(-1.0, &acc),
            Err(Error::CeilingExceeded { .. })
        ));
    }
}
