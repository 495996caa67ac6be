//! Confluent hypergeometric function M(a, b, z) = Σ (a)_n z^n / ((b)_n n!).
//!
//! Inside the box the argument reaches |z| ~ L²/ℓ², far beyond what a plain
//! f64 Taylor sum survives, so evaluation dispatches on a cancellation
//! estimate. With Re z ≥ 0 (arranged by the Kummer transformation
//! M(a,b,z) = e^z M(b−a,b,−z)) the largest series term is ~e^{|z|} while the
//! sum is ~e^{Re z}, so the subtractive digit loss is ≈ (|z| − Re z)/ln 10:
//!
//!   loss ≤ 2 digits, |z| ≤ 30   → f64 series
//!   loss ≤ 15 digits, |z| ≤ 200 → double-double series
//!   otherwise                   → seed a double-double series close to the
//!     origin on the ray t·z and continue the hypergeometric ODE
//!       t u̇ = t r,   t ṙ = a z u − (b − t z) r
//!     outward to t = 1 (the wanted solution is the dominant one for
//!     Re z ≥ 0, so outward integration is self-correcting).
//!
//! Results are `Scaled` (value · e^{log_scale}) because e^z factors here and
//! the Gaussian factors in the wavefunction assembly overflow individually
//! while their products stay moderate.

use num_complex::Complex64;

use crate::accuracy::AccuracySpec;
use crate::dd::CDd;
use crate::error::{Error, Result};
use crate::rk45::{self, Dp45Options};

/// Digits of decimal cancellation per unit of (|z| − Re z).
const DIGITS_PER_UNIT: f64 = std::f64::consts::LOG10_E;
const F64_LOSS_LIMIT: f64 = 2.0;
const F64_NORM_LIMIT: f64 = 30.0;
const DD_LOSS_LIMIT: f64 = 15.0;
const DD_NORM_LIMIT: f64 = 200.0;
/// Continuation seed placement: ≤ 12 digits of loss at the seed point…
const SEED_LOSS_SPAN: f64 = 12.0 / DIGITS_PER_UNIT;
/// …and the seed series must stay clear of f64 overflow (max term ~ e^{|z|}).
const SEED_NORM_LIMIT: f64 = 600.0;

/// A complex number held as `value · exp(log_scale)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Scaled {
    pub value: Complex64,
    pub log_scale: f64,
}

impl Scaled {
    pub const ZERO: Scaled = Scaled { value: Complex64::new(0.0, 0.0), log_scale: 0.0 };

    pub fn new(value: Complex64, log_scale: f64) -> Scaled {
        Scaled { value, log_scale }
    }

    pub fn from_c64(value: Complex64) -> Scaled {
        Scaled { value, log_scale: 0.0 }
    }

    /// ln of the modulus (−∞ for zero).
    pub fn ln_abs(&self) -> f64 {
        self.value.norm().ln() + self.log_scale
    }

    pub fn arg(&self) -> f64 {
        self.value.arg()
    }

    /// Pull the modulus into the exponent so `value` sits on the unit circle.
    pub fn normalized(&self) -> Scaled {
        let m = self.value.norm();
        if m == 0.0 || !m.is_finite() {
            return *self;
        }
        Scaled { value: self.value / m, log_scale: self.log_scale + m.ln() }
    }

    pub fn mul(&self, rhs: &Scaled) -> Scaled {
        Scaled { value: self.value * rhs.value, log_scale: self.log_scale + rhs.log_scale }
    }

    pub fn div(&self, rhs: &Scaled) -> Scaled {
        Scaled { value: self.value / rhs.value, log_scale: self.log_scale - rhs.log_scale }
    }

    /// Multiply by e^{delta} without touching the mantissa.
    pub fn scale_exp(&self, delta: f64) -> Scaled {
        Scaled { value: self.value, log_scale: self.log_scale + delta }
    }

    /// Collapse to a plain complex number.
    pub fn to_c64(&self) -> Result<Complex64> {
        if self.value == Complex64::new(0.0, 0.0) {
            return Ok(self.value);
        }
        if !self.value.is_finite() || !self.log_scale.is_finite() {
            return Err(Error::Overflow { what: "scaled value" });
        }
        let m = self.value.norm();
        let total = self.log_scale + m.ln();
        if total > 705.0 {
            return Err(Error::Overflow { what: "scaled value exponent" });
        }
        Ok(self.value / m * total.exp())
    }
}

fn is_non_positive_integer(v: Complex64) -> bool {
    v.im == 0.0 && v.re <= 0.0 && v.re.fract() == 0.0
}

/// M(a, b, z) as a plain complex number.
pub fn kummer_m(a: Complex64, b: Complex64, z: Complex64, acc: &AccuracySpec) -> Result<Complex64> {
    kummer_scaled(a, b, z, acc)?.to_c64()
}

/// M(a, b, z) in log-scaled form; never overflows for finite arguments.
pub fn kummer_scaled(a: Complex64, b: Complex64, z: Complex64, acc: &AccuracySpec) -> Result<Scaled> {
    if !(a.is_finite() && b.is_finite() && z.is_finite()) {
        return Err(Error::Domain("kummer argument not finite".into()));
    }
    if is_non_positive_integer(b) {
        return Err(Error::Pole { re: b.re, im: b.im });
    }
    if z.re < 0.0 {
        // M(a,b,z) = e^z M(b−a, b, −z); carry e^{Re z} in the exponent
        let w = dispatch(b - a, b, -z, acc)?;
        let phase = Complex64::from_polar(1.0, z.im);
        return Ok(Scaled { value: w.value * phase, log_scale: w.log_scale + z.re });
    }
    dispatch(a, b, z, acc)
}

/// Route a Re z ≥ 0 argument to series or continuation.
fn dispatch(a: Complex64, b: Complex64, z: Complex64, acc: &AccuracySpec) -> Result<Scaled> {
    let norm = z.norm();
    let loss = DIGITS_PER_UNIT * (norm - z.re);
    if loss <= F64_LOSS_LIMIT && norm <= F64_NORM_LIMIT {
        return Ok(Scaled::from_c64(series_f64(a, b, z, acc)?));
    }
    if loss <= DD_LOSS_LIMIT && norm <= DD_NORM_LIMIT {
        let v = series_dd(a.into(), b.into(), z.into(), acc.rel_tol.min(1e-18), acc.max_terms)?;
        return Ok(Scaled::from_c64(v.to_c64()));
    }
    continuation(a, b, z, acc)
}

/// Plain Taylor sum with a geometric tail bound.
fn series_f64(a: Complex64, b: Complex64, z: Complex64, acc: &AccuracySpec) -> Result<Complex64> {
    let mut sum = Complex64::new(1.0, 0.0);
    let mut term = sum;
    let znorm = z.norm();
    let settle = 2.0 * znorm.max(b.norm()) + 4.0;
    for k in 0..acc.max_terms {
        let kf = k as f64;
        term = term * (a + kf) * z / ((b + kf) * (kf + 1.0));
        sum += term;
        let j = kf + 1.0; // terms summed so far beyond the leading 1
        if j > settle {
            // beyond the hump successive ratios are bounded by q < 1/2
            let q = znorm * (a.norm() + j + 1.0) / ((b + j).norm() * (j + 1.0));
            if q < 0.5 && term.norm() * q / (1.0 - q) <= acc.tol_for(sum.norm()) {
                return Ok(sum);
            }
        }
    }
    Err(Error::NonConvergence { what: "hypergeometric series", budget: acc.max_terms })
}

/// Double-double Taylor sum; also serves as the tighter-tolerance reference.
fn series_dd(a: CDd, b: CDd, z: CDd, rel_tol: f64, max_terms: usize) -> Result<CDd> {
    let mut sum = CDd::ONE;
    let mut term = sum;
    let znorm = z.abs().to_f64();
    let anorm = a.abs().to_f64();
    let settle = 2.0 * znorm.max(b.abs().to_f64()) + 4.0;
    for k in 0..max_terms {
        let kf = CDd::from_f64(k as f64, 0.0);
        let kp1 = CDd::from_f64((k + 1) as f64, 0.0);
        term = term * (a + kf) * z / ((b + kf) * kp1);
        sum = sum + term;
        let j = (k + 1) as f64;
        if j > settle {
            let q = znorm * (anorm + j + 1.0) / (((b + CDd::from_f64(j, 0.0)).abs().to_f64()) * (j + 1.0));
            if q < 0.5 && term.abs().to_f64() * q / (1.0 - q) <= rel_tol * sum.abs().to_f64() {
                return Ok(sum);
            }
        }
    }
    Err(Error::NonConvergence { what: "hypergeometric series (extended)", budget: max_terms })
}

/// Seeded ODE continuation along the ray t·z, t ∈ [s, 1], with dyadic-style
/// renormalization of the state into `log_scale`.
fn continuation(a: Complex64, b: Complex64, z: Complex64, acc: &AccuracySpec) -> Result<Scaled> {
    let znorm = z.norm();
    let span = znorm - z.re;
    let s = (SEED_LOSS_SPAN / span).min(SEED_NORM_LIMIT / znorm).min(0.5);
    debug_assert!(s > 0.0 && s < 1.0);

    let z0 = CDd::from(z).scale(crate::dd::Dd::from_f64(s));
    let seed_tol = acc.rel_tol.min(1e-18);
    let u0 = series_dd(a.into(), b.into(), z0, seed_tol, acc.max_terms)?.to_c64();
    let m1 = series_dd(
        (a + 1.0).into(),
        (b + 1.0).into(),
        z0,
        seed_tol,
        acc.max_terms,
    )?
    .to_c64();
    let r0 = z * (a / b) * m1; // d/dt M(a,b,tz) at t = s

    let m = u0.norm().max(r0.norm());
    if !(m.is_finite() && m > 0.0) {
        return Err(Error::Overflow { what: "continuation seed" });
    }
    let mut log_scale = m.ln();
    let y0 = [u0.re / m, u0.im / m, r0.re / m, r0.im / m];

    let az = a * z;
    let field = |t: f64, y: &[f64; 4]| -> [f64; 4] {
        let u = Complex64::new(y[0], y[1]);
        let r = Complex64::new(y[2], y[3]);
        let dr = (az * u + (t * z - b) * r) / t;
        [y[2], y[3], dr.re, dr.im]
    };
    let opts = Dp45Options {
        rel_tol: acc.rel_tol.max(1e-13),
        abs_tol: 0.0,
        max_dt: f64::INFINITY,
        min_dt: 1e-13,
        max_steps: 4_000_000,
    };
    let y = rk45::integrate(field, s, 1.0, y0, &opts, |_, y| {
        let peak = y.iter().fold(0.0f64, |acc, &v| acc.max(v.abs()));
        if !peak.is_finite() {
            return Err(Error::Overflow { what: "hypergeometric continuation" });
        }
        if !(1e-150..=1e150).contains(&peak) && peak > 0.0 {
            for v in y.iter_mut() {
                *v /= peak;
            }
            log_scale += peak.ln();
        }
        Ok(())
    })?;

    Ok(Scaled { value: Complex64::new(y[0], y[1]), log_scale })
}
