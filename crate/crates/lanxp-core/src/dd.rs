//! Double-double ("dd") arithmetic: unevaluated sums `hi + lo` of two f64,
//! giving ~32 significant decimal digits.
//!
//! Used internally where f64 cancellation would eat the accuracy budget
//! (notably the confluent-hypergeometric series for oscillatory arguments)
//! and by the validation suites as an extended-precision reference
//! implementation. The algorithms are the classic error-free-transform
//! kernels (Dekker/Knuth two_sum, FMA two_prod) plus Taylor/argument-reduction
//! transcendentals.

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

/// Requires |a| >= |b| (or a == 0).
#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

/// Double-double scalar.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

pub const LN2: Dd = Dd { hi: 0.6931471805599453, lo: 2.3190468138462996e-17 };
pub const PI: Dd = Dd { hi: 3.141592653589793, lo: 1.2246467991473532e-16 };
pub const PI_2: Dd = Dd { hi: 1.5707963267948966, lo: 6.123233995736766e-17 };
pub const TWO_PI: Dd = Dd { hi: 6.283185307179586, lo: 2.4492935982947064e-16 };
pub const LN_PI: Dd = Dd { hi: 1.1447298858494002, lo: 1.0265951162707826e-17 };

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    #[inline]
    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    /// Exact ratio of two integers representable in f64.
    pub fn from_ratio(num: f64, den: f64) -> Dd {
        Dd::from_f64(num) / Dd::from_f64(den)
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn abs(self) -> Dd {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) { -self } else { self }
    }

    #[inline]
    pub fn recip(self) -> Dd {
        Dd::ONE / self
    }

    pub fn mul_pow2(self, k: i32) -> Dd {
        let f = pow2(k);
        Dd { hi: self.hi * f, lo: self.lo * f }
    }

    pub fn sqr(self) -> Dd {
        let (p1, mut p2) = two_prod(self.hi, self.hi);
        p2 += 2.0 * self.hi * self.lo;
        let (hi, lo) = quick_two_sum(p1, p2);
        Dd { hi, lo }
    }

    pub fn sqrt(self) -> Dd {
        if self.hi == 0.0 && self.lo == 0.0 {
            return Dd::ZERO;
        }
        debug_assert!(self.hi > 0.0, "dd sqrt of negative");
        // One dd-precision Newton correction on the f64 estimate.
        let y = self.hi.sqrt();
        let yd = Dd::from_f64(y);
        let r = self - yd.sqr();
        yd + Dd::from_f64(r.to_f64() / (2.0 * y))
    }

    /// Natural log for positive arguments, accurate to ~1e-32 relative.
    pub fn ln(self) -> Dd {
        debug_assert!(self.hi > 0.0, "dd ln of non-positive");
        // Scale into [sqrt(1/2), sqrt(2)) by an exact power of two.
        let mut e = exponent_of(self.hi) + 1; // self.hi in [2^(e-1), 2^e)
        let mut m = self.mul_pow2(-e);
        if m.hi < std::f64::consts::FRAC_1_SQRT_2 {
            m = m.mul_pow2(1);
            e -= 1;
        }
        // ln m = 2 atanh(t), t = (m-1)/(m+1), |t| <= 0.1716.
        let t = (m - Dd::ONE) / (m + Dd::ONE);
        let t2 = t.sqr();
        let mut term = t;
        let mut sum = t;
        let mut k = 1usize;
        loop {
            term = term * t2;
            let inc = term / Dd::from_f64((2 * k + 1) as f64);
            sum = sum + inc;
            if inc.hi.abs() <= 1e-35 * sum.hi.abs() {
                break;
            }
            k += 1;
            debug_assert!(k < 60, "dd ln series stalled");
        }
        sum.mul_pow2(1) + LN2 * Dd::from_f64(e as f64)
    }

    /// exp for |x| < ~700, ~1e-31 relative.
    pub fn exp(self) -> Dd {
        let k = (self.hi / LN2.hi).round();
        let r = self - LN2 * Dd::from_f64(k);
        // |r| <= ln2/2; Taylor.
        let mut term = Dd::ONE;
        let mut sum = Dd::ONE;
        let mut n = 1usize;
        loop {
            term = term * r / Dd::from_f64(n as f64);
            sum = sum + term;
            if term.hi.abs() <= 1e-35 * sum.hi.abs() {
                break;
            }
            n += 1;
            debug_assert!(n < 60, "dd exp series stalled");
        }
        sum.mul_pow2(k as i32)
    }

    /// Simultaneous sin/cos with dd argument reduction mod pi/2.
    /// Accurate to ~1e-30 absolute for |x| up to ~1e4.
    pub fn sin_cos(self) -> (Dd, Dd) {
        let k = (self.hi / PI_2.hi).round();
        let r = self - PI_2 * Dd::from_f64(k);
        let (s, c) = (sin_taylor(r), cos_taylor(r));
        match (k as i64).rem_euclid(4) {
            0 => (s, c),
            1 => (c, -s),
            2 => (-s, -c),
            _ => (-c, s),
        }
    }

    /// Four-quadrant arctangent, ~1e-31 absolute.
    pub fn atan2(y: Dd, x: Dd) -> Dd {
        if y.hi == 0.0 && y.lo == 0.0 {
            return if x.hi >= 0.0 { Dd::ZERO } else { PI };
        }
        if x.hi == 0.0 && x.lo == 0.0 {
            return if y.hi > 0.0 { PI_2 } else { -PI_2 };
        }
        if y.abs().hi <= x.abs().hi {
            let a = atan_reduced(y / x);
            if x.hi > 0.0 {
                a
            } else if y.hi >= 0.0 {
                a + PI
            } else {
                a - PI
            }
        } else {
            let a = atan_reduced(x / y);
            if y.hi > 0.0 {
                PI_2 - a
            } else {
                -PI_2 - a
            }
        }
    }
}

/// atan for |t| <= 1 via three half-angle reductions + Taylor.
fn atan_reduced(t: Dd) -> Dd {
    let mut t = t;
    for _ in 0..3 {
        let denom = Dd::ONE + (Dd::ONE + t.sqr()).sqrt();
        t = t / denom;
    }
    // |t| <= tan(pi/32) ~ 0.0985
    let t2 = t.sqr();
    let mut term = t;
    let mut sum = t;
    let mut k = 1usize;
    loop {
        term = term * t2;
        let inc = term / Dd::from_f64((2 * k + 1) as f64);
        sum = if k % 2 == 1 { sum - inc } else { sum + inc };
        if inc.hi.abs() <= 1e-35 * sum.hi.abs().max(1e-300) {
            break;
        }
        k += 1;
        debug_assert!(k < 40, "dd atan series stalled");
    }
    sum.mul_pow2(3)
}

fn sin_taylor(r: Dd) -> Dd {
    let r2 = r.sqr();
    let mut term = r;
    let mut sum = r;
    let mut n = 1usize;
    loop {
        term = term * r2 / Dd::from_f64(((2 * n) * (2 * n + 1)) as f64);
        sum = if n % 2 == 1 { sum - term } else { sum + term };
        if term.hi.abs() <= 1e-35 {
            break;
        }
        n += 1;
        debug_assert!(n < 40, "dd sin series stalled");
    }
    sum
}

fn cos_taylor(r: Dd) -> Dd {
    let r2 = r.sqr();
    let mut term = Dd::ONE;
    let mut sum = Dd::ONE;
    let mut n = 1usize;
    loop {
        term = term * r2 / Dd::from_f64(((2 * n - 1) * (2 * n)) as f64);
        sum = if n % 2 == 1 { sum - term } else { sum + term };
        if term.hi.abs() <= 1e-35 {
            break;
        }
        n += 1;
        debug_assert!(n < 40, "dd cos series stalled");
    }
    sum
}

/// Floor of log2 |x| for finite nonzero x (exponent of the leading bit).
fn exponent_of(x: f64) -> i32 {
    let bits = x.abs().to_bits();
    let raw = ((bits >> 52) & 0x7ff) as i32;
    debug_assert!(raw != 0 && raw != 0x7ff, "subnormal/non-finite in dd exponent");
    raw - 1024
}

/// Exact power of two as f64 (|k| < 1000).
fn pow2(k: i32) -> f64 {
    f64::from_bits(((1023 + k) as u64) << 52)
}

impl std::ops::Neg for Dd {
    type Output = Dd;
    #[inline]
    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }
}

impl std::ops::Add for Dd {
    type Output = Dd;
    #[inline]
    fn add(self, b: Dd) -> Dd {
        let (s1, s2) = two_sum(self.hi, b.hi);
        let (t1, t2) = two_sum(self.lo, b.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        let (hi, lo) = quick_two_sum(s1, s2 + t2);
        Dd { hi, lo }
    }
}

impl std::ops::Sub for Dd {
    type Output = Dd;
    #[inline]
    fn sub(self, b: Dd) -> Dd {
        self + (-b)
    }
}

impl std::ops::Mul for Dd {
    type Output = Dd;
    #[inline]
    fn mul(self, b: Dd) -> Dd {
        let (p1, mut p2) = two_prod(self.hi, b.hi);
        p2 += self.hi * b.lo + self.lo * b.hi;
        let (hi, lo) = quick_two_sum(p1, p2);
        Dd { hi, lo }
    }
}

impl std::ops::Div for Dd {
    type Output = Dd;
    fn div(self, b: Dd) -> Dd {
        let q1 = self.hi / b.hi;
        let r = self - b * Dd::from_f64(q1);
        let q2 = r.hi / b.hi;
        let r = r - b * Dd::from_f64(q2);
        let q3 = r.hi / b.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo } + Dd::from_f64(q3)
    }
}

/// Complex double-double.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CDd {
    pub re: Dd,
    pub im: Dd,
}

impl CDd {
    pub const ZERO: CDd = CDd { re: Dd::ZERO, im: Dd::ZERO };
    pub const ONE: CDd = CDd { re: Dd::ONE, im: Dd::ZERO };

    #[inline]
    pub fn new(re: Dd, im: Dd) -> CDd {
        CDd { re, im }
    }

    #[inline]
    pub fn from_f64(re: f64, im: f64) -> CDd {
        CDd { re: Dd::from_f64(re), im: Dd::from_f64(im) }
    }

    pub fn to_c64(self) -> num_complex::Complex64 {
        num_complex::Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    pub fn norm_sqr(self) -> Dd {
        self.re.sqr() + self.im.sqr()
    }

    pub fn abs(self) -> Dd {
        // exact power-of-two prescale so the squares cannot overflow even
        // when the components are near the f64 exponent limits
        let m = self.re.hi.abs().max(self.im.hi.abs());
        if m == 0.0 {
            return Dd::ZERO;
        }
        let k = m.log2().floor() as i32;
        let re = self.re.mul_pow2(-k);
        let im = self.im.mul_pow2(-k);
        (re.sqr() + im.sqr()).sqrt().mul_pow2(k)
    }

    pub fn scale(self, s: Dd) -> CDd {
        CDd { re: self.re * s, im: self.im * s }
    }

    /// Principal complex log.
    pub fn ln(self) -> CDd {
        CDd { re: self.norm_sqr().ln().mul_pow2(-1), im: Dd::atan2(self.im, self.re) }
    }

    /// Magnitude bound |re| + |im| (cheap series-tail gauge).
    pub fn mag1(self) -> f64 {
        self.re.hi.abs() + self.im.hi.abs()
    }
}

impl From<num_complex::Complex64> for CDd {
    fn from(v: num_complex::Complex64) -> CDd {
        CDd::from_f64(v.re, v.im)
    }
}

impl std::ops::Neg for CDd {
    type Output = CDd;
    fn neg(self) -> CDd {
        CDd { re: -self.re, im: -self.im }
    }
}

impl std::ops::Add for CDd {
    type Output = CDd;
    #[inline]
    fn add(self, b: CDd) -> CDd {
        CDd { re: self.re + b.re, im: self.im + b.im }
    }
}

impl std::ops::Sub for CDd {
    type Output = CDd;
    #[inline]
    fn sub(self, b: CDd) -> CDd {
        CDd { re: self.re - b.re, im: self.im - b.im }
    }
}

impl std::ops::Mul for CDd {
    type Output = CDd;
    #[inline]
    fn mul(self, b: CDd) -> CDd {
        CDd {
            re: self.re * b.re - self.im * b.im,
            im: self.re * b.im + self.im * b.re,
        }
    }
}

impl std::ops::Div for CDd {
    type Output = CDd;
    fn div(self, b: CDd) -> CDd {
        let d = b.norm_sqr();
        let num = self * CDd { re: b.re, im: -b.im };
        CDd { re: num.re / d, im: num.im / d }
    }
}
