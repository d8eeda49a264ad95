//! Double-double arithmetic: unevaluated sums hi + lo of two f64s giving
//! ~31 significant digits. Used internally by the Taylor-series evaluators,
//! where coefficient recursions and alternating sums at large |z| lose more
//! than half the f64 mantissa before cancellation settles.

use num_complex::Complex64;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

/// Error-free sum: a + b = s + e exactly, |e| ≤ ulp(s)/2.
#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

/// Error-free sum assuming |a| ≥ |b|.
#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let e = b - (s - a);
    (s, e)
}

/// Veltkamp split of a f64 into high and low 26-bit halves.
#[inline]
fn split(a: f64) -> (f64, f64) {
    let t = 134217729.0 * a; // 2^27 + 1
    let hi = t - (t - a);
    (hi, a - hi)
}

/// Error-free product: a·b = p + e exactly.
#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let (ah, al) = split(a);
    let (bh, bl) = split(b);
    let e = ((ah * bh - p) + ah * bl + al * bh) + al * bl;
    (p, e)
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    #[inline]
    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    /// Reciprocal via one Newton step on the f64 seed.
    pub fn recip(self) -> Dd {
        let approx = 1.0 / self.hi;
        let x = Dd::from_f64(approx);
        // x·(2 − self·x), carried out in double-double.
        let e = Dd::ONE - self * x;
        let x2 = x + x * e;
        let e2 = Dd::ONE - self * x2;
        x2 + x2 * e2
    }
}

impl Add for Dd {
    type Output = Dd;
    #[inline]
    fn add(self, rhs: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, rhs.hi);
        let e = e + self.lo + rhs.lo;
        let (hi, lo) = quick_two_sum(s, e);
        Dd { hi, lo }
    }
}

impl AddAssign for Dd {
    #[inline]
    fn add_assign(&mut self, rhs: Dd) {
        *self = *self + rhs;
    }
}

impl Sub for Dd {
    type Output = Dd;
    #[inline]
    fn sub(self, rhs: Dd) -> Dd {
        self + (-rhs)
    }
}

impl Neg for Dd {
    type Output = Dd;
    #[inline]
    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }
}

impl Mul for Dd {
    type Output = Dd;
    #[inline]
    fn mul(self, rhs: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, rhs.hi);
        let e = e + self.hi * rhs.lo + self.lo * rhs.hi;
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }
}

impl Mul<f64> for Dd {
    type Output = Dd;
    #[inline]
    fn mul(self, rhs: f64) -> Dd {
        let (p, e) = two_prod(self.hi, rhs);
        let e = e + self.lo * rhs;
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }
}

impl Div for Dd {
    type Output = Dd;
    #[inline]
    #[allow(clippy::suspicious_arithmetic_impl)] // division by Newton-refined reciprocal
    fn div(self, rhs: Dd) -> Dd {
        self * rhs.recip()
    }
}

impl Div<f64> for Dd {
    type Output = Dd;
    #[inline]
    fn div(self, rhs: f64) -> Dd {
        self / Dd::from_f64(rhs)
    }
}

/// k^{−s} in double-double: exact integer power, one rounding in recip.
pub fn inv_pow(k: u32, s: u32) -> Dd {
    let base = Dd::from_f64(k as f64);
    let mut p = Dd::ONE;
    for _ in 0..s {
        p = p * base;
    }
    p.recip()
}

/// ln 2 as an unevaluated double-double pair.
pub const LN2_DD: Dd = Dd { hi: std::f64::consts::LN_2, lo: 2.319_046_813_846_299_6e-17 };

/// Natural logarithm of a positive f64 to double-double accuracy: exact
/// argument reduction x = 2^e·m with m ∈ [√2/2, √2), then the atanh series
/// in t = (m−1)/(m+1) (|t| ≤ 0.172, ~21 terms to 1e−34).
pub fn ln_dd(x: f64) -> Dd {
    assert!(x > 0.0 && x.is_finite(), "ln_dd needs a finite positive argument, got {x}");
    let bits = x.to_bits();
    if (bits >> 52) & 0x7ff == 0 {
        // Subnormal: rescale by 2^54 exactly.
        return ln_dd(x * 2f64.powi(54)) - LN2_DD * 54.0;
    }
    let mut e = (((bits >> 52) & 0x7ff) as i32) - 1023;
    let mut m = f64::from_bits((bits & 0x000f_ffff_ffff_ffff) | (1023u64 << 52));
    if m > std::f64::consts::SQRT_2 {
        m *= 0.5;
        e += 1;
    }
    // m − 1 is exact (Sterbenz) on [√2/2, √2).
    let t = Dd::from_f64(m - 1.0) / (Dd::from_f64(m) + Dd::ONE);
    let t2 = t * t;
    let mut term = t;
    let mut sum = t;
    let mut k = 1.0_f64;
    loop {
        term = term * t2;
        k += 2.0;
        let add = term / k;
        sum += add;
        if add.hi.abs() <= 1e-34 * sum.hi.abs() {
            break;
        }
    }
    sum * 2.0 + LN2_DD * e as f64
}

/// Complex double-double: a Dd pair per component.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cdd {
    pub re: Dd,
    pub im: Dd,
}

impl Cdd {
    pub const ZERO: Cdd = Cdd { re: Dd::ZERO, im: Dd::ZERO };
    pub const ONE: Cdd = Cdd { re: Dd::ONE, im: Dd::ZERO };

    #[inline]
    pub fn from_complex(z: Complex64) -> Cdd {
        Cdd { re: Dd::from_f64(z.re), im: Dd::from_f64(z.im) }
    }

    /// Integer power by binary exponentiation; powu(0) = 1.
    pub fn powu(self, mut k: u32) -> Cdd {
        let mut acc = Cdd::ONE;
        let mut base = self;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            k >>= 1;
        }
        acc
    }

    #[inline]
    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    #[inline]
    pub fn scale(self, s: Dd) -> Cdd {
        Cdd { re: self.re * s, im: self.im * s }
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.to_complex().norm()
    }
}

impl Add for Cdd {
    type Output = Cdd;
    #[inline]
    fn add(self, rhs: Cdd) -> Cdd {
        Cdd { re: self.re + rhs.re, im: self.im + rhs.im }
    }
}

impl AddAssign for Cdd {
    #[inline]
    fn add_assign(&mut self, rhs: Cdd) {
        *self = *self + rhs;
    }
}

impl Mul for Cdd {
    type Output = Cdd;
    #[inline]
    fn mul(self, rhs: Cdd) -> Cdd {
        Cdd {
            re: self.re * rhs.re - self.im * rhs.im,
            im: self.re * rhs.im + self.im * rhs.re,
        }
    }
}

impl Div<f64> for Cdd {
    type Output = Cdd;
    #[inline]
    fn div(self, rhs: f64) -> Cdd {
        let r = Dd::from_f64(rhs).recip();
        Cdd { re: self.re * r, im: self.im * r }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn error_free_transforms() {
        let (s, e) = two_sum(1.0, 1e-30);
        assert_eq!(s, 1.0);
        assert_eq!(e, 1e-30);
        let (p, e) = two_prod(1.0 + 2f64.powi(-30), 1.0 + 2f64.powi(-30));
        // p + e must represent the exact product.
        let exact_lo = 2f64.powi(-29) + 2f64.powi(-60);
        assert_eq!(p + e, 1.0 + exact_lo);
    }

    #[test]
    fn arithmetic_accuracy() {
        // (1 + eps)² − 1 − 2eps = eps², far below f64 resolution of the sum.
        let eps = 2f64.powi(-40);
        let x = Dd::from_f64(1.0) + Dd::from_f64(eps);
        let sq = x * x;
        let resid = sq - Dd::ONE - Dd::from_f64(2.0 * eps);
        assert!((resid.to_f64() - eps * eps).abs() < 1e-40);

        // Reciprocal to ~1e-31.
        let r = Dd::from_f64(3.0).recip();
        let back = r * Dd::from_f64(3.0) - Dd::ONE;
        assert!(back.to_f64().abs() < 1e-30);
    }

    #[test]
    fn harmonic_sum_beats_f64() {
        // Σ 1/k in dd vs Kahan-free f64: dd must match a high-accuracy value.
        let mut dd = Dd::ZERO;
        for k in 1..=100_000u64 {
            dd += Dd::from_f64(k as f64).recip();
        }
        // Reference from exact rational arithmetic of the first few digits.
        let reference = 12.090146129863427;
        assert!((dd.to_f64() - reference).abs() < 1e-12);
    }

    #[test]
    fn complex_ops() {
        let z = Cdd::from_complex(Complex64::new(0.5, -0.25));
        let w = z * z;
        let expect = Complex64::new(0.5, -0.25) * Complex64::new(0.5, -0.25);
        assert!((w.to_complex() - expect).norm() < 1e-30);
        let d = (z / 4.0).to_complex();
        assert!((d - Complex64::new(0.125, -0.0625)).norm() < 1e-30);
        let p = Cdd::from_complex(Complex64::new(0.0, 1.0)).powu(6);
        assert!((p.to_complex() - Complex64::new(-1.0, 0.0)).norm() < 1e-30);
        assert_eq!(Cdd::from_complex(Complex64::new(3.0, 4.0)).powu(0), Cdd::ONE);
    }

    #[test]
    fn logarithm_identities() {
        assert_eq!(ln_dd(1.0), Dd::ZERO);
        assert!((ln_dd(2.0) - LN2_DD).to_f64().abs() < 1e-31);
        assert!((ln_dd(1024.0) - LN2_DD * 10.0).to_f64().abs() < 1e-30);
        // Multiplicativity across exact factorizations.
        assert!((ln_dd(15.0) - ln_dd(3.0) - ln_dd(5.0)).to_f64().abs() < 1e-30);
        assert!((ln_dd(0.75) - ln_dd(3.0) + LN2_DD * 2.0).to_f64().abs() < 1e-30);
        // Agreement with the f64 libm value.
        for x in [0.7, 5.0, 123.456, 1e-8, 1e300, 5e-324] {
            let d = (ln_dd(x).hi - x.ln()).abs();
            assert!(d <= 4e-16 * x.ln().abs().max(1.0), "x = {x}: {d:.3e}");
        }
    }

    #[test]
    fn logarithm_is_smooth_under_differencing() {
        // Central difference of ln must reproduce 1/x to the h²/(3x²)
        // truncation level — possible only if evaluations carry no f64-level
        // jitter (which would contribute ~1e−16·x/(2h) ≈ 5e−12·x, dominant
        // at x = 40). A power-of-two step keeps the probe points exact so
        // only ln_dd itself is being measured.
        let h = 2f64.powi(-17);
        for x in [0.7, 5.0, 40.0] {
            let d = (ln_dd(x + h) - ln_dd(x - h)) / (2.0 * h);
            let rel = (d.to_f64() * x - 1.0).abs();
            assert!(rel < h * h / (x * x), "x = {x}: rel {rel:.3e}");
        }
    }
}
