//! High-precision complex arithmetic built on [`HpReal`].

use super::functions;
use super::hpreal::{HpReal, Rounding};
use num_complex::Complex64;

const N: Rounding = Rounding::Nearest;

/// Complex number with high-precision components.
#[derive(Clone, Debug, PartialEq)]
pub struct HpComplex {
    pub re: HpReal,
    pub im: HpReal,
}

impl HpComplex {
    pub fn new(re: HpReal, im: HpReal) -> Self {
        HpComplex { re, im }
    }

    pub fn zero(prec: u32) -> Self {
        HpComplex { re: HpReal::zero(prec), im: HpReal::zero(prec) }
    }

    pub fn one(prec: u32) -> Self {
        HpComplex { re: HpReal::one(prec), im: HpReal::zero(prec) }
    }

    pub fn from_real(re: HpReal) -> Self {
        let prec = re.precision();
        HpComplex { re, im: HpReal::zero(prec) }
    }

    pub fn from_f64s(re: f64, im: f64, prec: u32) -> Self {
        HpComplex { re: HpReal::from_f64(re, prec), im: HpReal::from_f64(im, prec) }
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    pub fn precision(&self) -> u32 {
        self.re.precision().max(self.im.precision())
    }

    pub fn with_precision(&self, prec: u32) -> HpComplex {
        HpComplex {
            re: self.re.with_precision(prec, N),
            im: self.im.with_precision(prec, N),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> HpComplex {
        HpComplex { re: self.re.clone(), im: self.im.neg() }
    }

    pub fn neg(&self) -> HpComplex {
        HpComplex { re: self.re.neg(), im: self.im.neg() }
    }

    pub fn add(&self, rhs: &HpComplex) -> HpComplex {
        HpComplex { re: self.re.add(&rhs.re, N), im: self.im.add(&rhs.im, N) }
    }

    pub fn sub(&self, rhs: &HpComplex) -> HpComplex {
        HpComplex { re: self.re.sub(&rhs.re, N), im: self.im.sub(&rhs.im, N) }
    }

    pub fn mul(&self, rhs: &HpComplex) -> HpComplex {
        let ac = self.re.mul(&rhs.re, N);
        let bd = self.im.mul(&rhs.im, N);
        let ad = self.re.mul(&rhs.im, N);
        let bc = self.im.mul(&rhs.re, N);
        HpComplex { re: ac.sub(&bd, N), im: ad.add(&bc, N) }
    }

    pub fn mul_real(&self, k: &HpReal) -> HpComplex {
        HpComplex { re: self.re.mul(k, N), im: self.im.mul(k, N) }
    }

    pub fn div(&self, rhs: &HpComplex) -> HpComplex {
        let den = rhs.norm_sqr();
        assert!(!den.is_zero(), "complex division by zero");
        let num = self.mul(&rhs.conj());
        HpComplex { re: num.re.div(&den, N), im: num.im.div(&den, N) }
    }

    pub fn div_real(&self, k: &HpReal) -> HpComplex {
        HpComplex { re: self.re.div(k, N), im: self.im.div(k, N) }
    }

    pub fn norm_sqr(&self) -> HpReal {
        self.re.mul(&self.re, N).add(&self.im.mul(&self.im, N), N)
    }

    pub fn abs(&self) -> HpReal {
        self.norm_sqr().sqrt(N)
    }

    /// Principal argument in `(-pi, pi]`.
    pub fn arg(&self, prec: u32) -> HpReal {
        functions::atan2(&self.im, &self.re, prec)
    }

    /// Complex exponential `e^self`.
    pub fn exp(&self, prec: u32) -> HpComplex {
        let modulus = functions::exp(&self.re, prec);
        let (s, c) = functions::sin_cos(&self.im, prec);
        HpComplex { re: modulus.mul(&c, N), im: modulus.mul(&s, N) }
    }

    pub fn pow_u64(&self, mut k: u64) -> HpComplex {
        let prec = self.precision();
        let mut base = self.clone();
        let mut acc = HpComplex::one(prec);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Euclidean distance to another point.
    pub fn dist(&self, rhs: &HpComplex) -> HpReal {
        self.sub(rhs).abs()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> HpComplex {
        HpComplex::from_f64s(re, im, 128)
    }

    #[test]
    fn field_ops() {
        let a = c(1.0, 2.0);
        let b = c(-3.0, 0.5);
        let p = a.mul(&b);
        assert_eq!(p.re.to_f64(), -4.0);
        assert_eq!(p.im.to_f64(), -5.5);
        let q = p.div(&b);
        assert!((q.re.to_f64() - 1.0).abs() < 1e-30);
        assert!((q.im.to_f64() - 2.0).abs() < 1e-30);
    }

    #[test]
    fn exp_of_imaginary_is_on_unit_circle() {
        let z = c(0.0, 1.0);
        let e = z.exp(128);
        assert!((e.re.to_f64() - 1f64.cos()).abs() < 1e-15);
        assert!((e.im.to_f64() - 1f64.sin()).abs() < 1e-15);
        let n = e.norm_sqr();
        assert!((n.to_f64() - 1.0).abs() < 1e-30);
    }

    #[test]
    fn powers_by_squaring() {
        let z = c(1.0, 1.0);
        let z8 = z.pow_u64(8);
        // (1+i)^8 = 16
        assert!((z8.re.to_f64() - 16.0).abs() < 1e-25);
        assert!(z8.im.to_f64().abs() < 1e-25);
    }

    #[test]
    fn arg_matches_atan2() {
        let z = c(-1.0, -1.0);
        let a = z.arg(128).to_f64();
        assert!((a - (-3.0 * std::f64::consts::FRAC_PI_4)).abs() < 1e-15);
    }
}
