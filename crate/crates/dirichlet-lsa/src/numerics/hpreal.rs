//! Arbitrary-precision binary floating point with explicit mantissa width.
//!
//! A value is `mantissa * 2^exponent` where the mantissa is a signed big
//! integer normalized to exactly `prec` bits (or zero). Every rounding
//! operation supports directed modes so interval code can build certified
//! enclosures on top of this type.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;

/// Default mantissa width in bits.
pub const DEFAULT_PRECISION: u32 = 256;

/// Rounding mode for operations that must discard low-order bits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rounding {
    /// Round to nearest, ties to even.
    Nearest,
    /// Round toward negative infinity.
    Floor,
    /// Round toward positive infinity.
    Ceil,
}

/// High-precision real number. Immutable after construction.
#[derive(Clone)]
pub struct HpReal {
    mantissa: BigInt,
    exponent: i64,
    prec: u32,
}

impl HpReal {
    pub fn zero(prec: u32) -> Self {
        assert!(prec >= 2, "precision must be at least 2 bits");
        HpReal { mantissa: BigInt::zero(), exponent: 0, prec }
    }

    pub fn one(prec: u32) -> Self {
        Self::from_bigint(BigInt::one(), prec)
    }

    pub fn from_i64(v: i64, prec: u32) -> Self {
        Self::from_bigint(BigInt::from(v), prec)
    }

    pub fn from_bigint(v: BigInt, prec: u32) -> Self {
        Self::from_mantissa_exp(v, 0, prec, Rounding::Nearest)
    }

    /// Builds `m * 2^e` rounded to `prec` bits.
    pub fn from_mantissa_exp(m: BigInt, e: i64, prec: u32, mode: Rounding) -> Self {
        assert!(prec >= 2, "precision must be at least 2 bits");
        let mut r = HpReal { mantissa: m, exponent: e, prec };
        r.round_in_place(mode, Sign::NoSign);
        r
    }

    /// Rounds a rational to `prec` bits.
    pub fn from_rational(q: &BigRational, prec: u32, mode: Rounding) -> Self {
        assert!(prec >= 2, "precision must be at least 2 bits");
        if q.numer().is_zero() {
            return Self::zero(prec);
        }
        let nbits = bit_len(q.numer()) as i64;
        let dbits = bit_len(q.denom()) as i64;
        // Scale so the truncated quotient carries prec + 3 significant bits.
        let shift = prec as i64 + 3 - (nbits - dbits);
        let num = if shift >= 0 { q.numer() << shift as u64 } else { q.numer().clone() };
        let den = if shift >= 0 { q.denom().clone() } else { q.denom() << (-shift) as u64 };
        let (quot, rem) = num.div_rem(&den);
        let sticky = if rem.is_zero() {
            Sign::NoSign
        } else {
            // Truncation toward zero discards a tail with the sign of the value.
            q.numer().sign()
        };
        let mut r = HpReal { mantissa: quot, exponent: -shift, prec };
        r.round_in_place(mode, sticky);
        r
    }

    pub fn from_f64(v: f64, prec: u32) -> Self {
        assert!(v.is_finite(), "cannot build HpReal from NaN or infinity");
        if v == 0.0 {
            return Self::zero(prec);
        }
        let bits = v.to_bits();
        let sign = if bits >> 63 == 1 { -1i64 } else { 1 };
        let biased = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (mant, exp) = if biased == 0 {
            (frac, -1074i64) // subnormal
        } else {
            (frac | (1u64 << 52), biased - 1075)
        };
        let m = BigInt::from(mant) * sign;
        Self::from_mantissa_exp(m, exp, prec, Rounding::Nearest)
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mantissa.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.mantissa.is_positive()
    }

    pub fn signum(&self) -> i32 {
        match self.mantissa.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    /// The exact value as a rational. Every `HpReal` is a dyadic rational.
    pub fn to_rational(&self) -> BigRational {
        if self.exponent >= 0 {
            BigRational::from_integer(&self.mantissa << self.exponent as u64)
        } else {
            BigRational::new(self.mantissa.clone(), BigInt::one() << (-self.exponent) as u64)
        }
    }

    /// Nearest `f64`. Saturates to infinity far outside range.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let rounded = self.with_precision(53.min(self.prec), Rounding::Nearest);
        let top = rounded.mantissa.to_i64().expect("53 bits fit in i64") as f64;
        let e = rounded.exponent;
        if e > 1100 {
            if self.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY }
        } else if e < -1150 {
            0.0
        } else {
            top * 2f64.powi(e as i32)
        }
    }

    /// `floor(log2 |x|)`: the exponent of the leading bit. Panics on zero.
    pub fn exponent_of_msb(&self) -> i64 {
        assert!(!self.is_zero(), "zero has no leading bit");
        self.exponent + bit_len(&self.mantissa) as i64 - 1
    }

    /// One unit in the last place of `self` as a positive value.
    pub fn ulp(&self) -> HpReal {
        let e = if self.is_zero() { -4 * self.prec as i64 } else { self.exponent };
        HpReal::from_mantissa_exp(BigInt::one(), e, self.prec, Rounding::Nearest)
    }

    /// Re-rounds to a new precision.
    pub fn with_precision(&self, prec: u32, mode: Rounding) -> HpReal {
        let mut r = HpReal { mantissa: self.mantissa.clone(), exponent: self.exponent, prec };
        r.round_in_place(mode, Sign::NoSign);
        r
    }

    pub fn neg(&self) -> HpReal {
        HpReal { mantissa: -&self.mantissa, exponent: self.exponent, prec: self.prec }
    }

    pub fn abs(&self) -> HpReal {
        HpReal { mantissa: self.mantissa.abs(), exponent: self.exponent, prec: self.prec }
    }

    pub fn add(&self, rhs: &HpReal, mode: Rounding) -> HpReal {
        self.add_impl(rhs, false, mode)
    }

    pub fn sub(&self, rhs: &HpReal, mode: Rounding) -> HpReal {
        self.add_impl(rhs, true, mode)
    }

    fn add_impl(&self, rhs: &HpReal, negate_rhs: bool, mode: Rounding) -> HpReal {
        let prec = self.prec.max(rhs.prec);
        let rhs_m = if negate_rhs { -&rhs.mantissa } else { rhs.mantissa.clone() };
        if rhs_m.is_zero() {
            return self.with_precision(prec, mode);
        }
        if self.is_zero() {
            return HpReal::from_mantissa_exp(rhs_m, rhs.exponent, prec, mode);
        }
        let msb_a = self.exponent_of_msb();
        let msb_b = rhs.exponent + bit_len(&rhs_m) as i64 - 1;
        let gap = prec as i64 + 4;
        if msb_a - msb_b > gap {
            // rhs sits strictly below half an ulp of the result: sticky only.
            let mut r = HpReal { mantissa: self.mantissa.clone(), exponent: self.exponent, prec };
            r.round_in_place(mode, rhs_m.sign());
            return r;
        }
        if msb_b - msb_a > gap {
            let mut r = HpReal { mantissa: rhs_m, exponent: rhs.exponent, prec };
            r.round_in_place(mode, self.mantissa.sign());
            return r;
        }
        // Exact aligned sum.
        let e = self.exponent.min(rhs.exponent);
        let ma = &self.mantissa << (self.exponent - e) as u64;
        let mb = rhs_m << (rhs.exponent - e) as u64;
        HpReal::from_mantissa_exp(ma + mb, e, prec, mode)
    }

    pub fn mul(&self, rhs: &HpReal, mode: Rounding) -> HpReal {
        let prec = self.prec.max(rhs.prec);
        if self.is_zero() || rhs.is_zero() {
            return HpReal::zero(prec);
        }
        HpReal::from_mantissa_exp(
            &self.mantissa * &rhs.mantissa,
            self.exponent + rhs.exponent,
            prec,
            mode,
        )
    }

    pub fn div(&self, rhs: &HpReal, mode: Rounding) -> HpReal {
        assert!(!rhs.is_zero(), "division by zero");
        let prec = self.prec.max(rhs.prec);
        if self.is_zero() {
            return HpReal::zero(prec);
        }
        let nbits = bit_len(&self.mantissa) as i64;
        let dbits = bit_len(&rhs.mantissa) as i64;
        let shift = (prec as i64 + 3 - (nbits - dbits)).max(0);
        let num = &self.mantissa << shift as u64;
        let (quot, rem) = num.div_rem(&rhs.mantissa);
        let sticky = if rem.is_zero() {
            Sign::NoSign
        } else if self.mantissa.sign() == rhs.mantissa.sign() {
            Sign::Plus
        } else {
            Sign::Minus
        };
        let mut r = HpReal { mantissa: quot, exponent: self.exponent - rhs.exponent - shift, prec };
        r.round_in_place(mode, sticky);
        r
    }

    pub fn mul_i64(&self, k: i64, mode: Rounding) -> HpReal {
        HpReal::from_mantissa_exp(&self.mantissa * k, self.exponent, self.prec, mode)
    }

    pub fn mul_bigint(&self, k: &BigInt, mode: Rounding) -> HpReal {
        HpReal::from_mantissa_exp(&self.mantissa * k, self.exponent, self.prec, mode)
    }

    pub fn div_u64(&self, k: u64, mode: Rounding) -> HpReal {
        self.div(&HpReal::from_bigint(BigInt::from(k), self.prec), mode)
    }

    /// Exact scaling by a power of two.
    pub fn scale_pow2(&self, k: i64) -> HpReal {
        if self.is_zero() {
            return self.clone();
        }
        HpReal { mantissa: self.mantissa.clone(), exponent: self.exponent + k, prec: self.prec }
    }

    /// Square root, rounded in the requested mode.
    pub fn sqrt(&self, mode: Rounding) -> HpReal {
        assert!(!self.is_negative(), "sqrt of negative value");
        if self.is_zero() {
            return self.clone();
        }
        let prec = self.prec;
        let nbits = bit_len(&self.mantissa) as i64;
        let want = 2 * (prec as i64 + 3);
        let mut shift = (want - nbits).max(0);
        if (self.exponent - shift) % 2 != 0 {
            shift += 1;
        }
        let scaled: BigUint = (&self.mantissa << shift as u64).to_biguint().unwrap();
        let root = scaled.sqrt();
        let exact = &root * &root == scaled;
        let mut r = HpReal {
            mantissa: BigInt::from(root),
            exponent: (self.exponent - shift) / 2,
            prec,
        };
        r.round_in_place(mode, if exact { Sign::NoSign } else { Sign::Plus });
        r
    }

    /// Integer power by repeated squaring at the value's own precision.
    pub fn pow_u64(&self, mut k: u64, mode: Rounding) -> HpReal {
        let mut base = self.clone();
        let mut acc = HpReal::one(self.prec);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base, mode);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base, mode);
            }
        }
        acc
    }

    /// Exact comparison of the represented values.
    pub fn cmp_value(&self, rhs: &HpReal) -> Ordering {
        match (self.signum(), rhs.signum()) {
            (a, b) if a != b => a.cmp(&b),
            (0, 0) => Ordering::Equal,
            _ => {
                let e = self.exponent.min(rhs.exponent);
                let ma = &self.mantissa << (self.exponent - e) as u64;
                let mb = &rhs.mantissa << (rhs.exponent - e) as u64;
                ma.cmp(&mb)
            }
        }
    }

    pub fn min_value(self, rhs: HpReal) -> HpReal {
        if self.cmp_value(&rhs) == Ordering::Greater { rhs } else { self }
    }

    pub fn max_value(self, rhs: HpReal) -> HpReal {
        if self.cmp_value(&rhs) == Ordering::Less { rhs } else { self }
    }

    /// Largest integer `<= self`, exact.
    pub fn floor_bigint(&self) -> BigInt {
        if self.is_zero() {
            return BigInt::zero();
        }
        if self.exponent >= 0 {
            return &self.mantissa << self.exponent as u64;
        }
        let shift = (-self.exponent) as u64;
        let q_mag: BigUint = self.mantissa.magnitude() >> shift;
        if self.mantissa.is_negative() {
            let exact = (&q_mag << shift) == *self.mantissa.magnitude();
            let q = -BigInt::from(q_mag);
            if exact { q } else { q - 1 }
        } else {
            BigInt::from(q_mag)
        }
    }

    pub fn ceil_bigint(&self) -> BigInt {
        -self.neg().floor_bigint()
    }

    /// Nearest integer, ties away from zero.
    pub fn round_bigint(&self) -> BigInt {
        let half = HpReal { mantissa: BigInt::one(), exponent: -1, prec: self.prec };
        if self.is_negative() {
            self.sub(&half, Rounding::Floor).ceil_bigint()
        } else {
            self.add(&half, Rounding::Ceil).floor_bigint()
        }
    }

    /// Normalizes the mantissa to `prec` bits, rounding per `mode`.
    ///
    /// `sticky` is the sign of an infinitesimal tail strictly below every
    /// stored bit: the true value is `mantissa * 2^exponent + sticky * eps`.
    fn round_in_place(&mut self, mode: Rounding, sticky: Sign) {
        if self.mantissa.is_zero() {
            self.exponent = 0;
            // Directed rounding of a bare infinitesimal: return a conservative
            // signed quantum so enclosures stay valid.
            match (mode, sticky) {
                (Rounding::Floor, Sign::Minus) => {
                    *self = HpReal::from_mantissa_exp(
                        -BigInt::one(),
                        -4 * self.prec as i64,
                        self.prec,
                        Rounding::Nearest,
                    );
                }
                (Rounding::Ceil, Sign::Plus) => {
                    *self = HpReal::from_mantissa_exp(
                        BigInt::one(),
                        -4 * self.prec as i64,
                        self.prec,
                        Rounding::Nearest,
                    );
                }
                _ => {}
            }
            return;
        }
        let negative = self.mantissa.is_negative();
        let mut mag = self.mantissa.magnitude().clone();
        let bits = mag.bits() as i64;
        let drop = bits - self.prec as i64;

        if drop <= 0 {
            if drop < 0 {
                mag <<= (-drop) as u64;
                self.exponent += drop;
            }
            if sticky != Sign::NoSign {
                self.apply_sticky_at_exact_width(&mut mag, negative, mode, sticky);
            }
            self.store(mag, negative);
            return;
        }

        let tail: BigUint = &mag & ((BigUint::one() << drop as u64) - 1u32);
        mag >>= drop as u64;
        self.exponent += drop;

        let bump = match mode {
            Rounding::Nearest => {
                let half = BigUint::one() << (drop - 1) as u64;
                match tail.cmp(&half) {
                    Ordering::Greater => true,
                    Ordering::Less => false,
                    Ordering::Equal => {
                        let axis_up = sticky == Sign::Plus;
                        let axis_down = sticky == Sign::Minus;
                        if (!negative && axis_up) || (negative && axis_down) {
                            true // true value is past the tie, away from zero
                        } else if (!negative && axis_down) || (negative && axis_up) {
                            false
                        } else {
                            mag.is_odd()
                        }
                    }
                }
            }
            Rounding::Floor => {
                if negative {
                    // Truncating the magnitude moved toward zero, i.e. up.
                    !tail.is_zero() || sticky == Sign::Minus
                } else {
                    // Already rounded down unless only a negative sticky remains.
                    if tail.is_zero() && sticky == Sign::Minus {
                        self.decrement_magnitude(&mut mag);
                    }
                    false
                }
            }
            Rounding::Ceil => {
                if !negative {
                    !tail.is_zero() || sticky == Sign::Plus
                } else {
                    if tail.is_zero() && sticky == Sign::Plus {
                        self.decrement_magnitude(&mut mag);
                    }
                    false
                }
            }
        };
        if bump {
            mag += 1u32;
        }
        self.store(mag, negative);
    }

    /// Directed adjustment when the mantissa already has exact width and only
    /// an infinitesimal sticky tail remains.
    fn apply_sticky_at_exact_width(
        &mut self,
        mag: &mut BigUint,
        negative: bool,
        mode: Rounding,
        sticky: Sign,
    ) {
        match mode {
            Rounding::Nearest => {}
            Rounding::Floor => {
                if sticky == Sign::Minus {
                    if negative {
                        *mag += 1u32;
                    } else {
                        self.decrement_magnitude(mag);
                    }
                }
            }
            Rounding::Ceil => {
                if sticky == Sign::Plus {
                    if negative {
                        self.decrement_magnitude(mag);
                    } else {
                        *mag += 1u32;
                    }
                }
            }
        }
    }

    /// Subtracts one ulp from the magnitude, re-widening if a bit is lost.
    fn decrement_magnitude(&mut self, mag: &mut BigUint) {
        *mag -= 1u32;
        if mag.bits() < self.prec as u64 && !mag.is_zero() {
            *mag <<= 1;
            self.exponent -= 1;
        }
    }

    fn store(&mut self, mag: BigUint, negative: bool) {
        if mag.is_zero() {
            self.mantissa = BigInt::zero();
            self.exponent = 0;
            return;
        }
        let bits = mag.bits() as i64;
        let excess = bits - self.prec as i64;
        let mag = if excess > 0 {
            // Carry into a fresh bit: the shifted-out bits are zero.
            self.exponent += excess;
            mag >> excess as u64
        } else if excess < 0 {
            self.exponent += excess;
            mag << (-excess) as u64
        } else {
            mag
        };
        self.mantissa = if negative { -BigInt::from(mag) } else { BigInt::from(mag) };
    }
}

pub(crate) fn bit_len(v: &BigInt) -> u64 {
    v.magnitude().bits()
}

impl PartialEq for HpReal {
    fn eq(&self, other: &Self) -> bool {
        self.cmp_value(other) == Ordering::Equal
    }
}

impl Eq for HpReal {}

impl PartialOrd for HpReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for HpReal {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_value(other)
    }
}

impl fmt::Debug for HpReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::numerics::format::to_decimal_string(self, 20))
    }
}

impl fmt::Display for HpReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::numerics::format::to_decimal_string(self, 20))
    }
}
