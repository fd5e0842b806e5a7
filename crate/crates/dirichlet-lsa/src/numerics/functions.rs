//! Transcendental functions over [`HpReal`]: logarithms, exponentials,
//! trigonometry and the constants they need.
//!
//! Everything is computed at an internal working precision with guard bits
//! and rounded back, giving results within 2 ulp of the target precision
//! (absolute rather than relative accuracy near the zeros of sin and cos,
//! which is what the callers in this crate require).

use super::hpreal::{HpReal, Rounding};
use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

const GUARD: u32 = 48;

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum Constant {
    Ln2,
    Pi,
}

fn cache() -> &'static Mutex<HashMap<Constant, HpReal>> {
    static CACHE: OnceLock<Mutex<HashMap<Constant, HpReal>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn cached_constant(which: Constant, prec: u32, compute: fn(u32) -> HpReal) -> HpReal {
    let mut map = cache().lock().unwrap();
    if let Some(v) = map.get(&which) {
        if v.precision() >= prec {
            return v.with_precision(prec, Rounding::Nearest);
        }
    }
    // Compute with headroom so nearby precisions keep hitting the cache.
    let v = compute(prec + 64);
    let out = v.with_precision(prec, Rounding::Nearest);
    map.insert(which, v);
    out
}

/// Natural logarithm of 2 at `prec` bits, within 1 ulp.
pub fn ln2(prec: u32) -> HpReal {
    cached_constant(Constant::Ln2, prec, ln2_raw)
}

/// The constant pi at `prec` bits, within 1 ulp.
pub fn pi(prec: u32) -> HpReal {
    cached_constant(Constant::Pi, prec, pi_raw)
}

/// ln 2 = 2 atanh(1/3) summed in fixed point.
fn ln2_raw(prec: u32) -> HpReal {
    let scale = prec + 24;
    let one_scaled = BigUint::one() << scale;
    let mut power = BigUint::from(3u32);
    let mut k = 0u64;
    let mut sum = BigUint::zero();
    loop {
        let term = &one_scaled / (&power * BigUint::from(2 * k + 1));
        if term.is_zero() {
            break;
        }
        sum += term;
        power *= 9u32;
        k += 1;
    }
    HpReal::from_mantissa_exp(BigInt::from(sum << 1), -(scale as i64), prec, Rounding::Nearest)
}

/// Machin's formula: pi = 16 atan(1/5) - 4 atan(1/239).
fn pi_raw(prec: u32) -> HpReal {
    let scale = prec + 24;
    let a5 = atan_inv_fixed(5u32.into(), scale);
    let a239 = atan_inv_fixed(239u32.into(), scale);
    let m = a5 * 16 - a239 * 4;
    HpReal::from_mantissa_exp(m, -(scale as i64), prec, Rounding::Nearest)
}

/// atan(1/x) * 2^scale as an integer, alternating Gregory series.
fn atan_inv_fixed(x: BigUint, scale: u32) -> BigInt {
    let one_scaled = BigUint::one() << scale;
    let xx = &x * &x;
    let mut power = x.clone();
    let mut k = 0u64;
    let mut sum = BigInt::zero();
    loop {
        let term = &one_scaled / (&power * BigUint::from(2 * k + 1));
        if term.is_zero() {
            break;
        }
        if k.is_multiple_of(2) {
            sum += BigInt::from(term);
        } else {
            sum -= BigInt::from(term);
        }
        power *= &xx;
        k += 1;
    }
    sum
}

/// Natural logarithm. Requires `x > 0`.
pub fn ln(x: &HpReal, prec: u32) -> HpReal {
    assert!(x.is_positive(), "ln requires a positive argument");
    let wp = prec + GUARD;
    let xw = x.with_precision(wp, Rounding::Nearest);
    let three_quarters = HpReal::from_mantissa_exp(3.into(), -2, wp, Rounding::Nearest);
    let three_halves = HpReal::from_mantissa_exp(3.into(), -1, wp, Rounding::Nearest);
    if xw > three_quarters && xw < three_halves {
        // Close to 1: the atanh series on x itself keeps relative accuracy.
        return ln_series(&xw, wp).with_precision(prec, Rounding::Nearest);
    }
    // Normalize to t in (2/3, 4/3] so |ln t| is small and k ln 2 dominates.
    let msb = x.exponent_of_msb();
    let mut t = xw.scale_pow2(-msb);
    let mut k = msb;
    let four_thirds = HpReal::from_i64(4, wp).div_u64(3, Rounding::Nearest);
    if t > four_thirds {
        t = t.scale_pow2(-1);
        k += 1;
    }
    let base = ln_series(&t, wp);
    let scaled = ln2(wp).mul_bigint(&BigInt::from(k), Rounding::Nearest);
    base.add(&scaled, Rounding::Nearest).with_precision(prec, Rounding::Nearest)
}

/// ln t = 2 atanh((t-1)/(t+1)) for t near 1.
fn ln_series(t: &HpReal, wp: u32) -> HpReal {
    let one = HpReal::one(wp);
    let num = t.sub(&one, Rounding::Nearest);
    if num.is_zero() {
        return HpReal::zero(wp);
    }
    let den = t.add(&one, Rounding::Nearest);
    let s = num.div(&den, Rounding::Nearest);
    let s2 = s.mul(&s, Rounding::Nearest);
    let limit = -(wp as i64) - 8;
    let mut term = s.clone();
    let mut sum = s.clone();
    let mut k = 1u64;
    loop {
        term = term.mul(&s2, Rounding::Nearest);
        if term.is_zero() || term.exponent_of_msb() < limit {
            break;
        }
        sum = sum.add(&term.div_u64(2 * k + 1, Rounding::Nearest), Rounding::Nearest);
        k += 1;
    }
    sum.scale_pow2(1)
}

/// Exponential function.
pub fn exp(x: &HpReal, prec: u32) -> HpReal {
    let wp = prec + GUARD;
    if x.is_zero() {
        return HpReal::one(prec);
    }
    // Range check: the result exponent must fit comfortably in i64.
    assert!(
        x.exponent_of_msb() < 46,
        "exp argument too large: would overflow the exponent range"
    );
    let n = x.div(&ln2(wp), Rounding::Nearest).round_bigint();
    let nbits = crate::numerics::hpreal::bit_len(&n) as u32;
    let wp2 = wp + nbits + 8;
    let r = x
        .with_precision(wp2, Rounding::Nearest)
        .sub(&ln2(wp2).mul_bigint(&n, Rounding::Nearest), Rounding::Nearest)
        .with_precision(wp, Rounding::Nearest);
    // |r| <= ln2/2 + eps; Taylor converges fast.
    let limit = -(wp as i64) - 8;
    let mut term = HpReal::one(wp);
    let mut sum = HpReal::one(wp);
    let mut k = 1u64;
    loop {
        term = term.mul(&r, Rounding::Nearest).div_u64(k, Rounding::Nearest);
        if term.is_zero() || term.exponent_of_msb() < limit {
            break;
        }
        sum = sum.add(&term, Rounding::Nearest);
        k += 1;
    }
    let shift = n.to_i64().expect("exp exponent fits i64");
    sum.scale_pow2(shift).with_precision(prec, Rounding::Nearest)
}

/// Simultaneous sine and cosine.
///
/// Absolute error is within 2^(4-prec) * max(1, |x|/2^prec)-ish; near the
/// zeros of either function the error is absolute, not relative.
pub fn sin_cos(x: &HpReal, prec: u32) -> (HpReal, HpReal) {
    let wp = prec + GUARD;
    if x.is_zero() {
        return (HpReal::zero(prec), HpReal::one(prec));
    }
    let half_pi = pi(wp).scale_pow2(-1);
    let n = x.div(&half_pi, Rounding::Nearest).round_bigint();
    let nbits = crate::numerics::hpreal::bit_len(&n) as u32;
    let wp2 = wp + nbits + 8;
    let t = x
        .with_precision(wp2, Rounding::Nearest)
        .sub(
            &pi(wp2).scale_pow2(-1).mul_bigint(&n, Rounding::Nearest),
            Rounding::Nearest,
        )
        .with_precision(wp, Rounding::Nearest);
    let (st, ct) = sin_cos_taylor(&t, wp);
    let quadrant = ((&n % 4u32) + 4u32) % 4u32;
    let q = quadrant.to_u8().unwrap();
    let (s, c) = match q {
        0 => (st, ct),
        1 => (ct, st.neg()),
        2 => (st.neg(), ct.neg()),
        _ => (ct.neg(), st),
    };
    (s.with_precision(prec, Rounding::Nearest), c.with_precision(prec, Rounding::Nearest))
}

fn sin_cos_taylor(t: &HpReal, wp: u32) -> (HpReal, HpReal) {
    let limit = -(wp as i64) - 8;
    let t2 = t.mul(t, Rounding::Nearest).neg();
    // sin
    let mut term = t.clone();
    let mut sin = t.clone();
    let mut k = 1u64;
    while !term.is_zero() && term.exponent_of_msb() >= limit {
        term = term
            .mul(&t2, Rounding::Nearest)
            .div_u64((2 * k) * (2 * k + 1), Rounding::Nearest);
        sin = sin.add(&term, Rounding::Nearest);
        k += 1;
    }
    // cos
    let mut term = HpReal::one(wp);
    let mut cos = HpReal::one(wp);
    let mut k = 1u64;
    while !term.is_zero() && term.exponent_of_msb() >= limit {
        term = term
            .mul(&t2, Rounding::Nearest)
            .div_u64((2 * k - 1) * (2 * k), Rounding::Nearest);
        cos = cos.add(&term, Rounding::Nearest);
        k += 1;
    }
    (sin, cos)
}

/// Arc tangent of `t >= 0`.
fn atan_nonneg(t: &HpReal, wp: u32) -> HpReal {
    let one = HpReal::one(wp);
    if t > &one {
        let inv = one.div(t, Rounding::Nearest);
        return pi(wp).scale_pow2(-1).sub(&atan_nonneg(&inv, wp), Rounding::Nearest);
    }
    // Halve the angle until the series converges quickly.
    let eighth = HpReal::from_mantissa_exp(BigInt::one(), -3, wp, Rounding::Nearest);
    let mut t = t.clone();
    let mut doublings = 0;
    while t > eighth {
        let t2 = t.mul(&t, Rounding::Nearest);
        let root = t2.add(&HpReal::one(wp), Rounding::Nearest).sqrt(Rounding::Nearest);
        t = t.div(&root.add(&HpReal::one(wp), Rounding::Nearest), Rounding::Nearest);
        doublings += 1;
    }
    if t.is_zero() {
        return HpReal::zero(wp);
    }
    let limit = -(wp as i64) - 8;
    let t2 = t.mul(&t, Rounding::Nearest).neg();
    let mut power = t.clone();
    let mut sum = t.clone();
    let mut k = 1u64;
    loop {
        power = power.mul(&t2, Rounding::Nearest);
        if power.is_zero() || power.exponent_of_msb() < limit {
            break;
        }
        sum = sum.add(&power.div_u64(2 * k + 1, Rounding::Nearest), Rounding::Nearest);
        k += 1;
    }
    sum.scale_pow2(doublings)
}

/// Angle of the point `(x, y)` in `(-pi, pi]`.
pub fn atan2(y: &HpReal, x: &HpReal, prec: u32) -> HpReal {
    let wp = prec + GUARD;
    match (x.signum(), y.signum()) {
        (0, 0) => panic!("atan2(0, 0) is undefined"),
        (0, s) => {
            let h = pi(prec).scale_pow2(-1);
            if s > 0 { h } else { h.neg() }
        }
        (sx, 0) => {
            if sx > 0 { HpReal::zero(prec) } else { pi(prec) }
        }
        (sx, sy) => {
            let ratio = y.abs().div(&x.abs(), Rounding::Nearest).with_precision(wp, Rounding::Nearest);
            let a = atan_nonneg(&ratio, wp);
            let angle = if sx > 0 { a } else { pi(wp).sub(&a, Rounding::Nearest) };
            let signed = if sy > 0 { angle } else { angle.neg() };
            signed.with_precision(prec, Rounding::Nearest)
        }
    }
}

/// `x^y = exp(y ln x)` for `x > 0`.
pub fn pow(x: &HpReal, y: &HpReal, prec: u32) -> HpReal {
    assert!(x.is_positive(), "pow requires a positive base");
    if y.is_zero() {
        return HpReal::one(prec);
    }
    // Guard for the magnitude of y ln x: relative error of the product turns
    // into absolute error of the exponent.
    let rough = (y.to_f64().abs().max(1.0) * x.to_f64().abs().max(2.0).ln().abs().max(1.0)).log2();
    let extra = if rough.is_finite() && rough > 0.0 { rough.ceil() as u32 + 4 } else { 4 };
    let wp = prec + GUARD + extra;
    let product = ln(&x.with_precision(wp, Rounding::Nearest), wp).mul(y, Rounding::Nearest);
    exp(&product, wp).with_precision(prec, Rounding::Nearest)
}
