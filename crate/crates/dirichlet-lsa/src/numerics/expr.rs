//! Symbolic real-number expressions: exact rationals, log quotients,
//! quadratic surds and opaque decimal literals.
//!
//! The textual grammar, used by polynomial specification files:
//!
//! ```text
//! p/q                  rational
//! log(c)/log(b)        log quotient, c and b positive rationals, b != 1
//! (p+q*sqrt(d))/r      quadratic surd, d positive non-square, r != 0
//! dec:<literal>[:irrational]   decimal literal with declared rationality
//! ```

use super::format;
use super::hpreal::{HpReal, Rounding};
use super::interval::Interval;
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ExprError {
    #[error("invalid expression: {0}")]
    Invalid(String),
    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },
}

/// A real number given in one of the exact symbolic forms, or as a decimal
/// literal with a declared rationality flag.
#[derive(Clone, Debug, PartialEq)]
pub enum RealExpr {
    Rational(BigRational),
    /// `log(c)/log(b)`.
    LogQuotient { c: BigRational, b: BigRational },
    /// `(p + q*sqrt(d))/r`.
    Quadratic { p: BigInt, q: BigInt, d: BigInt, r: BigInt },
    /// Opaque decimal; `irrational` records the caller's declaration.
    Decimal { literal: String, irrational: bool },
}

impl RealExpr {
    pub fn integer(n: i64) -> Self {
        RealExpr::Rational(BigRational::from_integer(n.into()))
    }

    pub fn rational(n: i64, d: i64) -> Self {
        RealExpr::Rational(BigRational::new(n.into(), d.into()))
    }

    pub fn log_quotient(c: (i64, i64), b: (i64, i64)) -> Self {
        RealExpr::LogQuotient {
            c: BigRational::new(c.0.into(), c.1.into()),
            b: BigRational::new(b.0.into(), b.1.into()),
        }
    }

    /// The golden ratio `(1 + sqrt(5))/2`.
    pub fn golden_ratio() -> Self {
        RealExpr::Quadratic { p: 1.into(), q: 1.into(), d: 5.into(), r: 2.into() }
    }

    pub fn validate(&self) -> Result<(), ExprError> {
        match self {
            RealExpr::Rational(_) => Ok(()),
            RealExpr::LogQuotient { c, b } => {
                if !c.is_positive() {
                    return Err(ExprError::Invalid(format!("log argument {c} must be positive")));
                }
                if !b.is_positive() {
                    return Err(ExprError::Invalid(format!("log base {b} must be positive")));
                }
                if b.is_one() {
                    return Err(ExprError::Invalid("log base must not be 1".into()));
                }
                Ok(())
            }
            RealExpr::Quadratic { q, d, r, .. } => {
                if r.is_zero() {
                    return Err(ExprError::Invalid("quadratic denominator r must be nonzero".into()));
                }
                if !d.is_positive() {
                    return Err(ExprError::Invalid(format!("radicand {d} must be positive")));
                }
                if !q.is_zero() {
                    let root = d.sqrt();
                    if &root * &root == *d {
                        return Err(ExprError::Invalid(format!("radicand {d} is a perfect square")));
                    }
                }
                Ok(())
            }
            RealExpr::Decimal { literal, .. } => {
                format::parse_decimal_rational(literal)
                    .map(|_| ())
                    .map_err(ExprError::Invalid)
            }
        }
    }

    /// Certified enclosure of the value. The guard is escalated internally
    /// until the enclosure is well defined (log denominators sign-definite).
    pub fn eval_interval(&self, prec: u32) -> Result<Interval, ExprError> {
        self.validate()?;
        let mut guard = 16u32;
        loop {
            match self.eval_interval_at(prec + guard) {
                Some(iv) => return Ok(iv),
                None => {
                    guard = guard.checked_mul(2).ok_or_else(|| {
                        ExprError::Invalid("precision escalation overflow".into())
                    })?;
                }
            }
        }
    }

    fn eval_interval_at(&self, wp: u32) -> Option<Interval> {
        match self {
            RealExpr::Rational(q) => Some(Interval::from_rational(q, wp)),
            RealExpr::Decimal { literal, .. } => {
                let q = format::parse_decimal_rational(literal).ok()?;
                Some(Interval::from_rational(&q, wp))
            }
            RealExpr::Quadratic { p, q, d, r } => {
                let root = Interval::from_rational(&BigRational::from_integer(d.clone()), wp).sqrt();
                let scaled = root.mul(&Interval::from_rational(&BigRational::from_integer(q.clone()), wp));
                let shifted = scaled.add(&Interval::from_rational(&BigRational::from_integer(p.clone()), wp));
                Some(shifted.div(&Interval::from_rational(&BigRational::from_integer(r.clone()), wp)))
            }
            RealExpr::LogQuotient { c, b } => {
                let num = Interval::from_rational(c, wp).ln(wp);
                let den = Interval::from_rational(b, wp).ln(wp);
                if den.contains_zero() {
                    return None; // b very close to 1; caller escalates
                }
                Some(num.div(&den))
            }
        }
    }

    /// Evaluates to `prec` bits with error at most 2 units in the last place.
    pub fn eval(&self, prec: u32) -> Result<HpReal, ExprError> {
        self.validate()?;
        // Exact shortcuts where the value is a visible rational.
        match self {
            RealExpr::Rational(q) => {
                return Ok(HpReal::from_rational(q, prec, Rounding::Nearest));
            }
            RealExpr::Decimal { literal, .. } => {
                let q = format::parse_decimal_rational(literal).map_err(ExprError::Invalid)?;
                return Ok(HpReal::from_rational(&q, prec, Rounding::Nearest));
            }
            RealExpr::LogQuotient { c, .. } if c.is_one() => {
                return Ok(HpReal::zero(prec));
            }
            RealExpr::Quadratic { p, q, d: _, r } if q.is_zero() => {
                let v = BigRational::new(p.clone(), r.clone());
                return Ok(HpReal::from_rational(&v, prec, Rounding::Nearest));
            }
            _ => {}
        }
        let mut guard = 16u32;
        loop {
            let iv = match self.eval_interval_at(prec + guard) {
                Some(iv) => iv,
                None => {
                    guard *= 2;
                    continue;
                }
            };
            let mid = iv.midpoint(prec);
            if !mid.is_zero() && iv.width() <= mid.ulp() {
                return Ok(mid);
            }
            guard = guard.checked_mul(2).ok_or_else(|| {
                ExprError::Invalid("precision escalation overflow".into())
            })?;
        }
    }

    /// Exact rationality decision. Decimal literals answer per their flag.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self {
            RealExpr::Rational(q) => Some(q.clone()),
            RealExpr::Decimal { literal, irrational } => {
                if *irrational {
                    None
                } else {
                    format::parse_decimal_rational(literal).ok()
                }
            }
            RealExpr::Quadratic { p, q, r, .. } => {
                if q.is_zero() {
                    Some(BigRational::new(p.clone(), r.clone()))
                } else {
                    None
                }
            }
            RealExpr::LogQuotient { c, b } => log_ratio_rational(c, b),
        }
    }

    pub fn is_rational(&self) -> bool {
        self.as_rational().is_some()
    }

    /// Parses the textual grammar.
    pub fn parse(input: &str) -> Result<RealExpr, ExprError> {
        let s = input.trim();
        let offset = input.len() - input.trim_start().len();
        let expr = if let Some(rest) = s.strip_prefix("dec:") {
            let (literal, irrational) = match rest.strip_suffix(":irrational") {
                Some(lit) => (lit.to_string(), true),
                None => (rest.to_string(), false),
            };
            format::parse_decimal_rational(&literal)
                .map_err(|m| ExprError::Parse { offset: offset + 4, message: m })?;
            RealExpr::Decimal { literal, irrational }
        } else if s.starts_with("log") {
            parse_log(s, offset)?
        } else if s.starts_with('(') {
            parse_quadratic(s, offset)?
        } else {
            RealExpr::Rational(parse_rational(s).map_err(|m| ExprError::Parse {
                offset,
                message: m,
            })?)
        };
        expr.validate()?;
        Ok(expr)
    }
}

fn parse_rational(s: &str) -> Result<BigRational, String> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| format!("bad integer `{}`", n.trim()))?;
        let d: BigInt = d.trim().parse().map_err(|_| format!("bad integer `{}`", d.trim()))?;
        if d.is_zero() {
            return Err("zero denominator".into());
        }
        Ok(BigRational::new(n, d))
    } else {
        let n: BigInt = s.parse().map_err(|_| format!("bad integer `{s}`"))?;
        Ok(BigRational::from_integer(n))
    }
}

fn parse_log(s: &str, offset: usize) -> Result<RealExpr, ExprError> {
    let err = |m: &str| ExprError::Parse { offset, message: m.to_string() };
    let inner = |part: &str| -> Result<BigRational, ExprError> {
        let part = part.trim();
        let body = part
            .strip_prefix("log(")
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(|| err("expected log(<rational>)"))?;
        parse_rational(body).map_err(|m| ExprError::Parse { offset, message: m })
    };
    let (top, bottom) = split_top_level_slash(s).ok_or_else(|| err("expected log(c)/log(b)"))?;
    Ok(RealExpr::LogQuotient { c: inner(top)?, b: inner(bottom)? })
}

fn parse_quadratic(s: &str, offset: usize) -> Result<RealExpr, ExprError> {
    let err = |m: &str| ExprError::Parse { offset, message: m.to_string() };
    let (head, tail) = split_top_level_slash(s).ok_or_else(|| err("expected (p+q*sqrt(d))/r"))?;
    let head = head.trim();
    let body = head
        .strip_prefix('(')
        .and_then(|t| t.strip_suffix(')'))
        .ok_or_else(|| err("expected parenthesized numerator"))?;
    let r: BigInt = tail
        .trim()
        .parse()
        .map_err(|_| err("bad denominator integer"))?;
    // Split p and the q*sqrt(d) term on the last +/- outside parentheses.
    let bytes = body.as_bytes();
    let mut split_at = None;
    let mut depth = 0i32;
    for (i, &ch) in bytes.iter().enumerate() {
        match ch {
            b'(' => depth += 1,
            b')' => depth -= 1,
            b'+' | b'-' if depth == 0 && i > 0 => split_at = Some(i),
            _ => {}
        }
    }
    let split_at = split_at.ok_or_else(|| err("expected p+q*sqrt(d)"))?;
    let p: BigInt = body[..split_at]
        .trim()
        .parse()
        .map_err(|_| err("bad integer p"))?;
    let sign = if bytes[split_at] == b'-' { -1 } else { 1 };
    let term = body[split_at + 1..].trim();
    let (q_str, sqrt_part) = term
        .split_once('*')
        .ok_or_else(|| err("expected q*sqrt(d)"))?;
    let q: BigInt = q_str.trim().parse().map_err(|_| err("bad integer q"))?;
    let d: BigInt = sqrt_part
        .trim()
        .strip_prefix("sqrt(")
        .and_then(|t| t.strip_suffix(')'))
        .ok_or_else(|| err("expected sqrt(d)"))?
        .trim()
        .parse()
        .map_err(|_| err("bad integer d"))?;
    Ok(RealExpr::Quadratic { p, q: q * sign, d, r })
}

/// Splits on the `/` separating numerator and denominator, ignoring any
/// slashes inside parentheses.
fn split_top_level_slash(s: &str) -> Option<(&str, &str)> {
    let mut depth = 0i32;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            '/' if depth == 0 => return Some((&s[..i], &s[i + 1..])),
            _ => {}
        }
    }
    None
}

impl fmt::Display for RealExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RealExpr::Rational(q) => {
                if q.denom().is_one() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            RealExpr::LogQuotient { c, b } => write!(f, "log({c})/log({b})"),
            RealExpr::Quadratic { p, q, d, r } => {
                if q.is_negative() {
                    write!(f, "({p}-{}*sqrt({d}))/{r}", -q)
                } else {
                    write!(f, "({p}+{q}*sqrt({d}))/{r}")
                }
            }
            RealExpr::Decimal { literal, irrational } => {
                if *irrational {
                    write!(f, "dec:{literal}:irrational")
                } else {
                    write!(f, "dec:{literal}")
                }
            }
        }
    }
}

/// Decides whether `log(c)/log(b)` is rational and returns the exact value
/// when it is. Works through the prime factorizations: the quotient is
/// rational iff the exponent vectors of `c` and `b` are parallel.
fn log_ratio_rational(c: &BigRational, b: &BigRational) -> Option<BigRational> {
    if c.is_one() {
        return Some(BigRational::zero());
    }
    let ec = factor_rational(c);
    let eb = factor_rational(b);
    debug_assert!(!eb.is_empty(), "b == 1 is excluded by validation");
    if ec.keys().ne(eb.keys()) {
        return None;
    }
    let (p0, &e0) = ec.iter().next().unwrap();
    let ratio = BigRational::new(BigInt::from(e0), BigInt::from(eb[p0]));
    for (p, &e) in &ec {
        if BigRational::new(BigInt::from(e), BigInt::from(eb[p])) != ratio {
            return None;
        }
    }
    Some(ratio)
}

/// Prime exponent vector of a positive rational.
pub fn factor_rational(q: &BigRational) -> BTreeMap<BigUint, i64> {
    assert!(q.is_positive());
    let mut map = BTreeMap::new();
    for (prime, e) in factor_biguint(q.numer().magnitude().clone()) {
        *map.entry(prime).or_insert(0) += e as i64;
    }
    for (prime, e) in factor_biguint(q.denom().magnitude().clone()) {
        let entry = map.entry(prime).or_insert(0);
        *entry -= e as i64;
        if *entry == 0 {
            // denominators and numerators are coprime in lowest terms, but
            // keep the map clean anyway
        }
    }
    map.retain(|_, e| *e != 0);
    map
}

/// Full factorization: trial division, then Brent's rho with Miller-Rabin.
pub fn factor_biguint(mut n: BigUint) -> Vec<(BigUint, u64)> {
    let mut factors: BTreeMap<BigUint, u64> = BTreeMap::new();
    if n <= BigUint::one() {
        return Vec::new();
    }
    for p in [2u64, 3, 5] {
        let bp = BigUint::from(p);
        while (&n % &bp).is_zero() {
            *factors.entry(bp.clone()).or_insert(0) += 1;
            n /= &bp;
        }
    }
    let mut p = 7u64;
    let wheel = [4u64, 2, 4, 2, 4, 6, 2, 6];
    let mut wheel_idx = 0;
    while p < 1 << 20 && BigUint::from(p) * BigUint::from(p) <= n {
        let bp = BigUint::from(p);
        while (&n % &bp).is_zero() {
            *factors.entry(bp.clone()).or_insert(0) += 1;
            n /= &bp;
        }
        p += wheel[wheel_idx];
        wheel_idx = (wheel_idx + 1) % wheel.len();
    }
    if n > BigUint::one() {
        factor_large(n, &mut factors);
    }
    factors.into_iter().collect()
}

fn factor_large(n: BigUint, factors: &mut BTreeMap<BigUint, u64>) {
    if n.is_one() {
        return;
    }
    if is_probable_prime(&n) {
        *factors.entry(n).or_insert(0) += 1;
        return;
    }
    let d = pollard_rho(&n);
    factor_large(&n / &d, factors);
    factor_large(d, factors);
}

fn pollard_rho(n: &BigUint) -> BigUint {
    // n is odd, composite, and free of factors below 2^20 here.
    let one = BigUint::one();
    let mut c = BigUint::from(1u32);
    loop {
        let mut x = BigUint::from(2u32);
        let mut y = BigUint::from(2u32);
        let mut d = one.clone();
        while d.is_one() {
            x = (&x * &x + &c) % n;
            y = (&y * &y + &c) % n;
            y = (&y * &y + &c) % n;
            let diff = if x > y { &x - &y } else { &y - &x };
            if diff.is_zero() {
                break;
            }
            d = diff.gcd(n);
        }
        if !d.is_one() && &d != n {
            return d;
        }
        c += 1u32;
    }
}

fn is_probable_prime(n: &BigUint) -> bool {
    if *n < BigUint::from(2u32) {
        return false;
    }
    for p in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let bp = BigUint::from(p);
        if *n == bp {
            return true;
        }
        if (n % &bp).is_zero() {
            return false;
        }
    }
    let n_minus_1 = n - 1u32;
    let s = n_minus_1.trailing_zeros().unwrap();
    let d = &n_minus_1 >> s;
    'witness: for a in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = (&x * &x) % n;
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eval_rational_exact() {
        let e = RealExpr::rational(3, 2);
        assert_eq!(e.eval(64).unwrap().to_f64(), 1.5);
    }

    #[test]
    fn eval_log_of_base_is_one() {
        let e = RealExpr::log_quotient((2, 1), (2, 1));
        let v = e.eval(128).unwrap();
        assert_eq!(v, HpReal::one(128));
    }

    #[test]
    fn eval_log2_3_digits() {
        // Oracle: bisection on 2^x = 3 with exact integer-power comparisons
        // freezes the first 16 digits as 1.5849625007211562.
        let e = RealExpr::log_quotient((3, 1), (2, 1));
        let v = e.eval(128).unwrap();
        let expect = format::parse_decimal("1.5849625007211562", 128).unwrap();
        let err = v.sub(&expect, Rounding::Nearest).abs();
        assert!(err < HpReal::from_f64(1e-16, 64));
    }

    #[test]
    fn digit_extraction_oracle_for_log2_3() {
        // Independent enclosure of log2(3) using only integer squares and
        // shifts: binary digits of the exponent fall out of repeatedly
        // squaring a directed fixed-point bracket of the mantissa. Each
        // extracted bit is one bisection step of 2^x = 3.
        let frac_bits = 220u32;
        let two = BigUint::from(2u32) << frac_bits;
        // 3 = 2^1 * 1.5: integer part 1, mantissa bracket [1.5, 1.5].
        let mut xl = BigUint::from(3u32) << (frac_bits - 1);
        let mut xh = xl.clone();
        let mut bits_lo = BigUint::from(1u32); // accumulated binary fraction, floor
        let mut bits_hi = BigUint::from(1u32); // ceil
        let extracted = 80u32;
        for _ in 0..extracted {
            // Square with directed truncation: floor for the lower bound,
            // ceil for the upper bound.
            xl = (&xl * &xl) >> frac_bits;
            xh = ((&xh * &xh) >> frac_bits) + 1u32;
            bits_lo <<= 1;
            bits_hi <<= 1;
            if xl >= two {
                // Next binary digit is certainly 1.
                xl >>= 1;
                xh >>= 1;
                bits_lo += 1u32;
                bits_hi += 1u32;
            } else if xh < two {
                // Certainly 0.
            } else {
                // Ambiguous bracket; with these guard bits this cannot
                // happen for the first 80 digits.
                panic!("oracle bracket too wide");
            }
        }
        bits_hi += 1u32;
        // log2(3) is enclosed by [bits_lo, bits_hi] / 2^extracted.
        let lo = BigRational::new(bits_lo.into(), BigInt::from(1) << extracted);
        let hi = BigRational::new(bits_hi.into(), BigInt::from(1) << extracted);
        let frozen = format::parse_decimal_rational("1.5849625007211562").unwrap();
        // The frozen literal is within 1e-16 of the enclosure.
        let tol = BigRational::new(1.into(), BigInt::from(10).pow(16));
        assert!(&frozen - &tol < lo && hi < &frozen + &tol);
        // And eval() lands inside the oracle enclosure.
        let v = RealExpr::log_quotient((3, 1), (2, 1)).eval(128).unwrap().to_rational();
        assert!(lo <= v && v <= hi);
    }

    #[test]
    fn rationality_decisions() {
        assert_eq!(
            RealExpr::log_quotient((4, 1), (2, 1)).as_rational(),
            Some(BigRational::from_integer(2.into()))
        );
        assert_eq!(RealExpr::log_quotient((3, 1), (2, 1)).as_rational(), None);
        assert_eq!(RealExpr::golden_ratio().as_rational(), None);
        assert_eq!(
            RealExpr::log_quotient((8, 1), (4, 1)).as_rational(),
            Some(BigRational::new(3.into(), 2.into()))
        );
        assert_eq!(
            RealExpr::log_quotient((1, 2), (2, 1)).as_rational(),
            Some(BigRational::from_integer((-1).into()))
        );
        assert_eq!(RealExpr::log_quotient((6, 1), (2, 1)).as_rational(), None);
        assert_eq!(
            RealExpr::log_quotient((27, 8), (3, 2)).as_rational(),
            Some(BigRational::from_integer(3.into()))
        );
        // Declared flags on decimals.
        let d = RealExpr::Decimal { literal: "1.25".into(), irrational: false };
        assert_eq!(d.as_rational(), Some(BigRational::new(5.into(), 4.into())));
        let d = RealExpr::Decimal { literal: "1.25".into(), irrational: true };
        assert_eq!(d.as_rational(), None);
    }

    #[test]
    fn validation_errors() {
        assert!(RealExpr::log_quotient((3, 1), (1, 1)).validate().is_err());
        assert!(RealExpr::log_quotient((-3, 1), (2, 1)).validate().is_err());
        let sq = RealExpr::Quadratic { p: 0.into(), q: 1.into(), d: 9.into(), r: 1.into() };
        assert!(sq.validate().is_err());
        let r0 = RealExpr::Quadratic { p: 0.into(), q: 1.into(), d: 5.into(), r: 0.into() };
        assert!(r0.validate().is_err());
    }

    #[test]
    fn parse_roundtrip() {
        for text in [
            "3/2",
            "7",
            "log(3)/log(2)",
            "log(3/2)/log(10)",
            "(1+1*sqrt(5))/2",
            "(0-3*sqrt(2))/7",
            "dec:1.5849625",
            "dec:0.30103:irrational",
        ] {
            let e = RealExpr::parse(text).unwrap_or_else(|err| panic!("{text}: {err}"));
            let shown = e.to_string();
            let again = RealExpr::parse(&shown).unwrap();
            assert_eq!(e, again, "roundtrip failed for {text}");
        }
        assert!(RealExpr::parse("log(3)").is_err());
        assert!(RealExpr::parse("(1+sqrt(5))/2").is_err());
        assert!(RealExpr::parse("").is_err());
    }

    #[test]
    fn golden_ratio_value() {
        let v = RealExpr::golden_ratio().eval(128).unwrap();
        assert!((v.to_f64() - 1.618033988749895).abs() < 1e-15);
    }

    #[test]
    fn quadratic_inverse_surd() {
        // 1/sqrt(100003) written as (0+1*sqrt(100003))/100003.
        let e = RealExpr::Quadratic {
            p: 0.into(),
            q: 1.into(),
            d: 100003.into(),
            r: 100003.into(),
        };
        let v = e.eval(128).unwrap();
        assert!((v.to_f64() - 1.0 / (100003f64).sqrt()).abs() < 1e-18);
    }

    #[test]
    fn factorization_helpers() {
        let f = factor_biguint(BigUint::from(2u32).pow(10) * BigUint::from(99991u32));
        assert_eq!(f, vec![(BigUint::from(2u32), 10), (BigUint::from(99991u32), 1)]);
        assert!(is_probable_prime(&BigUint::from(1000003u32)));
        assert!(!is_probable_prime(&BigUint::from(1000001u32)));
    }

    #[test]
    fn interval_enclosure_tightens_with_precision() {
        let e = RealExpr::log_quotient((3, 1), (2, 1));
        let coarse = e.eval_interval(64).unwrap();
        let fine = e.eval_interval(256).unwrap();
        assert!(fine.width() < coarse.width());
        assert!(coarse.lo() <= fine.lo() && fine.hi() <= coarse.hi());
    }
}
