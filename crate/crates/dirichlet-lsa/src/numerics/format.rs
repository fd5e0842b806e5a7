//! Decimal formatting and parsing for high-precision values.

use super::hpreal::{HpReal, Rounding};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Renders `sig` significant digits, plain notation for moderate exponents
/// and scientific notation otherwise. Trailing zeros of the fraction are
/// trimmed.
pub fn to_decimal_string(x: &HpReal, sig: usize) -> String {
    match digits_of(x, sig) {
        None => "0".to_string(),
        Some((neg, digits, e10)) => {
            let digits = trim_trailing_zeros(digits);
            render(neg, &digits, e10, false)
        }
    }
}

/// Fixed-layout scientific notation with exactly `sig` digits; byte-stable
/// for identical inputs, used for CSV output.
pub fn to_scientific_string(x: &HpReal, sig: usize) -> String {
    match digits_of(x, sig) {
        None => {
            let mut s = String::from("0.");
            s.push_str(&"0".repeat(sig - 1));
            s.push_str("e0");
            s
        }
        Some((neg, digits, e10)) => render(neg, &digits, e10, true),
    }
}

fn trim_trailing_zeros(mut digits: Vec<u8>) -> Vec<u8> {
    while digits.len() > 1 && *digits.last().unwrap() == 0 {
        digits.pop();
    }
    digits
}

fn render(neg: bool, digits: &[u8], e10: i64, force_scientific: bool) -> String {
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    let sig = digits.len() as i64;
    let plain = !force_scientific && e10 >= -4 && e10 < sig.max(6) + 6;
    if plain {
        if e10 >= 0 {
            if e10 + 1 >= sig {
                // All digits before the point, pad with zeros.
                for &d in digits {
                    out.push((b'0' + d) as char);
                }
                for _ in 0..(e10 + 1 - sig) {
                    out.push('0');
                }
            } else {
                for (i, &d) in digits.iter().enumerate() {
                    if i as i64 == e10 + 1 {
                        out.push('.');
                    }
                    out.push((b'0' + d) as char);
                }
            }
        } else {
            out.push_str("0.");
            for _ in 0..(-e10 - 1) {
                out.push('0');
            }
            for &d in digits {
                out.push((b'0' + d) as char);
            }
        }
    } else {
        out.push((b'0' + digits[0]) as char);
        out.push('.');
        if digits.len() > 1 {
            for &d in &digits[1..] {
                out.push((b'0' + d) as char);
            }
        } else {
            out.push('0');
        }
        out.push('e');
        out.push_str(&e10.to_string());
    }
    out
}

/// Extracts (negative, digits, decimal exponent of the leading digit).
fn digits_of(x: &HpReal, sig: usize) -> Option<(bool, Vec<u8>, i64)> {
    assert!(sig >= 1);
    if x.is_zero() {
        return None;
    }
    let neg = x.is_negative();
    let q = x.abs().to_rational();
    // First guess for floor(log10 |x|) from the binary magnitude.
    let mut e10 = (x.exponent_of_msb() as f64 * std::f64::consts::LOG10_2).floor() as i64;
    loop {
        let k = sig as i64 - 1 - e10;
        let mut num = q.numer().magnitude().clone();
        let mut den = q.denom().magnitude().clone();
        if k >= 0 {
            num *= BigUint::from(10u32).pow(k as u32);
        } else {
            den *= BigUint::from(10u32).pow((-k) as u32);
        }
        let (mut d, rem) = num.div_rem(&den);
        // Round half to even at the final digit.
        let twice: BigUint = &rem << 1;
        if twice > den || (twice == den && d.is_odd()) {
            d += 1u32;
        }
        let lower = BigUint::from(10u32).pow(sig as u32 - 1);
        let upper = BigUint::from(10u32).pow(sig as u32);
        if d < lower {
            e10 -= 1;
            continue;
        }
        if d >= upper {
            e10 += 1;
            continue;
        }
        let digits: Vec<u8> = d.to_string().bytes().map(|b| b - b'0').collect();
        return Some((neg, digits, e10));
    }
}

/// Parses a decimal literal (optional sign, fraction, exponent) to the exact
/// rational it denotes.
pub fn parse_decimal_rational(s: &str) -> Result<BigRational, String> {
    let s = s.trim();
    if s.is_empty() {
        return Err("empty decimal literal".into());
    }
    let bytes = s.as_bytes();
    let mut idx = 0;
    let neg = match bytes[0] {
        b'-' => {
            idx += 1;
            true
        }
        b'+' => {
            idx += 1;
            false
        }
        _ => false,
    };
    let mut int_digits = String::new();
    let mut frac_digits = String::new();
    let mut exp: i64 = 0;
    let mut seen_dot = false;
    let mut seen_digit = false;
    while idx < bytes.len() {
        match bytes[idx] {
            b'0'..=b'9' => {
                seen_digit = true;
                if seen_dot {
                    frac_digits.push(bytes[idx] as char);
                } else {
                    int_digits.push(bytes[idx] as char);
                }
                idx += 1;
            }
            b'.' if !seen_dot => {
                seen_dot = true;
                idx += 1;
            }
            b'e' | b'E' => {
                let tail = &s[idx + 1..];
                exp = tail
                    .parse::<i64>()
                    .map_err(|_| format!("bad exponent in decimal literal `{s}`"))?;
                idx = bytes.len();
            }
            c => return Err(format!("unexpected character `{}` in decimal literal `{s}`", c as char)),
        }
    }
    if !seen_digit {
        return Err(format!("no digits in decimal literal `{s}`"));
    }
    let all = format!("{int_digits}{frac_digits}");
    let mantissa: BigInt = all.parse().map_err(|_| format!("bad digits in `{s}`"))?;
    let mantissa = if neg { -mantissa } else { mantissa };
    let shift = exp - frac_digits.len() as i64;
    let ten = BigInt::from(10);
    let value = if shift >= 0 {
        BigRational::from_integer(mantissa * ten.pow(shift as u32))
    } else {
        BigRational::new(mantissa, ten.pow((-shift) as u32))
    };
    Ok(value)
}

/// Parses a decimal literal and rounds it to `prec` bits.
pub fn parse_decimal(s: &str, prec: u32) -> Result<HpReal, String> {
    let q = parse_decimal_rational(s)?;
    Ok(HpReal::from_rational(&q, prec, Rounding::Nearest))
}

/// Compares a computed value against a printed reference: the computed value
/// rounded to the reference's significant digits must reproduce it.
pub fn matches_printed(value: &HpReal, printed: &str) -> bool {
    let normalized = printed.trim().replace('\u{2212}', "-");
    let mantissa_part = normalized.split(['e', 'E']).next().unwrap_or("");
    let sig = mantissa_part.chars().filter(|c| c.is_ascii_digit()).count()
        - leading_zeros(mantissa_part);
    if sig == 0 {
        return false;
    }
    let reference = match parse_decimal_rational(&normalized) {
        Ok(q) => q,
        Err(_) => return false,
    };
    if reference.is_zero() {
        return value.is_zero();
    }
    let rendered = to_decimal_string(value, sig);
    let back = parse_decimal_rational(&rendered).unwrap();
    // Accept a one-ulp slack in the last printed digit: published tables are
    // not always correctly rounded.
    let diff = (&back - &reference).abs();
    let scale = reference.abs();
    let tol = BigRational::new(BigInt::from(15), BigInt::from(10))
        * BigRational::new(BigInt::one(), BigInt::from(10).pow(sig as u32 - 1))
        * scale;
    diff <= tol
}

fn leading_zeros(s: &str) -> usize {
    let mut count = 0;
    for c in s.chars() {
        match c {
            '0' => count += 1,
            '.' | '-' | '+' => {}
            _ => break,
        }
    }
    count
}

pub fn parse_f64(x: &str) -> Result<f64, String> {
    x.trim().parse::<f64>().map_err(|_| format!("bad number `{x}`"))
}
