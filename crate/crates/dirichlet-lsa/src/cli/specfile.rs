//! Parser for polynomial specification files.
//!
//! A flat `key = value` document, UTF-8, `#` comments, one entry per line.
//! Repeated keys build the exponent/multiplicity/gap lists in order:
//!
//! ```text
//! # the 2-3 polynomial
//! base_ratio = 1/2
//! exponent = 1
//! exponent = log(3)/log(2)
//! multiplicity = 1
//! multiplicity = 1
//! ```
//!
//! Exponents use the expression grammar (`p/q`, `log(c)/log(b)`,
//! `(p+q*sqrt(d))/r`, `dec:<literal>[:irrational]`). Multiplicities are
//! rationals or decimal literals, both exact. Optional `gap` lines and a
//! `length` line trigger the self-similar-string constructor, which checks
//! the geometric constraint exactly.

use crate::dirichlet::{from_self_similar_string, DirichletPolynomial, GeometricZeta};
use crate::numerics::{format as numfmt, BigRational, ExprError, RealExpr};
use num_traits::{Signed, ToPrimitive, Zero};
use std::fmt;

/// Parse or validation failure with position information.
#[derive(Debug)]
pub struct SpecError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for SpecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for SpecError {}

/// A parsed specification: the polynomial and, when gaps were given, the
/// geometric zeta data.
#[derive(Debug)]
pub struct PolynomialSpec {
    pub poly: DirichletPolynomial,
    pub zeta: Option<GeometricZeta>,
}

pub fn parse_spec(text: &str) -> Result<PolynomialSpec, SpecError> {
    let mut base_ratio: Option<(RealExpr, usize, usize)> = None;
    let mut exponents: Vec<RealExpr> = Vec::new();
    let mut multiplicities: Vec<BigRational> = Vec::new();
    let mut gaps: Vec<BigRational> = Vec::new();
    let mut length: Option<BigRational> = None;
    let mut first_line = 0usize;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let without_comment = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        if without_comment.trim().is_empty() {
            continue;
        }
        if first_line == 0 {
            first_line = line_no;
        }
        let eq = without_comment.find('=').ok_or_else(|| SpecError {
            line: line_no,
            column: 1,
            message: "expected `key = value`".into(),
        })?;
        let key = without_comment[..eq].trim();
        let value = without_comment[eq + 1..].trim();
        let value_col = eq + 2 + (without_comment[eq + 1..].len()
            - without_comment[eq + 1..].trim_start().len());
        let err_at = |offset: usize, message: String| SpecError {
            line: line_no,
            column: value_col + offset,
            message,
        };
        match key {
            "base_ratio" => {
                let e = parse_expr(value).map_err(|(o, m)| err_at(o, m))?;
                base_ratio = Some((e, line_no, value_col));
            }
            "exponent" => {
                exponents.push(parse_expr(value).map_err(|(o, m)| err_at(o, m))?);
            }
            "multiplicity" => {
                multiplicities.push(parse_number(value).map_err(|m| err_at(0, m))?);
            }
            "gap" => {
                gaps.push(parse_number(value).map_err(|m| err_at(0, m))?);
            }
            "length" => {
                length = Some(parse_number(value).map_err(|m| err_at(0, m))?);
            }
            other => {
                return Err(SpecError {
                    line: line_no,
                    column: 1,
                    message: format!("unknown key `{other}`"),
                });
            }
        }
    }

    let (base, base_line, base_col) = base_ratio.ok_or_else(|| SpecError {
        line: first_line.max(1),
        column: 1,
        message: "missing `base_ratio`".into(),
    })?;
    if exponents.is_empty() {
        return Err(SpecError {
            line: base_line,
            column: 1,
            message: "at least one `exponent` line is required".into(),
        });
    }
    let poly = DirichletPolynomial::new(base.clone(), exponents, multiplicities)
        .map_err(|e| SpecError { line: base_line, column: base_col, message: e.to_string() })?;

    let zeta = if gaps.is_empty() && length.is_none() {
        None
    } else {
        if gaps.is_empty() {
            return Err(SpecError {
                line: first_line,
                column: 1,
                message: "`length` given without any `gap` lines".into(),
            });
        }
        let length = length.unwrap_or_else(|| BigRational::from_integer(1.into()));
        let ratios = rational_ratios(&poly).map_err(|m| SpecError {
            line: base_line,
            column: base_col,
            message: m,
        })?;
        let mut gap_counts: Vec<(BigRational, u32)> = Vec::new();
        for g in gaps {
            match gap_counts.iter_mut().find(|(v, _)| *v == g) {
                Some((_, c)) => *c += 1,
                None => gap_counts.push((g, 1)),
            }
        }
        let zeta = from_self_similar_string(&ratios, &gap_counts, length).map_err(|e| {
            SpecError { line: first_line, column: 1, message: e.to_string() }
        })?;
        Some(zeta)
    };
    Ok(PolynomialSpec { poly, zeta })
}

fn parse_expr(value: &str) -> Result<RealExpr, (usize, String)> {
    RealExpr::parse(value).map_err(|e| match e {
        ExprError::Parse { offset, message } => (offset, message),
        ExprError::Invalid(m) => (0, m),
    })
}

fn parse_number(value: &str) -> Result<BigRational, String> {
    if value.contains('/') {
        let (n, d) = value.split_once('/').unwrap();
        let n = n.trim().parse().map_err(|_| format!("bad integer `{}`", n.trim()))?;
        let d: crate::numerics::BigInt =
            d.trim().parse().map_err(|_| format!("bad integer `{}`", d.trim()))?;
        if d.is_zero() {
            return Err("zero denominator".into());
        }
        Ok(BigRational::new(n, d))
    } else {
        numfmt::parse_decimal_rational(value)
    }
}

/// Exact scaling ratios `r_j = r_1^(alpha_j)` with integer multiplicities,
/// required by the self-similar constructor.
fn rational_ratios(poly: &DirichletPolynomial) -> Result<Vec<(BigRational, u32)>, String> {
    let r1 = match poly.base_ratio().as_rational() {
        Some(r) => r,
        None => return Err("self-similar data requires a rational base ratio".into()),
    };
    let mut out = Vec::with_capacity(poly.n());
    for (alpha, m) in poly.alphas().iter().zip(poly.multiplicities()) {
        let mult = m
            .to_integer()
            .to_u32()
            .filter(|_| m.is_integer() && m.is_positive())
            .ok_or_else(|| "self-similar multiplicities must be positive integers".to_string())?;
        let ratio = match alpha {
            RealExpr::LogQuotient { c, b } if *b == r1 => c.clone(),
            _ => match alpha.as_rational() {
                Some(a) => rational_power(&r1, &a).ok_or_else(|| {
                    format!("ratio r_1^({a}) is not rational; write the exponent as log(r_j)/log(r_1)")
                })?,
                None => {
                    return Err(
                        "self-similar data requires rational scaling ratios; write exponents as log(r_j)/log(r_1)"
                            .into(),
                    )
                }
            },
        };
        out.push((ratio, mult));
    }
    Ok(out)
}

/// `base^(u/v)` as an exact rational when both parts of `base` are perfect
/// `v`-th powers.
fn rational_power(base: &BigRational, exp: &BigRational) -> Option<BigRational> {
    let u = exp.numer().to_i64()?;
    let v = exp.denom().to_u32()?;
    if u < 0 {
        return None; // exponents here are >= 1
    }
    let root_n = base.numer().nth_root(v);
    let root_d = base.denom().nth_root(v);
    if &root_n.pow(v) != base.numer() || &root_d.pow(v) != base.denom() {
        return None;
    }
    let root = BigRational::new(root_n, root_d);
    let mut acc = BigRational::from_integer(1.into());
    for _ in 0..u {
        acc *= &root;
    }
    Some(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dirichlet::classify;

    #[test]
    fn parse_two_three() {
        let text = "\n# the 2-3 polynomial\nbase_ratio = 1/2\nexponent = 1\nexponent = log(3)/log(2)\nmultiplicity = 1\nmultiplicity = 1\n";
        let spec = parse_spec(text).unwrap();
        assert_eq!(spec.poly.n(), 2);
        assert!(spec.zeta.is_none());
        assert!(!classify(&spec.poly).unwrap().is_lattice());
    }

    #[test]
    fn parse_cantor_with_gaps() {
        let text = "base_ratio = 1/3\nexponent = 1\nmultiplicity = 2\ngap = 1/3\nlength = 1\n";
        let spec = parse_spec(text).unwrap();
        let zeta = spec.zeta.unwrap();
        assert!(zeta.single_gap);
    }

    #[test]
    fn parse_decimal_multiplicities() {
        let text = "base_ratio = 1/2\nexponent = 1\nexponent = log(3)/log(2)\nexponent = 2\nexponent = log(6)/log(2)\nmultiplicity = 0.1\nmultiplicity = 0.1\nmultiplicity = 0.1\nmultiplicity = 1\n";
        let spec = parse_spec(text).unwrap();
        assert_eq!(
            spec.poly.multiplicities()[0],
            BigRational::new(1.into(), 10.into())
        );
    }

    #[test]
    fn errors_carry_positions() {
        let err = parse_spec("base_ratio = 1/2\nexponent = log(3)\n").unwrap_err();
        assert_eq!(err.line, 2);
        assert!(err.column >= 12, "column {}", err.column);
        let err = parse_spec("plonk = 3\n").unwrap_err();
        assert_eq!(err.line, 1);
        let err = parse_spec("base_ratio = 1/2\nexponent = 1\nmultiplicity = x\n").unwrap_err();
        assert_eq!(err.line, 3);
    }

    #[test]
    fn missing_fields_reported() {
        assert!(parse_spec("# nothing\n").is_err());
        assert!(parse_spec("base_ratio = 1/2\n").is_err());
        // Mismatched counts surface the polynomial validation message.
        let err = parse_spec("base_ratio = 1/2\nexponent = 1\nmultiplicity = 1\nmultiplicity = 2\n")
            .unwrap_err();
        assert!(err.message.contains("does not match"), "{}", err.message);
    }

    #[test]
    fn integral_exponent_ratio_powers() {
        // alpha = 2 with r_1 = 1/2: ratio 1/4 is rational.
        let text = "base_ratio = 1/2\nexponent = 1\nexponent = 2\nmultiplicity = 1\nmultiplicity = 1\ngap = 1/4\nlength = 1\n";
        let spec = parse_spec(text).unwrap();
        assert!(spec.zeta.unwrap().single_gap);
    }

    #[test]
    fn constraint_violation_is_positional() {
        let text = "base_ratio = 1/3\nexponent = 1\nmultiplicity = 2\ngap = 1/2\n";
        let err = parse_spec(text).unwrap_err();
        assert!(err.message.contains("constraint"), "{}", err.message);
    }
}
