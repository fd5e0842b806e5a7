//! Property tests over randomized inputs: precision-doubling enclosures,
//! rationality decisions against a brute-force oracle, arithmetic against
//! exact rationals, and convergent invariants.

use dirichlet_lsa::cfrac::convergents;
use dirichlet_lsa::numerics::{BigInt, BigRational, HpReal, RealExpr, Rounding};
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

const N: Rounding = Rounding::Nearest;

fn small_rational() -> impl Strategy<Value = BigRational> {
    (any::<i32>(), 1..10_000i32)
        .prop_map(|(n, d)| BigRational::new(BigInt::from(n), BigInt::from(d)))
}

fn positive_rational() -> impl Strategy<Value = BigRational> {
    (1..1_000_000i64, 1..1_000i64)
        .prop_map(|(n, d)| BigRational::new(BigInt::from(n), BigInt::from(d)))
}

fn arbitrary_expr() -> impl Strategy<Value = RealExpr> {
    prop_oneof![
        small_rational().prop_map(RealExpr::Rational),
        (positive_rational(), 2..1_000i64).prop_map(|(c, b)| RealExpr::LogQuotient {
            c,
            b: BigRational::from_integer(b.into()),
        }),
        (-50..50i64, 1..20i64, 2..200i64, 1..20i64).prop_map(|(p, q, d, r)| {
            // Skip perfect squares to keep the expression valid.
            let root = (d as f64).sqrt() as i64;
            let d = if root * root == d { d + 1 } else { d };
            RealExpr::Quadratic { p: p.into(), q: q.into(), d: d.into(), r: r.into() }
        }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Evaluating at precision P and 2P moves the value by at most
    /// 2^(2-P) relatively.
    #[test]
    fn eval_precision_doubling(expr in arbitrary_expr(), prec in 48u32..160) {
        prop_assume!(expr.validate().is_ok());
        let coarse = expr.eval(prec).unwrap();
        let fine = expr.eval(prec * 2).unwrap();
        if fine.is_zero() {
            prop_assert!(coarse.is_zero());
        } else {
            let rel = coarse.sub(&fine, N).abs().div(&fine.abs(), N);
            let bound = HpReal::from_mantissa_exp(1.into(), 2 - prec as i64, 64, N);
            prop_assert!(rel <= bound, "relative gap {} at {} bits", rel.to_f64(), prec);
        }
    }

    /// The enclosure at doubled precision nests inside the coarse one.
    #[test]
    fn enclosures_nest(expr in arbitrary_expr(), prec in 48u32..128) {
        prop_assume!(expr.validate().is_ok());
        let coarse = expr.eval_interval(prec).unwrap();
        let fine = expr.eval_interval(prec * 2).unwrap();
        prop_assert!(coarse.lo() <= fine.lo());
        prop_assert!(fine.hi() <= coarse.hi());
    }

    /// log(c)/log(b) rationality against the brute-force exponent-vector
    /// oracle over primes (c, b up to 1e6).
    #[test]
    fn log_rationality_matches_oracle(c in 2u64..1_000_000, b in 2u64..1_000_000) {
        let expr = RealExpr::LogQuotient {
            c: BigRational::from_integer(c.into()),
            b: BigRational::from_integer(b.into()),
        };
        let got = expr.as_rational();
        let want = oracle_log_ratio(c, b);
        prop_assert_eq!(got, want, "c = {}, b = {}", c, b);
    }

    /// HpReal field operations agree with exact rational arithmetic to one
    /// ulp per operation.
    #[test]
    fn arithmetic_matches_rationals(
        a in small_rational(),
        b in small_rational(),
        prec in 32u32..192,
    ) {
        let ah = HpReal::from_rational(&a, prec, N);
        let bh = HpReal::from_rational(&b, prec, N);
        for (exact, computed) in [
            (&a + &b, ah.add(&bh, N)),
            (&a - &b, ah.sub(&bh, N)),
            (&a * &b, ah.mul(&bh, N)),
        ] {
            let err = (computed.to_rational() - &exact).abs();
            // Inputs carry half an ulp each; the op adds another half.
            let scale = exact.abs() + a.abs() + b.abs() + BigRational::one();
            let bound = BigRational::new(BigInt::one(), BigInt::one() << (prec as u64 - 4))
                * scale;
            prop_assert!(err <= bound, "{} vs {}", computed.to_f64(), exact);
        }
        if !b.is_zero() {
            let exact = &a / &b;
            let err = (ah.div(&bh, N).to_rational() - &exact).abs();
            let bound = BigRational::new(BigInt::one(), BigInt::one() << (prec as u64 - 4))
                * (exact.abs() + BigRational::one());
            prop_assert!(err <= bound);
        }
    }

    /// Convergent invariants on random rationals: determinant alternation
    /// and exact reconstruction of the input by the last convergent.
    #[test]
    fn rational_convergents_reconstruct(n in -100_000i64..100_000, d in 1i64..100_000) {
        let q = BigRational::new(BigInt::from(n), BigInt::from(d));
        let cs = convergents(&RealExpr::Rational(q.clone()), 64, 64).unwrap();
        prop_assert!(!cs.is_empty());
        prop_assert_eq!(cs.last().unwrap().value(), q);
        let mut sign = BigInt::one();
        for w in cs.windows(2) {
            let det = &w[1].a * &w[0].b - &w[0].a * &w[1].b;
            prop_assert_eq!(det, sign.clone());
            sign = -sign;
        }
        for c in &cs {
            prop_assert!(c.b.is_positive());
            prop_assert!(num_integer::Integer::gcd(&c.a, &c.b).is_one());
        }
    }
}

/// Brute-force multiplicative-dependence test: factor both numbers over the
/// primes below 1000 (any cofactor of an input below 1e6 is itself prime)
/// and compare exponent vectors for parallelism.
fn oracle_log_ratio(c: u64, b: u64) -> Option<BigRational> {
    if c == 1 {
        return Some(BigRational::zero());
    }
    let ec = factor_small(c);
    let eb = factor_small(b);
    if ec.len() != eb.len() {
        return None;
    }
    let mut ratio: Option<BigRational> = None;
    for ((pc, xc), (pb, xb)) in ec.iter().zip(&eb) {
        if pc != pb {
            return None;
        }
        let r = BigRational::new(BigInt::from(*xc), BigInt::from(*xb));
        match &ratio {
            None => ratio = Some(r),
            Some(existing) => {
                if *existing != r {
                    return None;
                }
            }
        }
    }
    ratio
}

fn factor_small(mut n: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p <= 1000 && p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}
