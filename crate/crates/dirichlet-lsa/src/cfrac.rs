//! Simple continued fractions of high-precision reals, with certified
//! partial-quotient extraction.
//!
//! For a rational input the stream is the Euclidean algorithm and terminates
//! exactly. For any other expression the tail is tracked as an integer
//! Moebius transform of the original value, so each partial quotient needs
//! one certified floor of `(a x + b)/(c x + d)` over an enclosure of `x`;
//! when the floor is ambiguous the enclosure precision doubles, up to a
//! configurable cap.

use crate::numerics::{BigInt, BigRational, Interval, RealExpr};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CfracError {
    #[error("precision exhausted after reaching {reached} bits (cap {cap}); partial quotient {index} is ambiguous")]
    PrecisionExhausted { reached: u32, cap: u32, index: usize },
    #[error(transparent)]
    Expr(#[from] crate::numerics::ExprError),
}

/// A convergent `a/b` of a simple continued fraction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Convergent {
    /// Numerator.
    pub a: BigInt,
    /// Denominator, positive.
    pub b: BigInt,
    /// Position in the sequence, starting at 1.
    pub index: usize,
}

impl Convergent {
    pub fn value(&self) -> BigRational {
        BigRational::new(self.a.clone(), self.b.clone())
    }
}

enum Tail {
    /// Exact Euclidean remainder state for rational inputs.
    Rational(BigRational),
    /// `(a x + b) / (c x + d)` over the original irrational `x`.
    Moebius { a: BigInt, b: BigInt, c: BigInt, d: BigInt },
    Finished,
}

/// Incremental convergent stream. Single-owner mutable state.
pub struct ConvergentStream {
    expr: RealExpr,
    tail: Tail,
    // Convergent recurrence state: h/k previous two.
    h_prev: BigInt,
    h_curr: BigInt,
    k_prev: BigInt,
    k_curr: BigInt,
    emitted: usize,
    precision: u32,
    start_precision: u32,
    max_precision_factor: u32,
    enclosure: Option<Interval>,
}

impl ConvergentStream {
    /// Opens a stream on `x` with the given certification precision.
    pub fn new(x: &RealExpr, precision: u32) -> Result<Self, CfracError> {
        x.validate()?;
        let tail = match x.as_rational() {
            Some(q) => Tail::Rational(q),
            None => Tail::Moebius {
                a: BigInt::one(),
                b: BigInt::zero(),
                c: BigInt::zero(),
                d: BigInt::one(),
            },
        };
        Ok(ConvergentStream {
            expr: x.clone(),
            tail,
            h_prev: BigInt::zero(),
            h_curr: BigInt::one(),
            k_prev: BigInt::one(),
            k_curr: BigInt::zero(),
            emitted: 0,
            precision,
            start_precision: precision,
            max_precision_factor: 8,
            enclosure: None,
        })
    }

    /// Changes the automatic precision-doubling cap (a multiple of the
    /// starting precision). Default 8.
    pub fn with_max_precision_factor(mut self, factor: u32) -> Self {
        self.max_precision_factor = factor.max(1);
        self
    }

    pub fn index(&self) -> usize {
        self.emitted
    }

    /// Produces the next convergent, `Ok(None)` at the exact end of a
    /// rational expansion.
    pub fn next_convergent(&mut self) -> Result<Option<Convergent>, CfracError> {
        let quotient = match &mut self.tail {
            Tail::Finished => return Ok(None),
            Tail::Rational(q) => {
                let (quot, rem) = q.numer().div_mod_floor(q.denom());
                if rem.is_zero() {
                    self.tail = Tail::Finished;
                } else {
                    // x <- 1/(x - a): numerator/denominator swap on remainder.
                    let denom = q.denom().clone();
                    *q = BigRational::new(denom, rem);
                }
                quot
            }
            Tail::Moebius { .. } => self.moebius_quotient()?,
        };
        // Standard convergent recurrence.
        let h_next = &quotient * &self.h_curr + &self.h_prev;
        let k_next = &quotient * &self.k_curr + &self.k_prev;
        self.h_prev = std::mem::replace(&mut self.h_curr, h_next);
        self.k_prev = std::mem::replace(&mut self.k_curr, k_next);
        self.emitted += 1;
        Ok(Some(Convergent {
            a: self.h_curr.clone(),
            b: self.k_curr.clone(),
            index: self.emitted,
        }))
    }

    /// Certified floor of the Moebius-transformed tail, escalating precision
    /// until the floor is unambiguous on the enclosure of `x`.
    fn moebius_quotient(&mut self) -> Result<BigInt, CfracError> {
        let cap = self
            .start_precision
            .saturating_mul(self.max_precision_factor);
        loop {
            if self.enclosure.is_none() {
                self.enclosure = Some(self.expr.eval_interval(self.precision)?);
            }
            let x = self.enclosure.as_ref().unwrap();
            let (a, b, c, d) = match &self.tail {
                Tail::Moebius { a, b, c, d } => (a, b, c, d),
                _ => unreachable!(),
            };
            // Exact rational images of the dyadic endpoints.
            let ar = BigRational::from_integer(a.clone());
            let br = BigRational::from_integer(b.clone());
            let cr = BigRational::from_integer(c.clone());
            let dr = BigRational::from_integer(d.clone());
            let map = |t: &BigRational| -> Option<BigRational> {
                let den = &cr * t + &dr;
                if den.is_zero() {
                    return None;
                }
                Some((&ar * t + &br) / den)
            };
            let t_lo = x.lo().to_rational();
            let t_hi = x.hi().to_rational();
            let lo = map(&t_lo);
            let hi = map(&t_hi);
            // The denominator must keep a constant sign over the enclosure
            // for the endpoint images to bound the true image.
            let den_lo = &cr * &t_lo + &dr;
            let den_hi = &cr * &t_hi + &dr;
            let den_definite = den_lo.is_positive() == den_hi.is_positive()
                && !den_lo.is_zero()
                && !den_hi.is_zero();
            if let (true, Some(lo), Some(hi)) = (den_definite, lo, hi) {
                let (lo, hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
                let fl = lo.floor().to_integer();
                let fh = hi.floor().to_integer();
                if fl == fh {
                    let quotient = fl;
                    // x_next = 1/(x_k - quotient), as a Moebius update.
                    if let Tail::Moebius { a, b, c, d } = &mut self.tail {
                        let na = std::mem::take(c);
                        let nb = std::mem::take(d);
                        let nc = &*a - &quotient * &na;
                        let nd = &*b - &quotient * &nb;
                        *a = na;
                        *b = nb;
                        *c = nc;
                        *d = nd;
                    }
                    return Ok(quotient);
                }
            }
            // Ambiguous: double the enclosure precision.
            let next = self.precision.saturating_mul(2);
            if next > cap {
                return Err(CfracError::PrecisionExhausted {
                    reached: self.precision,
                    cap,
                    index: self.emitted + 1,
                });
            }
            self.precision = next;
            self.enclosure = None;
        }
    }
}

/// The first `count` convergents of `x`. A rational `x` may yield fewer.
pub fn convergents(
    x: &RealExpr,
    count: usize,
    precision: u32,
) -> Result<Vec<Convergent>, CfracError> {
    assert!(count >= 1, "count must be positive");
    let mut stream = ConvergentStream::new(x, precision)?;
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        match stream.next_convergent()? {
            Some(c) => out.push(c),
            None => break,
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::Rounding;

    fn fib_pairs() -> Vec<(i64, i64)> {
        // (denominator, numerator) of phi's convergents: ratios of Fibonaccis.
        vec![(1, 1), (1, 2), (2, 3), (3, 5), (5, 8), (8, 13), (13, 21)]
    }

    #[test]
    fn golden_ratio_gives_fibonacci() {
        let cs = convergents(&RealExpr::golden_ratio(), 7, 64).unwrap();
        for (c, (b, a)) in cs.iter().zip(fib_pairs()) {
            assert_eq!(c.b, BigInt::from(b));
            assert_eq!(c.a, BigInt::from(a));
        }
    }

    #[test]
    fn log2_3_convergents_include_published_pairs() {
        let x = RealExpr::log_quotient((3, 1), (2, 1));
        let cs = convergents(&x, 13, 64).unwrap();
        let pairs: Vec<(BigInt, BigInt)> =
            cs.iter().map(|c| (c.b.clone(), c.a.clone())).collect();
        for (b, a) in [
            (53i64, 84i64),
            (306, 485),
            (665, 1054),
            (15601, 24727),
            (31867, 50508),
            (79335, 125743),
            (111202, 176251),
        ] {
            assert!(
                pairs.contains(&(BigInt::from(b), BigInt::from(a))),
                "missing convergent {a}/{b}"
            );
        }
    }

    #[test]
    fn rational_expansion_terminates() {
        let x = RealExpr::rational(7, 3);
        let cs = convergents(&x, 10, 64).unwrap();
        assert_eq!(cs.len(), 2);
        assert_eq!((cs[0].a.clone(), cs[0].b.clone()), (BigInt::from(2), BigInt::from(1)));
        assert_eq!((cs[1].a.clone(), cs[1].b.clone()), (BigInt::from(7), BigInt::from(3)));
        let mut stream = ConvergentStream::new(&x, 64).unwrap();
        stream.next_convergent().unwrap();
        stream.next_convergent().unwrap();
        assert!(stream.next_convergent().unwrap().is_none());
    }

    #[test]
    fn negative_rational_expansion() {
        let x = RealExpr::rational(-7, 3);
        let cs = convergents(&x, 10, 64).unwrap();
        // -7/3 = [-3; 1, 2]
        let last = cs.last().unwrap();
        assert_eq!(last.value(), BigRational::new((-7).into(), 3.into()));
        for c in &cs {
            assert!(c.b.is_positive());
        }
    }

    #[test]
    fn determinant_alternates() {
        let x = RealExpr::log_quotient((3, 1), (2, 1));
        let cs = convergents(&x, 12, 64).unwrap();
        let mut expected = BigInt::from(1);
        for w in cs.windows(2) {
            let det = &w[1].a * &w[0].b - &w[0].a * &w[1].b;
            assert_eq!(det, expected);
            expected = -expected;
        }
    }

    #[test]
    fn denominators_strictly_increase() {
        let x = RealExpr::golden_ratio();
        let cs = convergents(&x, 15, 64).unwrap();
        for w in cs.windows(2).skip(1) {
            assert!(w[1].b > w[0].b);
        }
    }

    #[test]
    fn approximation_quality_bound() {
        // |x - a/b| < 1/b^2 for every convergent.
        let x = RealExpr::log_quotient((3, 1), (2, 1));
        let value = x.eval(512).unwrap().to_rational();
        let cs = convergents(&x, 15, 64).unwrap();
        for c in &cs {
            let err = (&value - c.value()).abs();
            let bound = BigRational::new(BigInt::one(), &c.b * &c.b);
            assert!(err < bound, "convergent {}/{} misses the 1/b^2 bound", c.a, c.b);
        }
    }

    #[test]
    fn best_approximation_brute_force() {
        // No fraction with a smaller denominator comes closer.
        let x = RealExpr::golden_ratio();
        let value = x.eval(256).unwrap().to_rational();
        let cs = convergents(&x, 10, 64).unwrap();
        for c in cs.iter().filter(|c| c.b <= BigInt::from(100)) {
            let err = (&value - c.value()).abs();
            let b_limit = num_traits::ToPrimitive::to_i64(&c.b).unwrap();
            for b in 1..b_limit {
                let scaled = &value * BigRational::from_integer(b.into());
                let a = scaled.round().to_integer();
                let cand = BigRational::new(a, b.into());
                let cand_err = (&value - &cand).abs();
                assert!(
                    cand_err >= err,
                    "{} closer than convergent {}/{}",
                    cand,
                    c.a,
                    c.b
                );
            }
        }
    }

    #[test]
    fn precision_exhaustion_reports() {
        // An irrational whose 40th quotient needs more than 8x16 bits.
        let x = RealExpr::log_quotient((3, 1), (2, 1));
        let mut stream = ConvergentStream::new(&x, 16).unwrap().with_max_precision_factor(2);
        let mut result = Ok(());
        for _ in 0..64 {
            match stream.next_convergent() {
                Ok(_) => {}
                Err(e) => {
                    result = Err(e);
                    break;
                }
            }
        }
        match result {
            Err(CfracError::PrecisionExhausted { .. }) => {}
            other => panic!("expected precision exhaustion, got {other:?}"),
        }
    }

    #[test]
    fn quadratic_stream_continues_far() {
        // Quadratic surd tails never terminate; take many terms.
        let x = RealExpr::golden_ratio();
        let cs = convergents(&x, 40, 64).unwrap();
        assert_eq!(cs.len(), 40);
        // Fibonacci growth: the 40th denominator has ~27 digits / phi^40.
        let v = cs.last().unwrap().value();
        let phi = RealExpr::golden_ratio().eval(256).unwrap();
        let err = phi
            .sub(
                &crate::numerics::HpReal::from_rational(&v, 256, Rounding::Nearest),
                Rounding::Nearest,
            )
            .abs();
        assert!(err.to_f64() < 1e-15);
    }
}
