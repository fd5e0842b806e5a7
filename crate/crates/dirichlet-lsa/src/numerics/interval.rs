//! Directed-rounded interval arithmetic used to certify floor extraction,
//! expression evaluation and Diophantine inequality checks.

use super::functions;
use super::hpreal::{HpReal, Rounding};
use num_bigint::BigInt;
use num_rational::BigRational;

/// A closed interval `[lo, hi]` of high-precision endpoints.
#[derive(Clone, Debug)]
pub struct Interval {
    lo: HpReal,
    hi: HpReal,
}

impl Interval {
    pub fn new(lo: HpReal, hi: HpReal) -> Self {
        assert!(lo <= hi, "inverted interval");
        Interval { lo, hi }
    }

    pub fn point(x: HpReal) -> Self {
        Interval { lo: x.clone(), hi: x }
    }

    pub fn from_rational(q: &BigRational, prec: u32) -> Self {
        Interval {
            lo: HpReal::from_rational(q, prec, Rounding::Floor),
            hi: HpReal::from_rational(q, prec, Rounding::Ceil),
        }
    }

    pub fn lo(&self) -> &HpReal {
        &self.lo
    }

    pub fn hi(&self) -> &HpReal {
        &self.hi
    }

    pub fn width(&self) -> HpReal {
        self.hi.sub(&self.lo, Rounding::Ceil)
    }

    pub fn midpoint(&self, prec: u32) -> HpReal {
        self.lo
            .add(&self.hi, Rounding::Nearest)
            .scale_pow2(-1)
            .with_precision(prec, Rounding::Nearest)
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.hi.is_negative()
    }

    pub fn neg(&self) -> Interval {
        Interval { lo: self.hi.neg(), hi: self.lo.neg() }
    }

    pub fn add(&self, rhs: &Interval) -> Interval {
        Interval {
            lo: self.lo.add(&rhs.lo, Rounding::Floor),
            hi: self.hi.add(&rhs.hi, Rounding::Ceil),
        }
    }

    pub fn sub(&self, rhs: &Interval) -> Interval {
        Interval {
            lo: self.lo.sub(&rhs.hi, Rounding::Floor),
            hi: self.hi.sub(&rhs.lo, Rounding::Ceil),
        }
    }

    pub fn mul(&self, rhs: &Interval) -> Interval {
        let pairs = [
            (&self.lo, &rhs.lo),
            (&self.lo, &rhs.hi),
            (&self.hi, &rhs.lo),
            (&self.hi, &rhs.hi),
        ];
        let mut lo: Option<HpReal> = None;
        let mut hi: Option<HpReal> = None;
        for (a, b) in pairs {
            let down = a.mul(b, Rounding::Floor);
            let up = a.mul(b, Rounding::Ceil);
            lo = Some(match lo {
                None => down,
                Some(cur) => cur.min_value(down),
            });
            hi = Some(match hi {
                None => up,
                Some(cur) => cur.max_value(up),
            });
        }
        Interval { lo: lo.unwrap(), hi: hi.unwrap() }
    }

    /// Division; the divisor interval must not contain zero.
    pub fn div(&self, rhs: &Interval) -> Interval {
        assert!(!rhs.contains_zero(), "interval division by an interval containing zero");
        let pairs = [
            (&self.lo, &rhs.lo),
            (&self.lo, &rhs.hi),
            (&self.hi, &rhs.lo),
            (&self.hi, &rhs.hi),
        ];
        let mut lo: Option<HpReal> = None;
        let mut hi: Option<HpReal> = None;
        for (a, b) in pairs {
            let down = a.div(b, Rounding::Floor);
            let up = a.div(b, Rounding::Ceil);
            lo = Some(match lo {
                None => down,
                Some(cur) => cur.min_value(down),
            });
            hi = Some(match hi {
                None => up,
                Some(cur) => cur.max_value(up),
            });
        }
        Interval { lo: lo.unwrap(), hi: hi.unwrap() }
    }

    /// Square root; requires a non-negative lower endpoint.
    pub fn sqrt(&self) -> Interval {
        Interval {
            lo: self.lo.sqrt(Rounding::Floor),
            hi: self.hi.sqrt(Rounding::Ceil),
        }
    }

    /// Natural log enclosure; requires a positive lower endpoint.
    ///
    /// The pointwise log is within 2 ulp, widened here by 4 ulp per side.
    pub fn ln(&self, prec: u32) -> Interval {
        assert!(self.lo.is_positive(), "ln of an interval reaching zero");
        let lo = functions::ln(&self.lo, prec);
        let hi = functions::ln(&self.hi, prec);
        Interval { lo: widen_down(&lo), hi: widen_up(&hi) }
    }

    pub fn abs(&self) -> Interval {
        if self.lo.is_negative() && !self.hi.is_negative() {
            Interval {
                lo: HpReal::zero(self.lo.precision()),
                hi: self.lo.neg().max_value(self.hi.clone()),
            }
        } else if self.hi.is_negative() {
            self.neg()
        } else {
            self.clone()
        }
    }

    /// The floor shared by every point of the interval, when unambiguous.
    pub fn unique_floor(&self) -> Option<BigInt> {
        let a = self.lo.floor_bigint();
        let b = self.hi.floor_bigint();
        if a == b { Some(a) } else { None }
    }

    /// Certified strict comparison: `true` when every point of `self` is
    /// below every point of `rhs`.
    pub fn strictly_below(&self, rhs: &Interval) -> bool {
        self.hi < rhs.lo
    }
}

fn widen_down(x: &HpReal) -> HpReal {
    let four_ulp = x.ulp().scale_pow2(2);
    x.sub(&four_ulp, Rounding::Floor)
}

fn widen_up(x: &HpReal) -> HpReal {
    let four_ulp = x.ulp().scale_pow2(2);
    x.add(&four_ulp, Rounding::Ceil)
}
