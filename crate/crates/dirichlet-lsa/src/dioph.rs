//! Simultaneous Diophantine approximation: the LLL embedding and the
//! convergent-driven stream that produces approximations `Q, (q, k_2..k_N)`
//! of increasing quality.

use crate::cfrac::{CfracError, Convergent, ConvergentStream};
use crate::lll::{lll_reduce, Basis, LllError, ReductionParams};
use crate::numerics::{BigInt, BigRational, HpReal, Interval, RealExpr, Rounding};
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DiophError {
    #[error("delta must satisfy 0 < delta < 1, got {0}")]
    BadDelta(BigRational),
    #[error("at least one coordinate required")]
    EmptyInput,
    #[error("no reduced row has a nonzero first coordinate")]
    DegenerateReduction,
    #[error("margin is below working precision; raise the precision")]
    IndeterminateMargin,
    #[error("stream stalled after {0} iterations without reaching Case 1")]
    Stalled(u64),
    #[error(transparent)]
    Lll(#[from] LllError),
    #[error(transparent)]
    Cfrac(#[from] CfracError),
    #[error(transparent)]
    Expr(#[from] crate::numerics::ExprError),
}

/// Quality of a simultaneous Diophantine approximation; the infinite variant
/// marks an exact (all-rational) hit.
#[derive(Clone, Debug, PartialEq)]
pub enum Quality {
    Finite(HpReal),
    Infinite,
}

impl Quality {
    pub fn as_finite(&self) -> Option<&HpReal> {
        match self {
            Quality::Finite(v) => Some(v),
            Quality::Infinite => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Quality::Infinite)
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Quality::Finite(v) => v.to_f64(),
            Quality::Infinite => f64::INFINITY,
        }
    }
}

impl PartialOrd for Quality {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        use std::cmp::Ordering;
        match (self, other) {
            (Quality::Infinite, Quality::Infinite) => Some(Ordering::Equal),
            (Quality::Infinite, Quality::Finite(_)) => Some(Ordering::Greater),
            (Quality::Finite(_), Quality::Infinite) => Some(Ordering::Less),
            (Quality::Finite(a), Quality::Finite(b)) => a.partial_cmp(b),
        }
    }
}

/// Where an approximation came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    ContinuedFraction,
    LllStream,
}

/// A simultaneous Diophantine approximation `Q, (q, k_1..k_n)` to a vector
/// of reals, with the `delta` that produced it when LLL was involved.
#[derive(Clone, Debug)]
pub struct Sda {
    pub quality: Quality,
    /// Common denominator, positive.
    pub q: BigInt,
    /// Numerators, parallel to the approximated coordinates.
    pub k: Vec<BigInt>,
    pub delta: Option<BigRational>,
    pub provenance: Provenance,
}

impl Sda {
    pub fn q_u64(&self) -> u64 {
        self.q.to_u64().expect("q fits in u64")
    }
}

/// The Theorem-3.6 embedding: finds `b, a_1..a_n` with
/// `|x_j - a_j/b| <= delta/b` and `1 <= b <= 2^ceil(n(n+1)/4) delta^-n`.
///
/// The proof's corner entry `2^(-n(n+1)/4) delta^(n+1)` is irrational when
/// `n(n+1)/4` is not an integer; the exact rational
/// `delta^(n+1) / 2^ceil(n(n+1)/4)` is used instead, which still gives
/// `|y_1| <= delta` and therefore both inequalities above.
pub fn lll_dio(
    x: &[BigRational],
    delta: &BigRational,
) -> Result<(BigInt, Vec<BigInt>), DiophError> {
    let n = x.len();
    if n == 0 {
        return Err(DiophError::EmptyInput);
    }
    if !delta.is_positive() || *delta >= BigRational::one() {
        return Err(DiophError::BadDelta(delta.clone()));
    }
    let corner = corner_entry(n, delta);
    let mut rows = Vec::with_capacity(n + 1);
    let mut first = Vec::with_capacity(n + 1);
    first.push(corner);
    first.extend(x.iter().cloned());
    rows.push(first);
    for j in 1..=n {
        let mut row = vec![BigRational::zero(); n + 1];
        row[j] = -BigRational::one();
        rows.push(row);
    }
    let basis = Basis::new(rows)?;
    let reduction = lll_reduce(&basis, &ReductionParams::default())?;
    // b and the a_j are the first transform row's coefficients; scan further
    // rows defensively if b = 0 (the proof rules it out).
    for row in &reduction.transform {
        if row[0].is_zero() {
            continue;
        }
        let negate = row[0].is_negative();
        let b = if negate { -row[0].clone() } else { row[0].clone() };
        let a: Vec<BigInt> = row[1..]
            .iter()
            .map(|v| if negate { -v.clone() } else { v.clone() })
            .collect();
        return Ok((b, a));
    }
    Err(DiophError::DegenerateReduction)
}

/// `delta^(n+1) / 2^ceil(n(n+1)/4)`, exactly.
fn corner_entry(n: usize, delta: &BigRational) -> BigRational {
    let mut c = BigRational::one();
    for _ in 0..=n {
        c *= delta;
    }
    let quarter_exp = (n * (n + 1)).div_ceil(4);
    c / BigRational::from_integer(BigInt::one() << quarter_exp)
}

/// The proven bound on `b` for this embedding.
pub fn denominator_bound(n: usize, delta: &BigRational) -> BigRational {
    let quarter_exp = (n * (n + 1)).div_ceil(4);
    let mut d = BigRational::one();
    for _ in 0..n {
        d /= delta;
    }
    d * BigRational::from_integer(BigInt::one() << quarter_exp)
}

/// `Q = min_j 1/|x_j b - a_j|` over the coordinates with nonzero error;
/// exact hits on every coordinate give the infinite sentinel.
///
/// Each `x_j` is trusted to 2 ulps; the error is padded by that slack and
/// the result stored strictly below the padded minimum, so the defining
/// inequality `|x_j - a_j/b| < 1/(bQ)` holds strictly for the true values.
pub fn sda_quality(x: &[HpReal], b: &BigInt, a: &[BigInt]) -> Quality {
    assert_eq!(x.len(), a.len());
    assert!(b.is_positive(), "b must be positive");
    let prec = x.iter().map(|v| v.precision()).max().unwrap_or(64);
    let mut best: Option<BigRational> = None;
    for (xj, aj) in x.iter().zip(a) {
        let err = (xj.to_rational() * BigRational::from_integer(b.clone())
            - BigRational::from_integer(aj.clone()))
        .abs();
        if err.is_zero() {
            continue;
        }
        let slack = xj.ulp().to_rational()
            * BigRational::from_integer(b.clone())
            * BigRational::from_integer(2.into());
        best = Some(match best {
            None => err + slack,
            Some(cur) => cur.max(err + slack),
        });
    }
    match best {
        None => Quality::Infinite,
        Some(max_err) => Quality::Finite(quality_below(&max_err, prec)),
    }
}

/// The largest stored quality certifiably below `1/max_err`.
fn quality_below(max_err: &BigRational, prec: u32) -> HpReal {
    let inv = BigRational::one() / max_err;
    let floor = HpReal::from_rational(&inv, prec, Rounding::Floor);
    let nudge = floor.ulp().scale_pow2(2);
    floor.sub(&nudge, Rounding::Floor)
}

/// Checks the defining inequality `|alpha_j - k_j/q| < 1/(qQ)` for every
/// coordinate, exactly where the expression permits and by certified
/// enclosure otherwise.
///
/// `alphas` are the approximated ratios `w_j/w_1`, parallel to `sda.k`.
pub fn validate_sda(alphas: &[RealExpr], sda: &Sda, precision: u32) -> Result<bool, DiophError> {
    assert_eq!(alphas.len(), sda.k.len());
    let q = &sda.q;
    for (alpha, k) in alphas.iter().zip(&sda.k) {
        let target = BigRational::new(k.clone(), q.clone());
        match (alpha.as_rational(), &sda.quality) {
            (Some(exact), Quality::Infinite) => {
                if exact != target {
                    return Ok(false);
                }
            }
            (Some(exact), Quality::Finite(qual)) => {
                let bound = BigRational::one()
                    / (BigRational::from_integer(q.clone()) * qual.to_rational());
                if (exact - target).abs() >= bound {
                    return Ok(false);
                }
            }
            (None, Quality::Infinite) => return Ok(false),
            (None, Quality::Finite(qual)) => {
                let mut prec = precision;
                loop {
                    let enclosure = alpha.eval_interval(prec)?;
                    let diff = enclosure
                        .sub(&Interval::from_rational(&target, prec))
                        .abs();
                    let bound = BigRational::one()
                        / (BigRational::from_integer(q.clone()) * qual.to_rational());
                    let bound = Interval::from_rational(&bound, prec);
                    if diff.strictly_below(&bound) {
                        break;
                    }
                    if bound.strictly_below(&diff) {
                        return Ok(false);
                    }
                    if prec > precision.saturating_mul(8) {
                        return Err(DiophError::IndeterminateMargin);
                    }
                    prec *= 2;
                }
            }
        }
    }
    Ok(true)
}

/// Convenience form of [`validate_sda`] for callers holding weights as
/// exact dyadic values; the ratio check is then fully exact.
pub fn validate_sda_weights(weights: &[HpReal], sda: &Sda) -> bool {
    assert!(weights.len() >= 2);
    assert_eq!(weights.len() - 1, sda.k.len());
    let w1 = weights[0].to_rational();
    for (wj, k) in weights[1..].iter().zip(&sda.k) {
        let ratio = wj.to_rational() / &w1;
        let target = BigRational::new(k.clone(), sda.q.clone());
        let diff = (ratio - target).abs();
        match &sda.quality {
            Quality::Infinite => {
                if !diff.is_zero() {
                    return false;
                }
            }
            Quality::Finite(qual) => {
                let bound = BigRational::one()
                    / (BigRational::from_integer(sda.q.clone()) * qual.to_rational());
                if diff >= bound {
                    return false;
                }
            }
        }
    }
    true
}

/// Configuration for the approximation stream: the initial `delta`, the
/// number of steps that fixes the step size `delta / n_steps`, and a cap on
/// inner iterations.
#[derive(Clone, Debug)]
pub struct StreamConfig {
    pub delta0: BigRational,
    pub n_steps: u32,
    pub max_iterations: u64,
}

impl StreamConfig {
    pub fn new(delta0: BigRational, n_steps: u32) -> Result<Self, DiophError> {
        if !delta0.is_positive() || delta0 >= BigRational::one() {
            return Err(DiophError::BadDelta(delta0));
        }
        assert!(n_steps >= 1);
        Ok(StreamConfig { delta0, n_steps, max_iterations: 1_000_000 })
    }
}

impl Default for StreamConfig {
    fn default() -> Self {
        StreamConfig {
            delta0: BigRational::new(99.into(), 100.into()),
            n_steps: 99,
            max_iterations: 1_000_000,
        }
    }
}

#[allow(clippy::large_enum_variant)]
enum Coordinate {
    /// Irrational coordinate with a live convergent stream.
    Irrational {
        expr: RealExpr,
        stream: ConvergentStream,
        current: Convergent,
    },
    /// Rational coordinate: its own exact value is the terminal convergent.
    Rational(BigRational),
}

impl Coordinate {
    fn convergent_value(&self) -> BigRational {
        match self {
            Coordinate::Irrational { current, .. } => current.value(),
            Coordinate::Rational(q) => q.clone(),
        }
    }
}

/// Lazily produced sequence of simultaneous Diophantine approximations,
/// following the two-case convergent update loop.
pub struct DioStream {
    coords: Vec<Coordinate>,
    enclosures: Vec<Interval>,
    delta: BigRational,
    delta_step: BigRational,
    iterations: u64,
    max_iterations: u64,
    precision: u32,
    start_precision: u32,
    fast_path: bool,
    fast_scale: BigInt,
    done: bool,
}

impl DioStream {
    /// Opens a stream on the ratios `x`. At least one coordinate must be
    /// irrational.
    pub fn new(x: &[RealExpr], config: &StreamConfig, precision: u32) -> Result<Self, DiophError> {
        if x.is_empty() {
            return Err(DiophError::EmptyInput);
        }
        if !config.delta0.is_positive() || config.delta0 >= BigRational::one() {
            return Err(DiophError::BadDelta(config.delta0.clone()));
        }
        let mut coords = Vec::with_capacity(x.len());
        let mut enclosures = Vec::with_capacity(x.len());
        let mut irrational_count = 0usize;
        let mut fast_scale = BigInt::one();
        for e in x {
            e.validate()?;
            enclosures.push(e.eval_interval(precision)?);
            match e.as_rational() {
                Some(q) => {
                    fast_scale = lcm(&fast_scale, q.denom());
                    coords.push(Coordinate::Rational(q));
                }
                None => {
                    irrational_count += 1;
                    let mut stream = ConvergentStream::new(e, precision)?;
                    let current = stream
                        .next_convergent()?
                        .expect("irrational expansion is infinite");
                    coords.push(Coordinate::Irrational { expr: e.clone(), stream, current });
                }
            }
        }
        assert!(irrational_count >= 1, "at least one coordinate must be irrational");
        let delta_step = &config.delta0 / BigRational::from_integer(config.n_steps.into());
        Ok(DioStream {
            coords,
            enclosures,
            delta: config.delta0.clone(),
            delta_step,
            iterations: 0,
            max_iterations: config.max_iterations,
            precision,
            start_precision: precision,
            fast_path: irrational_count == 1,
            fast_scale,
            done: false,
        })
    }

    /// Produces the next approximation, or `None` when delta underflows.
    pub fn next_sda(&mut self) -> Result<Option<Sda>, DiophError> {
        if self.done {
            return Ok(None);
        }
        if self.fast_path {
            return self.next_fast();
        }
        self.next_lll()
    }

    /// Rank-two fast path: one irrational coordinate, approximations read
    /// straight off its convergents, the rational coordinates rescaled to
    /// the common denominator.
    fn next_fast(&mut self) -> Result<Option<Sda>, DiophError> {
        let scale = self.fast_scale.clone();
        let mut q = BigInt::zero();
        let mut k: Vec<BigInt> = Vec::with_capacity(self.coords.len());
        // First pass gets the denominator from the irrational coordinate.
        for c in &self.coords {
            if let Coordinate::Irrational { current, .. } = c {
                q = &current.b * &scale;
            }
        }
        let mut quality_err: Option<BigRational> = None;
        for (idx, c) in self.coords.iter().enumerate() {
            match c {
                Coordinate::Irrational { current, .. } => {
                    k.push(&current.a * &scale);
                    // Upper bound of |x q - k| over the enclosure of x.
                    let err = self.error_upper_bound(idx, &q, &(&current.a * &scale));
                    quality_err = Some(match quality_err {
                        None => err,
                        Some(cur) => cur.max(err),
                    });
                }
                Coordinate::Rational(r) => {
                    // k_j/q = x_j exactly; q is a multiple of the denominator.
                    let kj = r.numer() * (&q / r.denom());
                    k.push(kj);
                }
            }
        }
        let quality = match quality_err {
            None => Quality::Infinite,
            Some(err) => Quality::Finite(quality_below(&err, self.precision)),
        };
        // Advance the irrational coordinate for the next emission.
        for c in &mut self.coords {
            if let Coordinate::Irrational { stream, current, .. } = c {
                match stream.next_convergent()? {
                    Some(next) => *current = next,
                    None => self.done = true,
                }
            }
        }
        Ok(Some(Sda {
            quality,
            q,
            k,
            delta: None,
            provenance: Provenance::ContinuedFraction,
        }))
    }

    /// Upper bound of `|x_idx * q - k|` over the enclosure of the
    /// coordinate; rational coordinates give an exact value.
    fn error_upper_bound(&self, idx: usize, q: &BigInt, k: &BigInt) -> BigRational {
        if let Coordinate::Rational(r) = &self.coords[idx] {
            return (r * BigRational::from_integer(q.clone())
                - BigRational::from_integer(k.clone()))
            .abs();
        }
        let iv = &self.enclosures[idx];
        let qr = BigRational::from_integer(q.clone());
        let kr = BigRational::from_integer(k.clone());
        let lo = (iv.lo().to_rational() * &qr - &kr).abs();
        let hi = (iv.hi().to_rational() * &qr - &kr).abs();
        lo.max(hi)
    }

    fn next_lll(&mut self) -> Result<Option<Sda>, DiophError> {
        loop {
            if !self.delta.is_positive() {
                self.done = true;
                return Ok(None);
            }
            self.iterations += 1;
            if self.iterations > self.max_iterations {
                return Err(DiophError::Stalled(self.iterations));
            }
            let conv_vector: Vec<BigRational> =
                self.coords.iter().map(|c| c.convergent_value()).collect();
            let (b, a) = lll_dio(&conv_vector, &self.delta)?;
            // Errors: E1(j) = |x_j - conv_j| (enclosure), E2(j) = |a_j/b - conv_j|.
            let mut offenders = Vec::new();
            for (j, c) in self.coords.iter().enumerate() {
                let e2 = (BigRational::new(a[j].clone(), b.clone()) - conv_vector[j].clone()).abs();
                match c {
                    Coordinate::Rational(_) => {
                        // E1 = 0, so E2 >= 2 E1 always holds.
                    }
                    Coordinate::Irrational { .. } => {
                        let e1 = self.error_enclosure(j, &conv_vector[j]);
                        let e2_iv = Interval::from_rational(&e2, self.precision);
                        let twice_e1 = e1.add(&e1);
                        if !twice_e1.strictly_below(&e2_iv) && !e2_iv.strictly_below(&twice_e1) {
                            // Ambiguous margin: tighten the enclosure.
                            self.raise_precision()?;
                            return self.next_lll();
                        }
                        if e2_iv.strictly_below(&twice_e1) {
                            offenders.push(j);
                        }
                    }
                }
            }
            if offenders.is_empty() {
                // Case 1: emit and decrement delta.
                let mut max_err: Option<BigRational> = None;
                for (j, aj) in a.iter().enumerate() {
                    let err = self.error_upper_bound(j, &b, aj);
                    if err.is_zero() {
                        continue;
                    }
                    max_err = Some(match max_err {
                        None => err,
                        Some(cur) => cur.max(err),
                    });
                }
                let quality = match max_err {
                    None => Quality::Infinite,
                    Some(err) => Quality::Finite(quality_below(&err, self.precision)),
                };
                let sda = Sda {
                    quality,
                    q: b,
                    k: a,
                    delta: Some(self.delta.clone()),
                    provenance: Provenance::LllStream,
                };
                self.delta = &self.delta - &self.delta_step;
                return Ok(Some(sda));
            }
            // Case 2: advance every offending coordinate's convergent.
            for j in offenders {
                if let Coordinate::Irrational { stream, current, .. } = &mut self.coords[j] {
                    if let Some(next) = stream.next_convergent()? {
                        *current = next;
                    }
                }
            }
        }
    }

    fn error_enclosure(&self, j: usize, conv: &BigRational) -> Interval {
        self.enclosures[j]
            .sub(&Interval::from_rational(conv, self.precision))
            .abs()
    }

    fn raise_precision(&mut self) -> Result<(), DiophError> {
        let next = self.precision.saturating_mul(2);
        if next > self.start_precision.saturating_mul(64) {
            return Err(DiophError::IndeterminateMargin);
        }
        self.precision = next;
        for (e, c) in self.enclosures.iter_mut().zip(&self.coords) {
            if let Coordinate::Irrational { expr, .. } = c {
                *e = expr.eval_interval(self.precision)?;
            }
        }
        Ok(())
    }
}

fn lcm(a: &BigInt, b: &BigInt) -> BigInt {
    use num_integer::Integer;
    a.lcm(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn table1_first_block() -> Vec<BigRational> {
        vec![rat(1054, 665), rat(1493, 643), rat(6718, 2393)]
    }

    fn table1_third_block() -> Vec<BigRational> {
        vec![rat(50508, 31867), rat(177797, 76573), rat(248027, 88349)]
    }

    fn check_bounds(x: &[BigRational], delta: &BigRational, b: &BigInt, a: &[BigInt]) {
        let delta_over_b = delta / BigRational::from_integer(b.clone());
        for (xj, aj) in x.iter().zip(a) {
            let err = (xj - BigRational::new(aj.clone(), b.clone())).abs();
            assert!(err <= delta_over_b, "|x - a/b| = {err} > delta/b");
        }
        let bound = denominator_bound(x.len(), delta);
        assert!(BigRational::from_integer(b.clone()) <= bound, "b = {b} above bound");
        assert!(b.is_positive());
    }

    #[test]
    fn lll_dio_first_block_delta_tenth() {
        let x = table1_first_block();
        let delta = rat(1, 10);
        let (b, a) = lll_dio(&x, &delta).unwrap();
        check_bounds(&x, &delta, &b, &a);
        assert_eq!(b, BigInt::from(3125));
        assert_eq!(a, vec![BigInt::from(4953), BigInt::from(7256), BigInt::from(8773)]);
    }

    #[test]
    fn lll_dio_first_block_delta_hundredth() {
        let x = table1_first_block();
        let delta = rat(1, 100);
        let (b, a) = lll_dio(&x, &delta).unwrap();
        check_bounds(&x, &delta, &b, &a);
        assert_eq!(b, BigInt::from(2824202));
        assert_eq!(
            a,
            vec![BigInt::from(4476254), BigInt::from(6557595), BigInt::from(7928537)]
        );
    }

    #[test]
    fn lll_dio_third_block() {
        let x = table1_third_block();
        let delta = rat(1, 100);
        let (b, a) = lll_dio(&x, &delta).unwrap();
        check_bounds(&x, &delta, &b, &a);
        assert_eq!(b, BigInt::from(103169));
        assert_eq!(
            a,
            vec![BigInt::from(163519), BigInt::from(239551), BigInt::from(289632)]
        );
    }

    #[test]
    fn lll_dio_single_coordinate_bound_check() {
        let x = vec![rat(1, 2)];
        let delta = rat(1, 2);
        let (b, a) = lll_dio(&x, &delta).unwrap();
        check_bounds(&x, &delta, &b, &a);
    }

    #[test]
    fn lll_dio_rejects_bad_delta() {
        assert!(lll_dio(&[rat(1, 2)], &rat(3, 2)).is_err());
        assert!(lll_dio(&[rat(1, 2)], &rat(0, 1)).is_err());
        assert!(lll_dio(&[], &rat(1, 2)).is_err());
    }

    #[test]
    fn quality_of_published_pairs() {
        // log2(3) with (306, 485).
        let x = RealExpr::log_quotient((3, 1), (2, 1)).eval(192).unwrap();
        let q = sda_quality(&[x], &BigInt::from(306), &[BigInt::from(485)]);
        let v = q.as_finite().unwrap().to_f64();
        assert!((v - 678.06).abs() < 0.01, "Q = {v}");
        // phi with (610, 987).
        let phi = RealExpr::golden_ratio().eval(192).unwrap();
        let q = sda_quality(&[phi], &BigInt::from(610), &[BigInt::from(987)]);
        let v = q.as_finite().unwrap().to_f64();
        assert!((v - 1364.0).abs() < 1.0, "Q = {v}");
        // Exact hit.
        let x = HpReal::from_f64(1.5, 64);
        let q = sda_quality(&[x], &BigInt::from(2), &[BigInt::from(3)]);
        assert!(q.is_infinite());
    }

    #[test]
    fn validate_published_sda() {
        let alphas = vec![RealExpr::log_quotient((3, 1), (2, 1))];
        let q678 = HpReal::from_f64(678.06, 128);
        let sda = Sda {
            quality: Quality::Finite(q678),
            q: 306.into(),
            k: vec![485.into()],
            delta: None,
            provenance: Provenance::ContinuedFraction,
        };
        assert!(validate_sda(&alphas, &sda, 128).unwrap());
        // An overstated quality fails the inequality.
        let sda_bad = Sda {
            quality: Quality::Finite(HpReal::from_f64(1e6, 128)),
            ..sda.clone()
        };
        assert!(!validate_sda(&alphas, &sda_bad, 128).unwrap());
        // Exact lattice data validates for any quality.
        let alphas = vec![RealExpr::integer(2)];
        let exact = Sda {
            quality: Quality::Infinite,
            q: 1.into(),
            k: vec![2.into()],
            delta: None,
            provenance: Provenance::ContinuedFraction,
        };
        assert!(validate_sda(&alphas, &exact, 128).unwrap());
        let finite = Sda {
            quality: Quality::Finite(HpReal::from_f64(1e30, 128)),
            q: 1.into(),
            k: vec![2.into()],
            delta: None,
            provenance: Provenance::ContinuedFraction,
        };
        assert!(validate_sda(&alphas, &finite, 128).unwrap());
    }

    #[test]
    fn fast_path_emits_convergents_of_phi() {
        let x = vec![RealExpr::golden_ratio()];
        let config = StreamConfig::default();
        let mut stream = DioStream::new(&x, &config, 128).unwrap();
        let convs = crate::cfrac::convergents(&RealExpr::golden_ratio(), 12, 64).unwrap();
        for expected in convs.iter().take(10) {
            let sda = stream.next_sda().unwrap().unwrap();
            assert_eq!(sda.q, expected.b);
            assert_eq!(sda.k[0], expected.a);
            assert_eq!(sda.provenance, Provenance::ContinuedFraction);
        }
    }

    #[test]
    fn fast_path_scales_rational_coordinates() {
        // (phi, 3/2): q must absorb the denominator 2.
        let x = vec![RealExpr::golden_ratio(), RealExpr::rational(3, 2)];
        let mut stream = DioStream::new(&x, &StreamConfig::default(), 128).unwrap();
        for _ in 0..6 {
            let sda = stream.next_sda().unwrap().unwrap();
            // k_2/q = 3/2 exactly.
            assert_eq!(
                BigRational::new(sda.k[1].clone(), sda.q.clone()),
                rat(3, 2)
            );
            // The golden coordinate stays a convergent: |phi - k1/q| < 1/q^2
            // after unscaling.
            assert!(validate_sda(&x, &sda, 128).unwrap());
        }
    }

    #[test]
    fn lll_stream_reaches_table_states() {
        // The three-coordinate stream over (log2 3, log2 5, log2 7) must
        // pass through the published approximations with q = 3125 and
        // q = 103169.
        let x = vec![
            RealExpr::log_quotient((3, 1), (2, 1)),
            RealExpr::log_quotient((5, 1), (2, 1)),
            RealExpr::log_quotient((7, 1), (2, 1)),
        ];
        let config = StreamConfig::new(rat(1, 10), 10).unwrap();
        let mut stream = DioStream::new(&x, &config, 128).unwrap();
        let mut seen = Vec::new();
        while let Some(sda) = stream.next_sda().unwrap() {
            assert!(validate_sda(&x, &sda, 128).unwrap());
            seen.push((sda.q.clone(), sda.k.clone()));
            if seen.len() > 16 {
                break;
            }
        }
        let q3125 = seen.iter().any(|(q, k)| {
            *q == BigInt::from(3125)
                && *k == vec![BigInt::from(4953), BigInt::from(7256), BigInt::from(8773)]
        });
        let q103169 = seen.iter().any(|(q, k)| {
            *q == BigInt::from(103169)
                && *k
                    == vec![BigInt::from(163519), BigInt::from(239551), BigInt::from(289632)]
        });
        assert!(q3125, "missing q = 3125 in {seen:?}");
        assert!(q103169, "missing q = 103169 in {seen:?}");
    }

    #[test]
    fn stream_quality_running_maximum_grows() {
        let x = vec![RealExpr::log_quotient((3, 1), (2, 1))];
        let mut stream = DioStream::new(&x, &StreamConfig::default(), 128).unwrap();
        let mut best = 0f64;
        let mut improvements = 0;
        for _ in 0..12 {
            let sda = stream.next_sda().unwrap().unwrap();
            let q = sda.quality.to_f64();
            if q > best {
                best = q;
                improvements += 1;
            }
        }
        assert!(improvements >= 5, "quality failed to grow: {improvements}");
    }
}
