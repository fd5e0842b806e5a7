//! The Dirichlet-polynomial domain model: construction (including from
//! self-similar string data), evaluation, lattice/nonlattice classification,
//! the dimension bounds `D_l <= D` of the root strip, and the stability
//! constant of the lattice approximation theorem.
//!
//! A polynomial `f(s) = 1 - sum_j m_j r_j^s` is stored as a base ratio
//! `r_1` and exponents `alpha_j` with `r_j = r_1^alpha_j`, so the
//! lattice/nonlattice question is exactly the rationality of the alphas.

use crate::numerics::{
    functions, BigInt, BigRational, BigUint, HpComplex, HpReal, Interval, RealExpr, Rounding,
};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

const N: Rounding = Rounding::Nearest;

#[derive(Debug, Error)]
pub enum DirichletError {
    #[error("a Dirichlet polynomial needs at least one term")]
    Empty,
    #[error("the first exponent must be exactly 1")]
    FirstExponentNotOne,
    #[error("exponents must be strictly increasing: position {0}")]
    ExponentsNotIncreasing(usize),
    #[error("base ratio must lie strictly between 0 and 1")]
    BadBaseRatio,
    #[error("multiplicities must be nonzero reals")]
    ZeroMultiplicity,
    #[error("exponent count {alphas} does not match multiplicity count {mults}")]
    LengthMismatch { alphas: usize, mults: usize },
    #[error("rank is undecidable for this exponent mix; declare decimal flags or use a decidable family")]
    UndecidableRank,
    #[error("exponents are numerically indistinguishable at the working precision")]
    IndistinguishableExponents,
    #[error("self-similar constraint violated: {0}")]
    Constraint(String),
    #[error(transparent)]
    Expr(#[from] crate::numerics::ExprError),
}

/// A normalized Dirichlet polynomial `1 - sum m_j r_1^(alpha_j s)`.
#[derive(Clone, Debug)]
pub struct DirichletPolynomial {
    base_ratio: RealExpr,
    alphas: Vec<RealExpr>,
    multiplicities: Vec<BigRational>,
}

impl DirichletPolynomial {
    pub fn new(
        base_ratio: RealExpr,
        alphas: Vec<RealExpr>,
        multiplicities: Vec<BigRational>,
    ) -> Result<Self, DirichletError> {
        if alphas.is_empty() {
            return Err(DirichletError::Empty);
        }
        if alphas.len() != multiplicities.len() {
            return Err(DirichletError::LengthMismatch {
                alphas: alphas.len(),
                mults: multiplicities.len(),
            });
        }
        if multiplicities.iter().any(|m| m.is_zero()) {
            return Err(DirichletError::ZeroMultiplicity);
        }
        base_ratio.validate()?;
        for a in &alphas {
            a.validate()?;
        }
        match alphas[0].as_rational() {
            Some(q) if q.is_one() => {}
            _ => return Err(DirichletError::FirstExponentNotOne),
        }
        // Base ratio strictly inside (0, 1).
        let iv = base_ratio.eval_interval(96)?;
        let zero = Interval::point(HpReal::zero(96));
        let one = Interval::point(HpReal::one(96));
        if !zero.strictly_below(&iv) || !iv.strictly_below(&one) {
            return Err(DirichletError::BadBaseRatio);
        }
        // Exponents strictly increasing.
        for i in 1..alphas.len() {
            match cmp_exprs(&alphas[i - 1], &alphas[i], 128)? {
                Ordering::Less => {}
                _ => return Err(DirichletError::ExponentsNotIncreasing(i)),
            }
        }
        Ok(DirichletPolynomial { base_ratio, alphas, multiplicities })
    }

    /// `1 - m_1 b^(-s) - m_2 b2^(-s) - ...` for explicit integer ratios
    /// `1/b_j`; the common shorthand for the named examples.
    pub fn from_integer_ratios(bases: &[i64], mults: &[(i64, i64)]) -> Result<Self, DirichletError> {
        assert!(!bases.is_empty());
        let r1 = RealExpr::Rational(BigRational::new(1.into(), bases[0].into()));
        let alphas = bases
            .iter()
            .map(|&b| {
                if b == bases[0] {
                    RealExpr::integer(1)
                } else {
                    RealExpr::log_quotient((b, 1), (bases[0], 1))
                }
            })
            .collect();
        let ms = mults
            .iter()
            .map(|&(n, d)| BigRational::new(n.into(), d.into()))
            .collect();
        DirichletPolynomial::new(r1, alphas, ms)
    }

    /// The 2-3 polynomial `1 - 2^-s - 3^-s`.
    pub fn two_three() -> Self {
        Self::from_integer_ratios(&[2, 3], &[(1, 1), (1, 1)]).unwrap()
    }

    /// The golden polynomial `1 - 2^-s - 2^(-phi s)`.
    pub fn golden() -> Self {
        DirichletPolynomial::new(
            RealExpr::rational(1, 2),
            vec![RealExpr::integer(1), RealExpr::golden_ratio()],
            vec![BigRational::one(), BigRational::one()],
        )
        .unwrap()
    }

    pub fn n(&self) -> usize {
        self.alphas.len()
    }

    pub fn base_ratio(&self) -> &RealExpr {
        &self.base_ratio
    }

    pub fn alphas(&self) -> &[RealExpr] {
        &self.alphas
    }

    pub fn multiplicities(&self) -> &[BigRational] {
        &self.multiplicities
    }

    pub fn multiplicities_hp(&self, prec: u32) -> Vec<HpReal> {
        self.multiplicities
            .iter()
            .map(|m| HpReal::from_rational(m, prec, N))
            .collect()
    }

    /// `w_1 = -log r_1` at the requested precision.
    pub fn base_weight(&self, prec: u32) -> HpReal {
        let r1 = self.base_ratio.eval(prec + 16).expect("validated base ratio");
        functions::ln(&r1, prec).neg()
    }

    /// Weights `w_j = alpha_j * w_1`, strictly increasing and positive.
    pub fn weights(&self, prec: u32) -> Vec<HpReal> {
        let w1 = self.base_weight(prec + 16);
        self.alphas
            .iter()
            .map(|a| {
                let av = a.eval(prec + 16).expect("validated exponent");
                av.mul(&w1, N).with_precision(prec, N)
            })
            .collect()
    }

    /// Evaluates `f(s) = 1 - sum m_j exp(-w_j s)`.
    pub fn evaluate(&self, s: &HpComplex) -> HpComplex {
        self.eval_with_terms(s).0
    }

    /// Analytic derivative `f'(s) = sum m_j w_j exp(-w_j s)`.
    pub fn derivative(&self, s: &HpComplex) -> HpComplex {
        self.eval_with_terms(s).1
    }

    /// Value and derivative sharing the exponential terms.
    pub fn value_and_derivative(&self, s: &HpComplex) -> (HpComplex, HpComplex) {
        self.eval_with_terms(s)
    }

    fn eval_with_terms(&self, s: &HpComplex) -> (HpComplex, HpComplex) {
        let prec = s.precision().max(64) + 16;
        let weights = self.weights(prec);
        let mults = self.multiplicities_hp(prec);
        let mut value = HpComplex::one(prec);
        let mut deriv = HpComplex::zero(prec);
        for (w, m) in weights.iter().zip(&mults) {
            let exponent = HpComplex::new(w.neg().mul(&s.re, N), w.neg().mul(&s.im, N));
            let term = exponent.exp(prec);
            let scaled = term.mul_real(m);
            value = value.sub(&scaled);
            deriv = deriv.add(&scaled.mul_real(w));
        }
        let out_prec = s.precision().max(64);
        (value.with_precision(out_prec), deriv.with_precision(out_prec))
    }
}

/// Lattice generator `base^(1/root)`.
#[derive(Clone, Debug)]
pub struct Generator {
    pub base: RealExpr,
    pub root: BigInt,
}

impl Generator {
    pub fn eval(&self, prec: u32) -> HpReal {
        let b = self.base.eval(prec + 16).expect("validated base");
        let exponent = HpReal::one(prec + 16).div(
            &HpReal::from_bigint(self.root.clone(), prec + 16),
            N,
        );
        functions::pow(&b, &exponent, prec)
    }
}

/// Lattice/nonlattice classification data.
#[derive(Clone, Debug)]
#[allow(clippy::large_enum_variant)]
pub enum Classification {
    /// All exponents rational: `r_j = generator^(k_j)` with `k_1 = q`.
    Lattice { generator: Generator, q: BigInt, k: Vec<BigInt> },
    /// At least one exponent irrational.
    Nonlattice { rank: u32, generic: bool },
}

impl Classification {
    pub fn is_lattice(&self) -> bool {
        matches!(self, Classification::Lattice { .. })
    }
}

/// Decides lattice versus nonlattice, with exact rank where the exponent
/// family permits it.
pub fn classify(f: &DirichletPolynomial) -> Result<Classification, DirichletError> {
    let rationals: Vec<Option<BigRational>> = f.alphas().iter().map(|a| a.as_rational()).collect();
    if rationals.iter().all(|r| r.is_some()) {
        // Lattice: q is the lcm of the exponent denominators; k_j = alpha_j q.
        let mut q = BigInt::one();
        for r in rationals.iter().flatten() {
            q = q.lcm(r.denom());
        }
        let k: Vec<BigInt> = rationals
            .iter()
            .flatten()
            .map(|r| (r * BigRational::from_integer(q.clone())).to_integer())
            .collect();
        debug_assert_eq!(k[0], q);
        return Ok(Classification::Lattice {
            generator: Generator { base: f.base_ratio().clone(), root: q.clone() },
            q,
            k,
        });
    }
    let rank = exponent_rank(f.alphas())?;
    let generic = rank as usize == f.n();
    Ok(Classification::Nonlattice { rank, generic })
}

/// Rational rank of the span of the exponents over the decidable families:
/// all-rational, quadratics over one common radicand, log quotients over
/// multiplicatively dependent bases, or a single opaque irrational among
/// rationals.
fn exponent_rank(alphas: &[RealExpr]) -> Result<u32, DirichletError> {
    let mut quad_d: Option<BigInt> = None;
    let mut quads = 0usize;
    let mut logs = 0usize;
    let mut opaques = 0usize;
    for a in alphas {
        if a.as_rational().is_some() {
            continue;
        }
        match a {
            RealExpr::Quadratic { d, .. } => {
                match &quad_d {
                    None => quad_d = Some(d.clone()),
                    Some(existing) if existing == d => {}
                    Some(_) => return Err(DirichletError::UndecidableRank),
                }
                quads += 1;
            }
            RealExpr::LogQuotient { .. } => logs += 1,
            RealExpr::Decimal { .. } => opaques += 1,
            RealExpr::Rational(_) => unreachable!(),
        }
    }
    if [quads > 0, logs > 0, opaques > 0].iter().filter(|&&x| x).count() > 1 {
        return Err(DirichletError::UndecidableRank);
    }
    if opaques > 0 {
        return if opaques == 1 {
            Ok(2)
        } else {
            Err(DirichletError::UndecidableRank)
        };
    }
    if quads > 0 {
        // Span of {1, u_j + v_j sqrt(d)} is Q + Q sqrt(d): rank 2.
        return Ok(2);
    }
    // Log-quotient family: express every exponent as a rational vector over
    // the primes of the log arguments, relative to a common base.
    let reference = alphas
        .iter()
        .find_map(|a| match a {
            RealExpr::LogQuotient { b, .. } if a.as_rational().is_none() => Some(b.clone()),
            _ => None,
        })
        .expect("at least one irrational log quotient");
    let ref_vec = prime_vector(&reference);
    let mut rows: Vec<BTreeMap<BigUint, BigRational>> = Vec::new();
    for a in alphas {
        match a.as_rational() {
            Some(r) => {
                // alpha = r = r * (ln B / ln B): vector r * e(B).
                rows.push(scale_vector(&ref_vec, &r));
            }
            None => {
                let (c, b) = match a {
                    RealExpr::LogQuotient { c, b } => (c, b),
                    _ => unreachable!(),
                };
                // ln(B)/ln(b_j) must be rational for a decidable answer.
                let ratio = RealExpr::LogQuotient { c: reference.clone(), b: b.clone() }
                    .as_rational()
                    .ok_or(DirichletError::UndecidableRank)?;
                // alpha_j = (ln c / ln b_j) = (ln c / ln B) * ratio.
                rows.push(scale_vector(&prime_vector(c), &ratio));
            }
        }
    }
    Ok(matrix_rank(&rows))
}

fn prime_vector(q: &BigRational) -> BTreeMap<BigUint, BigRational> {
    crate::numerics::expr::factor_rational(q)
        .into_iter()
        .map(|(p, e)| (p, BigRational::from_integer(e.into())))
        .collect()
}

fn scale_vector(
    v: &BTreeMap<BigUint, BigRational>,
    s: &BigRational,
) -> BTreeMap<BigUint, BigRational> {
    if s.is_zero() {
        return BTreeMap::new();
    }
    v.iter().map(|(p, e)| (p.clone(), e * s)).collect()
}

fn matrix_rank(rows: &[BTreeMap<BigUint, BigRational>]) -> u32 {
    let primes: BTreeSet<BigUint> = rows.iter().flat_map(|r| r.keys().cloned()).collect();
    let cols: Vec<BigUint> = primes.into_iter().collect();
    let mut m: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| cols.iter().map(|p| r.get(p).cloned().unwrap_or_else(BigRational::zero)).collect())
        .collect();
    let mut rank = 0usize;
    let mut row = 0usize;
    for col in 0..cols.len() {
        let pivot = match (row..m.len()).find(|&r| !m[r][col].is_zero()) {
            Some(p) => p,
            None => continue,
        };
        m.swap(row, pivot);
        let pv = m[row][col].clone();
        for r in 0..m.len() {
            if r != row && !m[r][col].is_zero() {
                let factor = &m[r][col] / &pv;
                let top = m[row].clone();
                for (dst, src) in m[r].iter_mut().zip(&top) {
                    *dst -= &factor * src;
                }
            }
        }
        rank += 1;
        row += 1;
        if row == m.len() {
            break;
        }
    }
    rank as u32
}

/// The real numbers `D_l <= D` bounding the vertical strip that contains
/// every root, each solved by certified bisection.
#[derive(Clone, Debug)]
pub struct DimensionBounds {
    pub d_lower: HpReal,
    pub d: HpReal,
    pub enclosure_width: HpReal,
}

/// Solves `sum |m_j| r_j^D = 1` and the companion equation for `D_l`.
pub fn dimension_bounds(f: &DirichletPolynomial, prec: u32) -> DimensionBounds {
    let wp = prec + 32;
    let weights = f.weights(wp);
    let abs_mults: Vec<HpReal> = f
        .multiplicities()
        .iter()
        .map(|m| HpReal::from_rational(&m.abs(), wp, N))
        .collect();
    // g(x) = sum |m_j| exp(-w_j x) - 1, strictly decreasing.
    let g = |x: &HpReal| -> HpReal {
        let mut acc = HpReal::from_i64(-1, wp);
        for (w, m) in weights.iter().zip(&abs_mults) {
            let term = functions::exp(&w.neg().mul(x, N), wp).mul(m, N);
            acc = acc.add(&term, N);
        }
        acc
    };
    let d = bisect_decreasing(&g, wp, prec);
    // h(x) = exp(w_N x) + sum_{j<N} |m_j| exp((w_N - w_j) x) - |m_N|,
    // strictly increasing: its root is D_l.
    let n = f.n();
    let w_n = weights[n - 1].clone();
    let h = |x: &HpReal| -> HpReal {
        let mut acc = functions::exp(&w_n.mul(x, N), wp);
        for j in 0..n - 1 {
            let gap = w_n.sub(&weights[j], N);
            acc = acc.add(&functions::exp(&gap.mul(x, N), wp).mul(&abs_mults[j], N), N);
        }
        acc.sub(&abs_mults[n - 1], N)
    };
    let neg_h = |x: &HpReal| h(x).neg();
    let d_lower = bisect_decreasing(&neg_h, wp, prec);
    let width = HpReal::from_mantissa_exp(BigInt::one(), -(prec as i64 / 2), prec, N);
    DimensionBounds {
        d_lower: d_lower.with_precision(prec, N),
        d: d.with_precision(prec, N),
        enclosure_width: width,
    }
}

/// Bisection for the unique zero of a strictly decreasing function, with
/// geometric bracket expansion. The final bracket width is below
/// `2^(-prec/2)`.
fn bisect_decreasing(g: &dyn Fn(&HpReal) -> HpReal, wp: u32, prec: u32) -> HpReal {
    let mut lo = HpReal::from_i64(-1, wp);
    let mut hi = HpReal::from_i64(1, wp);
    while !g(&lo).is_positive() {
        lo = lo.scale_pow2(1);
        assert!(lo.exponent_of_msb() < 64, "bracket expansion ran away");
    }
    while !g(&hi).is_negative() {
        hi = hi.scale_pow2(1);
        assert!(hi.exponent_of_msb() < 64, "bracket expansion ran away");
    }
    let target = -(prec as i64 / 2) - 2;
    loop {
        let width = hi.sub(&lo, N);
        if width.is_zero() || width.exponent_of_msb() < target {
            break;
        }
        let mid = lo.add(&hi, N).scale_pow2(-1);
        if g(&mid).is_negative() {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    lo.add(&hi, N).scale_pow2(-1)
}

/// The stability constant
/// `C = (1/2pi) S1 (S0 / min(1, |m_N|))^(-2 w_N / min(w_1, w_N - w_{N-1}))`
/// with `S1 = sum |m_j|` and `S0 = 1 + S1`.
pub fn lsa_constant(f: &DirichletPolynomial, prec: u32) -> HpReal {
    let wp = prec + 48;
    let weights = f.weights(wp);
    let n = f.n();
    let s1: BigRational = f.multiplicities().iter().map(|m| m.abs()).sum();
    let s0 = &s1 + BigRational::one();
    let m_n = f.multiplicities()[n - 1].abs();
    let denom = if m_n < BigRational::one() { m_n } else { BigRational::one() };
    let base = HpReal::from_rational(&(s0 / denom), wp, N);
    let w_n = &weights[n - 1];
    let gap = if n >= 2 {
        let last_gap = w_n.sub(&weights[n - 2], N);
        if last_gap < weights[0] { last_gap } else { weights[0].clone() }
    } else {
        weights[0].clone()
    };
    let exponent = w_n.scale_pow2(1).neg().div(&gap, N);
    let power = functions::pow(&base, &exponent, wp);
    let two_pi = functions::pi(wp).scale_pow2(1);
    HpReal::from_rational(&s1, wp, N)
        .mul(&power, N)
        .div(&two_pi, N)
        .with_precision(prec, N)
}

/// The same constant through the closed form for polynomials of the special
/// shape `1 - m_1 r^s - ... - m_{N-1} r^(a_{N-1} s) - r^(a_N s)`:
/// `C = ((xi+1)/2pi) (1/(xi+2)^2)^(a_N / min(1, a_N - a_{N-1}))`.
pub fn lsa_constant_type1(
    xi: &HpReal,
    alpha_nm1: &HpReal,
    alpha_n: &HpReal,
    prec: u32,
) -> HpReal {
    let wp = prec + 48;
    let one = HpReal::one(wp);
    let xi = xi.with_precision(wp, N);
    let base = one.div(
        &xi.add(&HpReal::from_i64(2, wp), N).pow_u64(2, N),
        N,
    );
    let gap = alpha_n.sub(alpha_nm1, N);
    let denom = if gap < one { gap } else { one.clone() };
    let exponent = alpha_n.div(&denom, N).with_precision(wp, N);
    let power = functions::pow(&base, &exponent, wp);
    let two_pi = functions::pi(wp).scale_pow2(1);
    xi.add(&one, N).mul(&power, N).div(&two_pi, N).with_precision(prec, N)
}

/// Geometric zeta function data of a self-similar string: numerator gaps,
/// total length, and the Dirichlet polynomial in the denominator.
#[derive(Clone, Debug)]
pub struct GeometricZeta {
    pub gaps: Vec<(BigRational, u32)>,
    pub length: BigRational,
    pub denominator: DirichletPolynomial,
    pub single_gap: bool,
}

/// Builds the geometric zeta function from scaling ratios (with
/// multiplicities), gaps and total length, enforcing
/// `sum m_j r_j + sum g_k = 1` exactly.
pub fn from_self_similar_string(
    ratios: &[(BigRational, u32)],
    gaps: &[(BigRational, u32)],
    length: BigRational,
) -> Result<GeometricZeta, DirichletError> {
    if ratios.is_empty() || gaps.is_empty() {
        return Err(DirichletError::Constraint("need at least one ratio and one gap".into()));
    }
    if !length.is_positive() {
        return Err(DirichletError::Constraint("length must be positive".into()));
    }
    let in_unit = |x: &BigRational| x.is_positive() && *x < BigRational::one();
    for (r, m) in ratios {
        if !in_unit(r) || *m == 0 {
            return Err(DirichletError::Constraint(format!("ratio {r} outside (0,1) or zero multiplicity")));
        }
    }
    for (g, m) in gaps {
        if !in_unit(g) || *m == 0 {
            return Err(DirichletError::Constraint(format!("gap {g} outside (0,1) or zero multiplicity")));
        }
    }
    let ratio_sum: BigRational = ratios
        .iter()
        .map(|(r, m)| r * BigRational::from_integer((*m).into()))
        .sum();
    let gap_sum: BigRational = gaps
        .iter()
        .map(|(g, m)| g * BigRational::from_integer((*m).into()))
        .sum();
    if &ratio_sum + &gap_sum != BigRational::one() {
        return Err(DirichletError::Constraint(format!(
            "sum of ratios and gaps is {}, not 1",
            ratio_sum + gap_sum
        )));
    }
    if ratio_sum >= BigRational::one() {
        return Err(DirichletError::Constraint("ratios must sum below 1".into()));
    }
    // Sort ratios descending; the largest is the base ratio.
    let mut sorted = ratios.to_vec();
    sorted.sort_by(|a, b| b.0.cmp(&a.0));
    for w in sorted.windows(2) {
        if w[0].0 == w[1].0 {
            return Err(DirichletError::Constraint("duplicate scaling ratio; merge multiplicities".into()));
        }
    }
    let r1 = sorted[0].0.clone();
    let alphas: Vec<RealExpr> = sorted
        .iter()
        .enumerate()
        .map(|(i, (r, _))| {
            if i == 0 {
                RealExpr::integer(1)
            } else {
                RealExpr::LogQuotient { c: r.clone(), b: r1.clone() }
            }
        })
        .collect();
    let mults: Vec<BigRational> = sorted
        .iter()
        .map(|(_, m)| BigRational::from_integer((*m).into()))
        .collect();
    let denominator = DirichletPolynomial::new(RealExpr::Rational(r1), alphas, mults)?;
    let single_gap = gaps.iter().map(|(g, _)| g).collect::<BTreeSet<_>>().len() == 1;
    let mut gaps = gaps.to_vec();
    gaps.sort_by(|a, b| b.0.cmp(&a.0));
    Ok(GeometricZeta { gaps, length, denominator, single_gap })
}

/// Certified comparison of two expression values, escalating precision; an
/// undecidable comparison of structurally different expressions errors out.
fn cmp_exprs(a: &RealExpr, b: &RealExpr, prec: u32) -> Result<Ordering, DirichletError> {
    if a == b {
        return Ok(Ordering::Equal);
    }
    if let (Some(x), Some(y)) = (a.as_rational(), b.as_rational()) {
        return Ok(x.cmp(&y));
    }
    let mut p = prec;
    loop {
        let ia = a.eval_interval(p)?;
        let ib = b.eval_interval(p)?;
        if ia.strictly_below(&ib) {
            return Ok(Ordering::Less);
        }
        if ib.strictly_below(&ia) {
            return Ok(Ordering::Greater);
        }
        if p > prec.saturating_mul(64) {
            return Err(DirichletError::IndistinguishableExponents);
        }
        p *= 2;
    }
}
