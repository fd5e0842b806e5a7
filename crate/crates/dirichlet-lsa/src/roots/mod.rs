//! Lattice-case root computation: the sparse polynomial `g(z)` of a lattice
//! Dirichlet polynomial, its multiprecision roots with certified residuals,
//! and the mapping back to complex dimensions with periodic replication.

mod solver;

pub use solver::{solve_sparse, solve_sparse_with_report, SolveReport};

use crate::dirichlet::{classify, Classification, DirichletPolynomial, Generator};
use crate::numerics::{functions, BigInt, BigRational, HpComplex, HpReal, RealExpr, Rounding};
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

const N: Rounding = Rounding::Nearest;

#[derive(Debug, Error)]
pub enum RootsError {
    #[error("polynomial is nonlattice; only lattice polynomials convert to g(z)")]
    NonlatticeInput,
    #[error("sparse polynomial is malformed: {0}")]
    BadPolynomial(String),
    #[error("solver did not converge for {unconverged} of {total} roots at {precision} bits")]
    Nonconvergence { unconverged: usize, total: usize, precision: u32 },
    #[error("a z-plane root at zero cannot be mapped to the s-plane")]
    ZeroRoot,
    #[error(transparent)]
    Dirichlet(#[from] crate::dirichlet::DirichletError),
}

/// A sparse polynomial `1 + sum c_t z^(e_t)` with strictly increasing
/// exponents, constant term one, and exact rational coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct SparsePoly {
    terms: Vec<(u64, BigRational)>,
}

impl SparsePoly {
    pub fn new(terms: Vec<(u64, BigRational)>) -> Result<Self, RootsError> {
        if terms.is_empty() {
            return Err(RootsError::BadPolynomial("no terms".into()));
        }
        if terms[0] != (0, BigRational::one()) {
            return Err(RootsError::BadPolynomial("constant term must be 1".into()));
        }
        for w in terms.windows(2) {
            if w[1].0 <= w[0].0 {
                return Err(RootsError::BadPolynomial("exponents must strictly increase".into()));
            }
        }
        if terms.len() < 2 {
            return Err(RootsError::BadPolynomial("degree must be at least 1".into()));
        }
        if terms.last().unwrap().1.is_zero() {
            return Err(RootsError::BadPolynomial("leading coefficient is zero".into()));
        }
        Ok(SparsePoly { terms })
    }

    pub fn degree(&self) -> u64 {
        self.terms.last().unwrap().0
    }

    pub fn terms(&self) -> &[(u64, BigRational)] {
        &self.terms
    }

    /// Value and derivative by sparse Horner: one binary powering per
    /// exponent gap.
    pub fn eval_hp(&self, z: &HpComplex) -> (HpComplex, HpComplex) {
        let prec = z.precision();
        let mut value = HpComplex::zero(prec);
        let mut deriv = HpComplex::zero(prec);
        let mut prev_exp: Option<u64> = None;
        for (e, c) in self.terms.iter().rev() {
            if let Some(pe) = prev_exp {
                let gap = pe - e;
                // (v, v') -> (v z^g + c, v' z^g + v g z^(g-1)).
                let zg1 = z.pow_u64(gap - 1);
                let zg = zg1.mul(z);
                let dv = deriv.mul(&zg);
                let carry = value.mul(&zg1).mul_real(&HpReal::from_bigint(gap.into(), prec));
                deriv = dv.add(&carry);
                value = value.mul(&zg);
            }
            let coeff = HpReal::from_rational(c, prec, N);
            value.re = value.re.add(&coeff, N);
            prev_exp = Some(*e);
        }
        // Final multiply by z^(e_0) with e_0 = 0: nothing to do.
        (value, deriv)
    }

    /// `sum |c_t| |z|^(e_t)`: the scale of the backward-residual bound.
    pub fn coefficient_scale(&self, z_abs: &HpReal) -> HpReal {
        let prec = z_abs.precision();
        let mut acc = HpReal::zero(prec);
        for (e, c) in &self.terms {
            let p = z_abs.pow_u64(*e, N);
            acc = acc.add(&p.mul(&HpReal::from_rational(&c.abs(), prec, N), N), N);
        }
        acc
    }

    /// f64 coefficient view for the hardware solver phase.
    pub(crate) fn terms_f64(&self) -> Vec<(u64, Complex64)> {
        self.terms
            .iter()
            .map(|(e, c)| (*e, Complex64::new(c.to_f64().unwrap_or(0.0), 0.0)))
            .collect()
    }
}

/// Which plane a root set lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Domain {
    ZPlane,
    SPlane,
}

/// One computed root with its certified relative backward residual.
#[derive(Clone, Debug)]
pub struct RootEntry {
    pub value: HpComplex,
    pub residual: HpReal,
    pub multiplicity: u32,
}

/// Roots of a polynomial (z-plane) or complex dimensions (s-plane), sorted
/// by imaginary part then real part.
#[derive(Clone, Debug)]
pub struct RootSet {
    pub roots: Vec<RootEntry>,
    pub domain: Domain,
}

impl RootSet {
    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn count_with_multiplicity(&self) -> u64 {
        self.roots.iter().map(|r| r.multiplicity as u64).sum()
    }

    pub(crate) fn sort(&mut self) {
        self.roots.sort_by(|a, b| {
            a.value
                .im
                .cmp_value(&b.value.im)
                .then_with(|| a.value.re.cmp_value(&b.value.re))
        });
    }
}

/// Rewrites a lattice Dirichlet polynomial as the sparse polynomial
/// `g(z) = 1 - m_1 z^q - sum m_j z^(k_j)` in `z = r^s`, `r = r_1^(1/q)`.
pub fn to_sparse_poly(
    f: &DirichletPolynomial,
) -> Result<(SparsePoly, Generator), RootsError> {
    let (generator, _q, k) = match classify(f)? {
        Classification::Lattice { generator, q, k } => (generator, q, k),
        Classification::Nonlattice { .. } => return Err(RootsError::NonlatticeInput),
    };
    let mut terms = vec![(0u64, BigRational::one())];
    for (kj, m) in k.iter().zip(f.multiplicities()) {
        let e = kj.to_u64().ok_or_else(|| {
            RootsError::BadPolynomial(format!("exponent {kj} exceeds the supported degree"))
        })?;
        terms.push((e, -m.clone()));
    }
    Ok((SparsePoly::new(terms)?, generator))
}

/// The oscillatory period `2 pi q / log(1/r_1)`.
pub fn oscillatory_period(r1: &RealExpr, q: u64, prec: u32) -> HpReal {
    let wp = prec + 16;
    let r = r1.eval(wp).expect("validated ratio");
    let log_inv = functions::ln(&r, wp).neg();
    functions::pi(wp)
        .scale_pow2(1)
        .mul(&HpReal::from_bigint(q.into(), wp), N)
        .div(&log_inv, N)
        .with_precision(prec, N)
}

/// Maps z-plane roots to complex dimensions `w = (-log|z| - i arg z) / log(1/r)`
/// and replicates each by the oscillatory period up to `|Im| <= strip_height`.
pub fn roots_to_dimensions(
    zroots: &RootSet,
    generator: &Generator,
    strip_height: &HpReal,
) -> Result<RootSet, RootsError> {
    assert_eq!(zroots.domain, Domain::ZPlane, "input must be z-plane roots");
    assert!(strip_height.is_positive(), "strip height must be positive");
    let prec = zroots
        .roots
        .iter()
        .map(|r| r.value.precision())
        .max()
        .unwrap_or(64)
        .max(64);
    let wp = prec + 16;
    // log(1/r) = -log(r_1)/q; period p = 2 pi / log(1/r).
    let base = generator.base.eval(wp).expect("validated base");
    let q = HpReal::from_bigint(generator.root.clone(), wp);
    let log_inv = functions::ln(&base, wp).neg().div(&q, N);
    let period = functions::pi(wp).scale_pow2(1).div(&log_inv, N);
    let mut out = Vec::new();
    for entry in &zroots.roots {
        if entry.value.is_zero() {
            return Err(RootsError::ZeroRoot);
        }
        let modulus_sq = entry.value.norm_sqr().with_precision(wp, N);
        // -log|z| = -(1/2) log(|z|^2).
        let re = functions::ln(&modulus_sq, wp).scale_pow2(-1).neg().div(&log_inv, N);
        let theta = entry.value.arg(wp);
        let im0 = theta.neg().div(&log_inv, N);
        // n range with |im0 + n p| <= strip_height.
        let lo = strip_height.neg().sub(&im0, N).div(&period, N).ceil_bigint();
        let hi = strip_height.sub(&im0, N).div(&period, N).floor_bigint();
        let mut n = lo;
        while n <= hi {
            let shift = period.mul_bigint(&n, N);
            out.push(RootEntry {
                value: HpComplex::new(
                    re.with_precision(prec, N),
                    im0.add(&shift, N).with_precision(prec, N),
                ),
                residual: entry.residual.clone(),
                multiplicity: entry.multiplicity,
            });
            n += BigInt::one();
        }
    }
    let mut set = RootSet { roots: out, domain: Domain::SPlane };
    set.sort();
    Ok(set)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::BigRational;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn lattice_poly(alpha_num: i64, alpha_den: i64) -> DirichletPolynomial {
        DirichletPolynomial::new(
            RealExpr::rational(1, 2),
            vec![RealExpr::integer(1), RealExpr::rational(alpha_num, alpha_den)],
            vec![rat(1, 1), rat(1, 1)],
        )
        .unwrap()
    }

    #[test]
    fn quadratic_sparse_conversion() {
        // 1 - 2^-s - 4^-s -> 1 - z - z^2 with r = 1/2.
        let f = lattice_poly(2, 1);
        let (g, gen) = to_sparse_poly(&f).unwrap();
        assert_eq!(g.degree(), 2);
        assert_eq!(
            g.terms(),
            &[(0, rat(1, 1)), (1, rat(-1, 1)), (2, rat(-1, 1))]
        );
        assert_eq!(gen.root, BigInt::one());
        assert!((gen.eval(64).to_f64() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn f53_sparse_conversion() {
        // f_53 for the 2-3 polynomial: exponents (1, 84/53).
        let f = lattice_poly(84, 53);
        let (g, gen) = to_sparse_poly(&f).unwrap();
        assert_eq!(g.degree(), 84);
        assert_eq!(
            g.terms(),
            &[(0, rat(1, 1)), (53, rat(-1, 1)), (84, rat(-1, 1))]
        );
        assert_eq!(gen.root, BigInt::from(53));
        // r = 2^(-1/53).
        let r = gen.eval(96).to_f64();
        assert!((r - (2f64).powf(-1.0 / 53.0)).abs() < 1e-14);
    }

    #[test]
    fn nonlattice_rejected() {
        let f = DirichletPolynomial::two_three();
        assert!(matches!(to_sparse_poly(&f), Err(RootsError::NonlatticeInput)));
    }

    #[test]
    fn published_periods() {
        let half = RealExpr::rational(1, 2);
        for (q, printed) in [(53u64, "480.43"), (306, "2773.8"), (610, "5529.48"), (2584, "23423.2")] {
            let p = oscillatory_period(&half, q, 128);
            assert!(
                crate::numerics::format::matches_printed(&p, printed),
                "period for q={q} is {} not {printed}",
                p.to_f64()
            );
        }
        let third = RealExpr::rational(1, 3);
        let p = oscillatory_period(&third, 233, 128);
        assert!(crate::numerics::format::matches_printed(&p, "1332.57"));
    }

    #[test]
    fn unit_period_ratio() {
        // r_1 = e^(-2 pi) gives period exactly 1; a 40-digit literal gets
        // within 1e-35 of it.
        let r1 = RealExpr::Decimal {
            literal: "0.001867442731707988814430212934538234764458".into(),
            irrational: true,
        };
        let p = oscillatory_period(&r1, 1, 192);
        assert!((p.to_f64() - 1.0).abs() < 1e-35);
    }

    #[test]
    fn map_unit_root_to_origin() {
        let one = RootSet {
            roots: vec![RootEntry {
                value: HpComplex::from_f64s(1.0, 0.0, 128),
                residual: HpReal::zero(128),
                multiplicity: 1,
            }],
            domain: Domain::ZPlane,
        };
        let gen = Generator { base: RealExpr::rational(1, 2), root: BigInt::one() };
        let h = HpReal::from_f64(1.0, 128);
        let mapped = roots_to_dimensions(&one, &gen, &h).unwrap();
        // omega = 0, replicated at 0 only (period > 2).
        assert_eq!(mapped.len(), 1);
        assert!(mapped.roots[0].value.abs().to_f64() < 1e-30);
    }

    #[test]
    fn replication_count_matches_prediction() {
        // g = 1 - 2z for f = 1 - 2*2^-s: root z = 1/2 -> omega = 1,
        // replicas 1 + i n p with p = 2 pi / ln 2.
        let root = RootSet {
            roots: vec![RootEntry {
                value: HpComplex::from_f64s(0.5, 0.0, 128),
                residual: HpReal::zero(128),
                multiplicity: 1,
            }],
            domain: Domain::ZPlane,
        };
        let gen = Generator { base: RealExpr::rational(1, 2), root: BigInt::one() };
        let t = 20.0;
        let mapped =
            roots_to_dimensions(&root, &gen, &HpReal::from_f64(t, 128)).unwrap();
        let p = 2.0 * std::f64::consts::PI / std::f64::consts::LN_2;
        let expected = 2 * (t / p).floor() as usize + 1;
        assert_eq!(mapped.len(), expected);
        for e in &mapped.roots {
            assert!((e.value.re.to_f64() - 1.0).abs() < 1e-25);
            assert!(e.value.im.to_f64().abs() <= t);
        }
        // Sorted by imaginary part.
        for w in mapped.roots.windows(2) {
            assert!(w[0].value.im <= w[1].value.im);
        }
    }

    #[test]
    fn mapped_roots_stay_in_the_strip() {
        // Every complex dimension of f_53 lies in [D_l, D] horizontally.
        let f = lattice_poly(84, 53);
        let (g, gen) = to_sparse_poly(&f).unwrap();
        let tol = HpReal::from_mantissa_exp(1.into(), -64, 128, crate::numerics::Rounding::Nearest);
        let zroots = crate::roots::solve_sparse(&g, &tol, 128).unwrap();
        let strip = oscillatory_period(f.base_ratio(), 53, 128);
        let mapped = roots_to_dimensions(&zroots, &gen, &strip).unwrap();
        let bounds = crate::dirichlet::dimension_bounds(&f, 96);
        for r in &mapped.roots {
            let re = r.value.re.to_f64();
            assert!(re >= bounds.d_lower.to_f64() - 1e-15, "root left of D_l: {re}");
            assert!(re <= bounds.d.to_f64() + 1e-15, "root right of D: {re}");
        }
    }

    #[test]
    fn zero_root_rejected() {
        let zero = RootSet {
            roots: vec![RootEntry {
                value: HpComplex::zero(64),
                residual: HpReal::zero(64),
                multiplicity: 1,
            }],
            domain: Domain::ZPlane,
        };
        let gen = Generator { base: RealExpr::rational(1, 2), root: BigInt::one() };
        assert!(matches!(
            roots_to_dimensions(&zero, &gen, &HpReal::from_f64(1.0, 64)),
            Err(RootsError::ZeroRoot)
        ));
    }

    #[test]
    fn sparse_eval_against_dense() {
        // 1 - z^3 - z^7 at a handful of points, against naive powering.
        let g = SparsePoly::new(vec![(0, rat(1, 1)), (3, rat(-1, 1)), (7, rat(-1, 1))]).unwrap();
        for (re, im) in [(0.3, 0.4), (-1.1, 0.2), (0.0, 1.0), (0.9, -0.9)] {
            let z = HpComplex::from_f64s(re, im, 128);
            let (v, d) = g.eval_hp(&z);
            let naive = HpComplex::one(128)
                .sub(&z.pow_u64(3))
                .sub(&z.pow_u64(7));
            let naive_d = z
                .pow_u64(2)
                .mul_real(&HpReal::from_i64(-3, 128))
                .add(&z.pow_u64(6).mul_real(&HpReal::from_i64(-7, 128)));
            assert!(v.sub(&naive).abs().to_f64() < 1e-34);
            assert!(d.sub(&naive_d).abs().to_f64() < 1e-33);
        }
    }

    #[test]
    fn malformed_polynomials_rejected() {
        assert!(SparsePoly::new(vec![]).is_err());
        assert!(SparsePoly::new(vec![(0, rat(2, 1)), (1, rat(1, 1))]).is_err());
        assert!(SparsePoly::new(vec![(0, rat(1, 1))]).is_err());
        assert!(SparsePoly::new(vec![(0, rat(1, 1)), (2, rat(1, 1)), (1, rat(1, 1))]).is_err());
    }
}
