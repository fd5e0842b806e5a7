//! The lattice string approximation pipeline: build the lattice polynomial
//! `f_q` induced by a simultaneous Diophantine approximation, bound its
//! region of stability, filter stable roots, refine them into true roots of
//! the nonlattice polynomial by complex Newton iteration, and compare root
//! patterns.

use crate::dioph::{validate_sda, DiophError, Quality, Sda};
use crate::dirichlet::{lsa_constant, DirichletPolynomial, DirichletError, Generator};
use crate::numerics::{BigRational, HpComplex, HpReal, Rounding};
use crate::roots::{
    oscillatory_period, to_sparse_poly, Domain, RootEntry, RootSet, RootsError, SparsePoly,
};
use num_traits::ToPrimitive;
use thiserror::Error;

const N: Rounding = Rounding::Nearest;

#[derive(Debug, Error)]
pub enum LsaError {
    #[error("the approximation does not satisfy the defining inequality for this polynomial")]
    InvalidSda,
    #[error("epsilon must be positive")]
    BadEpsilon,
    #[error("the stability region is infinite; stable-root filtering needs a finite quality")]
    InfiniteRegion,
    #[error("no seeds supplied")]
    NoSeeds,
    #[error(transparent)]
    Dirichlet(#[from] DirichletError),
    #[error(transparent)]
    Dioph(#[from] DiophError),
    #[error(transparent)]
    Roots(#[from] RootsError),
}

/// A lattice polynomial approximating a nonlattice one, with its sparse
/// form, generator and oscillatory period.
#[derive(Clone, Debug)]
pub struct LatticeApproximation {
    pub f_q: DirichletPolynomial,
    pub sda: Sda,
    pub generator: Generator,
    pub period: HpReal,
    pub sparse: SparsePoly,
}

/// Builds `f_q(s) = 1 - m_1 r_1^s - sum m_j r_1^(k_j s / q)` from a
/// validated approximation.
pub fn lattice_approximation(
    f: &DirichletPolynomial,
    sda: &Sda,
    prec: u32,
) -> Result<LatticeApproximation, LsaError> {
    let tail = &f.alphas()[1..];
    if tail.len() != sda.k.len() {
        return Err(LsaError::InvalidSda);
    }
    if !validate_sda(tail, sda, prec)? {
        return Err(LsaError::InvalidSda);
    }
    let mut alphas = vec![crate::numerics::RealExpr::integer(1)];
    for k in &sda.k {
        alphas.push(crate::numerics::RealExpr::Rational(BigRational::new(
            k.clone(),
            sda.q.clone(),
        )));
    }
    let f_q = DirichletPolynomial::new(
        f.base_ratio().clone(),
        alphas,
        f.multiplicities().to_vec(),
    )?;
    let (sparse, generator) = to_sparse_poly(&f_q)?;
    let q = generator.root.to_u64().expect("q fits u64");
    let period = oscillatory_period(f.base_ratio(), q, prec);
    Ok(LatticeApproximation { f_q, sda: sda.clone(), generator, period, sparse })
}

/// Radius of a stability region; infinite for exact (lattice) data.
#[derive(Clone, Debug)]
pub enum Radius {
    Finite(HpReal),
    Infinite,
}

impl Radius {
    pub fn as_finite(&self) -> Option<&HpReal> {
        match self {
            Radius::Finite(r) => Some(r),
            Radius::Infinite => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Radius::Finite(r) => r.to_f64(),
            Radius::Infinite => f64::INFINITY,
        }
    }
}

/// The disk `|s| < epsilon C Q p_q` on which `|f_q - f| < epsilon`.
#[derive(Clone, Debug)]
pub struct StabilityRegion {
    pub epsilon: HpReal,
    pub radius: Radius,
}

/// Radius `epsilon * C * Q * p_q` of the stability region.
pub fn stability_radius(
    f: &DirichletPolynomial,
    sda: &Sda,
    epsilon: &HpReal,
    prec: u32,
) -> Result<StabilityRegion, LsaError> {
    if !epsilon.is_positive() {
        return Err(LsaError::BadEpsilon);
    }
    let quality = match &sda.quality {
        Quality::Infinite => {
            return Ok(StabilityRegion { epsilon: epsilon.clone(), radius: Radius::Infinite });
        }
        Quality::Finite(q) => q,
    };
    let c = lsa_constant(f, prec);
    let q = sda.q.to_u64().expect("q fits u64");
    let period = oscillatory_period(f.base_ratio(), q, prec);
    let radius = epsilon.mul(&c, N).mul(quality, N).mul(&period, N);
    Ok(StabilityRegion { epsilon: epsilon.clone(), radius: Radius::Finite(radius) })
}

/// Roots of `f_q` lying inside the stability region, after periodic
/// replication up to the region's radius. Also returns the number of
/// oscillatory periods the region covers.
pub fn stable_roots(
    approx: &LatticeApproximation,
    zroots: &RootSet,
    region: &StabilityRegion,
) -> Result<(RootSet, HpReal), LsaError> {
    let radius = region.radius.as_finite().ok_or(LsaError::InfiniteRegion)?;
    let mapped = crate::roots::roots_to_dimensions(zroots, &approx.generator, radius)?;
    let filtered: Vec<RootEntry> = mapped
        .roots
        .into_iter()
        .filter(|r| r.value.abs() < *radius)
        .collect();
    let periods = radius.div(&approx.period, N);
    Ok((RootSet { roots: filtered, domain: Domain::SPlane }, periods))
}

/// Outcome of one Newton refinement seed.
#[derive(Clone, Debug)]
pub enum SeedOutcome {
    Converged { root: HpComplex, residual: HpReal, iterations: u32 },
    FailedCriticalPoint { at: HpComplex },
    FailedStagnant,
}

/// One refined root with the seeds that reached it.
#[derive(Clone, Debug)]
pub struct RefinedRoot {
    pub value: HpComplex,
    pub residual: HpReal,
    pub iterations: u32,
    pub seed_count: u32,
}

/// Full refinement record: per-seed outcomes plus the merged root list.
#[derive(Clone, Debug)]
pub struct RefinementReport {
    pub outcomes: Vec<SeedOutcome>,
    pub roots: Vec<RefinedRoot>,
    pub converged_seeds: usize,
    pub failed_seeds: usize,
}

/// Newton iteration `w <- w - f(w)/f'(w)` from every seed, in parallel
/// across seeds. Convergence needs `|f(w)| <= tolerance` and a final step
/// below tolerance; roots closer than `sqrt(tolerance)` merge.
pub fn refine_roots(
    f: &DirichletPolynomial,
    seeds: &RootSet,
    tolerance: &HpReal,
    max_iter: u32,
) -> Result<RefinementReport, LsaError> {
    if seeds.is_empty() {
        return Err(LsaError::NoSeeds);
    }
    let merge_dist = tolerance.sqrt(N);
    // Deduplicate seeds (periodic replication can leave near-duplicates).
    let mut seed_points: Vec<HpComplex> = Vec::new();
    for s in &seeds.roots {
        let dup = seed_points
            .iter()
            .any(|p| p.dist(&s.value) < merge_dist);
        if !dup {
            seed_points.push(s.value.clone());
        }
    }
    let threads = thread_width(seed_points.len());
    let chunk = seed_points.len().div_ceil(threads);
    let mut outcomes: Vec<Option<SeedOutcome>> = vec![None; seed_points.len()];
    std::thread::scope(|scope| {
        let mut handles = Vec::new();
        for (t, chunk_points) in seed_points.chunks(chunk).enumerate() {
            let handle = scope.spawn(move || {
                let mut local = Vec::with_capacity(chunk_points.len());
                for p in chunk_points {
                    local.push(newton_from_seed(f, p, tolerance, max_iter));
                }
                (t, local)
            });
            handles.push(handle);
        }
        for handle in handles {
            let (t, local) = handle.join().expect("refinement worker panicked");
            for (i, o) in local.into_iter().enumerate() {
                outcomes[t * chunk + i] = Some(o);
            }
        }
    });
    let outcomes: Vec<SeedOutcome> = outcomes.into_iter().map(|o| o.unwrap()).collect();
    // Merge converged roots. Assembly order is by seed index, so the result
    // is deterministic for a fixed seed list.
    let mut roots: Vec<RefinedRoot> = Vec::new();
    let mut converged = 0usize;
    for outcome in &outcomes {
        if let SeedOutcome::Converged { root, residual, iterations } = outcome {
            converged += 1;
            match roots.iter_mut().find(|r| r.value.dist(root) < merge_dist) {
                Some(existing) => {
                    existing.seed_count += 1;
                    if residual < &existing.residual {
                        existing.value = root.clone();
                        existing.residual = residual.clone();
                        existing.iterations = *iterations;
                    }
                }
                None => roots.push(RefinedRoot {
                    value: root.clone(),
                    residual: residual.clone(),
                    iterations: *iterations,
                    seed_count: 1,
                }),
            }
        }
    }
    let failed = outcomes.len() - converged;
    Ok(RefinementReport { outcomes, roots, converged_seeds: converged, failed_seeds: failed })
}

fn newton_from_seed(
    f: &DirichletPolynomial,
    seed: &HpComplex,
    tolerance: &HpReal,
    max_iter: u32,
) -> SeedOutcome {
    let critical = tolerance.mul_i64(10, N);
    let mut w = seed.clone();
    for iter in 0..max_iter {
        let (value, deriv) = f.value_and_derivative(&w);
        if deriv.abs() < critical {
            return SeedOutcome::FailedCriticalPoint { at: w };
        }
        let step = value.div(&deriv);
        w = w.sub(&step);
        if value.abs() <= *tolerance && step.abs() < *tolerance {
            let residual = f.evaluate(&w).abs();
            return SeedOutcome::Converged { root: w, residual, iterations: iter + 1 };
        }
    }
    SeedOutcome::FailedStagnant
}

fn thread_width(jobs: usize) -> usize {
    let default = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
    let cap = std::env::var("DIRICHLET_LSA_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&v| v >= 1)
        .unwrap_or(default);
    cap.min(jobs.max(1))
}

/// Greedy nearest-neighbor pairing between two s-plane root sets.
#[derive(Clone, Debug)]
pub struct PatternComparison {
    /// (left index, right index, distance).
    pub pairs: Vec<(usize, usize, HpReal)>,
    pub unmatched_left: Vec<usize>,
    pub unmatched_right: Vec<usize>,
}

impl PatternComparison {
    /// (imaginary part of the left root, pair distance) for plotting the
    /// deviation against height.
    pub fn deviation_series(&self, left: &RootSet) -> Vec<(f64, f64)> {
        self.pairs
            .iter()
            .map(|(i, _, d)| (left.roots[*i].value.im.to_f64(), d.to_f64()))
            .collect()
    }
}

/// Pairs each left root with its nearest unmatched right root within
/// `match_radius`.
pub fn compare_patterns(
    left: &RootSet,
    right: &RootSet,
    match_radius: &HpReal,
) -> PatternComparison {
    assert_eq!(left.domain, Domain::SPlane);
    assert_eq!(right.domain, Domain::SPlane);
    let mut taken = vec![false; right.roots.len()];
    let mut pairs = Vec::new();
    let mut unmatched_left = Vec::new();
    for (i, l) in left.roots.iter().enumerate() {
        let mut best: Option<(usize, HpReal)> = None;
        for (j, r) in right.roots.iter().enumerate() {
            if taken[j] {
                continue;
            }
            let d = l.value.dist(&r.value);
            if d > *match_radius {
                continue;
            }
            best = match best {
                None => Some((j, d)),
                Some((bj, bd)) => {
                    if d < bd {
                        Some((j, d))
                    } else {
                        Some((bj, bd))
                    }
                }
            };
        }
        match best {
            Some((j, d)) => {
                taken[j] = true;
                pairs.push((i, j, d));
            }
            None => unmatched_left.push(i),
        }
    }
    let unmatched_right = taken
        .iter()
        .enumerate()
        .filter(|(_, t)| !**t)
        .map(|(j, _)| j)
        .collect();
    PatternComparison { pairs, unmatched_left, unmatched_right }
}

/// Deterministic low-discrepancy points filling a disk of the given radius:
/// a golden-angle spiral. Used by the stability-invariant checks.
pub fn disk_samples(radius: &HpReal, count: usize, prec: u32) -> Vec<HpComplex> {
    let r = radius.to_f64();
    let golden_angle = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..count)
        .map(|i| {
            let t = (i as f64 + 0.5) / count as f64;
            let rad = r * t.sqrt();
            let ang = golden_angle * i as f64;
            HpComplex::from_f64s(rad * ang.cos(), rad * ang.sin(), prec)
        })
        .collect()
}

/// Quasi-random points covering the stability disk intersected with the
/// root strip `[d_lower, d]`.
///
/// The value bound `|f_q - f| < epsilon` concerns this intersection: the
/// difference of two exponentials with nearly equal rates blows up far left
/// of the strip regardless of the approximation quality, while every root
/// of `f` and of `f_q` lives inside the strip, whose vertical extent is
/// what the region radius measures.
pub fn stability_samples(
    d_lower: &HpReal,
    d: &HpReal,
    radius: &HpReal,
    count: usize,
    prec: u32,
) -> Vec<HpComplex> {
    let lo = d_lower.to_f64();
    let hi = d.to_f64();
    let r = radius.to_f64();
    let golden = 0.618_033_988_749_895_f64;
    let mut out = Vec::with_capacity(count);
    let mut u = 0.5f64;
    let mut v = 0.25f64;
    while out.len() < count {
        u = (u + golden).fract();
        v = (v + std::f64::consts::FRAC_1_SQRT_2).fract();
        let re = lo + (hi - lo) * u;
        if re.abs() >= r {
            continue;
        }
        let h = (r * r - re * re).sqrt();
        let im = (2.0 * v - 1.0) * h;
        out.push(HpComplex::from_f64s(re, im, prec));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dioph::Provenance;
    use num_traits::One;
    use crate::numerics::{BigInt, RealExpr};
    use crate::roots::solve_sparse;

    fn sda(q: i64, k: i64, quality: f64) -> Sda {
        Sda {
            quality: Quality::Finite(HpReal::from_f64(quality, 128)),
            q: BigInt::from(q),
            k: vec![BigInt::from(k)],
            delta: None,
            provenance: Provenance::ContinuedFraction,
        }
    }

    #[test]
    fn f306_approximation() {
        let f = DirichletPolynomial::two_three();
        let approx = lattice_approximation(&f, &sda(306, 485, 678.06), 128).unwrap();
        assert_eq!(approx.sparse.degree(), 485);
        assert!(crate::numerics::format::matches_printed(&approx.period, "2773.8"));
        let region = stability_radius(
            &f,
            &approx.sda,
            &HpReal::from_f64(0.1, 128),
            128,
        )
        .unwrap();
        // The published table gives 155.478 for this row; the printed Q is
        // rounded so match at reduced precision.
        let r = region.radius.to_f64();
        assert!((r - 155.478).abs() < 0.1, "radius {r}");
    }

    #[test]
    fn f53_radius_matches_table() {
        let f = DirichletPolynomial::two_three();
        let region =
            stability_radius(&f, &sda(53, 84, 331.94), &HpReal::from_f64(0.1, 128), 128).unwrap();
        let r = region.radius.to_f64();
        assert!((r - 13.18).abs() < 0.01, "radius {r}");
    }

    #[test]
    fn golden_radius_large_row() {
        let f = DirichletPolynomial::golden();
        let region = stability_radius(
            &f,
            &sda(121393, 196418, 271444.0),
            &HpReal::from_f64(0.1, 128),
            128,
        )
        .unwrap();
        let r = region.radius.to_f64();
        assert!((r - 3.01e7).abs() < 0.02e7, "radius {r}");
    }

    #[test]
    fn zero_epsilon_rejected() {
        let f = DirichletPolynomial::two_three();
        assert!(matches!(
            stability_radius(&f, &sda(306, 485, 678.0), &HpReal::zero(64), 128),
            Err(LsaError::BadEpsilon)
        ));
    }

    #[test]
    fn lattice_identity_approximation() {
        // A lattice polynomial with its own exact data reproduces itself.
        let f = DirichletPolynomial::new(
            RealExpr::rational(1, 2),
            vec![RealExpr::integer(1), RealExpr::integer(2)],
            vec![BigRational::from_integer(1.into()), BigRational::from_integer(1.into())],
        )
        .unwrap();
        let exact = Sda {
            quality: Quality::Infinite,
            q: BigInt::one(),
            k: vec![BigInt::from(2)],
            delta: None,
            provenance: Provenance::ContinuedFraction,
        };
        let approx = lattice_approximation(&f, &exact, 128).unwrap();
        assert_eq!(approx.sparse.degree(), 2);
        let region =
            stability_radius(&f, &exact, &HpReal::from_f64(0.1, 128), 128).unwrap();
        assert!(matches!(region.radius, Radius::Infinite));
    }

    #[test]
    fn invalid_sda_rejected() {
        let f = DirichletPolynomial::two_three();
        // Quality far above what (306,485) achieves.
        assert!(matches!(
            lattice_approximation(&f, &sda(306, 485, 1e9), 128),
            Err(LsaError::InvalidSda)
        ));
    }

    #[test]
    fn master_stability_invariant_f306() {
        // |f_q(s) - f(s)| < epsilon on the stability disk within the root
        // strip [D_l, D].
        let f = DirichletPolynomial::two_three();
        let approx = lattice_approximation(&f, &sda(306, 485, 678.06), 128).unwrap();
        let eps = HpReal::from_f64(0.1, 128);
        let region = stability_radius(&f, &approx.sda, &eps, 128).unwrap();
        let bounds = crate::dirichlet::dimension_bounds(&f, 96);
        let samples = stability_samples(
            &bounds.d_lower,
            &bounds.d,
            region.radius.as_finite().unwrap(),
            250,
            128,
        );
        let mut max_gap = 0f64;
        for s in samples {
            let gap = approx.f_q.evaluate(&s).sub(&f.evaluate(&s)).abs().to_f64();
            max_gap = max_gap.max(gap);
        }
        assert!(max_gap < 0.1, "max |f_q - f| = {max_gap}");
        // D_l of the 2-3 polynomial is exactly -1 (1 + 2 = 3).
        assert!((bounds.d_lower.to_f64() + 1.0).abs() < 1e-14);
    }

    #[test]
    fn stable_roots_fraction_of_period() {
        let f = DirichletPolynomial::two_three();
        let approx = lattice_approximation(&f, &sda(306, 485, 678.06), 128).unwrap();
        let eps = HpReal::from_f64(0.1, 128);
        let region = stability_radius(&f, &approx.sda, &eps, 128).unwrap();
        let tol = HpReal::from_mantissa_exp(1.into(), -64, 128, N);
        let zroots = solve_sparse(&approx.sparse, &tol, 128).unwrap();
        let (stable, periods) = stable_roots(&approx, &zroots, &region).unwrap();
        // radius 155.5 < p_306 = 2773.8: a fraction of one period.
        assert!(periods.to_f64() < 1.0);
        assert!(!stable.is_empty());
        for r in &stable.roots {
            assert!(r.value.abs() < *region.radius.as_finite().unwrap());
        }
        // The real root D_306 is inside every published region.
        let has_real = stable
            .roots
            .iter()
            .any(|r| r.value.im.to_f64().abs() < 1e-15 && r.value.re.to_f64() > 0.7);
        assert!(has_real, "real root missing from stable set");
    }

    #[test]
    fn monotone_stability_ordering() {
        let f = DirichletPolynomial::two_three();
        let eps = HpReal::from_f64(0.1, 128);
        let r53 = stability_radius(&f, &sda(53, 84, 331.94), &eps, 128).unwrap();
        let r306 = stability_radius(&f, &sda(306, 485, 678.06), &eps, 128).unwrap();
        let r15601 = stability_radius(&f, &sda(15601, 24727, 38096.3), &eps, 128).unwrap();
        assert!(r53.radius.to_f64() < r306.radius.to_f64());
        assert!(r306.radius.to_f64() < r15601.radius.to_f64());
        // f_15601 covers about three periods of stable roots.
        let p = crate::roots::oscillatory_period(f.base_ratio(), 15601, 128);
        let periods = r15601.radius.to_f64() / p.to_f64();
        assert!((periods - 3.15).abs() < 0.02, "periods = {periods}");
    }

    #[test]
    fn stable_roots_nearly_vanish_on_f() {
        // Corollary of the value bound: a stable root w of f_q has
        // |f(w)| < epsilon.
        let f = DirichletPolynomial::two_three();
        let approx = lattice_approximation(&f, &sda(306, 485, 678.06), 128).unwrap();
        let eps = HpReal::from_f64(0.1, 128);
        let region = stability_radius(&f, &approx.sda, &eps, 128).unwrap();
        let tol = HpReal::from_mantissa_exp(1.into(), -64, 128, N);
        let zroots = solve_sparse(&approx.sparse, &tol, 128).unwrap();
        let (stable, _) = stable_roots(&approx, &zroots, &region).unwrap();
        assert!(stable.len() > 10);
        for r in &stable.roots {
            let value = f.evaluate(&r.value).abs().to_f64();
            assert!(value < 0.1, "|f| = {value} at a stable root");
        }
    }

    #[test]
    fn pattern_deviation_grows_outside_the_region() {
        // Roots of f track the roots of f_306 inside the stability region
        // and drift further out: the mean pair distance inside is smaller.
        let f = DirichletPolynomial::two_three();
        let approx = lattice_approximation(&f, &sda(306, 485, 678.06), 128).unwrap();
        let eps = HpReal::from_f64(0.1, 128);
        let region = stability_radius(&f, &approx.sda, &eps, 128).unwrap();
        let radius = region.radius.as_finite().unwrap().clone();
        let tol = HpReal::from_mantissa_exp(1.into(), -64, 128, N);
        let zroots = solve_sparse(&approx.sparse, &tol, 128).unwrap();
        // Replicate to twice the radius so there are seeds on both sides.
        let outer = radius.scale_pow2(1);
        let lattice_roots =
            crate::roots::roots_to_dimensions(&zroots, &approx.generator, &outer).unwrap();
        let refined = refine_roots(&f, &lattice_roots, &tol, 60).unwrap();
        let true_set = RootSet {
            roots: refined
                .roots
                .iter()
                .map(|r| RootEntry {
                    value: r.value.clone(),
                    residual: r.residual.clone(),
                    multiplicity: 1,
                })
                .collect(),
            domain: Domain::SPlane,
        };
        let matching = HpReal::from_f64(1.0, 128);
        let cmp = compare_patterns(&true_set, &lattice_roots, &matching);
        let mut inside = (0.0f64, 0usize);
        let mut outside = (0.0f64, 0usize);
        for (i, _, d) in &cmp.pairs {
            let h = true_set.roots[*i].value.abs();
            if h < radius {
                inside = (inside.0 + d.to_f64(), inside.1 + 1);
            } else {
                outside = (outside.0 + d.to_f64(), outside.1 + 1);
            }
        }
        assert!(inside.1 > 5 && outside.1 > 5, "too few pairs: {inside:?} {outside:?}");
        let mean_in = inside.0 / inside.1 as f64;
        let mean_out = outside.0 / outside.1 as f64;
        assert!(
            mean_in < mean_out,
            "mean deviation inside {mean_in} not below outside {mean_out}"
        );
    }

    #[test]
    fn refine_lattice_roots_are_fixed_points() {
        // Seeding a lattice polynomial with its own roots converges in one
        // step with near-zero movement.
        let f = DirichletPolynomial::new(
            RealExpr::rational(1, 2),
            vec![RealExpr::integer(1)],
            vec![BigRational::from_integer(2.into())],
        )
        .unwrap();
        // Roots: 1 + 2 pi i n / ln 2.
        let p = 2.0 * std::f64::consts::PI / std::f64::consts::LN_2;
        let seeds = RootSet {
            roots: (-2..=2)
                .map(|n| RootEntry {
                    value: HpComplex::from_f64s(1.0, p * n as f64, 192),
                    residual: HpReal::zero(192),
                    multiplicity: 1,
                })
                .collect(),
            domain: Domain::SPlane,
        };
        let tol = HpReal::from_mantissa_exp(1.into(), -96, 192, N);
        let report = refine_roots(&f, &seeds, &tol, 50).unwrap();
        assert_eq!(report.converged_seeds, 5);
        assert_eq!(report.roots.len(), 5);
        for r in &report.roots {
            assert!(r.residual <= tol);
            assert!((r.value.re.to_f64() - 1.0).abs() < 1e-25);
        }
    }

    #[test]
    fn refine_from_f53_stable_roots() {
        let f = DirichletPolynomial::two_three();
        let approx = lattice_approximation(&f, &sda(53, 84, 331.94), 256).unwrap();
        let eps = HpReal::from_f64(0.1, 256);
        let region = stability_radius(&f, &approx.sda, &eps, 256).unwrap();
        let tol_solve = HpReal::from_mantissa_exp(1.into(), -100, 256, N);
        let zroots = solve_sparse(&approx.sparse, &tol_solve, 256).unwrap();
        let (stable, _) = stable_roots(&approx, &zroots, &region).unwrap();
        assert!(!stable.is_empty());
        let tol = HpReal::from_f64(1e-31, 256);
        let report = refine_roots(&f, &stable, &tol, 100).unwrap();
        let rate = report.converged_seeds as f64 / (report.converged_seeds + report.failed_seeds) as f64;
        assert!(rate >= 0.9, "convergence rate {rate}");
        let bounds = crate::dirichlet::dimension_bounds(&f, 256);
        for root in &report.roots {
            assert!(root.residual.to_f64() <= 1e-30);
            let re = root.value.re.to_f64();
            assert!(re >= bounds.d_lower.to_f64() - 1e-20 && re <= bounds.d.to_f64() + 1e-20);
        }
        // The real refined root is D itself.
        let real = report
            .roots
            .iter()
            .find(|r| r.value.im.to_f64().abs() < 1e-10)
            .expect("real root refined");
        assert!((real.value.re.to_f64() - bounds.d.to_f64()).abs() < 1e-14);
    }

    #[test]
    fn compare_identical_and_offset_sets() {
        let mk = |offset: f64| RootSet {
            roots: (0..5)
                .map(|n| RootEntry {
                    value: HpComplex::from_f64s(0.5 + offset, n as f64 * 3.0, 128),
                    residual: HpReal::zero(128),
                    multiplicity: 1,
                })
                .collect(),
            domain: Domain::SPlane,
        };
        let a = mk(0.0);
        let same = compare_patterns(&a, &mk(0.0), &HpReal::from_f64(0.5, 128));
        assert_eq!(same.pairs.len(), 5);
        assert!(same.pairs.iter().all(|(_, _, d)| d.to_f64() == 0.0));
        assert!(same.unmatched_left.is_empty() && same.unmatched_right.is_empty());
        let shifted = compare_patterns(&a, &mk(0.01), &HpReal::from_f64(0.5, 128));
        assert_eq!(shifted.pairs.len(), 5);
        for (_, _, d) in &shifted.pairs {
            assert!((d.to_f64() - 0.01).abs() < 1e-12);
        }
        let far = compare_patterns(&a, &mk(2.0), &HpReal::from_f64(0.5, 128));
        assert!(far.pairs.is_empty());
        assert_eq!(far.unmatched_left.len(), 5);
        assert_eq!(far.unmatched_right.len(), 5);
    }
}
