//! Aberth-Ehrlich simultaneous root finder for sparse polynomials.
//!
//! Two phases: a hardware pass over extended-range f64 complexes from
//! Newton-polygon starting points, then high-precision sweeps that certify
//! every root by its relative backward residual. The Aberth repulsion sum is
//! evaluated on f64 shadows (with a high-precision fallback for colliding
//! pairs); near convergence the repulsion term only perturbs the Newton step
//! at second order, so shadow accuracy is ample.

use super::{Domain, RootEntry, RootSet, RootsError, SparsePoly};
use crate::numerics::{HpComplex, HpReal, Rounding};
use num_complex::Complex64;
use num_traits::Zero;

const N: Rounding = Rounding::Nearest;

/// Diagnostics from a solve.
#[derive(Clone, Debug)]
pub struct SolveReport {
    pub sweeps_f64: u32,
    pub sweeps_hp: u32,
    pub final_precision: u32,
}

/// Finds all roots of `g`, certifying each by
/// `|g(z)| <= tolerance * sum |c_t| |z|^(e_t)`. Roots closer than
/// `sqrt(tolerance)` are merged with summed multiplicity.
pub fn solve_sparse(
    g: &SparsePoly,
    tolerance: &HpReal,
    precision: u32,
) -> Result<RootSet, RootsError> {
    solve_sparse_with_report(g, tolerance, precision).map(|(set, _)| set)
}

pub fn solve_sparse_with_report(
    g: &SparsePoly,
    tolerance: &HpReal,
    precision: u32,
) -> Result<(RootSet, SolveReport), RootsError> {
    let degree = g.degree() as usize;
    let terms = g.terms_f64();
    let mut points = initial_points(&terms, degree);
    debug_assert_eq!(points.len(), degree);

    let sweeps_f64 = f64_phase(&terms, &mut points);

    // High-precision polish: start at 128 bits minimum, escalate on
    // stagnation up to 8x the requested precision.
    let mut wp = precision.max(128);
    let cap = precision.max(128).saturating_mul(8);
    let mut z: Vec<HpComplex> = points
        .iter()
        .map(|p| HpComplex::from_f64s(p.re, p.im, wp))
        .collect();
    let mut shadows = points;
    let mut certified = vec![false; degree];
    let mut residuals = vec![HpReal::zero(precision); degree];
    let tol = tolerance.clone();
    let mut sweeps_hp = 0u32;
    let mut sweeps_at_this_precision = 0u32;
    loop {
        let mut all_done = true;
        for i in 0..degree {
            if certified[i] {
                continue;
            }
            let (value, deriv) = g.eval_hp(&z[i]);
            let z_abs = z[i].abs();
            let scale = g.coefficient_scale(&z_abs);
            let v_abs = value.abs();
            if v_abs <= tol.mul(&scale, N) {
                certified[i] = true;
                residuals[i] = v_abs.div(&scale, N).with_precision(precision.max(64), N);
                continue;
            }
            all_done = false;
            if deriv.is_zero() {
                // Landed on a critical point: nudge and retry next sweep.
                let nudge = HpComplex::from_f64s(1.0 + 1e-9, 1e-9, wp);
                z[i] = z[i].mul(&nudge);
                shadows[i] = z[i].to_c64();
                continue;
            }
            let newton = value.div(&deriv);
            let repulsion = repulsion_sum(&shadows, &z, i, wp);
            let denom = HpComplex::one(wp).sub(&newton.mul(&repulsion));
            let step = if denom.is_zero() { newton.clone() } else { newton.div(&denom) };
            z[i] = z[i].sub(&step);
            shadows[i] = z[i].to_c64();
        }
        if all_done {
            break;
        }
        sweeps_hp += 1;
        sweeps_at_this_precision += 1;
        if sweeps_at_this_precision >= 16 {
            let next = wp.saturating_mul(2);
            if next > cap {
                let unconverged = certified.iter().filter(|c| !**c).count();
                return Err(RootsError::Nonconvergence {
                    unconverged,
                    total: degree,
                    precision: wp,
                });
            }
            wp = next;
            sweeps_at_this_precision = 0;
            for zi in z.iter_mut() {
                *zi = zi.with_precision(wp);
            }
        }
        if sweeps_hp > 512 {
            let unconverged = certified.iter().filter(|c| !**c).count();
            return Err(RootsError::Nonconvergence {
                unconverged,
                total: degree,
                precision: wp,
            });
        }
    }

    let set = cluster_and_sort(z, residuals, &tol, precision);
    debug_assert_eq!(set.count_with_multiplicity(), degree as u64);
    Ok((set, SolveReport { sweeps_f64, sweeps_hp, final_precision: wp }))
}

/// Aberth repulsion `sum_{j != i} 1/(z_i - z_j)` over the f64 shadows, with
/// exact differences for pairs the shadows cannot separate.
fn repulsion_sum(shadows: &[Complex64], z: &[HpComplex], i: usize, wp: u32) -> HpComplex {
    let mut acc = Complex64::zero();
    let mut exact = HpComplex::zero(wp);
    let mut has_exact = false;
    let zi = shadows[i];
    for (j, zj) in shadows.iter().enumerate() {
        if j == i {
            continue;
        }
        let diff = zi - zj;
        if diff.norm_sqr() > 0.0 {
            acc += 1.0 / diff;
        } else {
            let hp_diff = z[i].sub(&z[j]);
            if !hp_diff.is_zero() {
                exact = exact.add(&HpComplex::one(wp).div(&hp_diff));
                has_exact = true;
            }
        }
    }
    let base = HpComplex::from_f64s(acc.re, acc.im, wp);
    if has_exact { base.add(&exact) } else { base }
}

/// Hardware Aberth sweeps from the starting points; runs until steps and
/// residuals reach f64 noise level.
fn f64_phase(terms: &[(u64, Complex64)], points: &mut [Complex64]) -> u32 {
    let degree = points.len();
    let mut done = vec![false; degree];
    let mut sweeps = 0u32;
    for _ in 0..800 {
        sweeps += 1;
        let mut moved = false;
        for i in 0..degree {
            if done[i] {
                continue;
            }
            let (value, deriv) = eval_ext(terms, points[i]);
            let scale = scale_ext(terms, points[i].norm());
            // Relative backward residual at f64 noise: done.
            if value.exponent_below(&scale, -47) {
                done[i] = true;
                continue;
            }
            let newton = value.ratio(&deriv);
            let mut s = Complex64::zero();
            for (j, zj) in points.iter().enumerate() {
                if j != i {
                    let diff = points[i] - zj;
                    if diff.norm_sqr() > 0.0 {
                        s += 1.0 / diff;
                    }
                }
            }
            let denom = Complex64::new(1.0, 0.0) - newton * s;
            let mut step = if denom.norm_sqr() > 1e-60 { newton / denom } else { newton };
            if !step.is_finite() {
                step = Complex64::new(0.1, 0.05);
            }
            // Cap the step to keep iterates in the root annulus.
            let cap = 0.5 * (1.0 + points[i].norm());
            let norm = step.norm();
            if norm > cap {
                step *= cap / norm;
            }
            points[i] -= step;
            if step.norm() > 1e-15 * (1.0 + points[i].norm()) {
                moved = true;
            }
        }
        if !moved {
            break;
        }
    }
    sweeps
}

/// Complex with a separate power-of-two exponent, wide enough for
/// `z^300000` at any reasonable modulus.
#[derive(Clone, Copy, Debug)]
struct Ext {
    m: Complex64,
    e: i64,
}

impl Ext {
    fn zero() -> Self {
        Ext { m: Complex64::zero(), e: 0 }
    }

    fn from(z: Complex64) -> Self {
        Ext { m: z, e: 0 }.normalized()
    }

    fn normalized(self) -> Self {
        let l = self.m.re.abs().max(self.m.im.abs());
        if l == 0.0 {
            return Ext { m: Complex64::zero(), e: 0 };
        }
        let k = l.log2().floor() as i64;
        if (-64..=64).contains(&k) {
            return self;
        }
        Ext { m: self.m * (-(k as f64)).exp2(), e: self.e + k }
    }

    fn mul(&self, rhs: &Ext) -> Ext {
        Ext { m: self.m * rhs.m, e: self.e + rhs.e }.normalized()
    }

    fn add(&self, rhs: &Ext) -> Ext {
        if self.m.is_zero() {
            return *rhs;
        }
        if rhs.m.is_zero() {
            return *self;
        }
        let (hi, lo) = if self.e >= rhs.e { (self, rhs) } else { (rhs, self) };
        let gap = hi.e - lo.e;
        if gap > 140 {
            return *hi;
        }
        Ext { m: hi.m + lo.m * (-(gap as f64)).exp2(), e: hi.e }.normalized()
    }

    fn pow(&self, mut k: u64) -> Ext {
        let mut base = *self;
        let mut acc = Ext::from(Complex64::new(1.0, 0.0));
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// `self / rhs` collapsed to plain f64, saturating on extreme exponents.
    fn ratio(&self, rhs: &Ext) -> Complex64 {
        if rhs.m.is_zero() {
            return Complex64::new(1e3, 1e3);
        }
        let m = self.m / rhs.m;
        let e = self.e - rhs.e;
        if e > 900 {
            Complex64::new(1e300, 0.0)
        } else if e < -900 {
            Complex64::zero()
        } else {
            m * (e as f64).exp2()
        }
    }

    /// True when `|self| <= |rhs| * 2^threshold_exp`.
    fn exponent_below(&self, rhs: &Ext, threshold_exp: i64) -> bool {
        if self.m.is_zero() {
            return true;
        }
        if rhs.m.is_zero() {
            return false;
        }
        let le = self.m.norm().log2() + self.e as f64;
        let re = rhs.m.norm().log2() + rhs.e as f64;
        le <= re + threshold_exp as f64
    }
}

/// Sparse Horner over the exponent gaps in extended-range arithmetic.
fn eval_ext(terms: &[(u64, Complex64)], z: Complex64) -> (Ext, Ext) {
    let ze = Ext::from(z);
    let mut value = Ext::zero();
    let mut deriv = Ext::zero();
    let mut prev: Option<u64> = None;
    for (e, c) in terms.iter().rev() {
        if let Some(pe) = prev {
            let gap = pe - e;
            let zg1 = ze.pow(gap - 1);
            let zg = zg1.mul(&ze);
            let carried = value.mul(&zg1).mul(&Ext::from(Complex64::new(gap as f64, 0.0)));
            deriv = deriv.mul(&zg).add(&carried);
            value = value.mul(&zg);
        }
        value = value.add(&Ext::from(*c));
        prev = Some(*e);
    }
    (value, deriv)
}

/// `sum |c_t| |z|^(e_t)` in extended range.
fn scale_ext(terms: &[(u64, Complex64)], z_norm: f64) -> Ext {
    let r = Ext::from(Complex64::new(z_norm, 0.0));
    let mut acc = Ext::zero();
    for (e, c) in terms {
        let p = r.pow(*e).mul(&Ext::from(Complex64::new(c.norm(), 0.0)));
        acc = acc.add(&p);
    }
    acc
}

/// Starting points: the Newton polygon (upper convex hull of
/// `(exponent, log |coeff|)`) fixes one circle of radii per hull edge; the
/// points are spread over each circle with a golden-angle offset so no
/// starting point coincides with a root of a pure binomial.
fn initial_points(terms: &[(u64, Complex64)], degree: usize) -> Vec<Complex64> {
    let pts: Vec<(f64, f64)> = terms
        .iter()
        .filter(|(_, c)| c.norm_sqr() > 0.0)
        .map(|(e, c)| (*e as f64, c.norm().ln()))
        .collect();
    // Upper hull, left to right: keep turns clockwise.
    let mut hull: Vec<(f64, f64)> = Vec::new();
    for p in pts {
        while hull.len() >= 2 {
            let a = hull[hull.len() - 2];
            let b = hull[hull.len() - 1];
            let cross = (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    let mut points = Vec::with_capacity(degree);
    let golden = 0.618_033_988_749_895_f64;
    for (edge, w) in hull.windows(2).enumerate() {
        let (i, ki) = w[0];
        let (j, kj) = w[1];
        let count = (j - i).round() as usize;
        let radius = ((ki - kj) / (j - i)).exp();
        for k in 0..count {
            let angle = 2.0 * std::f64::consts::PI * (k as f64 + 0.2618034) / count as f64
                + golden * (edge as f64 + 1.0);
            points.push(Complex64::from_polar(radius, angle));
        }
    }
    debug_assert_eq!(points.len(), degree);
    points
}

/// Merges converged points closer than `sqrt(tolerance)` and sorts the
/// result by (Im, Re).
fn cluster_and_sort(
    z: Vec<HpComplex>,
    residuals: Vec<HpReal>,
    tolerance: &HpReal,
    precision: u32,
) -> RootSet {
    let n = z.len();
    let threshold = tolerance.sqrt(N);
    let shadows: Vec<Complex64> = z.iter().map(|p| p.to_c64()).collect();
    let thr = threshold.to_f64();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..n {
        for j in i + 1..n {
            let d = (shadows[i] - shadows[j]).norm();
            let s = 1f64.max(shadows[i].norm());
            let close = if d < thr * s * 2.0 {
                // Confirm with the high-precision positions.
                let dist = z[i].dist(&z[j]);
                let bound = threshold.mul(&HpReal::from_f64(s, threshold.precision()), N);
                dist < bound
            } else {
                false
            };
            if close {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri] = rj;
                }
            }
        }
    }
    let mut clusters: std::collections::HashMap<usize, Vec<usize>> = std::collections::HashMap::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        clusters.entry(r).or_default().push(i);
    }
    let mut roots = Vec::with_capacity(clusters.len());
    for (_, members) in clusters {
        let mult = members.len() as u32;
        // Representative: the member with the smallest residual.
        let best = members
            .iter()
            .copied()
            .min_by(|&a, &b| residuals[a].cmp_value(&residuals[b]))
            .unwrap();
        let worst = members
            .iter()
            .map(|&m| residuals[m].clone())
            .max_by(|a, b| a.cmp_value(b))
            .unwrap();
        roots.push(RootEntry {
            value: z[best].with_precision(precision),
            residual: worst,
            multiplicity: mult,
        });
    }
    let mut set = RootSet { roots, domain: Domain::ZPlane };
    set.sort();
    set
}
