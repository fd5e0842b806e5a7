//! Exact-rational lattice basis reduction: Gram-Schmidt orthogonalization,
//! alpha-reduced bases and the LLL swap loop.
//!
//! Everything here is exact; no tolerance appears anywhere in this module.
//! Dimensions stay small (the Diophantine embedding uses rank N+1 with
//! N <= ~6), so the loop recomputes the orthogonalization after each basis
//! mutation instead of maintaining incremental updates.

use crate::numerics::{BigInt, BigRational};
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LllError {
    #[error("basis rows are linearly dependent")]
    DependentRows,
    #[error("basis must be a nonempty square matrix, got {rows} rows of length {cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("alpha must satisfy 1/4 < alpha < 1, got {0}")]
    BadAlpha(BigRational),
}

/// A full-rank lattice basis: n linearly independent rows of length n.
#[derive(Clone, Debug, PartialEq)]
pub struct Basis {
    rows: Vec<Vec<BigRational>>,
}

impl Basis {
    pub fn new(rows: Vec<Vec<BigRational>>) -> Result<Self, LllError> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            let cols = rows.first().map_or(0, |r| r.len());
            return Err(LllError::NotSquare { rows: n, cols });
        }
        Ok(Basis { rows })
    }

    pub fn from_integers(rows: Vec<Vec<i64>>) -> Result<Self, LllError> {
        Basis::new(
            rows.into_iter()
                .map(|r| r.into_iter().map(|v| BigRational::from_integer(v.into())).collect())
                .collect(),
        )
    }

    pub fn identity(n: usize) -> Self {
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            BigRational::one()
                        } else {
                            BigRational::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        Basis { rows }
    }

    pub fn dimension(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<BigRational>] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &[BigRational] {
        &self.rows[i]
    }
}

/// Gram-Schmidt orthogonalization with coefficients and squared norms.
#[derive(Clone, Debug)]
pub struct GramSchmidtData {
    /// Orthogonal vectors `x*_1 ... x*_n`.
    pub ortho: Vec<Vec<BigRational>>,
    /// Lower-triangular coefficients; `mu[j][k]` for `k < j`.
    pub mu: Vec<Vec<BigRational>>,
    /// Squared norms `|x*_j|^2`.
    pub norms: Vec<BigRational>,
}

fn dot(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Exact Gram-Schmidt orthogonalization of a basis.
pub fn gram_schmidt(basis: &Basis) -> Result<GramSchmidtData, LllError> {
    let n = basis.dimension();
    let mut ortho: Vec<Vec<BigRational>> = Vec::with_capacity(n);
    let mut mu: Vec<Vec<BigRational>> = vec![Vec::new(); n];
    let mut norms: Vec<BigRational> = Vec::with_capacity(n);
    for (j, mu_row) in mu.iter_mut().enumerate() {
        let mut v = basis.row(j).to_vec();
        let mut coeffs = Vec::with_capacity(j);
        for (k, prev) in ortho.iter().enumerate().take(j) {
            let c = if norms[k].is_zero() {
                BigRational::zero()
            } else {
                dot(basis.row(j), prev) / &norms[k]
            };
            for (vi, pi) in v.iter_mut().zip(prev) {
                *vi -= &c * pi;
            }
            coeffs.push(c);
        }
        let norm = dot(&v, &v);
        if norm.is_zero() {
            return Err(LllError::DependentRows);
        }
        *mu_row = coeffs;
        norms.push(norm);
        ortho.push(v);
    }
    Ok(GramSchmidtData { ortho, mu, norms })
}

/// Reduction parameter `alpha` with `1/4 < alpha < 1`.
#[derive(Clone, Debug)]
pub struct ReductionParams {
    alpha: BigRational,
}

impl ReductionParams {
    pub fn new(alpha: BigRational) -> Result<Self, LllError> {
        let quarter = BigRational::new(1.into(), 4.into());
        if alpha <= quarter || alpha >= BigRational::one() {
            return Err(LllError::BadAlpha(alpha));
        }
        Ok(ReductionParams { alpha })
    }

    pub fn alpha(&self) -> &BigRational {
        &self.alpha
    }
}

impl Default for ReductionParams {
    /// The textbook parameter `alpha = 3/4`.
    fn default() -> Self {
        ReductionParams { alpha: BigRational::new(3.into(), 4.into()) }
    }
}

/// A reduced basis together with the unimodular transform that produced it:
/// `reduced = transform * input`.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub basis: Basis,
    pub transform: Vec<Vec<BigInt>>,
}

/// Textbook LLL: size-reduce, test the Lovasz condition, swap. The lowest
/// index violating the condition is always handled first.
pub fn lll_reduce(basis: &Basis, params: &ReductionParams) -> Result<Reduction, LllError> {
    let n = basis.dimension();
    let mut b = basis.clone();
    let mut t: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    let mut gs = gram_schmidt(&b)?;
    let mut k = 1;
    while k < n {
        size_reduce(&mut b, &mut t, &mut gs, k, k - 1);
        // Lovasz: |x*_k + mu x*_{k-1}|^2 >= alpha |x*_{k-1}|^2.
        let mu = &gs.mu[k][k - 1];
        let lhs = &gs.norms[k] + mu * mu * &gs.norms[k - 1];
        let rhs = params.alpha() * &gs.norms[k - 1];
        if lhs >= rhs {
            for j in (0..k.saturating_sub(1)).rev() {
                size_reduce(&mut b, &mut t, &mut gs, k, j);
            }
            k += 1;
        } else {
            b.rows.swap(k, k - 1);
            t.swap(k, k - 1);
            gs = gram_schmidt(&b)?;
            k = k.max(2) - 1;
        }
    }
    Ok(Reduction { basis: b, transform: t })
}

fn size_reduce(
    b: &mut Basis,
    t: &mut [Vec<BigInt>],
    gs: &mut GramSchmidtData,
    k: usize,
    j: usize,
) {
    let half = BigRational::new(1.into(), 2.into());
    if gs.mu[k][j].abs() <= half {
        return;
    }
    let q = gs.mu[k][j].round().to_integer();
    let qr = BigRational::from_integer(q.clone());
    let row_j = b.rows[j].clone();
    for (vk, vj) in b.rows[k].iter_mut().zip(&row_j) {
        *vk -= &qr * vj;
    }
    let trow_j = t[j].clone();
    for (tk, tj) in t[k].iter_mut().zip(&trow_j) {
        *tk -= &q * tj;
    }
    // Orthogonal vectors are unchanged by size reduction; only mu[k][..j]
    // shifts. Recompute for simplicity at these dimensions.
    *gs = gram_schmidt(b).expect("size reduction preserves independence");
}

/// Checks Definition-style alpha-reducedness exactly.
pub fn is_alpha_reduced(basis: &Basis, params: &ReductionParams) -> Result<bool, LllError> {
    let gs = gram_schmidt(basis)?;
    let half = BigRational::new(1.into(), 2.into());
    let n = basis.dimension();
    for j in 1..n {
        for k in 0..j {
            if gs.mu[j][k].abs() > half {
                return Ok(false);
            }
        }
        let mu = &gs.mu[j][j - 1];
        let lhs = &gs.norms[j] + mu * mu * &gs.norms[j - 1];
        if lhs < params.alpha() * &gs.norms[j - 1] {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `|det X|`, exact, by fraction-preserving Gaussian elimination.
pub fn lattice_determinant(basis: &Basis) -> Result<BigRational, LllError> {
    let det = determinant_rational(basis.rows())?;
    if det.is_zero() {
        return Err(LllError::DependentRows);
    }
    Ok(det.abs())
}

fn determinant_rational(rows: &[Vec<BigRational>]) -> Result<BigRational, LllError> {
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != n) {
        let cols = rows.first().map_or(0, |r| r.len());
        return Err(LllError::NotSquare { rows: n, cols });
    }
    let mut m: Vec<Vec<BigRational>> = rows.to_vec();
    let mut det = BigRational::one();
    for col in 0..n {
        let pivot = match (col..n).find(|&r| !m[r][col].is_zero()) {
            Some(p) => p,
            None => return Ok(BigRational::zero()),
        };
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        let p = m[col][col].clone();
        det *= &p;
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = &m[r][col] / &p;
            let upper = m[col].clone();
            for (mr, mc) in m[r].iter_mut().zip(&upper) {
                *mr -= &factor * mc;
            }
        }
    }
    Ok(det)
}

/// Integer determinant of a transform matrix.
pub fn transform_determinant(t: &[Vec<BigInt>]) -> BigInt {
    let rows: Vec<Vec<BigRational>> = t
        .iter()
        .map(|r| r.iter().map(|v| BigRational::from_integer(v.clone())).collect())
        .collect();
    let det = determinant_rational(&rows).expect("square transform");
    assert!(det.denom().is_one());
    det.to_integer()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn gram_schmidt_identity() {
        let b = Basis::identity(3);
        let gs = gram_schmidt(&b).unwrap();
        assert_eq!(gs.ortho, b.rows().to_vec());
        assert!(gs.mu.iter().all(|r| r.iter().all(|m| m.is_zero())));
        assert!(gs.norms.iter().all(|n| n.is_one()));
    }

    #[test]
    fn gram_schmidt_single_projection() {
        let b = Basis::from_integers(vec![vec![1, 0], vec![1, 1]]).unwrap();
        let gs = gram_schmidt(&b).unwrap();
        assert_eq!(gs.ortho[0], vec![rat(1, 1), rat(0, 1)]);
        assert_eq!(gs.mu[1][0], rat(1, 1));
        assert_eq!(gs.ortho[1], vec![rat(0, 1), rat(1, 1)]);
    }

    #[test]
    fn gram_schmidt_satisfies_recurrence_and_determinant() {
        // Random-looking fixed 4x4 rational basis: verify the defining
        // recurrence and the product-of-norms identity exactly.
        let b = Basis::new(vec![
            vec![rat(3, 2), rat(-1, 3), rat(2, 1), rat(0, 1)],
            vec![rat(1, 5), rat(4, 1), rat(-2, 7), rat(1, 2)],
            vec![rat(0, 1), rat(1, 1), rat(1, 3), rat(-3, 4)],
            vec![rat(5, 6), rat(0, 1), rat(1, 1), rat(2, 5)],
        ])
        .unwrap();
        let gs = gram_schmidt(&b).unwrap();
        // x_j = x*_j + sum mu_{j,k} x*_k, exactly.
        for j in 0..4 {
            for col in 0..4 {
                let mut acc = gs.ortho[j][col].clone();
                for k in 0..j {
                    acc += &gs.mu[j][k] * &gs.ortho[k][col];
                }
                assert_eq!(acc, b.rows()[j][col]);
            }
        }
        // Pairwise orthogonality, exact.
        for i in 0..4 {
            for j in 0..i {
                assert!(dot(&gs.ortho[i], &gs.ortho[j]).is_zero());
            }
        }
        // Product of squared norms equals det(X)^2.
        let det = lattice_determinant(&b).unwrap();
        let prod: BigRational = gs.norms.iter().product();
        assert_eq!(prod, &det * &det);
    }

    #[test]
    fn dependent_rows_detected() {
        let b = Basis::from_integers(vec![vec![1, 2], vec![2, 4]]).unwrap();
        assert!(matches!(gram_schmidt(&b), Err(LllError::DependentRows)));
        assert!(matches!(lll_reduce(&b, &ReductionParams::default()), Err(LllError::DependentRows)));
    }

    #[test]
    fn orthogonal_nondecreasing_basis_unchanged() {
        // Orthogonal rows satisfy the Lovasz condition when the norms do not
        // decrease, so such a basis is already reduced.
        let b = Basis::from_integers(vec![vec![1, 0, 0], vec![0, 2, 0], vec![0, 0, 3]]).unwrap();
        let red = lll_reduce(&b, &ReductionParams::default()).unwrap();
        assert_eq!(red.basis, b);
        let identity: Vec<Vec<BigInt>> = (0..3)
            .map(|i| (0..3).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
            .collect();
        assert_eq!(red.transform, identity);
    }

    #[test]
    fn reduction_is_idempotent() {
        let b = Basis::from_integers(vec![vec![1, 1, 1], vec![-1, 0, 2], vec![3, 5, 6]]).unwrap();
        let once = lll_reduce(&b, &ReductionParams::default()).unwrap();
        let twice = lll_reduce(&once.basis, &ReductionParams::default()).unwrap();
        assert_eq!(once.basis, twice.basis);
    }

    #[test]
    fn classic_example_reduces() {
        let b = Basis::from_integers(vec![vec![1, 1, 1], vec![-1, 0, 2], vec![3, 5, 6]]).unwrap();
        let red = lll_reduce(&b, &ReductionParams::default()).unwrap();
        assert!(is_alpha_reduced(&red.basis, &ReductionParams::default()).unwrap());
        // Transform reproduces the output exactly.
        for (i, row) in red.basis.rows().iter().enumerate() {
            for (j, val) in row.iter().enumerate() {
                let mut acc = BigRational::zero();
                for (k, orig) in b.rows().iter().enumerate() {
                    acc += BigRational::from_integer(red.transform[i][k].clone()) * &orig[j];
                }
                assert_eq!(&acc, val);
            }
        }
        assert_eq!(transform_determinant(&red.transform).abs(), BigInt::one());
        // Determinant preserved.
        assert_eq!(lattice_determinant(&b).unwrap(), lattice_determinant(&red.basis).unwrap());
    }

    #[test]
    fn determinant_homogeneity() {
        let b = Basis::from_integers(vec![vec![2, 0, 0], vec![0, 2, 0], vec![0, 0, 2]]).unwrap();
        assert_eq!(lattice_determinant(&b).unwrap(), rat(8, 1));
    }

    #[test]
    fn alpha_range_enforced() {
        assert!(ReductionParams::new(rat(1, 4)).is_err());
        assert!(ReductionParams::new(rat(1, 1)).is_err());
        assert!(ReductionParams::new(rat(9, 10)).is_ok());
    }
}
