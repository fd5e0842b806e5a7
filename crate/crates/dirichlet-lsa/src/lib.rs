//! Multiprecision machinery for locating the complex roots of nonlattice
//! Dirichlet polynomials (the complex dimensions of nonlattice self-similar
//! fractal strings) by lattice string approximation.
//!
//! The pipeline: simultaneous Diophantine approximations to the exponent
//! ratios of a nonlattice polynomial (by continued fractions at rank two, by
//! LLL lattice basis reduction at higher rank) induce lattice polynomials
//! whose roots lie periodically on vertical lines. Those roots are computed
//! through a sparse polynomial solver, filtered by a stability region, and
//! refined into true roots of the original polynomial by complex Newton
//! iteration.
//!
//! See the `examples/` directory for one runnable example per capability and
//! the README for the file formats used by the thin CLI.

pub mod cfrac;
pub mod cli;
pub mod dioph;
pub mod dirichlet;
pub mod lll;
pub mod lsa;
pub mod numerics;
pub mod roots;

pub use numerics::{BigInt, BigRational, HpComplex, HpReal, RealExpr, Rounding};
