//! Arbitrary-precision numeric kernel: exact rationals, high-precision reals
//! and complex numbers, interval arithmetic and symbolic real expressions.

pub mod complex;
pub mod expr;
pub mod format;
pub mod functions;
pub mod hpreal;
pub mod interval;

pub use complex::HpComplex;
pub use expr::{ExprError, RealExpr};
pub use hpreal::{HpReal, Rounding, DEFAULT_PRECISION};
pub use interval::Interval;

pub use num_bigint::{BigInt, BigUint};
pub use num_rational::BigRational;
