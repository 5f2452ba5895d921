//! Correction terms of lens spaces, plumbed manifolds and knot surgeries, and
//! the signed unknotting number obstruction built from them.

pub mod arith;
pub mod cfk;
pub mod knots;
pub mod lens;
pub mod obstruct;
pub mod plumbing;
pub mod table;

pub use arith::{ContinuedFraction, Rational};
pub use table::{affine_dominates, affine_match, AffineMap, DTable};
