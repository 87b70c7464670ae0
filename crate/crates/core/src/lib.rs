//! Exact-arithmetic toolkit for Schur matrix functionals.
//!
//! A nowhere-zero map `f : S_n -> F*` on the symmetric group induces the
//! functional `M -> sum_sigma f(sigma) prod_j m_{sigma(j),j}` on square
//! matrices; the determinant (`f = sgn`) and the permanent (`f = 1`) are the
//! two classical instances.  This crate computes with such functionals over
//! prime fields and the rationals: column/row equivalence partitions with
//! witness vectors, H- and PH-normalization, checking and decomposing linear
//! maps `U` with `g~(U(M)) = f~(M)`, exhaustive null-cone scans on tiny
//! fields, and the coherence subgroup attached to a central map.
//!
//! All arithmetic is exact; randomized identity testing is available behind
//! explicit seeds where exact expansion is too large.

pub mod central;
pub mod equiv;
pub mod error;
pub mod field;
pub mod groupmap;
pub mod json;
pub mod linalg;
pub mod matrix;
pub mod nullcone;
pub mod perm;
pub mod poly;
pub mod rng;
pub mod solver;
pub mod transform;

#[cfg(test)]
pub(crate) mod testutil;

pub use error::Error;
pub use field::{Field, FieldElement};
pub use groupmap::GroupMap;
pub use matrix::SquareMatrix;
pub use perm::Permutation;

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;
