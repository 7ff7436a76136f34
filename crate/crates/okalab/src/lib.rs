//! Exact certificates for complements of projective hyperplane arrangements
//! and numerical verification of covering-space and spray constructions for
//! graph complements of meromorphic functions.
//!
//! The crate has two halves:
//!
//! * **Exact half** ([`gaussian`], [`linalg`], [`arrangement`], [`relations`]):
//!   arrangements of hyperplanes in projective n-space over the Gaussian
//!   rationals Q(i). An arrangement complement is Oka exactly when the
//!   hyperplanes are in general position and there are at most n+1 of them;
//!   the classifier returns that verdict with certificates — a coordinate
//!   change witnessing the Oka case, or the minimal dependent subsets
//!   (circuits) obstructing it, together with their diagonal hyperplanes and
//!   associated subspaces, which confine every entire curve in the
//!   complement.
//! * **Numeric half** ([`poly`], [`graphcomp`]): the covering space of the
//!   complement of the graph of `1/g`, its projection, the sprays on it,
//!   the fibre spray on the graph complement itself, the localisation limit
//!   behind the spray extension, winding-number obstructions to writing a
//!   meromorphic function as `f + 1/g`, and the exact polynomial witness
//!   search for that decomposition.
//!
//! Core containers are generic over the scalar; the concrete aliases below
//! pin the two instantiations used throughout.

pub mod arrangement;
mod combinat;
pub mod gaussian;
pub mod graphcomp;
pub mod linalg;
pub mod poly;
pub mod relations;
pub mod scalar;

#[cfg(test)]
pub(crate) mod testutil;

pub use gaussian::{GaussianRational, ScalarParseError};
pub use linalg::{Matrix, Vector};
pub use poly::{MultiPoly, UniPoly};

/// Exact vector over Q(i).
pub type VectorQ = Vector<GaussianRational>;
/// Exact matrix over Q(i).
pub type MatrixQ = Matrix<GaussianRational>;
/// Exact univariate polynomial over Q(i).
pub type UniPolyQ = UniPoly<GaussianRational>;
/// Complex double-precision scalar used by the numeric half.
pub type CxScalar = num_complex::Complex64;
