//! Scalar abstractions for the generic containers in this crate.
//!
//! [`Matrix`](crate::linalg::Matrix), [`Vector`](crate::linalg::Vector),
//! [`UniPoly`](crate::poly::UniPoly) and [`MultiPoly`](crate::poly::MultiPoly)
//! are written against these traits rather than a fixed number type. The
//! exact geometry runs over [`GaussianRational`](crate::GaussianRational);
//! the numerical covering-space checks run over `Complex<f64>`.

use std::fmt::Debug;
use std::ops::{Div, Neg, Sub};

use num_traits::{One, Zero};

/// Commutative ring scalars: addition, subtraction, multiplication, 0 and 1.
///
/// Blanket-implemented. `Zero` brings `Add`, `One` brings `Mul`.
pub trait Ring:
    Clone + Debug + PartialEq + Zero + One + Neg<Output = Self> + Sub<Output = Self>
{
}

impl<T> Ring for T where
    T: Clone + Debug + PartialEq + Zero + One + Neg<Output = Self> + Sub<Output = Self>
{
}

/// Ring scalars with exact division by nonzero elements.
///
/// Division by zero is a caller error; implementations may panic.
pub trait Field: Ring + Div<Output = Self> {
    /// Multiplicative inverse, `None` for zero.
    fn inv_checked(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Self::one() / self.clone())
        }
    }
}

impl<T> Field for T where T: Ring + Div<Output = Self> {}
