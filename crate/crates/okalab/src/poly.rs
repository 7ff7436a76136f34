//! Polynomial arithmetic: dense univariate polynomials over a field and
//! sparse multivariate polynomials over a ring.
//!
//! [`UniPoly`] backs the exact `f + 1/g` witness search (coefficients in
//! Q(i)); [`MultiPoly`] carries the complex-coefficient maps of the numeric
//! covering-space checks, including formal partial derivatives.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::{Field, Ring};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("variable index {0} out of range")]
    BadVariable(usize),
}

/// Dense univariate polynomial, coefficients in ascending degree with no
/// trailing zeros; the zero polynomial has an empty coefficient list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct UniPoly<T> {
    coeffs: Vec<T>,
}

impl<T: Ring> UniPoly<T> {
    pub fn from_coeffs(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: T) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        Self::from_coeffs(vec![T::zero(), T::one()])
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> Option<&T> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).cloned().unwrap_or_else(T::zero);
                let b = other.coeffs.get(i).cloned().unwrap_or_else(T::zero);
                a + b
            })
            .collect();
        Self::from_coeffs(coeffs)
    }

    pub fn neg(&self) -> Self {
        UniPoly {
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![T::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self::from_coeffs(coeffs)
    }

    pub fn scaled(&self, c: &T) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }
}

impl<T: Field> UniPoly<T> {
    /// Euclidean division: `self = q·d + r` with `deg r < deg d`.
    pub fn div_rem(&self, d: &Self) -> Result<(Self, Self), PolyError> {
        if d.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        let dlead = d.leading().expect("nonzero divisor").clone();
        let ddeg = d.degree().expect("nonzero divisor");
        let mut rem = self.clone();
        let mut quot = vec![T::zero(); self.coeffs.len().saturating_sub(ddeg)];
        while let Some(rdeg) = rem.degree() {
            if rdeg < ddeg {
                break;
            }
            let factor = rem.leading().expect("nonzero remainder").clone() / dlead.clone();
            let shift = rdeg - ddeg;
            quot[shift] = quot[shift].clone() + factor.clone();
            let mut sub = vec![T::zero(); shift];
            sub.extend(d.coeffs.iter().map(|c| c.clone() * factor.clone()));
            rem = rem.sub(&UniPoly::from_coeffs(sub));
        }
        Ok((Self::from_coeffs(quot), rem))
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor in gcd loop");
            a = b;
            b = r;
        }
        match a.leading() {
            Some(lead) => {
                let inv = lead.inv_checked().expect("nonzero leading coefficient");
                a.scaled(&inv)
            }
            None => a,
        }
    }
}

/// Sparse multivariate polynomial keyed by exponent vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiPoly<T> {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, T>,
}

impl<T: Ring> MultiPoly<T> {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: T) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    /// The coordinate monomial `x_var`.
    pub fn variable(nvars: usize, var: usize) -> Result<Self, PolyError> {
        if var >= nvars {
            return Err(PolyError::BadVariable(var));
        }
        let mut exps = vec![0; nvars];
        exps[var] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(exps, T::one());
        Ok(p)
    }

    pub fn from_terms(
        nvars: usize,
        terms: impl IntoIterator<Item = (Vec<u32>, T)>,
    ) -> Result<Self, PolyError> {
        let mut p = Self::zero(nvars);
        for (exps, coeff) in terms {
            if exps.len() != nvars {
                return Err(PolyError::BadVariable(exps.len()));
            }
            p.add_term(exps, coeff);
        }
        Ok(p)
    }

    fn add_term(&mut self, exps: Vec<u32>, coeff: T) {
        use std::collections::btree_map::Entry;
        debug_assert_eq!(exps.len(), self.nvars);
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            Entry::Occupied(mut e) => {
                let sum = e.get().clone() + coeff;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
            Entry::Vacant(v) => {
                v.insert(coeff);
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &T)> {
        self.terms.iter()
    }

    pub fn eval(&self, point: &[T]) -> T {
        assert_eq!(point.len(), self.nvars, "evaluation point arity mismatch");
        self.terms
            .iter()
            .fold(T::zero(), |acc, (exps, coeff)| {
                let monomial = exps.iter().zip(point).fold(T::one(), |m, (&e, x)| {
                    (0..e).fold(m, |m, _| m * x.clone())
                });
                acc + coeff.clone() * monomial
            })
    }

    /// Formal partial derivative in variable `var`.
    pub fn partial(&self, var: usize) -> Result<Self, PolyError> {
        if var >= self.nvars {
            return Err(PolyError::BadVariable(var));
        }
        let mut out = Self::zero(self.nvars);
        for (exps, coeff) in &self.terms {
            let e = exps[var];
            if e == 0 {
                continue;
            }
            let mut dexps = exps.clone();
            dexps[var] = e - 1;
            // e·coeff via repeated addition: only Ring structure is assumed
            let factor = (0..e).fold(T::zero(), |acc, _| acc + coeff.clone());
            out.add_term(dexps, factor);
        }
        Ok(out)
    }
}
