//! Exact arithmetic over the Gaussian rationals Q(i).
//!
//! A [`GaussianRational`] is `re + im*i` with arbitrary-precision rational
//! parts, each kept in lowest terms with a positive denominator, so equality
//! is structural. All linear algebra behind the arrangement certificates runs
//! over this field; no floating point is involved anywhere in it.
//!
//! The canonical string form is `"a/b"` for real values and `"a/b+c/d*i"` /
//! `"a/b-c/d*i"` otherwise (pure-imaginary values print as `"c/d*i"`).
//! Parsing also accepts plain integers (`"3"`), a bare `i`, and coefficients
//! without the `*` separator. `to_string`/`parse` round-trip bit-exactly.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Error produced when a scalar string does not match the grammar.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("malformed scalar `{input}`: {reason}")]
pub struct ScalarParseError {
    pub input: String,
    pub reason: String,
}

impl ScalarParseError {
    fn new(input: &str, reason: impl Into<String>) -> Self {
        ScalarParseError {
            input: input.to_string(),
            reason: reason.into(),
        }
    }

    /// Machine-readable error code.
    pub fn code(&self) -> &'static str {
        "malformed_scalar"
    }
}

/// An element of Q(i): `re + im*i` with exact rational components.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GaussianRational {
    re: BigRational,
    im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussianRational { re, im }
    }

    /// Purely real value.
    pub fn from_rational(re: BigRational) -> Self {
        GaussianRational {
            re,
            im: BigRational::zero(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    /// `num/den` as a real value. `den` must be nonzero.
    pub fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Self::from_rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// `a + b*i` from four integers `a = an/ad`, `b = bn/bd`.
    pub fn from_parts(an: i64, ad: i64, bn: i64, bd: i64) -> Self {
        assert!(ad != 0 && bd != 0, "zero denominator");
        GaussianRational {
            re: BigRational::new(BigInt::from(an), BigInt::from(ad)),
            im: BigRational::new(BigInt::from(bn), BigInt::from(bd)),
        }
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        GaussianRational {
            re: BigRational::zero(),
            im: BigRational::one(),
        }
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussianRational {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    /// `re² + im²`, the multiplicative norm; zero iff the value is zero.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv_checked(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(GaussianRational {
            re: &self.re / &n,
            im: -(&self.im / &n),
        })
    }

    /// Exact division; `None` when `rhs` is zero.
    pub fn div_checked(&self, rhs: &Self) -> Option<Self> {
        rhs.inv_checked().map(|inv| self.clone() * inv)
    }
}

impl Zero for GaussianRational {
    fn zero() -> Self {
        GaussianRational {
            re: BigRational::zero(),
            im: BigRational::zero(),
        }
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussianRational {
    fn one() -> Self {
        GaussianRational {
            re: BigRational::one(),
            im: BigRational::zero(),
        }
    }
}

impl Add for GaussianRational {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        GaussianRational {
            re: self.re + rhs.re,
            im: self.im + rhs.im,
        }
    }
}

impl Sub for GaussianRational {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        GaussianRational {
            re: self.re - rhs.re,
            im: self.im - rhs.im,
        }
    }
}

impl Neg for GaussianRational {
    type Output = Self;
    fn neg(self) -> Self {
        GaussianRational {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl Mul for GaussianRational {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        GaussianRational {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

/// Panics on a zero divisor; use [`GaussianRational::div_checked`] to probe.
impl Div for GaussianRational {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        self.div_checked(&rhs)
            .expect("division by zero Gaussian rational")
    }
}

fn fmt_rational(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", fmt_rational(&self.re));
        }
        if self.re.is_zero() {
            return write!(f, "{}*i", fmt_rational(&self.im));
        }
        if self.im.is_negative() {
            write!(
                f,
                "{}-{}*i",
                fmt_rational(&self.re),
                fmt_rational(&-self.im.clone())
            )
        } else {
            write!(
                f,
                "{}+{}*i",
                fmt_rational(&self.re),
                fmt_rational(&self.im)
            )
        }
    }
}

fn parse_big_rational(input: &str, term: &str) -> Result<BigRational, ScalarParseError> {
    let term = term.trim();
    let (num_str, den_str) = match term.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (term, "1"),
    };
    let numer: BigInt = num_str
        .parse()
        .map_err(|_| ScalarParseError::new(input, format!("bad numerator `{num_str}`")))?;
    let denom: BigInt = den_str
        .parse()
        .map_err(|_| ScalarParseError::new(input, format!("bad denominator `{den_str}`")))?;
    if denom.is_zero() {
        return Err(ScalarParseError::new(input, "zero denominator"));
    }
    Ok(BigRational::new(numer, denom))
}

/// One additive term: either a real rational or a multiple of `i`.
fn parse_term(input: &str, term: &str) -> Result<(BigRational, bool), ScalarParseError> {
    let term = term.trim();
    if term.is_empty() {
        return Err(ScalarParseError::new(input, "empty term"));
    }
    if let Some(coeff) = term.strip_suffix('i') {
        let coeff = coeff.trim().strip_suffix('*').unwrap_or(coeff).trim();
        let q = match coeff {
            "" | "+" => BigRational::one(),
            "-" => -BigRational::one(),
            c => parse_big_rational(input, c)?,
        };
        Ok((q, true))
    } else {
        Ok((parse_big_rational(input, term)?, false))
    }
}

/// Splits `s` into at most two additive terms at a top-level `+`/`-` sign.
/// A sign at position 0 or directly after `/`, `*` or another sign belongs
/// to its term (`"1/-2"`, `"1+-2*i"`).
fn split_terms(s: &str) -> (String, Option<String>) {
    let bytes = s.as_bytes();
    for (pos, &b) in bytes.iter().enumerate().skip(1) {
        if (b == b'+' || b == b'-') && !matches!(bytes[pos - 1], b'/' | b'*' | b'+' | b'-') {
            let head = s[..pos].to_string();
            let tail = if b == b'-' {
                s[pos..].to_string()
            } else {
                s[pos + 1..].to_string()
            };
            return (head, Some(tail));
        }
    }
    (s.to_string(), None)
}

impl FromStr for GaussianRational {
    type Err = ScalarParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let trimmed = s.trim();
        if trimmed.is_empty() {
            return Err(ScalarParseError::new(s, "empty scalar"));
        }
        let (head, tail) = split_terms(trimmed);
        let (first_q, first_imag) = parse_term(s, &head)?;
        let mut re = BigRational::zero();
        let mut im = BigRational::zero();
        if first_imag {
            im = first_q;
        } else {
            re = first_q;
        }
        if let Some(tail) = tail {
            let (second_q, second_imag) = parse_term(s, &tail)?;
            if second_imag == first_imag {
                return Err(ScalarParseError::new(s, "two terms of the same kind"));
            }
            if second_imag {
                im = second_q;
            } else {
                re = second_q;
            }
        }
        Ok(GaussianRational { re, im })
    }
}

impl Serialize for GaussianRational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for GaussianRational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
