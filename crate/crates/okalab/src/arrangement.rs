//! Projective hyperplane arrangements over Q(i): general-position testing
//! and the Oka/non-Oka classification with certificates.
//!
//! An arrangement is `N` distinct hyperplanes in projective n-space, each
//! given by a nonzero linear form in the homogeneous coordinates `x0..xn`.
//! Forms are normalized so the first nonzero coefficient is 1, which makes
//! hyperplane identity a structural comparison and makes every verdict
//! invariant under rescaling of the input forms.
//!
//! The complement of the arrangement is Oka exactly when the hyperplanes are
//! in general position (every subset of at most n+1 forms is linearly
//! independent) and `N <= n+1`. In the Oka case the classifier returns an
//! exact coordinate change taking the hyperplanes to coordinate hyperplanes;
//! otherwise it reports which of the two obstructions applies, and both
//! dominability by C^n and C-connectedness fail.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::combinat::combinations;
use crate::gaussian::{GaussianRational, ScalarParseError};
use crate::linalg::{Matrix, Vector};
use crate::relations::Circuit;
use crate::{MatrixQ, VectorQ};

use num_traits::{One, Zero};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArrangementError {
    #[error("form {index} is the zero form")]
    ZeroForm { index: usize },
    #[error("forms {first} and {second} define the same hyperplane")]
    DuplicateHyperplane { first: usize, second: usize },
    #[error("form {index} has {found} coefficients, expected {expected}")]
    LengthMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("form {index}, coefficient {position}: {source}")]
    MalformedScalar {
        index: usize,
        position: usize,
        source: ScalarParseError,
    },
    #[error("ambient dimension must be at least 1")]
    InvalidDimension,
    #[error("input document is not valid JSON: {0}")]
    InvalidDocument(String),
    #[error("projective point must have a nonzero coordinate")]
    ZeroPoint,
    #[error("point has {found} coordinates, expected {expected}")]
    PointLengthMismatch { expected: usize, found: usize },
    #[error("coordinate-change witness requires general position and N <= n+1")]
    WitnessPrecondition,
}

impl ArrangementError {
    /// Machine-readable error code, one per failure mode.
    pub fn code(&self) -> &'static str {
        match self {
            ArrangementError::ZeroForm { .. } => "zero_form",
            ArrangementError::DuplicateHyperplane { .. } => "duplicate_hyperplane",
            ArrangementError::LengthMismatch { .. } => "length_mismatch",
            ArrangementError::MalformedScalar { .. } => "malformed_scalar",
            ArrangementError::InvalidDimension => "invalid_dimension",
            ArrangementError::InvalidDocument(_) => "invalid_document",
            ArrangementError::ZeroPoint => "zero_point",
            ArrangementError::PointLengthMismatch { .. } => "point_length_mismatch",
            ArrangementError::WitnessPrecondition => "witness_precondition",
        }
    }
}

/// A nonzero homogeneous linear form, normalized so its first nonzero
/// coefficient is 1. Two forms are equal iff they cut out the same
/// hyperplane.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LinearForm(VectorQ);

impl LinearForm {
    /// Normalizes; `None` for the zero vector.
    pub fn new(coeffs: VectorQ) -> Option<Self> {
        let lead = coeffs.iter().find(|c| !c.is_zero())?.clone();
        let inv = lead.inv_checked().expect("nonzero leading coefficient");
        Some(LinearForm(coeffs.scaled(&inv)))
    }

    pub fn coefficients(&self) -> &VectorQ {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Exact evaluation at a (lifted) point.
    pub fn eval(&self, coords: &VectorQ) -> GaussianRational {
        self.0.dot(coords)
    }
}

impl std::fmt::Display for LinearForm {
    /// Human-oriented rendering like `x1 - x2` or `1/2*x0 + x1`.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        for (j, c) in self.0.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (sign, magnitude) = if c.is_real() && c.re() < &num_rational::BigRational::zero() {
                ("-", -c.clone())
            } else {
                ("+", c.clone())
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {} ", sign)?;
            }
            if magnitude.is_one() {
                write!(f, "x{j}")?;
            } else if magnitude.is_real() {
                write!(f, "{}/{}*x{j}", magnitude.re().numer(), magnitude.re().denom())?;
            } else {
                write!(f, "({})*x{j}", magnitude)?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// A point of projective n-space with exact coordinates, normalized so the
/// first nonzero coordinate is 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ProjectivePoint(VectorQ);

impl ProjectivePoint {
    pub fn new(coords: VectorQ) -> Result<Self, ArrangementError> {
        let lead = coords
            .iter()
            .find(|c| !c.is_zero())
            .ok_or(ArrangementError::ZeroPoint)?
            .clone();
        let inv = lead.inv_checked().expect("nonzero leading coordinate");
        Ok(ProjectivePoint(coords.scaled(&inv)))
    }

    /// The canonical lift to affine space.
    pub fn coords(&self) -> &VectorQ {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Index of the first nonzero coordinate (which equals 1).
    pub fn chart_coordinate(&self) -> usize {
        self.0
            .iter()
            .position(|c| !c.is_zero())
            .expect("projective point has a nonzero coordinate")
    }
}

/// `N` pairwise-distinct hyperplanes in projective n-space.
///
/// Each hyperplane is kept in two exact representations: the normalized
/// form (first nonzero coefficient 1), which decides hyperplane identity
/// and everything in the classification, and the coefficient vector as the
/// caller supplied it. Linear-relation certificates are stated against the
/// supplied representatives, so a relation like `F1 - F2 - F3 + F4 = 0`
/// comes back with exactly those signs; rescaling an input form rescales
/// the matching relation coefficient inversely and changes nothing
/// geometric.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Arrangement {
    n: usize,
    forms: Vec<LinearForm>,
    #[serde(skip)]
    reps: Vec<VectorQ>,
}

/// JSON input document: `{"n": 2, "forms": [["0","1","0"], ...]}` with
/// scalar strings in the Q(i) grammar.
#[derive(Debug, Deserialize)]
struct ArrangementDoc {
    n: usize,
    forms: Vec<Vec<String>>,
}

impl Arrangement {
    /// Builds an arrangement, normalizing forms and rejecting zero forms,
    /// wrong lengths and duplicate hyperplanes (proportional input forms).
    pub fn new(n: usize, raw_forms: Vec<VectorQ>) -> Result<Self, ArrangementError> {
        if n == 0 {
            return Err(ArrangementError::InvalidDimension);
        }
        let mut forms: Vec<LinearForm> = Vec::with_capacity(raw_forms.len());
        let mut reps: Vec<VectorQ> = Vec::with_capacity(raw_forms.len());
        for (idx, coeffs) in raw_forms.into_iter().enumerate() {
            let index = idx + 1;
            if coeffs.len() != n + 1 {
                return Err(ArrangementError::LengthMismatch {
                    index,
                    expected: n + 1,
                    found: coeffs.len(),
                });
            }
            let form =
                LinearForm::new(coeffs.clone()).ok_or(ArrangementError::ZeroForm { index })?;
            if let Some(prev) = forms.iter().position(|f| *f == form) {
                return Err(ArrangementError::DuplicateHyperplane {
                    first: prev + 1,
                    second: index,
                });
            }
            forms.push(form);
            reps.push(coeffs);
        }
        Ok(Arrangement { n, forms, reps })
    }

    /// Ambient projective dimension.
    pub fn dimension(&self) -> usize {
        self.n
    }

    /// Number of hyperplanes.
    pub fn count(&self) -> usize {
        self.forms.len()
    }

    pub fn forms(&self) -> &[LinearForm] {
        &self.forms
    }

    /// Form number `index` (1-based, as in all reports).
    pub fn form(&self, index: usize) -> &LinearForm {
        &self.forms[index - 1]
    }

    /// Coefficient vector of form `index` (1-based) exactly as supplied.
    pub fn representative(&self, index: usize) -> &VectorQ {
        &self.reps[index - 1]
    }

    /// Stacks the selected normalized forms (1-based indices) as matrix rows.
    pub fn stack(&self, indices: &[usize]) -> MatrixQ {
        Matrix::from_rows(
            indices
                .iter()
                .map(|&i| self.form(i).coefficients().clone())
                .collect(),
        )
        .expect("forms share length n+1")
    }

    /// Stacks the selected supplied representatives (1-based indices).
    pub fn stack_representatives(&self, indices: &[usize]) -> MatrixQ {
        Matrix::from_rows(
            indices
                .iter()
                .map(|&i| self.representative(i).clone())
                .collect(),
        )
        .expect("forms share length n+1")
    }

    /// The smallest dependent subset of size at most n+1, if one exists:
    /// smallest size first, then lexicographically least. Indices are
    /// 1-based. `None` means the arrangement is in general position.
    pub fn minimal_dependent_subset(&self) -> Option<Vec<usize>> {
        let max_size = self.count().min(self.n + 1);
        for size in 1..=max_size {
            for subset in combinations(self.count(), size) {
                let indices: Vec<usize> = subset.iter().map(|&i| i + 1).collect();
                if self.stack(&indices).rank() < size {
                    return Some(indices);
                }
            }
        }
        None
    }

    /// Every subset of at most n+1 forms is linearly independent.
    pub fn is_general_position(&self) -> bool {
        self.minimal_dependent_subset().is_none()
    }

    /// True iff the point lies on none of the hyperplanes.
    pub fn in_complement(&self, p: &ProjectivePoint) -> Result<bool, ArrangementError> {
        if p.len() != self.n + 1 {
            return Err(ArrangementError::PointLengthMismatch {
                expected: self.n + 1,
                found: p.len(),
            });
        }
        Ok(self.forms.iter().all(|f| !f.eval(p.coords()).is_zero()))
    }

    /// An invertible matrix `M` with `F_j ∘ M` proportional to the
    /// coordinate form `x_{j-1}` for every j. Requires general position and
    /// `N <= n+1`; the product identity is re-verified exactly before
    /// returning.
    pub fn oka_witness(&self) -> Result<MatrixQ, ArrangementError> {
        let nplus1 = self.n + 1;
        if self.count() > nplus1 || !self.is_general_position() {
            return Err(ArrangementError::WitnessPrecondition);
        }
        // complete the form rows to a basis with standard basis vectors
        let mut rows: Vec<VectorQ> = self
            .forms
            .iter()
            .map(|f| f.coefficients().clone())
            .collect();
        for j in 0..nplus1 {
            if rows.len() == nplus1 {
                break;
            }
            let mut e = Vector::zeros(nplus1);
            e[j] = GaussianRational::one();
            rows.push(e);
            let candidate = Matrix::from_rows(rows.clone()).expect("rectangular rows");
            if candidate.rank() < rows.len() {
                rows.pop();
            }
        }
        let basis = Matrix::from_rows(rows).expect("rectangular rows");
        let witness = basis
            .inverse()
            .expect("square by construction")
            .expect("full rank by construction");
        // exact verification: basis · witness = identity, so each composed
        // form F_j ∘ M is exactly the coordinate form x_{j-1}
        assert!(
            basis.mat_mul(&witness).expect("compatible").is_identity(),
            "witness verification failed"
        );
        Ok(witness)
    }

    /// Full classification with certificates. Circuits are left unfilled
    /// here; [`crate::relations::classify_with_circuits`] adds them.
    pub fn classify(&self) -> ClassificationReport {
        match self.minimal_dependent_subset() {
            None if self.count() <= self.n + 1 => {
                let witness = self.oka_witness().expect("precondition established");
                let profile = if self.count() == 0 {
                    None
                } else {
                    Some(ProductProfile {
                        cstar_factors: self.count() - 1,
                        plane_factors: self.n + 1 - self.count(),
                    })
                };
                ClassificationReport {
                    verdict: Verdict::Oka,
                    reason: Reason::GeneralPositionFewForms,
                    dominable_by_cn: true,
                    c_connected: true,
                    oka_witness: Some(witness),
                    product_profile: profile,
                    failing_subset: None,
                    circuits: None,
                }
            }
            None => ClassificationReport {
                verdict: Verdict::NotOka,
                reason: Reason::GeneralPositionTooMany,
                dominable_by_cn: false,
                c_connected: false,
                oka_witness: None,
                product_profile: None,
                failing_subset: None,
                circuits: None,
            },
            Some(subset) => ClassificationReport {
                verdict: Verdict::NotOka,
                reason: Reason::NotGeneralPosition,
                dominable_by_cn: false,
                c_connected: false,
                oka_witness: None,
                product_profile: None,
                failing_subset: Some(subset),
                circuits: None,
            },
        }
    }
}

/// Parses the JSON arrangement document, normalizing and validating.
pub fn parse_arrangement(text: &str) -> Result<Arrangement, ArrangementError> {
    let doc: ArrangementDoc =
        serde_json::from_str(text).map_err(|e| ArrangementError::InvalidDocument(e.to_string()))?;
    let mut forms = Vec::with_capacity(doc.forms.len());
    for (idx, row) in doc.forms.iter().enumerate() {
        let mut entries = Vec::with_capacity(row.len());
        for (pos, s) in row.iter().enumerate() {
            let value: GaussianRational =
                s.parse().map_err(|source| ArrangementError::MalformedScalar {
                    index: idx + 1,
                    position: pos + 1,
                    source,
                })?;
            entries.push(value);
        }
        forms.push(Vector(entries));
    }
    Arrangement::new(doc.n, forms)
}

/// Oka or not.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Oka,
    NotOka,
}

/// Which branch of the classification applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Reason {
    /// General position and `N <= n+1`: the complement is a product of
    /// punctured planes and planes, hence Oka.
    GeneralPositionFewForms,
    /// General position and `N > n+1`: entire curves are trapped in a finite
    /// collection of hyperplanes.
    GeneralPositionTooMany,
    /// A dependent subset of size at most n+1 exists.
    NotGeneralPosition,
}

/// Factor counts of the product decomposition in the Oka case (for `N >= 1`):
/// `N-1` punctured planes and `n+1-N` planes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductProfile {
    pub cstar_factors: usize,
    pub plane_factors: usize,
}

/// Classification verdict plus certificates.
///
/// Invariants: `verdict == Oka` iff `reason == GeneralPositionFewForms` iff
/// `oka_witness` is present; a `NotOka` verdict forces both flags false.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassificationReport {
    pub verdict: Verdict,
    pub reason: Reason,
    pub dominable_by_cn: bool,
    pub c_connected: bool,
    pub oka_witness: Option<MatrixQ>,
    pub product_profile: Option<ProductProfile>,
    /// Smallest-then-lexicographic dependent subset (1-based), present iff
    /// the reason is `NotGeneralPosition`.
    pub failing_subset: Option<Vec<usize>>,
    /// All circuits of the arrangement, when requested.
    pub circuits: Option<Vec<Circuit>>,
}
