//! Minimal linear relations (circuits) among the forms of an arrangement,
//! and the subspaces they force entire curves into.
//!
//! A circuit is a minimal linearly dependent subset of the forms; its
//! relation coefficients are unique up to scale and are reported against
//! the supplied form representatives, scaled so the first coefficient is 1.
//! Every circuit contributes two kinds of obstruction subspaces: diagonal
//! hyperplanes, cut out by the partial sums of the relation over index sets
//! `J` with `2 <= |J| <= k-2`, and associated subspaces, which contain the
//! common intersection of the circuit's hyperplanes with codimension 1.
//! Any entire curve through a point of the complement stays inside one of
//! these subspaces, per circuit; that is the content of the obstruction
//! report.

use serde::Serialize;
use thiserror::Error;

use crate::arrangement::{
    Arrangement, ArrangementError, ClassificationReport, LinearForm, ProjectivePoint, Verdict,
};
use crate::combinat::combinations;
use crate::gaussian::GaussianRational;
use crate::linalg::Matrix;
use crate::VectorQ;

use num_traits::Zero;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RelationsError {
    #[error("circuit does not belong to this arrangement")]
    ForeignCircuit,
    #[error("point lies in the base locus of the circuit")]
    PointInBaseLocus,
    #[error("point lies on hyperplane {form_index} of the arrangement")]
    PointOnArrangement { form_index: usize },
    #[error(transparent)]
    Arrangement(#[from] ArrangementError),
    #[error("samples have length {sample_len} but conditions have length {condition_len}")]
    DimensionMismatch {
        sample_len: usize,
        condition_len: usize,
    },
}

impl RelationsError {
    pub fn code(&self) -> &'static str {
        match self {
            RelationsError::ForeignCircuit => "foreign_circuit",
            RelationsError::PointInBaseLocus => "point_in_base_locus",
            RelationsError::PointOnArrangement { .. } => "point_on_arrangement",
            RelationsError::Arrangement(e) => e.code(),
            RelationsError::DimensionMismatch { .. } => "dimension_mismatch",
        }
    }
}

/// A minimal linear relation among the forms: the indexed forms are
/// dependent but every proper subset is independent.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Circuit {
    /// Position in the arrangement's circuit list (1-based).
    pub index: usize,
    /// Participating forms, sorted, 1-based.
    pub indices: Vec<usize>,
    /// Exact relation coefficients against the supplied representatives:
    /// `sum c_j F_j = 0`, first coefficient 1.
    pub coefficients: Vec<GaussianRational>,
}

impl Circuit {
    pub fn size(&self) -> usize {
        self.indices.len()
    }

    /// Checks membership in `arr`: indices in range and the relation summing
    /// to zero exactly.
    pub fn belongs_to(&self, arr: &Arrangement) -> bool {
        if self.indices.len() != self.coefficients.len()
            || self.indices.iter().any(|&i| i == 0 || i > arr.count())
        {
            return false;
        }
        let mut sum = crate::linalg::Vector::zeros(arr.dimension() + 1);
        for (&i, c) in self.indices.iter().zip(&self.coefficients) {
            sum = sum.add(&arr.representative(i).scaled(c));
        }
        sum.is_zero_vector()
    }
}

/// A hyperplane cut out by a partial sum of a circuit's relation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiagonalHyperplane {
    /// Normalized form of `sum_{j in J} c_j F_j`.
    pub form: LinearForm,
    /// Which circuit produced it (1-based position in the circuit list).
    pub circuit_index: usize,
    /// Canonical generating subset: the lexicographically least `J`
    /// (1-based form indices) among those producing this hyperplane.
    pub subset: Vec<usize>,
}

/// The unique associated subspace of a circuit through a given point: the
/// span of the circuit's base locus and the point. When the base locus is
/// empty the subspace is the point itself.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AssociatedSubspace {
    /// Exact kernel basis of the stacked circuit forms.
    pub base_locus_basis: Vec<VectorQ>,
    pub extension_point: ProjectivePoint,
    /// `base_locus_basis` plus the canonical lift of the point.
    pub span_basis: Vec<VectorQ>,
}

impl AssociatedSubspace {
    /// Projective dimension of the subspace.
    pub fn dimension(&self) -> usize {
        self.span_basis.len() - 1
    }

    /// Normalized linear conditions cutting the subspace out of projective
    /// space: a deterministic basis of the annihilator of the span.
    pub fn conditions(&self) -> Vec<LinearForm> {
        annihilator(&self.span_basis)
    }
}

/// Deterministic normalized basis of `{L : L(v) = 0 for all v in span}`.
fn annihilator(span: &[VectorQ]) -> Vec<LinearForm> {
    let rows: Vec<VectorQ> = span.to_vec();
    let m = Matrix::from_rows(rows).expect("nonempty span basis");
    m.kernel_basis()
        .into_iter()
        .map(|v| LinearForm::new(v).expect("kernel vectors are nonzero"))
        .collect()
}

/// All circuits of the arrangement, sorted by size then lexicographically.
///
/// Subsets are scanned in increasing size with supersets of found circuits
/// pruned; dependence is decided by exact rank, and each circuit's
/// coefficients come from the one-dimensional kernel of its transposed
/// form matrix.
pub fn circuits(arr: &Arrangement) -> Vec<Circuit> {
    let n_forms = arr.count();
    let mut found: Vec<Vec<usize>> = Vec::new(); // 0-based index sets
    let max_size = n_forms.min(arr.dimension() + 2);
    for size in 1..=max_size {
        for subset in combinations(n_forms, size) {
            if found.iter().any(|c| c.iter().all(|i| subset.contains(i))) {
                continue;
            }
            let indices: Vec<usize> = subset.iter().map(|&i| i + 1).collect();
            if arr.stack(&indices).rank() < size {
                // no smaller circuit inside, so this subset is minimal
                found.push(subset);
            }
        }
    }
    found
        .into_iter()
        .enumerate()
        .map(|(pos, subset)| {
            let indices: Vec<usize> = subset.iter().map(|&i| i + 1).collect();
            let kernel = arr
                .stack_representatives(&indices)
                .transpose()
                .kernel_basis();
            assert_eq!(kernel.len(), 1, "circuit nullity must be 1");
            let raw = &kernel[0];
            let lead = raw
                .iter()
                .find(|c| !c.is_zero())
                .expect("relation vector is nonzero")
                .clone();
            let inv = lead.inv_checked().expect("nonzero leading coefficient");
            let coefficients = raw.scaled(&inv).0;
            assert!(coefficients.iter().all(|c| !c.is_zero()), "circuit coefficients are nonzero");
            Circuit {
                index: pos + 1,
                indices,
                coefficients,
            }
        })
        .collect()
}

/// The distinct diagonal hyperplanes of one circuit. Complementary subsets
/// produce the same hyperplane and are merged; the recorded subset is the
/// lexicographically least generator. Circuits of size 3 or less have none.
pub fn diagonal_hyperplanes(
    circuit: &Circuit,
    arr: &Arrangement,
) -> Result<Vec<DiagonalHyperplane>, RelationsError> {
    if !circuit.belongs_to(arr) {
        return Err(RelationsError::ForeignCircuit);
    }
    let k = circuit.size();
    if k < 4 {
        return Ok(Vec::new());
    }
    // normalized form -> lexicographically least generating subset
    let mut canonical: Vec<(LinearForm, Vec<usize>)> = Vec::new();
    for size in 2..=k - 2 {
        for positions in combinations(k, size) {
            let mut sum = crate::linalg::Vector::zeros(arr.dimension() + 1);
            for &pos in &positions {
                let form_index = circuit.indices[pos];
                sum = sum.add(
                    &arr.representative(form_index)
                        .scaled(&circuit.coefficients[pos]),
                );
            }
            let form = LinearForm::new(sum)
                .expect("partial sums of a minimal relation are nonzero");
            let subset: Vec<usize> = positions.iter().map(|&p| circuit.indices[p]).collect();
            match canonical.iter_mut().find(|(f, _)| *f == form) {
                Some((_, existing)) => {
                    if subset < *existing {
                        *existing = subset;
                    }
                }
                None => canonical.push((form, subset)),
            }
        }
    }
    let mut out: Vec<DiagonalHyperplane> = canonical
        .into_iter()
        .map(|(form, subset)| DiagonalHyperplane {
            form,
            circuit_index: circuit.index,
            subset,
        })
        .collect();
    out.sort_by(|a, b| a.subset.cmp(&b.subset));
    Ok(out)
}

/// Exact basis of the common intersection of the circuit's hyperplanes
/// (as a linear subspace of C^{n+1}).
pub fn base_locus(circuit: &Circuit, arr: &Arrangement) -> Result<Vec<VectorQ>, RelationsError> {
    if !circuit.belongs_to(arr) {
        return Err(RelationsError::ForeignCircuit);
    }
    Ok(arr.stack(&circuit.indices).kernel_basis())
}

/// The associated subspace of the circuit through `p`: span of the base
/// locus and the canonical lift of `p`. `p` must lie outside the base
/// locus.
pub fn associated_subspace_through(
    circuit: &Circuit,
    arr: &Arrangement,
    p: &ProjectivePoint,
) -> Result<AssociatedSubspace, RelationsError> {
    let base = base_locus(circuit, arr)?;
    if p.len() != arr.dimension() + 1 {
        return Err(RelationsError::Arrangement(
            ArrangementError::PointLengthMismatch {
                expected: arr.dimension() + 1,
                found: p.len(),
            },
        ));
    }
    let mut span = base.clone();
    span.push(p.coords().clone());
    let rank = Matrix::from_rows(span.clone())
        .expect("span rows are rectangular")
        .rank();
    if rank != base.len() + 1 {
        return Err(RelationsError::PointInBaseLocus);
    }
    Ok(AssociatedSubspace {
        base_locus_basis: base,
        extension_point: p.clone(),
        span_basis: span,
    })
}

/// Per-circuit obstructions at one point of the complement.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ObstructionEntry {
    pub circuit: Circuit,
    /// The circuit's diagonal hyperplanes that pass through the point.
    pub diagonal_hyperplanes: Vec<DiagonalHyperplane>,
    pub associated_subspace: AssociatedSubspace,
}

/// For each circuit, the subspaces that can contain the image of an entire
/// curve through the point. Empty iff the forms are linearly independent.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ObstructionReport {
    pub point: ProjectivePoint,
    pub per_circuit: Vec<ObstructionEntry>,
}

/// Computes the obstruction report at a point of the complement: per
/// circuit, the diagonal hyperplanes through the point and the associated
/// subspace through it.
pub fn entire_curve_obstructions(
    arr: &Arrangement,
    p: &ProjectivePoint,
) -> Result<ObstructionReport, RelationsError> {
    ensure_in_complement(arr, p)?;
    let mut per_circuit = Vec::new();
    for circuit in circuits(arr) {
        let diagonals = diagonal_hyperplanes(&circuit, arr)?
            .into_iter()
            .filter(|d| d.form.eval(p.coords()).is_zero())
            .collect();
        // a complement point is off every circuit hyperplane, hence off the
        // base locus, so the associated subspace through it exists
        let associated = associated_subspace_through(&circuit, arr, p)?;
        per_circuit.push(ObstructionEntry {
            circuit,
            diagonal_hyperplanes: diagonals,
            associated_subspace: associated,
        });
    }
    Ok(ObstructionReport {
        point: p.clone(),
        per_circuit,
    })
}

fn ensure_in_complement(arr: &Arrangement, p: &ProjectivePoint) -> Result<(), RelationsError> {
    if p.len() != arr.dimension() + 1 {
        return Err(RelationsError::Arrangement(
            ArrangementError::PointLengthMismatch {
                expected: arr.dimension() + 1,
                found: p.len(),
            },
        ));
    }
    for index in 1..=arr.count() {
        if arr.form(index).eval(p.coords()).is_zero() {
            return Err(RelationsError::PointOnArrangement { form_index: index });
        }
    }
    Ok(())
}

/// Where the obstruction subspace came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum TangentSource {
    /// A diagonal hyperplane through the point.
    Diagonal { subset: Vec<usize> },
    /// The associated subspace through the point.
    Associated,
}

/// Linear conditions on tangent vectors at the point, in the affine chart
/// where the point's first nonzero coordinate is 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TangentConditions {
    pub circuit_index: usize,
    pub source: TangentSource,
    /// Rows of length n constraining the chart tangent coordinates
    /// (the chart coordinate is dropped), each normalized.
    pub rows: Vec<VectorQ>,
}

/// Tangent-direction report: the derivative at 0 of any entire curve
/// through the point lies in one of the listed subspaces.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TangentReport {
    pub point: ProjectivePoint,
    /// Chart: the affine piece where this coordinate equals 1.
    pub chart_coordinate: usize,
    pub entries: Vec<TangentConditions>,
}

/// Drops the chart coordinate from an ambient condition and renormalizes.
fn chart_row(form: &LinearForm, chart: usize) -> VectorQ {
    let reduced: Vec<GaussianRational> = form
        .coefficients()
        .iter()
        .enumerate()
        .filter(|(j, _)| *j != chart)
        .map(|(_, c)| c.clone())
        .collect();
    let v = crate::linalg::Vector(reduced);
    let lead = v
        .iter()
        .find(|c| !c.is_zero())
        .expect("chart conditions are nonzero on the tangent space")
        .clone();
    v.scaled(&lead.inv_checked().expect("nonzero lead"))
}

/// For every subspace in the obstruction report at `p`, the exact linear
/// conditions it imposes on tangent vectors at `p`, expressed in the affine
/// chart where `p`'s first nonzero coordinate is 1.
pub fn tangent_direction_subspaces(
    arr: &Arrangement,
    p: &ProjectivePoint,
) -> Result<TangentReport, RelationsError> {
    let report = entire_curve_obstructions(arr, p)?;
    let chart = p.chart_coordinate();
    let mut entries = Vec::new();
    for entry in &report.per_circuit {
        for diag in &entry.diagonal_hyperplanes {
            entries.push(TangentConditions {
                circuit_index: entry.circuit.index,
                source: TangentSource::Diagonal {
                    subset: diag.subset.clone(),
                },
                rows: vec![chart_row(&diag.form, chart)],
            });
        }
        let rows = entry
            .associated_subspace
            .conditions()
            .iter()
            .map(|form| chart_row(form, chart))
            .collect();
        entries.push(TangentConditions {
            circuit_index: entry.circuit.index,
            source: TangentSource::Associated,
            rows,
        });
    }
    Ok(TangentReport {
        point: report.point,
        chart_coordinate: chart,
        entries,
    })
}

/// True iff every condition annihilates every sample exactly. Samples are
/// lifts in C^{n+1}; conditions are ambient linear forms.
pub fn verify_curve_in_subspace(
    lift_samples: &[VectorQ],
    conditions: &[LinearForm],
) -> Result<bool, RelationsError> {
    for sample in lift_samples {
        for condition in conditions {
            if sample.len() != condition.len() {
                return Err(RelationsError::DimensionMismatch {
                    sample_len: sample.len(),
                    condition_len: condition.len(),
                });
            }
            if !condition.eval(sample).is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// [`Arrangement::classify`] with the circuit list filled in.
pub fn classify_with_circuits(arr: &Arrangement) -> ClassificationReport {
    let mut report = arr.classify();
    if report.verdict == Verdict::NotOka {
        report.circuits = Some(circuits(arr));
    } else {
        report.circuits = Some(Vec::new());
    }
    report
}
