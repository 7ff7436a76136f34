//! Numerical verification of the covering-space and spray constructions for
//! complements of graphs of meromorphic functions, and the decidable
//! fragments of the `m = f + 1/g` decomposition criterion.
//!
//! The model is normalized so the graph is that of `1/g` for a polynomial
//! map `g`: the complement is `X = {(x, y) : g(x)·y != 1}` and the shear
//! `(x, y) -> (x, y + f(x))` carries it to the complement of the graph of
//! `f + 1/g`. Over `X` sits a covering space with integer layers,
//! `[x, y, k]`, glued by `g(x)(y - y') = (k - k')·2πi` wherever `g(x) != 0`.
//! This module implements the projection, the equivalence relation, the
//! layer sprays and their twisted extension, the localisation limit that
//! makes the extension continuous, and the fibre spray on `X` itself; each
//! comes with the identity it must satisfy, checked numerically in
//! [`verify`].
//!
//! Obstructions to the decomposition `m = f + 1/g` are detected by winding
//! numbers of the numerator along loops in the denominator's zero set; the
//! exact polynomial witness search for the decomposition lives in
//! [`decompose_univariate`].

pub mod verify;

use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::gaussian::GaussianRational;
use crate::poly::MultiPoly;
use crate::UniPolyQ;

/// Relative tolerance for algebraic identities.
pub const REL_TOL: f64 = 1e-9;
/// Tolerance for limits and finite differences.
pub const LIMIT_TOL: f64 = 1e-6;
/// Threshold below which a complex value counts as zero in preconditions.
pub const NONZERO_EPS: f64 = 1e-12;
/// Samples with |g| below this are skipped in the localisation limit.
const SKIP_EPS: f64 = 1e-300;
/// Series branch of the scaled exponential: |x·y| below this...
const SERIES_XY: f64 = 1e-4;
/// ...or |x| below this.
const SERIES_X: f64 = 1e-8;
/// Real part of the exponent beyond which exp overflows f64.
const EXP_OVERFLOW: f64 = 709.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GraphError {
    #[error("exponential overflow: exponent real part {re}")]
    Overflow { re: f64 },
    #[error("base point does not lie on the zero set of g (|g| = {magnitude})")]
    NotOnZeroSet { magnitude: f64 },
    #[error("all limit samples were skipped")]
    AllSamplesSkipped,
    #[error("point lies on the graph: g(x)·y = 1")]
    OnGraph,
    #[error("loop sample {index} is zero")]
    ZeroSample { index: usize },
    #[error("loop under-resolved at sample {index}: consecutive ratio too far from 1")]
    UnderResolved { index: usize },
    #[error("winding residual {residual} is not within 1e-6 of an integer")]
    NonIntegerWinding { residual: f64 },
    #[error("loop has no samples")]
    EmptyLoop,
    #[error("h and k are both zero")]
    BothZero,
    #[error("h and k share a nonconstant factor")]
    CommonFactor,
    #[error("x lies on the common zero locus of h and k")]
    CommonZero,
    #[error("point has {found} coordinates but the map takes {expected}")]
    ArityMismatch { expected: usize, found: usize },
}

impl GraphError {
    pub fn code(&self) -> &'static str {
        match self {
            GraphError::Overflow { .. } => "range_error",
            GraphError::NotOnZeroSet { .. } => "not_on_zero_set",
            GraphError::AllSamplesSkipped => "all_samples_skipped",
            GraphError::OnGraph => "on_graph",
            GraphError::ZeroSample { .. } => "zero_sample",
            GraphError::UnderResolved { .. } => "under_resolved_loop",
            GraphError::NonIntegerWinding { .. } => "winding_residual",
            GraphError::EmptyLoop => "empty_loop",
            GraphError::BothZero => "both_zero",
            GraphError::CommonFactor => "common_factor",
            GraphError::CommonZero => "common_zero_locus",
            GraphError::ArityMismatch { .. } => "arity_mismatch",
        }
    }
}

/// A polynomial map `C^n -> C` with its formal gradient precomputed.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyMap {
    poly: MultiPoly<Complex64>,
    gradient: Vec<MultiPoly<Complex64>>,
}

impl PolyMap {
    pub fn new(poly: MultiPoly<Complex64>) -> Self {
        let gradient = (0..poly.nvars())
            .map(|v| poly.partial(v).expect("variable index in range"))
            .collect();
        PolyMap { poly, gradient }
    }

    pub fn zero(nvars: usize) -> Self {
        Self::new(MultiPoly::zero(nvars))
    }

    pub fn constant(nvars: usize, c: Complex64) -> Self {
        Self::new(MultiPoly::constant(nvars, c))
    }

    /// Univariate map from ascending coefficients.
    pub fn univariate(coeffs: &[Complex64]) -> Self {
        let terms = coeffs
            .iter()
            .enumerate()
            .map(|(j, &c)| (vec![j as u32], c));
        Self::new(MultiPoly::from_terms(1, terms).expect("arity-1 exponents"))
    }

    pub fn nvars(&self) -> usize {
        self.poly.nvars()
    }

    pub fn poly(&self) -> &MultiPoly<Complex64> {
        &self.poly
    }

    pub fn eval(&self, x: &[Complex64]) -> Complex64 {
        self.poly.eval(x)
    }

    pub fn gradient_at(&self, x: &[Complex64]) -> Vec<Complex64> {
        self.gradient.iter().map(|p| p.eval(x)).collect()
    }

    /// The derivative as a linear map: `g'(x)(s)`.
    pub fn directional_derivative(&self, x: &[Complex64], s: &[Complex64]) -> Complex64 {
        assert_eq!(s.len(), self.nvars(), "direction arity mismatch");
        self.gradient_at(x)
            .iter()
            .zip(s)
            .map(|(d, si)| d * si)
            .sum()
    }

    fn check_arity(&self, x: &[Complex64]) -> Result<(), GraphError> {
        if x.len() != self.nvars() {
            return Err(GraphError::ArityMismatch {
                expected: self.nvars(),
                found: x.len(),
            });
        }
        Ok(())
    }
}

/// Serializes a complex number as the `[re, im]` pair the JSON reports use.
pub(crate) fn ser_cx<S: serde::Serializer>(c: &Complex64, s: S) -> Result<S::Ok, S::Error> {
    use serde::Serialize as _;
    [c.re, c.im].serialize(s)
}

/// Serializes a complex vector as a list of `[re, im]` pairs.
pub(crate) fn ser_cx_vec<S: serde::Serializer>(
    v: &[Complex64],
    s: S,
) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|c| [c.re, c.im]))
}

/// A representative `(x, y, k)` of a point of the covering space: base
/// coordinates, fibre coordinate, and integer layer.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoveredPoint {
    #[serde(serialize_with = "ser_cx_vec")]
    pub x: Vec<Complex64>,
    #[serde(serialize_with = "ser_cx")]
    pub y: Complex64,
    pub layer: i64,
}

impl CoveredPoint {
    pub fn new(x: Vec<Complex64>, y: Complex64, layer: i64) -> Self {
        CoveredPoint { x, y, layer }
    }
}

/// A point `(x, y)` of the graph complement's ambient space.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GraphPoint {
    #[serde(serialize_with = "ser_cx_vec")]
    pub x: Vec<Complex64>,
    #[serde(serialize_with = "ser_cx")]
    pub y: Complex64,
}

/// `e^w - 1` without cancellation for small `w`.
fn cexpm1(w: Complex64) -> Complex64 {
    let (a, b) = (w.re, w.im);
    let re = a.exp_m1() * b.cos() - 2.0 * (b / 2.0).sin().powi(2);
    let im = a.exp() * b.sin();
    Complex64::new(re, im)
}

/// `(e^{x·y} - 1)/x`, extended across `x = 0` by its value `y` there.
///
/// The family interpolates between exponential maps (x fixed nonzero) and
/// the identity (x = 0). Near the removable singularity the closed form
/// cancels catastrophically, so evaluation switches to the power series
/// `y·Σ (xy)^j/(j+1)!` when `|x·y| < 1e-4` or `|x| < 1e-8`.
pub fn scaled_expm1(x: Complex64, y: Complex64) -> Result<Complex64, GraphError> {
    let w = x * y;
    if w.re > EXP_OVERFLOW {
        return Err(GraphError::Overflow { re: w.re });
    }
    if x.norm() < SERIES_X || w.norm() < SERIES_XY {
        Ok(scaled_expm1_series(x, y))
    } else {
        Ok(scaled_expm1_closed(x, y))
    }
}

/// Series branch, exposed for the branch-consistency suite.
pub fn scaled_expm1_series(x: Complex64, y: Complex64) -> Complex64 {
    let w = x * y;
    let mut term = y;
    let mut acc = y;
    for j in 1..2000u32 {
        term = term * w / Complex64::new(f64::from(j) + 1.0, 0.0);
        acc += term;
        if term.norm() <= 1e-18 * acc.norm().max(f64::MIN_POSITIVE) {
            break;
        }
    }
    acc
}

/// Closed-form branch `(e^{xy} - 1)/x`, exposed for the same suite.
pub fn scaled_expm1_closed(x: Complex64, y: Complex64) -> Complex64 {
    cexpm1(x * y) / x
}

/// The shear `(x, y) -> (x, y + f(x))`, a biholomorphism carrying the
/// complement of the graph of `1/g` onto the complement of the graph of
/// `f + 1/g`. Everything else in this module works in the sheared-away
/// normal form `f = 0`.
pub fn shear(f: &PolyMap, p: &GraphPoint) -> Result<GraphPoint, GraphError> {
    f.check_arity(&p.x)?;
    Ok(GraphPoint {
        x: p.x.clone(),
        y: p.y + f.eval(&p.x),
    })
}

/// The covering projection `[x, y, k] -> (x, -φ(g(x), y))` where φ is the
/// scaled exponential. Its image satisfies `1 - g(x)·π₂ = e^{g(x)·y}`, so
/// it always lands in the complement of the graph of `1/g`.
pub fn cover_projection(g: &PolyMap, p: &CoveredPoint) -> Result<GraphPoint, GraphError> {
    g.check_arity(&p.x)?;
    let gx = g.eval(&p.x);
    let phi = scaled_expm1(gx, p.y)?;
    Ok(GraphPoint {
        x: p.x.clone(),
        y: -phi,
    })
}

/// The gluing relation of the covering space: representatives are
/// equivalent when their base points agree, `g` does not vanish there, and
/// `g(x)(y - y') = (k - k')·2πi` within tolerance. Identical triples are
/// equivalent regardless of `g`.
pub fn equivalent(g: &PolyMap, p1: &CoveredPoint, p2: &CoveredPoint) -> bool {
    if p1 == p2 {
        return true;
    }
    if p1.x.len() != p2.x.len() {
        return false;
    }
    if p1
        .x
        .iter()
        .zip(&p2.x)
        .any(|(a, b)| (a - b).norm() > NONZERO_EPS)
    {
        return false;
    }
    let gx = g.eval(&p1.x);
    if gx.norm() <= NONZERO_EPS {
        return false;
    }
    let dk = p1.layer - p2.layer;
    let expected = Complex64::new(0.0, (dk as f64) * std::f64::consts::TAU);
    let actual = gx * (p1.y - p2.y);
    (actual - expected).norm() <= REL_TOL * (1.0 + dk.unsigned_abs() as f64)
}

/// Translation within the representative's own layer:
/// `[x, y, k] -> [x + s, y + t, k]`.
pub fn layer_spray(p: &CoveredPoint, s: &[Complex64], t: Complex64) -> CoveredPoint {
    assert_eq!(p.x.len(), s.len(), "spray direction arity mismatch");
    CoveredPoint {
        x: p.x.iter().zip(s).map(|(a, b)| a + b).collect(),
        y: p.y + t,
        layer: p.layer,
    }
}

/// The twisted-chart branch of the extended spray (the chart covering the
/// nonzero layers), applied to any representative:
///
/// * `g(x) != 0`: `[x + g(x)²·s, y - k·2πi/g(x) + t, 0]`
/// * `g(x) == 0`: `[x, y - k·2πi·g'(x)(s) + t, k]`
///
/// The branch condition is an exact zero test, mirroring the displayed
/// formulas.
pub fn cover_spray_twisted(
    g: &PolyMap,
    p: &CoveredPoint,
    s: &[Complex64],
    t: Complex64,
) -> CoveredPoint {
    assert_eq!(p.x.len(), s.len(), "spray direction arity mismatch");
    let gx = g.eval(&p.x);
    let k2pi = Complex64::new(0.0, (p.layer as f64) * std::f64::consts::TAU);
    if gx.is_zero() {
        let drift = g.directional_derivative(&p.x, s);
        CoveredPoint {
            x: p.x.clone(),
            y: p.y - k2pi * drift + t,
            layer: p.layer,
        }
    } else {
        let scale = gx * gx;
        CoveredPoint {
            x: p.x.iter().zip(s).map(|(a, b)| a + scale * b).collect(),
            y: p.y - k2pi / gx + t,
            layer: 0,
        }
    }
}

/// The extended spray for base layer 0: the twisted chart on nonzero
/// layers, plain translation on layer 0. Fibre coordinates `(s, t)` are
/// read in the chart the representative's layer selects; the transition
/// between the two charts rescales `s` by `g(x)²`.
pub fn cover_spray(
    g: &PolyMap,
    p: &CoveredPoint,
    s: &[Complex64],
    t: Complex64,
) -> CoveredPoint {
    if p.layer == 0 {
        layer_spray(p, s, t)
    } else {
        cover_spray_twisted(g, p, s, t)
    }
}

/// The extended spray for an arbitrary base layer, by relabelling layers so
/// `base_layer` plays the role of 0.
pub fn cover_spray_for_layer(
    g: &PolyMap,
    base_layer: i64,
    p: &CoveredPoint,
    s: &[Complex64],
    t: Complex64,
) -> CoveredPoint {
    let shifted = CoveredPoint {
        x: p.x.clone(),
        y: p.y,
        layer: p.layer - base_layer,
    };
    let out = cover_spray(g, &shifted, s, t);
    CoveredPoint {
        layer: out.layer + base_layer,
        ..out
    }
}

/// How the base point is perturbed inside the localisation expression.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TwistExponent {
    /// `1/g(x) - 1/g(x + g(x)·s)`: diverges in general.
    Single,
    /// `1/g(x) - 1/g(x + g(x)²·s)`: converges to `g'(x0)(s)`.
    Double,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LimitVerdict {
    Converged,
    Diverged,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitCheck {
    #[serde(serialize_with = "ser_cx_vec")]
    pub estimates: Vec<Complex64>,
    /// The analytic limit `g'(x0)(s)` from the formal gradient.
    #[serde(serialize_with = "ser_cx")]
    pub target: Complex64,
    pub verdict: LimitVerdict,
}

/// Samples `1/g(x) - 1/g(x + g(x)^e·s)` along `x = x0 + 2^{-j}·d` for
/// `j = 1..steps` and compares against the analytic limit `g'(x0)(s)`.
///
/// Requires `g(x0) = 0` (within 1e-12). Samples where `|g(x)| < 1e-300`
/// are skipped. The verdict is `Converged` when the final estimate is
/// within 1e-6 of the target, `Diverged` when some estimate exceeds
/// magnitude 1e3, and `Inconclusive` otherwise.
pub fn limit_check(
    g: &PolyMap,
    x0: &[Complex64],
    s: &[Complex64],
    d: &[Complex64],
    steps: u32,
    twist: TwistExponent,
) -> Result<LimitCheck, GraphError> {
    g.check_arity(x0)?;
    assert_eq!(s.len(), x0.len(), "spray direction arity mismatch");
    assert_eq!(d.len(), x0.len(), "approach direction arity mismatch");
    let g0 = g.eval(x0);
    if g0.norm() > NONZERO_EPS {
        return Err(GraphError::NotOnZeroSet {
            magnitude: g0.norm(),
        });
    }
    let target = g.directional_derivative(x0, s);
    let mut estimates = Vec::new();
    for j in 1..=steps {
        let step = 0.5f64.powi(j as i32);
        let xj: Vec<Complex64> = x0.iter().zip(d).map(|(a, b)| a + step * b).collect();
        let gj = g.eval(&xj);
        if gj.norm() < SKIP_EPS {
            continue;
        }
        let scale = match twist {
            TwistExponent::Single => gj,
            TwistExponent::Double => gj * gj,
        };
        let shifted: Vec<Complex64> = xj.iter().zip(s).map(|(a, b)| a + scale * b).collect();
        let g_shifted = g.eval(&shifted);
        estimates.push(1.0 / gj - 1.0 / g_shifted);
    }
    if estimates.is_empty() {
        return Err(GraphError::AllSamplesSkipped);
    }
    let last = *estimates.last().expect("nonempty estimates");
    let verdict = if (last - target).norm() < LIMIT_TOL {
        LimitVerdict::Converged
    } else if estimates.iter().any(|e| e.norm() > 1e3) {
        LimitVerdict::Diverged
    } else {
        LimitVerdict::Inconclusive
    };
    Ok(LimitCheck {
        estimates,
        target,
        verdict,
    })
}

/// The dominating fibre spray on the graph complement:
/// `s(x, y, t) = (x, y·e^{t·g(x)} - φ(g(x), t))`.
///
/// It fixes the base point at `t = 0`, satisfies
/// `1 - g·s₂ = e^{t·g}·(1 - g·y)` (so the image stays in the complement),
/// and its `t`-derivative at 0 is `g(x)·y - 1`, which is nonzero off the
/// graph — that is the domination.
pub fn fibre_spray(
    g: &PolyMap,
    x: &[Complex64],
    y: Complex64,
    t: Complex64,
) -> Result<GraphPoint, GraphError> {
    g.check_arity(x)?;
    let gx = g.eval(x);
    if (gx * y - Complex64::one()).norm() <= NONZERO_EPS {
        return Err(GraphError::OnGraph);
    }
    let exponent = t * gx;
    if exponent.re > EXP_OVERFLOW {
        return Err(GraphError::Overflow { re: exponent.re });
    }
    let phi = scaled_expm1(gx, t)?;
    Ok(GraphPoint {
        x: x.to_vec(),
        y: y * exponent.exp() - phi,
    })
}

/// A polynomial-witness decomposition `m = f + 1/g` of `m = h/k`: the
/// remainder constant `c = h - k·f` is nonzero, so `g = k/c` works.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    pub f: UniPolyQ,
    pub c: GaussianRational,
}

/// Searches for a polynomial witness of `h/k = f + 1/g`.
///
/// `h` and `k` must not both be zero and must be coprime. A witness exists
/// in polynomials exactly when the remainder of `h` by `k` is a nonzero
/// constant `c`; then `f` is the quotient and `h - k·f = c` holds exactly.
/// A constant `k` yields the trivial decomposition with `f = h/k - 1`, and
/// `k = 0` (the constant map to infinity) pairs a zero `f` with `c = h`.
/// `None` means no *polynomial* witness exists; entire-function witnesses
/// are not ruled out.
pub fn decompose_univariate(
    h: &UniPolyQ,
    k: &UniPolyQ,
) -> Result<Option<Decomposition>, GraphError> {
    if h.is_zero() && k.is_zero() {
        return Err(GraphError::BothZero);
    }
    let gcd = h.gcd(k);
    if gcd.degree().is_some_and(|d| d >= 1) {
        return Err(GraphError::CommonFactor);
    }
    if k.is_zero() {
        // m is the constant map to infinity; h is a nonzero constant
        let c = h.coeffs()[0].clone();
        return Ok(Some(Decomposition {
            f: UniPolyQ::zero(),
            c,
        }));
    }
    if k.is_constant() {
        let kc = k.coeffs()[0].clone();
        let inv = kc.inv_checked().expect("nonzero constant divisor");
        let f = h.scaled(&inv).sub(&UniPolyQ::constant(GaussianRational::one()));
        debug_assert_eq!(h.sub(&k.mul(&f)), UniPolyQ::constant(kc.clone()));
        return Ok(Some(Decomposition { f, c: kc }));
    }
    let (quot, rem) = h.div_rem(k).expect("nonzero divisor");
    if rem.is_constant() && !rem.is_zero() {
        let c = rem.coeffs()[0].clone();
        // exact verification of the witness identity
        assert_eq!(
            h.sub(&k.mul(&quot)),
            UniPolyQ::constant(c.clone()),
            "witness identity h - k·f = c failed"
        );
        return Ok(Some(Decomposition { f: quot, c }));
    }
    Ok(None)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WindingNumber {
    pub winding: i64,
    /// Distance of the accumulated argument (in turns) from the integer.
    pub residual: f64,
}

/// Total winding of a closed loop of nonzero samples around the origin.
///
/// The loop is the cyclic sequence of samples; the closing edge from the
/// last sample back to the first is included. Consecutive samples must
/// satisfy `|s_{i+1}/s_i - 1| < 1`, which keeps each step's argument change
/// unambiguous.
pub fn winding_number(samples: &[Complex64]) -> Result<WindingNumber, GraphError> {
    if samples.is_empty() {
        return Err(GraphError::EmptyLoop);
    }
    if let Some(index) = samples.iter().position(|s| s.is_zero()) {
        return Err(GraphError::ZeroSample { index });
    }
    let mut total = 0.0f64;
    for (i, a) in samples.iter().enumerate() {
        let b = samples[(i + 1) % samples.len()];
        let ratio = b / a;
        if (ratio - Complex64::one()).norm() >= 1.0 {
            return Err(GraphError::UnderResolved { index: i });
        }
        total += ratio.arg();
    }
    let turns = total / std::f64::consts::TAU;
    let rounded = turns.round();
    let residual = (turns - rounded).abs();
    if residual >= LIMIT_TOL {
        return Err(GraphError::NonIntegerWinding { residual });
    }
    Ok(WindingNumber {
        winding: rounded as i64,
        residual,
    })
}

/// Membership in the complement of the graph of `m = h/k` over a point
/// where `h` and `k` do not both vanish: `(x, y)` is in the complement iff
/// `k(x)·y != h(x)`. Points over poles of `m` always pass.
pub fn in_graph_complement(
    h: &PolyMap,
    k: &PolyMap,
    x: &[Complex64],
    y: Complex64,
) -> Result<bool, GraphError> {
    h.check_arity(x)?;
    k.check_arity(x)?;
    let hx = h.eval(x);
    let kx = k.eval(x);
    if hx.norm() + kx.norm() <= NONZERO_EPS {
        return Err(GraphError::CommonZero);
    }
    Ok(kx * y != hx)
}

/// The obstructed family `m_ν(x, y) = x / (x·y^ν - 1)` on C²:
/// numerator `h = x` and denominator `k = x·y^ν - 1`.
pub fn mnu_polys(nu: u32) -> (PolyMap, PolyMap) {
    let h = PolyMap::new(
        MultiPoly::from_terms(2, vec![(vec![1, 0], Complex64::one())]).expect("arity 2"),
    );
    let k = PolyMap::new(
        MultiPoly::from_terms(
            2,
            vec![
                (vec![1, nu], Complex64::one()),
                (vec![0, 0], -Complex64::one()),
            ],
        )
        .expect("arity 2"),
    );
    (h, k)
}

/// Samples of the numerator `h = x` along the loop `y -> (y^{-ν}, y)` in
/// the zero set of `k = x·y^ν - 1`, with `y` running over the unit circle:
/// the values `e^{-iνθ}`, whose winding is `-ν`.
pub fn mnu_zero_locus_loop(nu: u32, samples: usize) -> Vec<Complex64> {
    (0..samples)
        .map(|j| {
            let theta = std::f64::consts::TAU * (j as f64) / (samples as f64);
            Complex64::from_polar(1.0, -(nu as f64) * theta)
        })
        .collect()
}
