//! Randomized batch verification of the covering-space and spray
//! identities.
//!
//! Each suite draws seeded samples, checks one identity at its tolerance,
//! and reports how many samples passed together with the largest error
//! seen. The suites back both the integration tests and the `graph-verify`
//! CLI subcommand; a fixed seed makes their output reproducible.

use num_complex::Complex64;
use num_traits::One;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{
    cover_projection, cover_spray, cover_spray_twisted, equivalent, fibre_spray, layer_spray,
    scaled_expm1_closed, scaled_expm1_series, CoveredPoint, PolyMap, LIMIT_TOL, REL_TOL,
};
use crate::poly::MultiPoly;

/// Outcome of one verification suite.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyRecord {
    pub name: String,
    pub checked: usize,
    pub passed: usize,
    pub max_error: f64,
}

impl VerifyRecord {
    pub fn all_passed(&self) -> bool {
        self.checked == self.passed
    }
}

fn rel_err(actual: Complex64, reference: Complex64) -> f64 {
    (actual - reference).norm() / (1.0 + reference.norm())
}

fn random_complex(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

fn random_vec(rng: &mut ChaCha8Rng, len: usize) -> Vec<Complex64> {
    (0..len).map(|_| random_complex(rng)).collect()
}

/// Random polynomial of total degree at most 3 in two variables, with
/// coefficients in the unit box.
pub fn random_cubic(rng: &mut ChaCha8Rng) -> PolyMap {
    let mut terms = Vec::new();
    for i in 0..=3u32 {
        for j in 0..=3u32 - i {
            terms.push((vec![i, j], random_complex(rng)));
        }
    }
    PolyMap::new(MultiPoly::from_terms(2, terms).expect("arity-2 exponents"))
}

/// A base point where |g| is comfortably nonzero, for suites that divide
/// by g.
fn point_off_zero_set(rng: &mut ChaCha8Rng, g: &PolyMap) -> Vec<Complex64> {
    for _ in 0..500 {
        let x = random_vec(rng, g.nvars());
        if g.eval(&x).norm() > 0.1 {
            return x;
        }
    }
    panic!("could not sample a point with |g| > 0.1 in 500 tries");
}

/// Series and closed-form evaluation of the scaled exponential agree to
/// 1e-10 relative for |x| in [1e-12, 1e-6].
pub fn phi_branch_suite(seed: u64, samples: usize) -> VerifyRecord {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut passed = 0;
    let mut max_error = 0.0f64;
    for _ in 0..samples {
        let magnitude = 10f64.powf(rng.gen_range(-12.0..=-6.0));
        let phase = rng.gen_range(0.0..std::f64::consts::TAU);
        let x = Complex64::from_polar(magnitude, phase);
        let y = random_complex(&mut rng);
        let series = scaled_expm1_series(x, y);
        let closed = scaled_expm1_closed(x, y);
        let err = rel_err(series, closed);
        max_error = max_error.max(err);
        if err <= 1e-10 {
            passed += 1;
        }
    }
    VerifyRecord {
        name: "phi_branch_consistency".into(),
        checked: samples,
        passed,
        max_error,
    }
}

/// Residence identity of the projection: `1 - g(x)·π₂ = e^{g(x)·y}` to
/// 1e-9 relative, over random cubics and random covered points.
pub fn residence_suite(seed: u64, samples: usize) -> VerifyRecord {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut passed = 0;
    let mut max_error = 0.0f64;
    for _ in 0..samples {
        let g = random_cubic(&mut rng);
        let p = CoveredPoint::new(
            random_vec(&mut rng, 2),
            random_complex(&mut rng),
            rng.gen_range(-3..=3),
        );
        let gx = g.eval(&p.x);
        let projected = cover_projection(&g, &p).expect("no overflow at unit scale");
        let lhs = Complex64::one() - gx * projected.y;
        let rhs = (gx * p.y).exp();
        let err = rel_err(lhs, rhs);
        max_error = max_error.max(err);
        if err <= REL_TOL {
            passed += 1;
        }
    }
    VerifyRecord {
        name: "covering_residence".into(),
        checked: samples,
        passed,
        max_error,
    }
}

/// The projection is constant on equivalence classes: gluing-related
/// representatives project to the same point of the complement.
pub fn projection_equivalence_suite(seed: u64, samples: usize) -> VerifyRecord {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut passed = 0;
    let mut max_error = 0.0f64;
    for _ in 0..samples {
        let g = random_cubic(&mut rng);
        let x = point_off_zero_set(&mut rng, &g);
        let gx = g.eval(&x);
        let y1 = random_complex(&mut rng);
        let k1: i64 = rng.gen_range(-2..=2);
        let delta: i64 = *[-2, -1, 1, 2].get(rng.gen_range(0..4)).expect("in range");
        let k2 = k1 + delta;
        // solve the gluing relation for y2
        let y2 = y1
            - Complex64::new(0.0, (k1 - k2) as f64 * std::f64::consts::TAU) / gx;
        let p1 = CoveredPoint::new(x.clone(), y1, k1);
        let p2 = CoveredPoint::new(x, y2, k2);
        let ok_equiv = equivalent(&g, &p1, &p2);
        let q1 = cover_projection(&g, &p1).expect("no overflow at unit scale");
        let q2 = cover_projection(&g, &p2).expect("no overflow at unit scale");
        let err = rel_err(q1.y, q2.y);
        max_error = max_error.max(err);
        if ok_equiv && err <= REL_TOL {
            passed += 1;
        }
    }
    VerifyRecord {
        name: "projection_respects_equivalence".into(),
        checked: samples,
        passed,
        max_error,
    }
}

/// Spray base-point identity: `σ̃(p; 0, 0)` is equivalent to `p`.
pub fn spray_base_point_suite(seed: u64, samples: usize) -> VerifyRecord {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut passed = 0;
    for _ in 0..samples {
        let g = random_cubic(&mut rng);
        let p = CoveredPoint::new(
            random_vec(&mut rng, 2),
            random_complex(&mut rng),
            rng.gen_range(-3..=3),
        );
        let out = cover_spray(&g, &p, &[Complex64::default(); 2], Complex64::default());
        if equivalent(&g, &out, &p) {
            passed += 1;
        }
    }
    VerifyRecord {
        name: "spray_base_point".into(),
        checked: samples,
        passed,
        max_error: 0.0,
    }
}

/// Transition consistency on the chart overlap (layer 0, g nonzero): the
/// twisted chart applied to `(s, t)` equals the plain chart applied to
/// `(g²·s, t)`.
pub fn transition_suite(seed: u64, samples: usize) -> VerifyRecord {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut passed = 0;
    let mut max_error = 0.0f64;
    for _ in 0..samples {
        let g = random_cubic(&mut rng);
        let x = point_off_zero_set(&mut rng, &g);
        let gx = g.eval(&x);
        let p = CoveredPoint::new(x, random_complex(&mut rng), 0);
        let s = random_vec(&mut rng, 2);
        let t = random_complex(&mut rng);
        let via_twisted = cover_spray_twisted(&g, &p, &s, t);
        let rescaled: Vec<Complex64> = s.iter().map(|si| gx * gx * si).collect();
        let via_plain = layer_spray(&p, &rescaled, t);
        let err = via_twisted
            .x
            .iter()
            .zip(&via_plain.x)
            .map(|(a, b)| rel_err(*a, *b))
            .fold(rel_err(via_twisted.y, via_plain.y), f64::max);
        max_error = max_error.max(err);
        if via_twisted.layer == via_plain.layer && err <= REL_TOL {
            passed += 1;
        }
    }
    VerifyRecord {
        name: "transition_consistency".into(),
        checked: samples,
        passed,
        max_error,
    }
}

/// Well-definedness of the extended spray: equivalent representatives on
/// nonzero layers map to equivalent (indeed numerically equal) points.
pub fn spray_well_defined_suite(seed: u64, samples: usize) -> VerifyRecord {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut passed = 0;
    let mut max_error = 0.0f64;
    for _ in 0..samples {
        let g = random_cubic(&mut rng);
        let x = point_off_zero_set(&mut rng, &g);
        let gx = g.eval(&x);
        let y1 = random_complex(&mut rng);
        let k1: i64 = *[-3, -2, -1, 1, 2, 3].get(rng.gen_range(0..6)).expect("in range");
        let k2 = if k1 == 1 { 2 } else { 1 };
        let y2 = y1
            - Complex64::new(0.0, (k1 - k2) as f64 * std::f64::consts::TAU) / gx;
        let p1 = CoveredPoint::new(x.clone(), y1, k1);
        let p2 = CoveredPoint::new(x, y2, k2);
        let s = random_vec(&mut rng, 2);
        let t = random_complex(&mut rng);
        let r1 = cover_spray(&g, &p1, &s, t);
        let r2 = cover_spray(&g, &p2, &s, t);
        let err = r1
            .x
            .iter()
            .zip(&r2.x)
            .map(|(a, b)| rel_err(*a, *b))
            .fold(rel_err(r1.y, r2.y), f64::max);
        max_error = max_error.max(err);
        if equivalent(&g, &p1, &p2) && r1.layer == r2.layer && err <= REL_TOL {
            passed += 1;
        }
    }
    VerifyRecord {
        name: "spray_well_defined".into(),
        checked: samples,
        passed,
        max_error,
    }
}

/// Fibre-spray residence identity `1 - g·s₂ = e^{t·g}·(1 - g·y)` at 1e-9
/// relative.
pub fn fibre_identity_suite(seed: u64, samples: usize) -> VerifyRecord {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut passed = 0;
    let mut max_error = 0.0f64;
    for _ in 0..samples {
        let g = random_cubic(&mut rng);
        let (x, y) = off_graph_sample(&mut rng, &g);
        let t = random_complex(&mut rng);
        let gx = g.eval(&x);
        let out = fibre_spray(&g, &x, y, t).expect("off the graph, unit scale");
        let lhs = Complex64::one() - gx * out.y;
        let rhs = (t * gx).exp() * (Complex64::one() - gx * y);
        let err = rel_err(lhs, rhs);
        max_error = max_error.max(err);
        if err <= REL_TOL {
            passed += 1;
        }
    }
    VerifyRecord {
        name: "fibre_spray_identity".into(),
        checked: samples,
        passed,
        max_error,
    }
}

/// Domination of the fibre spray: the t-derivative of the fibre component
/// at t = 0, estimated by central differences with step 1e-5, matches
/// `g(x)·y - 1` to 1e-6 relative.
pub fn fibre_derivative_suite(seed: u64, samples: usize) -> VerifyRecord {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut passed = 0;
    let mut max_error = 0.0f64;
    let h = 1e-5;
    for _ in 0..samples {
        let g = random_cubic(&mut rng);
        let (x, y) = off_graph_sample(&mut rng, &g);
        let gx = g.eval(&x);
        let plus = fibre_spray(&g, &x, y, Complex64::new(h, 0.0)).expect("off the graph");
        let minus = fibre_spray(&g, &x, y, Complex64::new(-h, 0.0)).expect("off the graph");
        let estimate = (plus.y - minus.y) / Complex64::new(2.0 * h, 0.0);
        let exact = gx * y - Complex64::one();
        let err = rel_err(estimate, exact);
        max_error = max_error.max(err);
        if err <= LIMIT_TOL {
            passed += 1;
        }
    }
    VerifyRecord {
        name: "fibre_spray_derivative".into(),
        checked: samples,
        passed,
        max_error,
    }
}

/// A sample `(x, y)` bounded away from the graph `g(x)·y = 1`.
fn off_graph_sample(rng: &mut ChaCha8Rng, g: &PolyMap) -> (Vec<Complex64>, Complex64) {
    for _ in 0..500 {
        let x = random_vec(rng, g.nvars());
        let y = random_complex(rng);
        if (g.eval(&x) * y - Complex64::one()).norm() > 1e-3 {
            return (x, y);
        }
    }
    panic!("could not sample a point off the graph in 500 tries");
}

/// Runs every suite with derived seeds.
pub fn run_all(seed: u64, samples: usize) -> Vec<VerifyRecord> {
    vec![
        phi_branch_suite(seed, samples),
        residence_suite(seed.wrapping_add(1), samples),
        projection_equivalence_suite(seed.wrapping_add(2), samples),
        spray_base_point_suite(seed.wrapping_add(3), samples),
        transition_suite(seed.wrapping_add(4), samples),
        spray_well_defined_suite(seed.wrapping_add(5), samples),
        fibre_identity_suite(seed.wrapping_add(6), samples),
        fibre_derivative_suite(seed.wrapping_add(7), samples),
    ]
}
