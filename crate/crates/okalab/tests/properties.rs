//! Property tests: the exact pipeline against definition-level oracles,
//! algebraic axioms on randomized inputs, and invariance of the reports
//! under permutation and rescaling of the input forms.

use num_traits::{One, Zero};
use proptest::prelude::*;

use okalab::arrangement::{Arrangement, LinearForm, ProjectivePoint};
use okalab::gaussian::GaussianRational;
use okalab::linalg::{Matrix, Vector};
use okalab::relations::{circuits, diagonal_hyperplanes, entire_curve_obstructions};
use okalab::{MatrixQ, VectorQ};

type Q = GaussianRational;

fn small_rational() -> impl Strategy<Value = Q> {
    (-9i64..=9, 1i64..=9, -9i64..=9, 1i64..=9)
        .prop_map(|(an, ad, bn, bd)| Q::from_parts(an, ad, bn, bd))
}

fn small_entry() -> impl Strategy<Value = Q> {
    prop_oneof![
        4 => (-3i64..=3).prop_map(Q::from_int),
        1 => (-2i64..=2, -2i64..=2).prop_map(|(a, b)| Q::from_parts(a, 1, b, 1)),
    ]
}

fn matrix(max_rows: usize, max_cols: usize) -> impl Strategy<Value = MatrixQ> {
    (1..=max_rows, 1..=max_cols).prop_flat_map(|(r, c)| {
        proptest::collection::vec(proptest::collection::vec(small_entry(), c), r).prop_map(
            |rows| {
                Matrix::from_rows(rows.into_iter().map(Vector).collect())
                    .expect("rectangular by construction")
            },
        )
    })
}

/// Brute-force rank: largest square submatrix with nonzero determinant,
/// determinants by Laplace expansion.
fn minor_rank(mat: &MatrixQ) -> usize {
    fn det(rows: &[Vec<Q>]) -> Q {
        let n = rows.len();
        if n == 1 {
            return rows[0][0].clone();
        }
        let mut acc = Q::zero();
        for (j, top) in rows[0].iter().enumerate() {
            if top.is_zero() {
                continue;
            }
            let minor: Vec<Vec<Q>> = rows[1..]
                .iter()
                .map(|r| {
                    r.iter()
                        .enumerate()
                        .filter(|(k, _)| *k != j)
                        .map(|(_, x)| x.clone())
                        .collect()
                })
                .collect();
            let term = top.clone() * det(&minor);
            acc = if j % 2 == 0 { acc + term } else { acc - term };
        }
        acc
    }

    let max = mat.nrows().min(mat.ncols());
    for size in (1..=max).rev() {
        for rmask in 0u32..(1 << mat.nrows()) {
            if rmask.count_ones() as usize != size {
                continue;
            }
            for cmask in 0u32..(1 << mat.ncols()) {
                if cmask.count_ones() as usize != size {
                    continue;
                }
                let sub: Vec<Vec<Q>> = (0..mat.nrows())
                    .filter(|i| rmask & (1 << i) != 0)
                    .map(|i| {
                        (0..mat.ncols())
                            .filter(|j| cmask & (1 << j) != 0)
                            .map(|j| mat.entry(i, j).clone())
                            .collect()
                    })
                    .collect();
                if !det(&sub).is_zero() {
                    return size;
                }
            }
        }
    }
    0
}

proptest! {
    #[test]
    fn field_axioms(a in small_rational(), b in small_rational(), c in small_rational()) {
        prop_assert_eq!((a.clone() + b.clone()) + c.clone(), a.clone() + (b.clone() + c.clone()));
        prop_assert_eq!((a.clone() * b.clone()) * c.clone(), a.clone() * (b.clone() * c.clone()));
        prop_assert_eq!(a.clone() + b.clone(), b.clone() + a.clone());
        prop_assert_eq!(a.clone() * b.clone(), b.clone() * a.clone());
        prop_assert_eq!(
            a.clone() * (b.clone() + c.clone()),
            a.clone() * b.clone() + a.clone() * c.clone()
        );
        prop_assert_eq!((a.clone() - b.clone()) + b.clone(), a.clone());
        if !b.is_zero() {
            prop_assert_eq!((a.clone() / b.clone()) * b.clone(), a.clone());
        }
    }

    #[test]
    fn scalar_string_round_trip(a in small_rational()) {
        let text = a.to_string();
        let back: Q = text.parse().expect("canonical form parses");
        prop_assert_eq!(&back, &a);
        prop_assert_eq!(back.to_string(), text);
    }

    #[test]
    fn rank_matches_minor_oracle(m in matrix(4, 4)) {
        prop_assert_eq!(m.rank(), minor_rank(&m));
    }

    #[test]
    fn kernel_is_exact(m in matrix(5, 5)) {
        let basis = m.kernel_basis();
        prop_assert_eq!(m.rank() + basis.len(), m.ncols());
        for v in &basis {
            prop_assert!(m.mul_vector(v).unwrap().is_zero_vector());
        }
    }

    #[test]
    fn inverse_is_two_sided(m in matrix(4, 4)) {
        prop_assume!(m.nrows() == m.ncols());
        if let Some(inv) = m.inverse().unwrap() {
            prop_assert!(inv.mat_mul(&m).unwrap().is_identity());
            prop_assert!(m.mat_mul(&inv).unwrap().is_identity());
        } else {
            prop_assert!(m.rank() < m.nrows());
        }
    }

    #[test]
    fn solve_finds_solutions(m in matrix(4, 4), seedx in proptest::collection::vec(-3i64..=3, 4)) {
        let x = Vector(seedx.into_iter().take(m.ncols()).map(Q::from_int).collect());
        prop_assume!(x.len() == m.ncols());
        let b = m.mul_vector(&x).unwrap();
        let solved = m.solve(&b).unwrap().expect("consistent by construction");
        prop_assert_eq!(m.mul_vector(&solved).unwrap(), b);
    }
}

/// Raw form rows that survive validation, for arrangement strategies.
fn arrangement_strategy() -> impl Strategy<Value = Arrangement> {
    (1usize..=3, 1usize..=5)
        .prop_flat_map(|(n, count)| {
            proptest::collection::vec(proptest::collection::vec(-2i64..=2, n + 1), count)
                .prop_map(move |rows| (n, rows))
        })
        .prop_filter_map("needs valid distinct nonzero forms", |(n, rows)| {
            let mut kept: Vec<VectorQ> = Vec::new();
            let mut normalized: Vec<LinearForm> = Vec::new();
            for row in rows {
                let v = Vector(row.into_iter().map(Q::from_int).collect());
                match LinearForm::new(v.clone()) {
                    Some(form) if !normalized.contains(&form) => {
                        normalized.push(form);
                        kept.push(v);
                    }
                    _ => {}
                }
            }
            if kept.is_empty() {
                return None;
            }
            Arrangement::new(n, kept).ok()
        })
}

/// All circuits by scanning every subset, minimality by dropping single
/// elements.
fn brute_circuits(arr: &Arrangement) -> Vec<Vec<usize>> {
    let n_forms = arr.count();
    let dependent = |indices: &[usize]| arr.stack(indices).rank() < indices.len();
    let mut out = Vec::new();
    for mask in 1u32..(1 << n_forms) {
        let indices: Vec<usize> = (0..n_forms)
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| i + 1)
            .collect();
        if !dependent(&indices) {
            continue;
        }
        let minimal = (0..indices.len()).all(|drop| {
            let proper: Vec<usize> = indices
                .iter()
                .enumerate()
                .filter(|(pos, _)| *pos != drop)
                .map(|(_, &i)| i)
                .collect();
            proper.is_empty() || !dependent(&proper)
        });
        if minimal {
            out.push(indices);
        }
    }
    out.sort_by_key(|c| (c.len(), c.clone()));
    out
}

/// A small positive-integer point of the complement, if the search grid
/// has one.
fn complement_point(arr: &Arrangement) -> Option<ProjectivePoint> {
    let n = arr.dimension();
    let width = 7usize;
    let total = width.pow((n + 1) as u32).min(5000);
    for code in 0..total {
        let mut rem = code;
        let coords: Vec<Q> = (0..=n)
            .map(|_| {
                let digit = (rem % width) as i64 + 1;
                rem /= width;
                Q::from_int(digit)
            })
            .collect();
        let p = ProjectivePoint::new(Vector(coords)).expect("positive coordinates");
        if arr.in_complement(&p).unwrap() {
            return Some(p);
        }
    }
    None
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn circuits_match_brute_force(arr in arrangement_strategy()) {
        let fast: Vec<Vec<usize>> = circuits(&arr).into_iter().map(|c| c.indices).collect();
        // nonzero pairwise-distinct forms leave no circuits of size 1 or 2
        prop_assert!(fast.iter().all(|c| c.len() >= 3));
        prop_assert_eq!(fast, brute_circuits(&arr));
    }

    #[test]
    fn circuit_relations_are_exact_and_minimal(arr in arrangement_strategy()) {
        for circuit in circuits(&arr) {
            // exact relation on the supplied representatives
            let mut sum = Vector::zeros(arr.dimension() + 1);
            for (&i, c) in circuit.indices.iter().zip(&circuit.coefficients) {
                sum = sum.add(&arr.representative(i).scaled(c));
            }
            prop_assert!(sum.is_zero_vector());
            prop_assert!(circuit.coefficients[0].is_one());
            // no proper nonempty sub-sum vanishes
            let k = circuit.indices.len();
            for mask in 1u32..((1 << k) - 1) {
                let mut part = Vector::zeros(arr.dimension() + 1);
                for pos in 0..k {
                    if mask & (1 << pos) != 0 {
                        part = part.add(
                            &arr.representative(circuit.indices[pos])
                                .scaled(&circuit.coefficients[pos]),
                        );
                    }
                }
                prop_assert!(!part.is_zero_vector());
            }
        }
    }

    #[test]
    fn classification_report_invariants(arr in arrangement_strategy()) {
        use okalab::arrangement::{Reason, Verdict};
        let report = arr.classify();
        // the three Oka indicators are equivalent
        prop_assert_eq!(
            report.verdict == Verdict::Oka,
            report.reason == Reason::GeneralPositionFewForms
        );
        prop_assert_eq!(report.verdict == Verdict::Oka, report.oka_witness.is_some());
        // a negative verdict forces both negative flags
        if report.verdict == Verdict::NotOka {
            prop_assert!(!report.dominable_by_cn);
            prop_assert!(!report.c_connected);
        } else {
            prop_assert!(report.dominable_by_cn && report.c_connected);
        }
        // the failing subset appears exactly in the not-general-position case
        prop_assert_eq!(
            report.failing_subset.is_some(),
            report.reason == Reason::NotGeneralPosition
        );
        if let Some(subset) = &report.failing_subset {
            // dependent, and minimally so
            prop_assert!(arr.stack(subset).rank() < subset.len());
            for drop in 0..subset.len() {
                let proper: Vec<usize> = subset
                    .iter()
                    .enumerate()
                    .filter(|(pos, _)| *pos != drop)
                    .map(|(_, &i)| i)
                    .collect();
                if !proper.is_empty() {
                    prop_assert_eq!(arr.stack(&proper).rank(), proper.len());
                }
            }
        }
    }

    #[test]
    fn classification_invariant_under_permutation_and_rescaling(
        arr in arrangement_strategy(),
        perm_seed in proptest::collection::vec(proptest::num::u32::ANY, 8),
        scales in proptest::collection::vec((1i64..=5, 1i64..=3), 8),
    ) {
        let base = arr.classify();

        // permutation: deterministic shuffle from the seed
        let mut order: Vec<usize> = (0..arr.count()).collect();
        let len = order.len();
        for (i, &s) in perm_seed.iter().enumerate().take(len) {
            order.swap(i, (s as usize) % len);
        }
        let permuted = Arrangement::new(
            arr.dimension(),
            order.iter().map(|&i| arr.representative(i + 1).clone()).collect(),
        )
        .expect("permutation preserves validity");
        let report = permuted.classify();
        prop_assert_eq!(report.verdict, base.verdict);
        prop_assert_eq!(report.reason, base.reason);
        prop_assert_eq!(report.dominable_by_cn, base.dominable_by_cn);
        prop_assert_eq!(report.c_connected, base.c_connected);
        prop_assert_eq!(report.product_profile, base.product_profile);
        // certificates relabel: the minimal failing size cannot change
        match (&report.failing_subset, &base.failing_subset) {
            (Some(a), Some(b)) => prop_assert_eq!(a.len(), b.len()),
            (None, None) => {}
            _ => prop_assert!(false, "failing subset presence changed under permutation"),
        }

        // rescaling: nonzero scalars are absorbed by normalization, so the
        // whole report is unchanged
        let rescaled = Arrangement::new(
            arr.dimension(),
            (1..=arr.count())
                .map(|i| {
                    let (num, den) = scales[(i - 1) % scales.len()];
                    arr.representative(i).scaled(&Q::from_ratio(num, den))
                })
                .collect(),
        )
        .expect("rescaling preserves validity");
        prop_assert_eq!(rescaled.classify(), base);
    }

    #[test]
    fn diagonal_complements_merge(arr in arrangement_strategy()) {
        for circuit in circuits(&arr) {
            let diagonals = diagonal_hyperplanes(&circuit, &arr).unwrap();
            let k = circuit.indices.len();
            // recompute every admissible subset and find it among the
            // deduplicated forms
            for mask in 1u32..(1 << k) {
                let size = mask.count_ones() as usize;
                if size < 2 || size > k - 2 {
                    continue;
                }
                let mut sum = Vector::zeros(arr.dimension() + 1);
                for pos in 0..k {
                    if mask & (1 << pos) != 0 {
                        sum = sum.add(
                            &arr.representative(circuit.indices[pos])
                                .scaled(&circuit.coefficients[pos]),
                        );
                    }
                }
                let form = LinearForm::new(sum).expect("partial sums are nonzero");
                prop_assert!(
                    diagonals.iter().any(|d| d.form == form),
                    "subset mask {} gave an unlisted diagonal", mask
                );
            }
        }
    }

    #[test]
    fn associated_subspaces_are_exact(arr in arrangement_strategy()) {
        prop_assume!(!circuits(&arr).is_empty());
        let Some(p) = complement_point(&arr) else {
            return Ok(());
        };
        let report = entire_curve_obstructions(&arr, &p).unwrap();
        for entry in &report.per_circuit {
            let sub = &entry.associated_subspace;
            // every circuit form annihilates the base locus exactly
            for basis_vector in &sub.base_locus_basis {
                for &i in &entry.circuit.indices {
                    prop_assert!(arr.representative(i).dot(basis_vector).is_zero());
                }
            }
            // the span exceeds the base locus by exactly one dimension
            prop_assert_eq!(sub.span_basis.len(), sub.base_locus_basis.len() + 1);
            let span_rank = Matrix::from_rows(sub.span_basis.clone()).unwrap().rank();
            prop_assert_eq!(span_rank, sub.span_basis.len());
            // and the point's conditions all vanish at the point
            for condition in sub.conditions() {
                prop_assert!(condition.eval(p.coords()).is_zero());
            }
        }
    }

    #[test]
    fn obstruction_geometry_equivariant_under_permutation(
        arr in arrangement_strategy(),
        perm_seed in proptest::collection::vec(proptest::num::u32::ANY, 8),
    ) {
        prop_assume!(!circuits(&arr).is_empty());
        let Some(p) = complement_point(&arr) else {
            return Ok(());
        };
        let mut order: Vec<usize> = (0..arr.count()).collect();
        let len = order.len();
        for (i, &s) in perm_seed.iter().enumerate().take(len) {
            order.swap(i, (s as usize) % len);
        }
        let permuted = Arrangement::new(
            arr.dimension(),
            order.iter().map(|&i| arr.representative(i + 1).clone()).collect(),
        )
        .expect("permutation preserves validity");

        let base = entire_curve_obstructions(&arr, &p).unwrap();
        let moved = entire_curve_obstructions(&permuted, &p).unwrap();
        prop_assert_eq!(base.per_circuit.len(), moved.per_circuit.len());

        // circuit index sets correspond through the permutation
        // (order[new_pos] = old_pos, so old index i maps to position of i)
        let mut relabel = vec![0usize; len];
        for (new_pos, &old_pos) in order.iter().enumerate() {
            relabel[old_pos] = new_pos + 1;
        }
        let mut base_sets: Vec<Vec<usize>> = base
            .per_circuit
            .iter()
            .map(|e| {
                let mut mapped: Vec<usize> =
                    e.circuit.indices.iter().map(|&i| relabel[i - 1]).collect();
                mapped.sort_unstable();
                mapped
            })
            .collect();
        base_sets.sort();
        let mut moved_sets: Vec<Vec<usize>> = moved
            .per_circuit
            .iter()
            .map(|e| e.circuit.indices.clone())
            .collect();
        moved_sets.sort();
        prop_assert_eq!(base_sets, moved_sets);

        // the union of diagonal hyperplanes through the point is unchanged
        let mut base_forms: Vec<VectorQ> = base
            .per_circuit
            .iter()
            .flat_map(|e| {
                e.diagonal_hyperplanes
                    .iter()
                    .map(|d| d.form.coefficients().clone())
            })
            .collect();
        base_forms.sort_by_key(|v| format!("{v:?}"));
        let mut moved_forms: Vec<VectorQ> = moved
            .per_circuit
            .iter()
            .flat_map(|e| {
                e.diagonal_hyperplanes
                    .iter()
                    .map(|d| d.form.coefficients().clone())
            })
            .collect();
        moved_forms.sort_by_key(|v| format!("{v:?}"));
        prop_assert_eq!(base_forms, moved_forms);
    }

    #[test]
    fn obstruction_geometry_invariant_under_rescaling(
        arr in arrangement_strategy(),
        scales in proptest::collection::vec((1i64..=5, 1i64..=3), 8),
    ) {
        prop_assume!(!circuits(&arr).is_empty());
        let Some(p) = complement_point(&arr) else {
            return Ok(()); // no small grid point available
        };
        let base = entire_curve_obstructions(&arr, &p).unwrap();
        let rescaled_arr = Arrangement::new(
            arr.dimension(),
            (1..=arr.count())
                .map(|i| {
                    let (num, den) = scales[(i - 1) % scales.len()];
                    arr.representative(i).scaled(&Q::from_ratio(num, den))
                })
                .collect(),
        )
        .expect("rescaling preserves validity");
        let rescaled = entire_curve_obstructions(&rescaled_arr, &p).unwrap();

        prop_assert_eq!(base.per_circuit.len(), rescaled.per_circuit.len());
        for (a, b) in base.per_circuit.iter().zip(&rescaled.per_circuit) {
            prop_assert_eq!(&a.circuit.indices, &b.circuit.indices);
            let forms_a: Vec<&LinearForm> =
                a.diagonal_hyperplanes.iter().map(|d| &d.form).collect();
            let forms_b: Vec<&LinearForm> =
                b.diagonal_hyperplanes.iter().map(|d| &d.form).collect();
            prop_assert_eq!(forms_a, forms_b);
            prop_assert_eq!(
                a.associated_subspace.conditions(),
                b.associated_subspace.conditions()
            );
        }
    }
}

mod winding {
    use num_complex::Complex64;
    use okalab::graphcomp::winding_number;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn winding_is_additive(a in -4i32..=4, b in -4i32..=4) {
            let samples = 256usize;
            let lap = |freq: i32, j: usize| {
                Complex64::from_polar(
                    1.0,
                    f64::from(freq) * std::f64::consts::TAU * j as f64 / samples as f64,
                )
            };
            let loop_a: Vec<Complex64> = (0..samples).map(|j| lap(a, j)).collect();
            let loop_b: Vec<Complex64> = (0..samples).map(|j| lap(b, j)).collect();
            let product: Vec<Complex64> = loop_a
                .iter()
                .zip(&loop_b)
                .map(|(x, y)| x * y)
                .collect();
            let wa = winding_number(&loop_a).unwrap().winding;
            let wb = winding_number(&loop_b).unwrap().winding;
            let wp = winding_number(&product).unwrap().winding;
            prop_assert_eq!(wp, wa + wb);
            prop_assert_eq!(wa, i64::from(a));
            prop_assert_eq!(wb, i64::from(b));
        }
    }
}

mod decomposition {
    use okalab::gaussian::GaussianRational;
    use okalab::graphcomp::decompose_univariate;
    use okalab::UniPolyQ;
    use proptest::prelude::*;

    fn small_rational() -> impl Strategy<Value = GaussianRational> {
        (-5i64..=5, 1i64..=5, -5i64..=5, 1i64..=5)
            .prop_map(|(an, ad, bn, bd)| GaussianRational::from_parts(an, ad, bn, bd))
    }

    fn poly(max_degree: usize) -> impl Strategy<Value = UniPolyQ> {
        proptest::collection::vec(small_rational(), 1..=max_degree + 1)
            .prop_map(UniPolyQ::from_coeffs)
    }

    proptest! {
        #[test]
        fn planted_witnesses_recovered(
            f in poly(3),
            k in poly(3),
            c in small_rational(),
        ) {
            use num_traits::Zero;
            prop_assume!(!c.is_zero());
            prop_assume!(k.degree().is_some_and(|d| d >= 1));
            let h = k.mul(&f).add(&UniPolyQ::constant(c.clone()));
            let witness = decompose_univariate(&h, &k)
                .expect("planted pairs are coprime")
                .expect("witness exists by construction");
            prop_assert_eq!(&witness.f, &f);
            prop_assert_eq!(&witness.c, &c);
            prop_assert_eq!(
                h.sub(&k.mul(&witness.f)),
                UniPolyQ::constant(witness.c)
            );
        }
    }
}
