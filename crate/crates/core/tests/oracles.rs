mod common;

use std::collections::HashSet;

use affold::class::{classify_three, is_mutation_finite_with, FinitenessOptions, InfinitePattern};
use affold::dynkin::apq_class_count_u64;
use affold::labeled::{enumerate_labeled_class, LabeledClassModel};
use affold::{
    are_isomorphic, canon, canonical_form, enumerate_class, ClassError, DynkinType, ExchangeMatrix, Finiteness,
    FoldingTriple, Orientation,
};
use common::*;

#[test]
fn canonical_form_agrees_with_exhaustive_search() {
    let mut r = rng(11);
    for n in 1..=6 {
        for _ in 0..40 {
            let m = random_quiver(&mut r, n, 2);
            let p = all_permutations(n)[(n * 7) % all_permutations(n).len()].clone();
            let q = m.relabel(&p);
            assert_eq!(canonical_form(&m).matrix, canonical_form(&q).matrix);
            let other = random_quiver(&mut r, n, 2);
            assert_eq!(are_isomorphic(&m, &other), brute_canonical(&m) == brute_canonical(&other));
        }
    }
}

#[test]
fn canonical_labeling_relabels_into_the_form() {
    let mut r = rng(12);
    for _ in 0..200 {
        let m = random_symmetrizable(&mut r, 5);
        let cf = canonical_form(&m);
        assert_eq!(m.relabel(&cf.labeling), cf.matrix);
    }
}

#[test]
fn automorphism_groups_match_exhaustive_count() {
    let mut r = rng(13);
    for n in 2..=6 {
        for _ in 0..30 {
            let m = random_quiver(&mut r, n, 1);
            let group = canon::automorphism_group(&m);
            assert_eq!(group.order(), brute_automorphism_count(&m), "{:?}", m.rows());
            assert!(group.elements().all(|g| canon::is_automorphism(&m, g)));
        }
    }
}

#[test]
fn class_sizes_match_exhaustive_canonization() {
    for name in
        ["E~6", "E~7", "E~8", "F~4", "G~2", "D~4", "D~5", "D~6", "B~3", "C~3", "A~{2,3}", "E6(2)", "D4(3)", "A5(2)"]
    {
        let m = diagram(name);
        let fast = enumerate_class(&m, 100_000).unwrap().len();
        assert_eq!(fast, brute_class_size(&m), "{name}");
    }
}

#[test]
fn affine_a_counts_follow_the_closed_formula() {
    for total in 2..=8 {
        for p in 1..=total / 2 {
            let q = total - p;
            let m = DynkinType::affine_a(p, q).unwrap().diagram(&Orientation::Default).unwrap();
            let size = enumerate_class(&m, 100_000).unwrap().len() as u64;
            assert_eq!(size, apq_class_count_u64(p, q).unwrap(), "A~{{{p},{q}}}");
            if total <= 6 {
                assert_eq!(size as usize, brute_class_size(&m));
            }
        }
    }
}

#[test]
fn relabeling_model_matches_labeled_search() {
    for name in ["A~{2,2}", "A~{3,3}", "A~{1,3}", "D~4", "D~5", "E~6", "B~3", "G~2"] {
        let m = diagram(name);
        let labeled = enumerate_labeled_class(&m, 2_000_000).unwrap();
        let model = LabeledClassModel::new(&m, 100_000).unwrap();
        assert_eq!(model.labeled_size(), labeled.len() as u128, "{name}");
    }
}

#[test]
fn invariant_members_match_filtered_labeled_search() {
    for triple in FoldingTriple::all(7) {
        let (start, action) = affold::folding::standard_folding(&triple);
        let labeled = enumerate_labeled_class(&start, 2_000_000).unwrap();
        let expected: HashSet<ExchangeMatrix> =
            labeled.into_iter().filter(|x| affold::folding::is_invariant(x, &action)).collect();
        let model = LabeledClassModel::new(&start, 100_000).unwrap();
        let got: HashSet<ExchangeMatrix> = model.invariant_members(&action).into_iter().map(|(_, x)| x).collect();
        assert_eq!(got, expected, "{triple}");
    }
}

/// Finite means the class is exhausted within the budget; a class that
/// overflows the budget or the entry range is treated as infinite.
fn brute_finite(m: &ExchangeMatrix) -> bool {
    match enumerate_class(m, 3_000) {
        Ok(_) => true,
        Err(ClassError::BudgetExceeded { .. } | ClassError::Matrix(affold::MatrixError::Overflow { .. })) => false,
        Err(e) => panic!("{e}"),
    }
}

#[test]
fn three_vertex_finiteness_matches_exhaustion() {
    for a in -2i64..=2 {
        for b in -2i64..=2 {
            for c in -2i64..=2 {
                let m = ExchangeMatrix::new(vec![vec![0, a, c], vec![-a, 0, b], vec![-c, -b, 0]]).unwrap();
                if !m.is_connected() {
                    continue;
                }
                let finite = brute_finite(&m);
                let opts = FinitenessOptions { budget: 10_000, entry_bound_shortcut: false };
                match is_mutation_finite_with(&m, &opts).unwrap() {
                    Finiteness::Finite { .. } => assert!(finite, "{:?}", m.rows()),
                    Finiteness::Infinite { certificate } => {
                        assert!(!finite, "{:?}", m.rows());
                        assert!(certificate.verify(&m));
                    }
                    Finiteness::Inconclusive { .. } => panic!("inconclusive on {:?}", m.rows()),
                }
            }
        }
    }
}

#[test]
fn patterns_classify_their_own_shapes() {
    let linear = ExchangeMatrix::from_arrows(3, &[(0, 1, 1), (1, 2, 2)]).unwrap();
    assert_eq!(classify_three(&linear), Some(InfinitePattern::Linear { a: 1, b: 2 }));
    assert!(!brute_finite(&linear));
    let markov = ExchangeMatrix::from_arrows(3, &[(0, 1, 2), (1, 2, 2), (2, 0, 2)]).unwrap();
    assert_eq!(classify_three(&markov), Some(InfinitePattern::CyclicTriangle { a: 2, b: 2, c: 2 }));
    assert!(brute_finite(&markov));
}

/// Orbit-mutation search without any deduplication beyond exact equality.
fn labeled_foldability(m: &ExchangeMatrix, a: &affold::GroupAction) -> (bool, usize) {
    let mut seen: HashSet<ExchangeMatrix> = HashSet::from([m.clone()]);
    let mut queue = vec![m.clone()];
    while let Some(x) = queue.pop() {
        for idx in 0..a.orbits().len() {
            let y = affold::folding::orbit_mutate(&x, a, idx).unwrap();
            if !affold::folding::check(&y, a).unwrap().admissible {
                return (false, seen.len());
            }
            if seen.insert(y.clone()) {
                queue.push(y);
            }
        }
    }
    (true, seen.len())
}

#[test]
fn global_foldability_matches_labeled_search() {
    for triple in FoldingTriple::all(7) {
        let (start, action) = affold::folding::standard_folding(&triple);
        let (foldable, labeled_states) = labeled_foldability(&start, &action);
        let report = affold::folding::globally_foldable(&start, &action, 100_000).unwrap();
        let affold::folding::GlobalFoldability::Foldable { states } = report.verdict else {
            panic!("{triple}: {:?}", report.verdict);
        };
        assert!(foldable, "{triple}");
        assert!(states <= labeled_states, "{triple}");
    }
    let hexagon =
        ExchangeMatrix::from_arrows(6, &[(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 4, 1), (4, 5, 1), (5, 0, 1)]).unwrap();
    let g = affold::Permutation::from_cycles(6, &[&[0, 3], &[1, 4], &[2, 5]]).unwrap();
    let action = affold::GroupAction::new(6, affold::GroupTag::Z2, vec![g]).unwrap();
    assert!(!labeled_foldability(&hexagon, &action).0);
    assert!(matches!(
        affold::folding::globally_foldable(&hexagon, &action, 100_000).unwrap().verdict,
        affold::folding::GlobalFoldability::NotFoldable { .. }
    ));
}
