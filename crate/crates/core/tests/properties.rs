#![allow(clippy::needless_range_loop)]

use affold::doc::QuiverDocument;
use affold::{canonical_form, ExchangeMatrix, Permutation, Seed};
use proptest::prelude::*;

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn symmetrizable(max_n: usize) -> impl Strategy<Value = ExchangeMatrix> {
    symmetrizable_within(max_n, 3, 2)
}

/// Matrices built from a symmetrizer in `1..=max_d` and scale factors in `-max_s..=max_s`.
fn symmetrizable_within(max_n: usize, max_d: i64, max_s: i64) -> impl Strategy<Value = ExchangeMatrix> {
    (1..=max_n).prop_flat_map(move |n| {
        (prop::collection::vec(1i64..=max_d, n), prop::collection::vec(-max_s..=max_s, n * (n - 1) / 2)).prop_map(
            move |(d, s)| {
                let mut b = vec![vec![0i64; n]; n];
                let mut it = s.into_iter();
                for i in 0..n {
                    for j in (i + 1)..n {
                        let v = it.next().unwrap();
                        let g = gcd(d[i], d[j]);
                        b[i][j] = v * d[j] / g;
                        b[j][i] = -v * d[i] / g;
                    }
                }
                ExchangeMatrix::new(b).unwrap()
            },
        )
    })
}

fn quiver(max_n: usize) -> impl Strategy<Value = ExchangeMatrix> {
    (2..=max_n).prop_flat_map(|n| {
        prop::collection::vec(-3i64..=3, n * (n - 1) / 2).prop_map(move |s| {
            let mut b = vec![vec![0i64; n]; n];
            let mut it = s.into_iter();
            for i in 0..n {
                for j in (i + 1)..n {
                    let v = it.next().unwrap();
                    b[i][j] = v;
                    b[j][i] = -v;
                }
            }
            ExchangeMatrix::new(b).unwrap()
        })
    })
}

fn with_permutation<S: Strategy<Value = ExchangeMatrix>>(s: S) -> impl Strategy<Value = (ExchangeMatrix, Permutation)> {
    s.prop_flat_map(|m| {
        let n = m.n();
        (Just(m), Just((0..n).collect::<Vec<usize>>()).prop_shuffle())
            .prop_map(|(m, images)| (m, Permutation::from_images(images).unwrap()))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn mutation_is_an_involution(m in symmetrizable(7), k in 0usize..7) {
        let k = k % m.n();
        prop_assert_eq!(m.mutate(k).unwrap().mutate(k).unwrap(), m);
    }

    #[test]
    fn mutation_preserves_the_symmetrizer(m in symmetrizable(7), k in 0usize..7) {
        let k = k % m.n();
        let out = m.mutate(k).unwrap();
        prop_assert_eq!(out.symmetrizer(), m.symmetrizer());
        let d = out.symmetrizer();
        for i in 0..out.n() {
            for j in 0..out.n() {
                prop_assert_eq!(d[i] as i64 * out.get(i, j), -(d[j] as i64) * out.get(j, i));
            }
        }
    }

    #[test]
    fn quiver_mutation_matches_matrix_mutation(m in quiver(7), k in 0usize..7) {
        let k = k % m.n();
        prop_assert_eq!(m.mutate_quiver(k).unwrap(), m.mutate(k).unwrap());
    }

    #[test]
    fn mutation_commutes_with_transpose(m in symmetrizable(7), k in 0usize..7) {
        let k = k % m.n();
        prop_assert_eq!(m.transpose().mutate(k).unwrap(), m.mutate(k).unwrap().transpose());
    }

    #[test]
    fn mutation_commutes_with_relabeling((m, p) in with_permutation(symmetrizable(7)), k in 0usize..7) {
        let k = k % m.n();
        prop_assert_eq!(m.relabel(&p).mutate(p.apply(k)).unwrap(), m.mutate(k).unwrap().relabel(&p));
    }

    #[test]
    fn canonical_form_ignores_labels((m, p) in with_permutation(symmetrizable(8))) {
        let a = canonical_form(&m);
        let b = canonical_form(&m.relabel(&p));
        prop_assert_eq!(&a.matrix, &b.matrix);
        prop_assert_eq!(m.relabel(&a.labeling), a.matrix);
    }

    #[test]
    fn restriction_commutes_with_isolated_mutation(m in symmetrizable(7), k in 0usize..7, mask in 0u32..128) {
        let n = m.n();
        let k = k % n;
        let subset: Vec<usize> = (0..n).filter(|&v| v == k || m.get(v, k) != 0 || mask & (1 << v) != 0).collect();
        let pos = subset.iter().position(|&v| v == k).unwrap();
        prop_assert_eq!(
            m.mutate(k).unwrap().restrict(&subset).unwrap(),
            m.restrict(&subset).unwrap().mutate(pos).unwrap()
        );
    }

    #[test]
    fn documents_round_trip(m in symmetrizable(6)) {
        let doc = QuiverDocument::from_matrix(&m, None);
        let (parsed, warnings) = QuiverDocument::parse(&doc.to_json(), true).unwrap();
        prop_assert!(warnings.is_empty());
        prop_assert_eq!(&parsed, &doc);
        prop_assert_eq!(parsed.matrix().unwrap(), m);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn seed_mutation_is_an_involution(m in symmetrizable_within(4, 2, 1), path in prop::collection::vec(0usize..4, 0..4), k in 0usize..4) {
        let n = m.n();
        let path: Vec<usize> = path.into_iter().map(|x| x % n).collect();
        let s = Seed::initial(&m).mutate_sequence(&path).unwrap();
        let k = k % n;
        prop_assert_eq!(s.mutate(k).unwrap().mutate(k).unwrap(), s);
    }
}
