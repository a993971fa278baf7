mod common;

use affold::folding::standard_folding;
use affold::laurent::LaurentPolynomial;
use affold::seed::{orbit_mutate_seed, positivity_audit, psi_project, verify_folded_pattern, SeedError};
use affold::{ExchangeMatrix, FoldingTriple, Seed};
use num_bigint::BigInt;
use num_rational::BigRational;

fn kronecker() -> ExchangeMatrix {
    ExchangeMatrix::new(vec![vec![0, 2], vec![-2, 0]]).unwrap()
}

fn a2() -> ExchangeMatrix {
    ExchangeMatrix::new(vec![vec![0, 1], vec![-1, 0]]).unwrap()
}

fn q(a: i64, b: i64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

/// Alternating mutations starting at vertex 0; element `t` is the variable created at step `t`.
fn alternating(m: &ExchangeMatrix, steps: usize) -> Vec<LaurentPolynomial> {
    let mut s = Seed::initial(m);
    let mut out = Vec::new();
    for t in 0..steps {
        s = s.mutate(t % 2).unwrap();
        out.push(s.cluster[t % 2].clone());
    }
    out
}

/// `x_{t+1} = (x_t^e + 1) / x_{t-1}` in exact rationals, starting from `x_1 = a`, `x_2 = b`.
fn recurrence(a: &BigRational, b: &BigRational, e: u32, steps: usize) -> Vec<BigRational> {
    let mut seq = vec![a.clone(), b.clone()];
    for _ in 0..steps {
        let n = seq.len();
        let mut p = BigRational::from_integer(BigInt::from(1));
        for _ in 0..e {
            p *= &seq[n - 1];
        }
        seq.push((p + BigRational::from_integer(BigInt::from(1))) / &seq[n - 2]);
    }
    seq.split_off(2)
}

#[test]
fn kronecker_first_exchange() {
    let s = Seed::initial(&kronecker()).mutate(0).unwrap();
    assert_eq!(s.cluster[0].to_string(), "x1^-1*x2^2 + x1^-1");
    assert_eq!(s.matrix.rows(), vec![vec![0, -2], vec![2, 0]]);
}

#[test]
fn rank_two_sequences_match_numeric_recurrences() {
    for (m, e) in [(a2(), 1), (kronecker(), 2)] {
        let vars = alternating(&m, 8);
        for (a, b) in [(q(2, 1), q(3, 1)), (q(5, 7), q(11, 3))] {
            // Mutating x1 first gives x1' = (x2^e + 1)/x1, so the sequence runs x1, x2, x1', x2', ...
            let expected = recurrence(&a, &b, e, 8);
            let point = [a.clone(), b.clone()];
            for (v, want) in vars.iter().zip(&expected) {
                assert_eq!(&v.evaluate(&point), want);
            }
        }
    }
}

#[test]
fn pentagon_periodicity() {
    let start = Seed::initial(&a2());
    let five = start.mutate_sequence(&[0, 1, 0, 1, 0]).unwrap();
    assert_eq!(five.cluster, vec![start.cluster[1].clone(), start.cluster[0].clone()]);
    let ten = start.mutate_sequence(&[0, 1, 0, 1, 0, 1, 0, 1, 0, 1]).unwrap();
    assert_eq!(ten, start);
    let report = positivity_audit(&start, 10).unwrap();
    assert_eq!(report.distinct_variables, 5);
    assert!(report.violations.is_empty());
}

#[test]
fn kronecker_positivity_to_depth_six() {
    let report = positivity_audit(&Seed::initial(&kronecker()), 6).unwrap();
    assert!(report.violations.is_empty());
    assert_eq!(report.seeds, 13);
    let empty = positivity_audit(&Seed::initial(&kronecker()), 0).unwrap();
    assert_eq!((empty.seeds, empty.distinct_variables), (1, 2));
}

#[test]
fn folded_patterns_agree_with_orbit_mutations() {
    for (triple, depth) in [("A~{2,2}/Z2/A~1", 4), ("D~4/Z2xZ2/A2(2)", 3), ("D~4/Z3/D4(3)", 3), ("A~{2,2}/Z2/A~1", 0)] {
        let triple: FoldingTriple = triple.parse().unwrap();
        let report = verify_folded_pattern(&triple, depth).unwrap();
        assert!(report.holds(), "{report:?}");
        if depth > 0 {
            assert!(report.invariant_seeds > 1 && report.squares_checked > 0, "{report:?}");
        }
    }
}

#[test]
fn projection_of_e6_seeds() {
    let triple: FoldingTriple = "E~6/Z3/G~2".parse().unwrap();
    let (m, a) = standard_folding(&triple);
    let s = Seed::initial(&m);
    let folded = psi_project(&s, &a).unwrap();
    assert_eq!(folded.cluster.len(), 3);
    assert_eq!(folded.matrix.rows(), vec![vec![0, 1, 0], vec![-3, 0, -1], vec![0, 1, 0]]);
    let moved = orbit_mutate_seed(&s, &a, 1).unwrap();
    assert_eq!(psi_project(&moved, &a).unwrap(), folded.mutate(1).unwrap());
    assert_eq!(orbit_mutate_seed(&moved, &a, 1).unwrap(), s);
    assert!(matches!(psi_project(&s.mutate(1).unwrap(), &a), Err(SeedError::NotInvariant(_))));
    let single = orbit_mutate_seed(&s, &a, 0).unwrap();
    assert_eq!(single, s.mutate(0).unwrap());
}
