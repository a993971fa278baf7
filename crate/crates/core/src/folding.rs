//! Invariance, admissibility, folding and orbit mutation under a group action.

use std::collections::{HashSet, VecDeque};

use serde::Serialize;
use thiserror::Error;

use crate::action::{FoldingTriple, GroupAction};
use crate::canon::canonical_labeling;
use crate::class::ClassError;
use crate::dynkin::Orientation;
use crate::labeled::LabeledClassModel;
use crate::{ExchangeMatrix, MatrixError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FoldingError {
    #[error("matrix is not admissible: {0}")]
    NotAdmissible(Violation),
    #[error("orbit index {index} out of range for {count} orbits")]
    NotAnOrbit { index: usize, count: usize },
    #[error("action acts on {action} points but the matrix has {matrix} vertices")]
    DegreeMismatch { action: usize, matrix: usize },
    #[error("mutations within an orbit gave different results in different orders")]
    OrderDependent,
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// The first failed admissibility condition, 0-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// Generator `generator` does not fix the matrix: `b[g(i)][g(j)] != b[i][j]`.
    NotInvariant { generator: usize, i: usize, j: usize },
    /// `i` and `i2` share an orbit but `b[i][i2] != 0`.
    EdgeInOrbit { i: usize, i2: usize },
    /// `i` and `i2` share an orbit but `b[i][j] * b[i2][j] < 0`.
    SignConflict { i: usize, i2: usize, j: usize },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match *self {
            Violation::NotInvariant { generator, i, j } => {
                write!(f, "generator {} moves entry ({}, {})", generator + 1, i + 1, j + 1)
            }
            Violation::EdgeInOrbit { i, i2 } => write!(f, "b[{}][{}] != 0 within an orbit", i + 1, i2 + 1),
            Violation::SignConflict { i, i2, j } => {
                write!(f, "b[{}][{}] * b[{}][{}] < 0", i + 1, j + 1, i2 + 1, j + 1)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdmissibilityReport {
    pub invariant: bool,
    pub admissible: bool,
    pub witness: Option<Violation>,
}

fn check_degree(m: &ExchangeMatrix, a: &GroupAction) -> Result<(), FoldingError> {
    if m.n() != a.degree() {
        Err(FoldingError::DegreeMismatch { action: a.degree(), matrix: m.n() })
    } else {
        Ok(())
    }
}

/// Checks invariance, then the orbit conditions, reporting the first violation.
///
/// Pairs `i < i2` in a common orbit are scanned in increasing order of `i`,
/// then `i2`, then `j`.
pub fn check(m: &ExchangeMatrix, a: &GroupAction) -> Result<AdmissibilityReport, FoldingError> {
    check_degree(m, a)?;
    let n = m.n();
    for (idx, g) in a.generators().iter().enumerate() {
        for i in 0..n {
            for j in 0..n {
                if m.get(g.apply(i), g.apply(j)) != m.get(i, j) {
                    let witness = Some(Violation::NotInvariant { generator: idx, i, j });
                    return Ok(AdmissibilityReport { invariant: false, admissible: false, witness });
                }
            }
        }
        if (0..n).any(|i| m.symmetrizer()[g.apply(i)] != m.symmetrizer()[i]) {
            let witness = Some(Violation::NotInvariant { generator: idx, i: 0, j: 0 });
            return Ok(AdmissibilityReport { invariant: false, admissible: false, witness });
        }
    }
    for i in 0..n {
        for i2 in (i + 1)..n {
            if !a.same_orbit(i, i2) {
                continue;
            }
            let witness =
                if m.get(i, i2) != 0 {
                    Some(Violation::EdgeInOrbit { i, i2 })
                } else {
                    (0..n)
                        .find(|&j| m.get(i, j).signum() * m.get(i2, j).signum() < 0)
                        .map(|j| Violation::SignConflict { i, i2, j })
                };
            if witness.is_some() {
                return Ok(AdmissibilityReport { invariant: true, admissible: false, witness });
            }
        }
    }
    Ok(AdmissibilityReport { invariant: true, admissible: true, witness: None })
}

pub fn is_invariant(m: &ExchangeMatrix, a: &GroupAction) -> bool {
    m.n() == a.degree() && a.generators().iter().all(|g| m.is_fixed_by(g))
}

pub fn is_admissible(m: &ExchangeMatrix, a: &GroupAction) -> bool {
    check(m, a).is_ok_and(|r| r.admissible)
}

fn require_admissible(m: &ExchangeMatrix, a: &GroupAction) -> Result<(), FoldingError> {
    let report = check(m, a)?;
    match report.witness {
        None => Ok(()),
        Some(v) => Err(FoldingError::NotAdmissible(v)),
    }
}

/// The folded matrix `b_IJ = sum_{i in I} b_ij` for any `j in J`, indexed by
/// orbits in the order of [`GroupAction::orbits`].
pub fn fold(m: &ExchangeMatrix, a: &GroupAction) -> Result<ExchangeMatrix, FoldingError> {
    require_admissible(m, a)?;
    let orbits = a.orbits();
    let k = orbits.len();
    let mut b = vec![0i64; k * k];
    for (x, ox) in orbits.iter().enumerate() {
        for (y, oy) in orbits.iter().enumerate() {
            b[x * k + y] = ox.iter().map(|&i| m.get(i, oy[0])).sum();
        }
    }
    Ok(ExchangeMatrix::from_flat(k, b)?)
}

/// Mutation at every vertex of orbit `index`, in increasing vertex order.
/// The decreasing order is computed as well and must agree.
pub fn orbit_mutate(m: &ExchangeMatrix, a: &GroupAction, index: usize) -> Result<ExchangeMatrix, FoldingError> {
    require_admissible(m, a)?;
    let orbit = a.orbits().get(index).ok_or(FoldingError::NotAnOrbit { index, count: a.orbits().len() })?;
    let up = m.mutate_sequence(orbit)?;
    let rev: Vec<usize> = orbit.iter().rev().copied().collect();
    if m.mutate_sequence(&rev)? != up {
        return Err(FoldingError::OrderDependent);
    }
    Ok(up)
}

/// Whether folding commutes with mutation at orbit `index`.
pub fn fold_commutes(m: &ExchangeMatrix, a: &GroupAction, index: usize) -> Result<bool, FoldingError> {
    let top = fold(&orbit_mutate(m, a, index)?, a)?;
    let bottom = fold(m, a)?.mutate(index)?;
    Ok(top == bottom)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum GlobalFoldability {
    /// Every orbit-mutation sequence stays admissible.
    Foldable {
        states: usize,
    },
    /// Orbit mutations along `witness` (orbit indices) reach a non-admissible matrix.
    NotFoldable {
        witness: Vec<usize>,
        violation: Violation,
    },
    Inconclusive {
        explored: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GlobalReport {
    #[serde(flatten)]
    pub verdict: GlobalFoldability,
    /// Commuting squares `fold(mu_I B) = mu_I(fold B)` checked along the way.
    pub squares_checked: usize,
    pub square_failures: usize,
}

/// Canonical key of `m` up to relabelings that commute with every generator.
///
/// Such relabelings permute orbits and preserve admissibility, so states with
/// equal keys have the same foldability.
fn action_key(m: &ExchangeMatrix, a: &GroupAction) -> (Vec<i64>, Vec<u64>) {
    let n = m.n();
    let gens = a.generators();
    assert!(gens.len() <= 3, "at most three generators fit the entry encoding");
    let mut e = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let mask = gens.iter().enumerate().filter(|(_, g)| g.apply(i) == j).fold(0, |acc, (t, _)| acc | (1 << t));
            e.push(m.get(i, j) * 8 + mask);
        }
    }
    let (key, colors, _, _) = canonical_labeling(n, &e, m.symmetrizer());
    (key, colors)
}

/// Breadth-first search over orbit mutations. States are deduplicated up to
/// relabelings commuting with the action; witness paths are exact.
pub fn globally_foldable(m: &ExchangeMatrix, a: &GroupAction, budget: usize) -> Result<GlobalReport, FoldingError> {
    let report = check(m, a)?;
    let mut out =
        GlobalReport { verdict: GlobalFoldability::Foldable { states: 0 }, squares_checked: 0, square_failures: 0 };
    if let Some(violation) = report.witness {
        out.verdict = GlobalFoldability::NotFoldable { witness: Vec::new(), violation };
        return Ok(out);
    }
    let mut seen: HashSet<(Vec<i64>, Vec<u64>)> = HashSet::from([action_key(m, a)]);
    let mut queue = VecDeque::from([(m.clone(), Vec::<usize>::new())]);
    while let Some((x, path)) = queue.pop_front() {
        let folded = fold(&x, a)?;
        for idx in 0..a.orbits().len() {
            let y = orbit_mutate(&x, a, idx)?;
            let mut next_path = path.clone();
            next_path.push(idx);
            let report = check(&y, a)?;
            if let Some(violation) = report.witness {
                out.verdict = GlobalFoldability::NotFoldable { witness: next_path, violation };
                return Ok(out);
            }
            out.squares_checked += 1;
            if fold(&y, a)? != folded.mutate(idx)? {
                out.square_failures += 1;
            }
            if seen.insert(action_key(&y, a)) {
                if seen.len() > budget {
                    out.verdict = GlobalFoldability::Inconclusive { explored: seen.len() - 1 };
                    return Ok(out);
                }
                queue.push_back((y, next_path));
            }
        }
    }
    out.verdict = GlobalFoldability::Foldable { states: seen.len() };
    Ok(out)
}

/// Result of comparing invariance with admissibility over a labeled class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvarianceReport {
    pub triple: String,
    pub class_size: usize,
    pub labeled_class_size: u128,
    pub relabeling_group_order: usize,
    pub invariant_count: usize,
    pub admissible_count: usize,
    /// Isomorphism classes containing at least one invariant labeled member.
    pub invariant_classes: usize,
    /// Invariant members with a nonzero entry between `i` and `g(i)` for some group element `g`.
    pub orbit_edge_violations: usize,
    /// Invariant but not admissible members, as row lists.
    pub counterexamples: Vec<Vec<Vec<i64>>>,
    /// Whether the fold of the standard invariant diagram has the target's Cartan type.
    pub fold_type_matches: bool,
}

impl InvarianceReport {
    pub fn holds(&self) -> bool {
        self.counterexamples.is_empty()
            && self.orbit_edge_violations == 0
            && self.invariant_count == self.admissible_count
            && self.fold_type_matches
    }
}

/// Every labeled member of the mutation class of `X` fixed by the standard
/// action must be admissible.
pub fn verify_invariance_equals_admissibility(
    triple: &FoldingTriple,
    budget: usize,
) -> Result<InvarianceReport, ClassError> {
    let (start, action) = standard_folding(triple);
    let model = LabeledClassModel::new(&start, budget)?;
    let mut invariant_count = 0;
    let mut admissible_count = 0;
    let mut orbit_edge_violations = 0;
    let mut counterexamples = Vec::new();
    let mut classes = HashSet::new();
    model.for_each_invariant_member(&action, |c, m| {
        invariant_count += 1;
        classes.insert(c);
        let report = check(m, &action).expect("degrees match");
        if report.admissible {
            admissible_count += 1;
        } else {
            counterexamples.push(m.rows());
        }
        if action.elements().iter().any(|g| (0..m.n()).any(|i| m.get(i, g.apply(i)) != 0)) {
            orbit_edge_violations += 1;
        }
    });
    let fold_type_matches =
        fold(&start, &action).map(|f| f.cartan().is_isomorphic(&triple.target.cartan_matrix())).unwrap_or(false);
    Ok(InvarianceReport {
        triple: triple.to_string(),
        class_size: model.class.len(),
        labeled_class_size: model.labeled_size(),
        relabeling_group_order: model.relabeling_group.order(),
        invariant_count,
        admissible_count,
        invariant_classes: classes.len(),
        orbit_edge_violations,
        counterexamples,
        fold_type_matches,
    })
}

/// The bipartite diagram of the source, which is fixed by the standard action.
pub fn standard_folding(triple: &FoldingTriple) -> (ExchangeMatrix, GroupAction) {
    let m = triple.source.diagram(&Orientation::Bipartite).expect("standard sources admit a bipartite orientation");
    (m, triple.action())
}
