//! Seeds of cluster algebras over the initial cluster, their mutation, and the
//! projection `x_i -> y_I` onto the folded seed pattern.

use std::collections::{HashSet, VecDeque};

use serde::Serialize;
use thiserror::Error;

use crate::action::{FoldingTriple, GroupAction};
use crate::folding::{check, fold, is_invariant, standard_folding, FoldingError};
use crate::laurent::LaurentPolynomial;
use crate::{ExchangeMatrix, MatrixError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeedError {
    #[error("exchange relation at {k} did not divide exactly")]
    NonLaurent { k: usize },
    #[error("seed is not invariant: {0}")]
    NotInvariant(String),
    #[error(transparent)]
    Folding(#[from] FoldingError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Seed {
    pub cluster: Vec<LaurentPolynomial>,
    pub matrix: ExchangeMatrix,
}

impl Seed {
    /// The initial seed `(x_1, ..., x_n; B)`.
    pub fn initial(matrix: &ExchangeMatrix) -> Seed {
        let n = matrix.n();
        Seed { cluster: (0..n).map(|i| LaurentPolynomial::variable(n, i)).collect(), matrix: matrix.clone() }
    }

    pub fn n(&self) -> usize {
        self.matrix.n()
    }

    /// Seed mutation at `k`.
    pub fn mutate(&self, k: usize) -> Result<Seed, SeedError> {
        let matrix = self.matrix.mutate(k)?;
        let vars = self.cluster[0].nvars();
        let mut plus = LaurentPolynomial::one(vars);
        let mut minus = LaurentPolynomial::one(vars);
        for j in 0..self.n() {
            let b = self.matrix.get(j, k);
            let e = u32::try_from(b.unsigned_abs()).map_err(|_| MatrixError::Overflow { k })?;
            if b > 0 {
                plus = &plus * &self.cluster[j].pow(e);
            } else if b < 0 {
                minus = &minus * &self.cluster[j].pow(e);
            }
        }
        let numerator = &plus + &minus;
        let new = numerator.div_exact(&self.cluster[k]).ok_or(SeedError::NonLaurent { k })?;
        let mut cluster = self.cluster.clone();
        cluster[k] = new;
        Ok(Seed { cluster, matrix })
    }

    pub fn mutate_sequence(&self, seq: &[usize]) -> Result<Seed, SeedError> {
        let mut s = self.clone();
        for &k in seq {
            s = s.mutate(k)?;
        }
        Ok(s)
    }

    /// Whether `x_i` and `x_i'` project to the same element for all `i ~ i'`.
    pub fn variables_invariant(&self, a: &GroupAction) -> bool {
        let class_of: Vec<usize> = (0..self.n()).map(|i| a.orbit_of(i)).collect();
        let m = a.orbits().len();
        a.orbits().iter().all(|orbit| {
            let first = self.cluster[orbit[0]].project(&class_of, m);
            orbit[1..].iter().all(|&i| self.cluster[i].project(&class_of, m) == first)
        })
    }

    /// `(G, psi)`-invariance: invariant variables and an invariant matrix.
    pub fn is_invariant(&self, a: &GroupAction) -> bool {
        is_invariant(&self.matrix, a) && self.variables_invariant(a)
    }
}

/// The folded seed `(psi(x_I); B^G)`, with one variable per orbit.
pub fn psi_project(s: &Seed, a: &GroupAction) -> Result<Seed, SeedError> {
    if !s.variables_invariant(a) {
        return Err(SeedError::NotInvariant("cluster variables differ within an orbit".into()));
    }
    let matrix = fold(&s.matrix, a)?;
    let class_of: Vec<usize> = (0..s.n()).map(|i| a.orbit_of(i)).collect();
    let m = a.orbits().len();
    let cluster = a.orbits().iter().map(|o| s.cluster[o[0]].project(&class_of, m)).collect();
    Ok(Seed { cluster, matrix })
}

/// Seed mutation at every vertex of an orbit, in increasing order.
///
/// Requires an admissible matrix; the matrix part is also computed in
/// decreasing order and must agree.
pub fn orbit_mutate_seed(s: &Seed, a: &GroupAction, index: usize) -> Result<Seed, SeedError> {
    let report = check(&s.matrix, a)?;
    if let Some(v) = report.witness {
        return Err(FoldingError::NotAdmissible(v).into());
    }
    let orbit = a.orbits().get(index).ok_or(FoldingError::NotAnOrbit { index, count: a.orbits().len() })?;
    let out = s.mutate_sequence(orbit)?;
    let rev: Vec<usize> = orbit.iter().rev().copied().collect();
    if s.matrix.mutate_sequence(&rev)? != out.matrix {
        return Err(FoldingError::OrderDependent.into());
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeedPatternReport {
    pub triple: String,
    pub depth: usize,
    /// Seeds within `depth` single mutations of the initial seed.
    pub single_seeds: usize,
    /// Of those, seeds with invariant variables and matrix.
    pub invariant_seeds: usize,
    /// Invariant seeds whose matrix is not admissible.
    pub invariant_not_admissible: usize,
    /// Seeds within `depth` orbit mutations.
    pub orbit_seeds: usize,
    /// Invariant seeds from the single-mutation search not reached by orbit mutations.
    pub missing_from_orbit: usize,
    /// Checks of `psi(mu_I s) = mu_I(psi s)`.
    pub squares_checked: usize,
    pub square_failures: usize,
    /// Orbit-reached seeds that are not invariant.
    pub orbit_not_invariant: usize,
}

impl SeedPatternReport {
    pub fn holds(&self) -> bool {
        self.invariant_not_admissible == 0
            && self.missing_from_orbit == 0
            && self.square_failures == 0
            && self.orbit_not_invariant == 0
    }
}

fn bfs(
    start: &Seed,
    depth: usize,
    moves: usize,
    step: impl Fn(&Seed, usize) -> Result<Seed, SeedError>,
) -> Result<Vec<(Seed, Vec<usize>)>, SeedError> {
    let mut seen: HashSet<Seed> = HashSet::from([start.clone()]);
    let mut out = vec![(start.clone(), Vec::new())];
    let mut queue = VecDeque::from([(start.clone(), Vec::<usize>::new())]);
    while let Some((s, path)) = queue.pop_front() {
        if path.len() == depth {
            continue;
        }
        for k in 0..moves {
            let t = step(&s, k)?;
            if seen.insert(t.clone()) {
                let mut p = path.clone();
                p.push(k);
                out.push((t.clone(), p.clone()));
                queue.push_back((t, p));
            }
        }
    }
    Ok(out)
}

/// Compares the invariant part of the seed pattern of `X` with the seeds
/// reached by orbit mutations, and checks that the projection to the folded
/// pattern commutes with orbit mutation.
pub fn verify_folded_pattern(triple: &FoldingTriple, depth: usize) -> Result<SeedPatternReport, SeedError> {
    let (matrix, action) = standard_folding(triple);
    let start = Seed::initial(&matrix);
    let n = matrix.n();
    let singles = bfs(&start, depth, n, |s, k| s.mutate(k))?;
    let mut invariant: Vec<&Seed> = Vec::new();
    let mut invariant_not_admissible = 0;
    for (s, _) in &singles {
        if s.is_invariant(&action) {
            invariant.push(s);
            if !check(&s.matrix, &action)?.admissible {
                invariant_not_admissible += 1;
            }
        }
    }
    let orbits = bfs(&start, depth, action.orbits().len(), |s, idx| orbit_mutate_seed(s, &action, idx))?;
    let mut squares_checked = 0;
    let mut square_failures = 0;
    let mut orbit_not_invariant = 0;
    for (s, _) in &orbits {
        if !s.is_invariant(&action) {
            orbit_not_invariant += 1;
            continue;
        }
        let folded = psi_project(s, &action)?;
        for idx in 0..action.orbits().len() {
            let top = psi_project(&orbit_mutate_seed(s, &action, idx)?, &action)?;
            let bottom = folded.mutate(idx)?;
            squares_checked += 1;
            if top != bottom {
                square_failures += 1;
            }
        }
    }
    let reached: HashSet<&Seed> = orbits.iter().map(|(s, _)| s).collect();
    let missing_from_orbit = invariant.iter().filter(|s| !reached.contains(*s)).count();
    Ok(SeedPatternReport {
        triple: triple.to_string(),
        depth,
        single_seeds: singles.len(),
        invariant_seeds: invariant.len(),
        invariant_not_admissible,
        orbit_seeds: orbits.len(),
        missing_from_orbit,
        squares_checked,
        square_failures,
        orbit_not_invariant,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PositivityReport {
    pub depth: usize,
    pub seeds: usize,
    pub distinct_variables: usize,
    /// `(mutation path, 0-based variable index)` for each variable with a non-positive coefficient.
    pub violations: Vec<(Vec<usize>, usize)>,
}

/// Checks that every cluster variable within `depth` mutations has positive coefficients.
pub fn positivity_audit(s: &Seed, depth: usize) -> Result<PositivityReport, SeedError> {
    let seeds = bfs(s, depth, s.n(), |x, k| x.mutate(k))?;
    let mut vars: HashSet<&LaurentPolynomial> = HashSet::new();
    let mut violations = Vec::new();
    for (seed, path) in &seeds {
        for (i, v) in seed.cluster.iter().enumerate() {
            if vars.insert(v) && !v.has_positive_coefficients() {
                violations.push((path.clone(), i));
            }
        }
    }
    Ok(PositivityReport { depth, seeds: seeds.len(), distinct_variables: vars.len(), violations })
}
