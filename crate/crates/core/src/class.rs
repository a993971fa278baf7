//! Mutation classes up to isomorphism, finiteness certificates, reductions
//! by mutation and restriction, and type recognition.

use std::collections::{HashMap, HashSet, VecDeque};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::canon::{canonical_form, canonical_labeling};
use crate::dynkin::{cycle_split, DynkinType};
use crate::{CanonicalForm, ExchangeMatrix, MatrixError, Permutation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassError {
    #[error("budget of {budget} classes exceeded after exploring {explored}")]
    BudgetExceeded { budget: usize, explored: usize, partial: Box<MutationClass> },
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error("matrix is not connected")]
    Disconnected,
    #[error("matrix is not acyclic")]
    NotAcyclic,
    #[error("matrix is not of affine type")]
    NotAffine,
}

/// One isomorphism class in a mutation class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassMember {
    pub canonical: ExchangeMatrix,
    /// The labeled matrix reached from the seed matrix along `path`.
    pub representative: ExchangeMatrix,
    /// `representative.relabel(&labeling) == canonical`.
    pub labeling: Permutation,
    /// Mutation sequence, applied left to right, from the seed matrix.
    pub path: Vec<usize>,
}

/// A mutation-graph edge: mutating member `from` at `k` gives `members[to].representative`
/// relabeled by `relabel`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassEdge {
    pub from: usize,
    pub k: usize,
    pub to: usize,
    pub relabel: Permutation,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MutationClass {
    /// Members in breadth-first discovery order.
    pub members: Vec<ClassMember>,
    /// False when exploration stopped early.
    pub complete: bool,
}

impl MutationClass {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, m: &ExchangeMatrix) -> bool {
        let c = canonical_form(m).matrix;
        self.members.iter().any(|x| x.canonical == c)
    }

    pub fn max_abs_entry(&self) -> u64 {
        self.members.iter().map(|m| m.canonical.max_abs_entry()).max().unwrap_or(0)
    }

    /// Canonical forms sorted, for order-independent comparison.
    pub fn sorted_canonical(&self) -> Vec<ExchangeMatrix> {
        let mut v: Vec<ExchangeMatrix> = self.members.iter().map(|m| m.canonical.clone()).collect();
        v.sort();
        v
    }
}

/// Breadth-first search over isomorphism classes.
///
/// Each level is mutated and canonized in parallel; new classes are inserted
/// sequentially in `(parent, k)` order, so results match a single-threaded FIFO
/// search exactly. `visit` sees each new member and may stop the search by
/// returning `true`.
pub(crate) struct Explorer {
    pub class: MutationClass,
    pub edges: Vec<ClassEdge>,
    pub stopped: bool,
}

pub(crate) fn explore(
    m: &ExchangeMatrix,
    budget: usize,
    record_edges: bool,
    mut visit: impl FnMut(&ClassMember) -> bool,
) -> Result<Explorer, MatrixError> {
    let n = m.n();
    let CanonicalForm { matrix, labeling } = canonical_form(m);
    let root = ClassMember { canonical: matrix.clone(), representative: m.clone(), labeling, path: Vec::new() };
    let mut index: HashMap<ExchangeMatrix, usize> = HashMap::from([(matrix, 0)]);
    let mut out =
        Explorer { class: MutationClass { members: vec![root], complete: false }, edges: Vec::new(), stopped: false };
    if visit(&out.class.members[0]) {
        out.stopped = true;
        return Ok(out);
    }
    let mut level: Vec<usize> = vec![0];
    while !level.is_empty() {
        let jobs: Vec<(usize, usize)> = level.iter().flat_map(|&p| (0..n).map(move |k| (p, k))).collect();
        let members = &out.class.members;
        let children: Vec<Result<(ExchangeMatrix, CanonicalForm), MatrixError>> = jobs
            .par_iter()
            .map(|&(p, k)| {
                let child = members[p].representative.mutate(k)?;
                let cf = canonical_form(&child);
                Ok((child, cf))
            })
            .collect();
        let mut next = Vec::new();
        for ((p, k), res) in jobs.into_iter().zip(children) {
            let (child, cf) = res?;
            let to = match index.get(&cf.matrix) {
                Some(&to) => to,
                None => {
                    if out.class.members.len() >= budget {
                        return Ok(out);
                    }
                    let to = out.class.members.len();
                    let mut path = out.class.members[p].path.clone();
                    path.push(k);
                    index.insert(cf.matrix.clone(), to);
                    out.class.members.push(ClassMember {
                        canonical: cf.matrix,
                        representative: child,
                        labeling: cf.labeling.clone(),
                        path,
                    });
                    next.push(to);
                    if visit(&out.class.members[to]) {
                        out.stopped = true;
                        return Ok(out);
                    }
                    to
                }
            };
            if record_edges {
                let relabel = cf.labeling.inverse().compose(&out.class.members[to].labeling);
                out.edges.push(ClassEdge { from: p, k, to, relabel });
            }
        }
        level = next;
    }
    out.class.complete = true;
    Ok(out)
}

/// The mutation class up to isomorphism, explored breadth-first.
///
/// At most `budget` classes are stored; beyond that the truncated class is
/// returned inside [`ClassError::BudgetExceeded`].
pub fn enumerate_class(m: &ExchangeMatrix, budget: usize) -> Result<MutationClass, ClassError> {
    let ex = explore(m, budget, false, |_| false)?;
    finish(ex.class, budget)
}

/// Like [`enumerate_class`], also returning every mutation edge.
pub fn enumerate_class_with_edges(
    m: &ExchangeMatrix,
    budget: usize,
) -> Result<(MutationClass, Vec<ClassEdge>), ClassError> {
    let ex = explore(m, budget, true, |_| false)?;
    let edges = ex.edges;
    Ok((finish(ex.class, budget)?, edges))
}

fn finish(class: MutationClass, budget: usize) -> Result<MutationClass, ClassError> {
    if class.complete {
        Ok(class)
    } else {
        Err(ClassError::BudgetExceeded { budget, explored: class.len(), partial: Box::new(class) })
    }
}

/// A 3-vertex (or entry) pattern that forces an infinite mutation class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InfinitePattern {
    /// A connected skew-symmetric matrix on at least three vertices with an entry of absolute value at least 3.
    EntryBound { i: usize, j: usize, value: i64 },
    /// Path with edge multiplicities `a`, `b` and `ab >= 2`.
    Linear { a: u64, b: u64 },
    /// Oriented triangle with weights `a <= b <= c`, infinite when the product of
    /// two weights exceeds twice the third.
    CyclicTriangle { a: u64, b: u64, c: u64 },
    /// Acyclic triangle with weights `a <= b <= c` and `abc >= 2`.
    AcyclicTriangle { a: u64, b: u64, c: u64 },
}

/// Evidence of an infinite mutation class: mutate along `path`, restrict to `subset`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InfiniteCertificate {
    pub path: Vec<usize>,
    pub subset: Vec<usize>,
    pub pattern: InfinitePattern,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Finiteness {
    Finite { class_size: usize },
    Infinite { certificate: InfiniteCertificate },
    Inconclusive { explored: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FinitenessOptions {
    pub budget: usize,
    /// Accept an entry of absolute value at least 3 as proof of infiniteness.
    pub entry_bound_shortcut: bool,
}

impl Default for FinitenessOptions {
    fn default() -> Self {
        FinitenessOptions { budget: 100_000, entry_bound_shortcut: true }
    }
}

pub fn is_mutation_finite(m: &ExchangeMatrix, budget: usize) -> Result<Finiteness, ClassError> {
    is_mutation_finite_with(m, &FinitenessOptions { budget, ..FinitenessOptions::default() })
}

/// Explores the class, checking each new member's 3-vertex restrictions
/// against the known infinite patterns.
pub fn is_mutation_finite_with(m: &ExchangeMatrix, opts: &FinitenessOptions) -> Result<Finiteness, ClassError> {
    let mut found: Option<InfiniteCertificate> = None;
    let ex = explore(m, opts.budget, false, |member| {
        let rep = &member.representative;
        let pattern = if opts.entry_bound_shortcut { entry_bound(rep) } else { None }.or_else(|| triangle_pattern(rep));
        if let Some((subset, pattern)) = pattern {
            found = Some(InfiniteCertificate { path: member.path.clone(), subset, pattern });
            return true;
        }
        false
    })?;
    Ok(match found {
        Some(certificate) => Finiteness::Infinite { certificate },
        None if ex.class.complete => Finiteness::Finite { class_size: ex.class.len() },
        None => Finiteness::Inconclusive { explored: ex.class.len() },
    })
}

impl InfiniteCertificate {
    /// Replays the certificate against `m`.
    pub fn verify(&self, m: &ExchangeMatrix) -> bool {
        let Ok(reached) = m.mutate_sequence(&self.path) else {
            return false;
        };
        match &self.pattern {
            InfinitePattern::EntryBound { i, j, value } => {
                reached.is_skew_symmetric()
                    && reached.n() >= 3
                    && reached.is_connected()
                    && *i < reached.n()
                    && *j < reached.n()
                    && reached.get(*i, *j) == *value
                    && value.abs() >= 3
            }
            pattern => {
                reached.restrict(&self.subset).ok().and_then(|r| classify_three(&r)).is_some_and(|p| p == *pattern)
            }
        }
    }
}

fn entry_bound(m: &ExchangeMatrix) -> Option<(Vec<usize>, InfinitePattern)> {
    let n = m.n();
    if n < 3 || !m.is_skew_symmetric() || !m.is_connected() {
        return None;
    }
    for i in 0..n {
        for j in 0..n {
            let value = m.get(i, j);
            if value >= 3 {
                return Some((vec![i.min(j), i.max(j)], InfinitePattern::EntryBound { i, j, value }));
            }
        }
    }
    None
}

fn triangle_pattern(m: &ExchangeMatrix) -> Option<(Vec<usize>, InfinitePattern)> {
    let n = m.n();
    if n < 3 || !m.is_skew_symmetric() {
        return None;
    }
    for a in 0..n {
        for b in (a + 1)..n {
            for c in (b + 1)..n {
                let subset = vec![a, b, c];
                let r = m.restrict(&subset).expect("valid subset");
                if let Some(p) = classify_three(&r) {
                    if is_infinite_pattern(&p) {
                        return Some((subset, p));
                    }
                }
            }
        }
    }
    None
}

/// Reads a connected 3-vertex quiver as a linear, cyclic or acyclic pattern.
pub fn classify_three(m: &ExchangeMatrix) -> Option<InfinitePattern> {
    if m.n() != 3 || !m.is_skew_symmetric() {
        return None;
    }
    let w = |i: usize, j: usize| m.get(i, j).unsigned_abs();
    let edges = [(0, 1), (1, 2), (0, 2)].iter().filter(|&&(i, j)| m.get(i, j) != 0).count();
    match edges {
        2 => {
            let mid = (0..3).find(|&v| (0..3).filter(|&u| u != v && m.get(v, u) != 0).count() == 2)?;
            let ends: Vec<usize> = (0..3).filter(|&u| u != mid).collect();
            let (a, b) = (w(mid, ends[0]), w(mid, ends[1]));
            Some(InfinitePattern::Linear { a: a.min(b), b: a.max(b) })
        }
        3 => {
            let (x01, x12, x20) = (m.get(0, 1), m.get(1, 2), m.get(2, 0));
            let cyclic = (x01 > 0 && x12 > 0 && x20 > 0) || (x01 < 0 && x12 < 0 && x20 < 0);
            let mut ws = [w(0, 1), w(1, 2), w(2, 0)];
            ws.sort_unstable();
            let [a, b, c] = ws;
            Some(if cyclic {
                InfinitePattern::CyclicTriangle { a, b, c }
            } else {
                InfinitePattern::AcyclicTriangle { a, b, c }
            })
        }
        _ => None,
    }
}

fn is_infinite_pattern(p: &InfinitePattern) -> bool {
    match *p {
        InfinitePattern::EntryBound { value, .. } => value.abs() >= 3,
        InfinitePattern::Linear { a, b } => a * b >= 2,
        InfinitePattern::CyclicTriangle { a, b, c } => {
            let ws = [a, b, c];
            (0..3).any(|r| ws[r] * ws[(r + 1) % 3] > 2 * ws[(r + 2) % 3] && ws[(r + 2) % 3] >= 1)
        }
        InfinitePattern::AcyclicTriangle { a, b, c } => a * b * c >= 2,
    }
}

/// Mutations followed by a restriction taking a source matrix to a target.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Reduction {
    pub path: Vec<usize>,
    pub subset: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum ReductionSearch {
    Found { reduction: Reduction },
    NotFound { class_size: usize },
    Inconclusive { explored: usize },
}

/// Searches the mutation class of `source` for a member whose restriction to
/// some vertex subset is isomorphic to `target`. Disconnected subsets are
/// skipped when `target` is connected.
pub fn reduces_to(
    source: &ExchangeMatrix,
    target: &ExchangeMatrix,
    budget: usize,
) -> Result<ReductionSearch, ClassError> {
    let k = target.n();
    let target_canon = canonical_form(target).matrix;
    let connected = target.is_connected();
    let subsets = if k <= source.n() { k_subsets(source.n(), k) } else { Vec::new() };
    let mut found = None;
    let ex = explore(source, budget, false, |member| {
        for s in &subsets {
            let r = member.representative.restrict(s).expect("valid subset");
            if connected && !r.is_connected() {
                continue;
            }
            if canonical_form(&r).matrix == target_canon {
                found = Some(Reduction { path: member.path.clone(), subset: s.clone() });
                return true;
            }
        }
        false
    })?;
    Ok(match found {
        Some(reduction) => ReductionSearch::Found { reduction },
        None if ex.class.complete => ReductionSearch::NotFound { class_size: ex.class.len() },
        None => ReductionSearch::Inconclusive { explored: ex.class.len() },
    })
}

impl Reduction {
    pub fn verify(&self, source: &ExchangeMatrix, target: &ExchangeMatrix) -> bool {
        source
            .mutate_sequence(&self.path)
            .ok()
            .and_then(|m| m.restrict(&self.subset).ok())
            .is_some_and(|r| crate::are_isomorphic(&r, target))
    }
}

pub(crate) fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in start..n {
            if n - v < k - cur.len() {
                break;
            }
            cur.push(v);
            go(v + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// For an acyclic matrix of affine type, checks that the mutation class is
/// covered by the `n` sub-patterns that never mutate at one fixed vertex.
///
/// Each sub-pattern is explored up to isomorphisms fixing the frozen vertex;
/// the union of their isomorphism classes must equal the whole class.
pub fn facet_check(m: &ExchangeMatrix, budget: usize) -> Result<bool, ClassError> {
    if !m.is_acyclic() {
        return Err(ClassError::NotAcyclic);
    }
    match recognize_type(m, budget)? {
        Recognition::Type(t) if t.is_affine() => {}
        _ => return Err(ClassError::NotAffine),
    }
    let whole: HashSet<ExchangeMatrix> = enumerate_class(m, budget)?.members.into_iter().map(|x| x.canonical).collect();
    let n = m.n();
    let mut covered: HashSet<ExchangeMatrix> = HashSet::new();
    for frozen in 0..n {
        let key = |x: &ExchangeMatrix| {
            let colors: Vec<u64> = (0..n).map(|v| 2 * x.symmetrizer()[v] + u64::from(v == frozen)).collect();
            let (b, c, _, _) = canonical_labeling(n, x.entries(), &colors);
            (b, c)
        };
        let mut seen = HashSet::from([key(m)]);
        let mut queue = VecDeque::from([m.clone()]);
        while let Some(x) = queue.pop_front() {
            covered.insert(canonical_form(&x).matrix);
            for k in (0..n).filter(|&k| k != frozen) {
                let y = x.mutate(k)?;
                if seen.insert(key(&y)) {
                    if seen.len() > budget {
                        return Err(ClassError::BudgetExceeded {
                            budget,
                            explored: seen.len() - 1,
                            partial: Box::new(MutationClass { members: Vec::new(), complete: false }),
                        });
                    }
                    queue.push_back(y);
                }
            }
        }
    }
    Ok(covered == whole)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Recognition {
    Type(DynkinType),
    Unknown,
}

/// Finds an acyclic member of the class and reads off its Dynkin type.
///
/// Returns `Unknown` when no acyclic member appears within the budget, when
/// the acyclic member is not of finite or affine type, or when a skew-symmetric
/// member on at least three vertices has an entry of absolute value at least 3.
pub fn recognize_type(m: &ExchangeMatrix, budget: usize) -> Result<Recognition, ClassError> {
    if !m.is_connected() {
        return Err(ClassError::Disconnected);
    }
    let mut result = None;
    explore(m, budget, false, |member| {
        let rep = &member.representative;
        if entry_bound(rep).is_some() {
            result = Some(Recognition::Unknown);
            return true;
        }
        if rep.is_acyclic() {
            result = Some(identify_acyclic(rep).map_or(Recognition::Unknown, Recognition::Type));
            return true;
        }
        false
    })?;
    Ok(result.unwrap_or(Recognition::Unknown))
}

/// The Dynkin type of a connected acyclic matrix, if it is finite or affine.
pub fn identify_acyclic(m: &ExchangeMatrix) -> Option<DynkinType> {
    let n = m.n();
    if n >= 3 {
        let (p, q) = cycle_split(m);
        if p > 0 {
            return Some(DynkinType::AffineA { p, q });
        }
    }
    let cartan = m.cartan();
    DynkinType::with_vertex_count(n)
        .into_iter()
        .filter(|t| n == 2 || !matches!(t, DynkinType::AffineA { .. }))
        .find(|t| t.cartan_matrix().is_isomorphic(&cartan))
}
