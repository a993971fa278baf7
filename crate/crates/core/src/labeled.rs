//! Labeled mutation classes.
//!
//! [`enumerate_labeled_class`] is a plain breadth-first search with exact
//! matrix deduplication. [`LabeledClassModel`] reaches the same set without
//! listing it: a labeled class `L` is the union of the orbits `Γ·R_c` of the
//! class representatives `R_c` under the relabeling group
//! `Γ = { σ : σ(L) = L }`. `Γ` is generated by the relabelings that identify a
//! mutated representative with the stored representative of its class,
//! together with the automorphisms of each representative.

use std::collections::{HashSet, VecDeque};

use crate::action::GroupAction;
use crate::canon::automorphism_generators;
use crate::class::{enumerate_class_with_edges, ClassError, MutationClass};
use crate::{ExchangeMatrix, MatrixError, PermGroup, Permutation};

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum LabeledError {
    #[error("labeled budget of {budget} matrices exceeded")]
    BudgetExceeded { budget: usize },
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// Every labeled matrix mutation-equivalent to `m`, in discovery order.
pub fn enumerate_labeled_class(m: &ExchangeMatrix, budget: usize) -> Result<Vec<ExchangeMatrix>, LabeledError> {
    let mut seen: HashSet<ExchangeMatrix> = HashSet::from([m.clone()]);
    let mut order = vec![m.clone()];
    let mut queue = VecDeque::from([m.clone()]);
    while let Some(x) = queue.pop_front() {
        for k in 0..m.n() {
            let y = x.mutate(k)?;
            if seen.insert(y.clone()) {
                if order.len() >= budget {
                    return Err(LabeledError::BudgetExceeded { budget });
                }
                order.push(y.clone());
                queue.push_back(y);
            }
        }
    }
    Ok(order)
}

/// A labeled mutation class described by its isomorphism classes and relabeling group.
#[derive(Clone, Debug)]
pub struct LabeledClassModel {
    pub class: MutationClass,
    pub relabeling_group: PermGroup,
    automorphisms: Vec<PermGroup>,
}

impl LabeledClassModel {
    pub fn new(m: &ExchangeMatrix, budget: usize) -> Result<Self, ClassError> {
        let (class, edges) = enumerate_class_with_edges(m, budget)?;
        let n = m.n();
        let mut gamma = PermGroup::trivial(n);
        let mut automorphisms = Vec::with_capacity(class.len());
        for member in &class.members {
            let gens = automorphism_generators(&member.representative);
            for g in &gens {
                if !gamma.is_symmetric() {
                    gamma.add_generator(g);
                }
            }
            automorphisms.push(PermGroup::generated_by(n, &gens));
        }
        for e in &edges {
            if gamma.is_symmetric() {
                break;
            }
            gamma.add_generator(&e.relabel);
        }
        Ok(LabeledClassModel { class, relabeling_group: gamma, automorphisms })
    }

    /// Number of labeled matrices in the class.
    pub fn labeled_size(&self) -> u128 {
        let order = self.relabeling_group.order() as u128;
        self.automorphisms.iter().map(|a| order / a.order() as u128).sum()
    }

    pub fn automorphism_group(&self, member: usize) -> &PermGroup {
        &self.automorphisms[member]
    }

    /// All labeled class members fixed by the action, with the index of their
    /// isomorphism class, in class order and then matrix order.
    pub fn invariant_members(&self, action: &GroupAction) -> Vec<(usize, ExchangeMatrix)> {
        let mut out = Vec::new();
        self.for_each_invariant_member(action, |c, x| out.push((c, x.clone())));
        out
    }

    /// Streams the members of [`Self::invariant_members`] without collecting them.
    pub fn for_each_invariant_member(&self, action: &GroupAction, mut f: impl FnMut(usize, &ExchangeMatrix)) {
        let gens = action.generators();
        for (c, member) in self.class.members.iter().enumerate() {
            let aut: Vec<&Permutation> = self.automorphisms[c].elements().collect();
            let choices: Vec<Vec<&Permutation>> = gens
                .iter()
                .map(|g| aut.iter().copied().filter(|a| a.cycle_type() == g.cycle_type()).collect())
                .collect();
            if choices.iter().any(Vec::is_empty) {
                continue;
            }
            let mut found: HashSet<ExchangeMatrix> = HashSet::new();
            for_each_tuple(&choices, &mut Vec::new(), &mut |tuple| {
                for gamma in conjugators(tuple, gens) {
                    if self.relabeling_group.is_symmetric() || self.relabeling_group.contains(&gamma) {
                        found.insert(member.representative.relabel(&gamma));
                    }
                }
            });
            let mut found: Vec<ExchangeMatrix> = found.into_iter().collect();
            found.sort();
            for x in &found {
                f(c, x);
            }
        }
    }
}

fn for_each_tuple<'a>(
    choices: &[Vec<&'a Permutation>],
    cur: &mut Vec<&'a Permutation>,
    f: &mut impl FnMut(&[&'a Permutation]),
) {
    if cur.len() == choices.len() {
        f(cur);
        return;
    }
    for &p in &choices[cur.len()] {
        cur.push(p);
        for_each_tuple(choices, cur, f);
        cur.pop();
    }
}

/// All `γ` with `γ a_i γ⁻¹ = g_i` for every `i`.
fn conjugators(a: &[&Permutation], g: &[Permutation]) -> Vec<Permutation> {
    let n = g[0].len();
    let mut img = vec![usize::MAX; n];
    let mut used = vec![false; n];
    let mut out = Vec::new();
    solve(0, a, g, &mut img, &mut used, &mut out);
    out
}

fn solve(
    x: usize,
    a: &[&Permutation],
    g: &[Permutation],
    img: &mut Vec<usize>,
    used: &mut Vec<bool>,
    out: &mut Vec<Permutation>,
) {
    let n = img.len();
    if x == n {
        out.push(Permutation::from_images(img.clone()).expect("solver builds bijections"));
        return;
    }
    if img[x] != usize::MAX {
        solve(x + 1, a, g, img, used, out);
        return;
    }
    for y in 0..n {
        if used[y] {
            continue;
        }
        let mut trail = Vec::new();
        if assign(x, y, a, g, img, used, &mut trail) {
            solve(x + 1, a, g, img, used, out);
        }
        for v in trail {
            used[img[v]] = false;
            img[v] = usize::MAX;
        }
    }
}

/// Sets `γ(x) = y` and propagates `γ(a_i(u)) = g_i(γ(u))` along the orbit of `x`.
fn assign(
    x: usize,
    y: usize,
    a: &[&Permutation],
    g: &[Permutation],
    img: &mut [usize],
    used: &mut [bool],
    trail: &mut Vec<usize>,
) -> bool {
    img[x] = y;
    used[y] = true;
    trail.push(x);
    let mut stack = vec![x];
    while let Some(u) = stack.pop() {
        for (ai, gi) in a.iter().zip(g) {
            let (u2, v2) = (ai.apply(u), gi.apply(img[u]));
            if img[u2] == usize::MAX {
                if used[v2] {
                    return false;
                }
                img[u2] = v2;
                used[v2] = true;
                trail.push(u2);
                stack.push(u2);
            } else if img[u2] != v2 {
                return false;
            }
        }
    }
    true
}
