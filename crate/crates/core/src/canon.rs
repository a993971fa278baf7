//! Canonical forms and isomorphism of exchange matrices under simultaneous
//! row/column permutation.
//!
//! The canonical form is the lexicographically least relabeling among the leaves
//! of an individualization-refinement search tree, comparing the row-major
//! entries as signed integers and then the symmetrizer. Automorphisms found at
//! equal leaves prune sibling branches.

use std::hash::Hasher;

use fnv::FnvHasher;

use crate::{ExchangeMatrix, PermGroup, Permutation};

/// A canonical representative and the relabeling that produces it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalForm {
    /// `input.relabel(&labeling) == matrix`.
    pub matrix: ExchangeMatrix,
    pub labeling: Permutation,
}

pub fn canonical_form(m: &ExchangeMatrix) -> CanonicalForm {
    let (b, d, labeling, _) = canonical_labeling(m.n(), m.entries(), m.symmetrizer());
    CanonicalForm { matrix: ExchangeMatrix::from_parts_unchecked(m.n(), b, d), labeling }
}

pub fn are_isomorphic(a: &ExchangeMatrix, b: &ExchangeMatrix) -> bool {
    a.n() == b.n() && canonical_form(a).matrix == canonical_form(b).matrix
}

/// A permutation `p` with `a.relabel(&p) == *b`, if one exists.
pub fn isomorphism(a: &ExchangeMatrix, b: &ExchangeMatrix) -> Option<Permutation> {
    if a.n() != b.n() {
        return None;
    }
    let ca = canonical_form(a);
    let cb = canonical_form(b);
    (ca.matrix == cb.matrix).then(|| cb.labeling.inverse().compose(&ca.labeling))
}

pub fn is_automorphism(m: &ExchangeMatrix, p: &Permutation) -> bool {
    m.is_fixed_by(p)
}

/// The full automorphism group, generated by the automorphisms met during canonization.
pub fn automorphism_group(m: &ExchangeMatrix) -> PermGroup {
    let (_, _, _, gens) = canonical_labeling(m.n(), m.entries(), m.symmetrizer());
    PermGroup::generated_by(m.n(), &gens)
}

/// Generators of the automorphism group.
pub fn automorphism_generators(m: &ExchangeMatrix) -> Vec<Permutation> {
    canonical_labeling(m.n(), m.entries(), m.symmetrizer()).3
}

/// 64-bit FNV-1a hash of the canonical form's bytes: `n` as little-endian `u32`,
/// then each entry as little-endian `i64`, then each symmetrizer value as
/// little-endian `u64`. Stable across platforms; not collision resistant.
pub fn content_hash(m: &ExchangeMatrix) -> u64 {
    hash_matrix(&canonical_form(m).matrix)
}

/// The same byte layout as [`content_hash`] applied to `m` without canonizing.
pub fn hash_matrix(m: &ExchangeMatrix) -> u64 {
    let mut h = FnvHasher::default();
    h.write(&(m.n() as u32).to_le_bytes());
    for &x in m.entries() {
        h.write(&x.to_le_bytes());
    }
    for &x in m.symmetrizer() {
        h.write(&x.to_le_bytes());
    }
    h.finish()
}

type Leaf = (Vec<i64>, Vec<u64>);

struct Search<'a> {
    n: usize,
    e: &'a [i64],
    colors: &'a [u64],
    best: Option<(Leaf, Permutation)>,
    auts: Vec<Permutation>,
}

/// Canonizes an integer matrix with vertex colors.
///
/// Returns the canonical entries and colors, the labeling `p` (vertex `i` moves
/// to position `p[i]`), and generators of the automorphism group.
pub(crate) fn canonical_labeling(
    n: usize,
    e: &[i64],
    colors: &[u64],
) -> (Vec<i64>, Vec<u64>, Permutation, Vec<Permutation>) {
    let mut search = Search { n, e, colors, best: None, auts: Vec::new() };
    let mut keyed: Vec<((u64, i64), usize)> = (0..n).map(|v| ((colors[v], e[v * n + v]), v)).collect();
    keyed.sort_unstable();
    let mut cells: Vec<Vec<usize>> = Vec::new();
    for (i, (key, v)) in keyed.iter().enumerate() {
        if i == 0 || keyed[i - 1].0 != *key {
            cells.push(Vec::new());
        }
        cells.last_mut().expect("cell pushed").push(*v);
    }
    search.descend(cells, &mut Vec::new());
    let ((b, d), p) = search.best.expect("search reaches at least one leaf");
    (b, d, p, search.auts)
}

/// Neighbour cell, out entry and in entry for each nonzero neighbour.
type Signature = Vec<(usize, i64, i64)>;

impl Search<'_> {
    fn descend(&mut self, cells: Vec<Vec<usize>>, prefix: &mut Vec<usize>) {
        let cells = self.refine(cells);
        let Some(target) = cells.iter().position(|c| c.len() > 1) else {
            self.leaf(&cells);
            return;
        };
        let mut explored: Vec<usize> = Vec::new();
        for &v in &cells[target] {
            if !explored.is_empty() && self.equivalent_to_explored(prefix, &explored, v) {
                continue;
            }
            let mut next = Vec::with_capacity(cells.len() + 1);
            next.extend_from_slice(&cells[..target]);
            next.push(vec![v]);
            next.push(cells[target].iter().copied().filter(|&x| x != v).collect());
            next.extend_from_slice(&cells[target + 1..]);
            prefix.push(v);
            self.descend(next, prefix);
            prefix.pop();
            explored.push(v);
        }
    }

    /// Whether `v` lies in the orbit of an explored sibling under the known
    /// automorphisms that fix `prefix` pointwise.
    fn equivalent_to_explored(&self, prefix: &[usize], explored: &[usize], v: usize) -> bool {
        let gens: Vec<&Permutation> = self.auts.iter().filter(|g| prefix.iter().all(|&x| g.apply(x) == x)).collect();
        if gens.is_empty() {
            return false;
        }
        let mut orbit = vec![false; self.n];
        let mut stack = explored.to_vec();
        for &x in explored {
            orbit[x] = true;
        }
        while let Some(x) = stack.pop() {
            for g in &gens {
                let y = g.apply(x);
                if !orbit[y] {
                    orbit[y] = true;
                    stack.push(y);
                }
            }
        }
        orbit[v]
    }

    fn leaf(&mut self, cells: &[Vec<usize>]) {
        let n = self.n;
        let mut images = vec![0; n];
        for (pos, c) in cells.iter().enumerate() {
            images[c[0]] = pos;
        }
        let mut b = vec![0; n * n];
        let mut d = vec![0; n];
        for i in 0..n {
            d[images[i]] = self.colors[i];
            for j in 0..n {
                b[images[i] * n + images[j]] = self.e[i * n + j];
            }
        }
        let p = Permutation::from_images(images).expect("discrete partition is a bijection");
        let leaf = (b, d);
        match &self.best {
            None => self.best = Some((leaf, p)),
            Some((best, best_p)) => {
                if leaf < *best {
                    self.best = Some((leaf, p));
                } else if leaf == *best {
                    let aut = best_p.inverse().compose(&p);
                    if !aut.is_identity() {
                        self.auts.push(aut);
                    }
                }
            }
        }
    }

    /// Splits cells by the multiset of (neighbour cell, out entry, in entry)
    /// until stable. Sub-cells are ordered by signature, which depends only on
    /// the labeled structure and not on vertex names.
    fn refine(&self, mut cells: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
        let n = self.n;
        let mut cell_of = vec![0usize; n];
        loop {
            for (ci, c) in cells.iter().enumerate() {
                for &v in c {
                    cell_of[v] = ci;
                }
            }
            let mut next: Vec<Vec<usize>> = Vec::with_capacity(n);
            for c in &cells {
                if c.len() == 1 {
                    next.push(c.clone());
                    continue;
                }
                let mut sigs: Vec<(Signature, usize)> = c
                    .iter()
                    .map(|&v| {
                        let mut s: Vec<(usize, i64, i64)> = (0..n)
                            .filter(|&j| j != v)
                            .filter_map(|j| {
                                let (out, inc) = (self.e[v * n + j], self.e[j * n + v]);
                                (out != 0 || inc != 0).then_some((cell_of[j], out, inc))
                            })
                            .collect();
                        s.sort_unstable();
                        (s, v)
                    })
                    .collect();
                sigs.sort_unstable();
                for (i, (sig, v)) in sigs.iter().enumerate() {
                    if i == 0 || sigs[i - 1].0 != *sig {
                        next.push(Vec::new());
                    }
                    next.last_mut().expect("cell pushed").push(*v);
                }
            }
            if next.len() == cells.len() {
                return next;
            }
            cells = next;
        }
    }
}
