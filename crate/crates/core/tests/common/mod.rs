#![allow(dead_code, clippy::needless_range_loop)]

use std::collections::{HashSet, VecDeque};

use affold::{DynkinType, ExchangeMatrix, Orientation, Permutation};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn diagram(name: &str) -> ExchangeMatrix {
    name.parse::<DynkinType>().unwrap().diagram(&Orientation::Default).unwrap()
}

pub fn rows(m: &ExchangeMatrix) -> Vec<Vec<i64>> {
    m.rows()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random connected-or-not skew-symmetric matrix with entries in `-max..=max`.
pub fn random_quiver(rng: &mut impl Rng, n: usize, max: i64) -> ExchangeMatrix {
    let mut b = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let v = rng.random_range(-max..=max);
            b[i][j] = v;
            b[j][i] = -v;
        }
    }
    ExchangeMatrix::new(b).unwrap()
}

/// A random skew-symmetrizable matrix `B = S D^-1`-style built from a symmetrizer.
pub fn random_symmetrizable(rng: &mut impl Rng, n: usize) -> ExchangeMatrix {
    let d: Vec<i64> = (0..n).map(|_| [1, 2, 3][rng.random_range(0..3)]).collect();
    let mut b = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            // d_i b_ij = -d_j b_ji: choose b_ij = s * d_j / g, b_ji = -s * d_i / g.
            let g = gcd(d[i], d[j]);
            let s = rng.random_range(-2..=2);
            b[i][j] = s * d[j] / g;
            b[j][i] = -s * d[i] / g;
        }
    }
    ExchangeMatrix::new(b).unwrap()
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// All permutations of `0..n` in lexicographic order.
pub fn all_permutations(n: usize) -> Vec<Permutation> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(Permutation::from_images(cur.clone()).unwrap());
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
            break;
        };
        let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
    out
}

/// Vertex colors from two rounds of neighborhood refinement, used only to
/// restrict which permutations the brute-force oracle tries.
fn refined_colors(m: &ExchangeMatrix) -> Vec<usize> {
    let n = m.n();
    let mut keys: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            let mut row: Vec<i64> = m.row(i).to_vec();
            row.sort();
            let mut k = vec![m.symmetrizer()[i] as i64];
            k.extend(row);
            k
        })
        .collect();
    for _ in 0..2 {
        let colors = rank(&keys);
        keys = (0..n)
            .map(|i| {
                let mut nb: Vec<(i64, i64)> = (0..n).map(|j| (m.get(i, j), colors[j] as i64)).collect();
                nb.sort();
                let mut k = vec![colors[i] as i64];
                k.extend(nb.into_iter().flat_map(|(a, b)| [a, b]));
                k
            })
            .collect();
    }
    rank(&keys)
}

fn rank(keys: &[Vec<i64>]) -> Vec<usize> {
    let mut sorted: Vec<&Vec<i64>> = keys.iter().collect();
    sorted.sort();
    sorted.dedup();
    keys.iter().map(|k| sorted.binary_search(&k).unwrap()).collect()
}

/// Canonical form by exhaustive search: the least relabeled entry vector over
/// all permutations sending color classes to consecutive positions.
pub fn brute_canonical(m: &ExchangeMatrix) -> (Vec<i64>, Vec<u64>) {
    let n = m.n();
    let colors = refined_colors(m);
    let mut cells: Vec<Vec<usize>> = Vec::new();
    let ncolors = colors.iter().max().map_or(0, |c| c + 1);
    for c in 0..ncolors {
        cells.push((0..n).filter(|&v| colors[v] == c).collect());
    }
    let mut best: Option<(Vec<i64>, Vec<u64>)> = None;
    let mut order = Vec::with_capacity(n);
    search_cells(m, &cells, 0, &mut order, &mut best);
    best.unwrap()
}

fn search_cells(
    m: &ExchangeMatrix,
    cells: &[Vec<usize>],
    idx: usize,
    order: &mut Vec<usize>,
    best: &mut Option<(Vec<i64>, Vec<u64>)>,
) {
    if idx == cells.len() {
        let n = m.n();
        let b: Vec<i64> = (0..n * n).map(|x| m.get(order[x / n], order[x % n])).collect();
        let d: Vec<u64> = order.iter().map(|&v| m.symmetrizer()[v]).collect();
        let cand = (b, d);
        if best.as_ref().is_none_or(|cur| cand < *cur) {
            *best = Some(cand);
        }
        return;
    }
    for p in all_permutations(cells[idx].len()) {
        let start = order.len();
        order.extend(p.images().iter().map(|&i| cells[idx][i]));
        search_cells(m, cells, idx + 1, order, best);
        order.truncate(start);
    }
}

/// Mutation-class size by BFS keyed on the brute-force canonical form.
pub fn brute_class_size(m: &ExchangeMatrix) -> usize {
    let mut seen = HashSet::from([brute_canonical(m)]);
    let mut queue = VecDeque::from([m.clone()]);
    while let Some(x) = queue.pop_front() {
        for k in 0..x.n() {
            let y = x.mutate(k).unwrap();
            if seen.insert(brute_canonical(&y)) {
                queue.push_back(y);
            }
        }
    }
    seen.len()
}

/// Order of the automorphism group by checking every permutation.
pub fn brute_automorphism_count(m: &ExchangeMatrix) -> usize {
    all_permutations(m.n()).iter().filter(|p| m.relabel(p) == *m).count()
}
