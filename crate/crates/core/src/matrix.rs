//! Skew-symmetrizable exchange matrices, quiver views and Cartan counterparts.
//!
//! Indices are 0-based throughout the library; `b[i][j] > 0` means `b[i][j]`
//! arrows from `i` to `j` when the matrix is skew-symmetric.

use std::collections::VecDeque;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatrixError {
    #[error("matrix must have at least one row")]
    Empty,
    #[error("matrix is not square: row {row} has length {len}, expected {n}")]
    NotSquare { row: usize, len: usize, n: usize },
    #[error("matrix is not skew-symmetrizable at entries ({i},{j}) and ({j},{i})")]
    NotSkewSymmetrizable { i: usize, j: usize },
    #[error("symmetrizer is invalid for this matrix")]
    InvalidSymmetrizer,
    #[error("index {index} out of range for {n} vertices")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("integer overflow while mutating at {k}")]
    Overflow { k: usize },
    #[error("vertex subset is empty")]
    EmptySubset,
    #[error("vertex subset must be strictly increasing")]
    UnsortedSubset,
    #[error("operation requires a skew-symmetric matrix")]
    NotSkewSymmetric,
}

/// A skew-symmetrizable integer matrix together with its least symmetrizer.
///
/// The symmetrizer `d` is the least positive integer vector with `d_i b_ij = -d_j b_ji`,
/// normalized separately on each connected component. Mutation preserves the
/// components, hence `d` is carried along unchanged.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExchangeMatrix {
    n: usize,
    b: Vec<i64>,
    d: Vec<u64>,
}

impl ExchangeMatrix {
    /// Validates skew-symmetrizability and computes the least symmetrizer.
    pub fn new(rows: Vec<Vec<i64>>) -> Result<Self, MatrixError> {
        let n = rows.len();
        if n == 0 {
            return Err(MatrixError::Empty);
        }
        let mut b = Vec::with_capacity(n * n);
        for (row, r) in rows.into_iter().enumerate() {
            if r.len() != n {
                return Err(MatrixError::NotSquare { row, len: r.len(), n });
            }
            b.extend(r);
        }
        Self::from_flat(n, b)
    }

    /// Builds from a row-major entry vector of length `n * n`.
    pub fn from_flat(n: usize, b: Vec<i64>) -> Result<Self, MatrixError> {
        if n == 0 {
            return Err(MatrixError::Empty);
        }
        if b.len() != n * n {
            return Err(MatrixError::NotSquare { row: 0, len: b.len() / n.max(1), n });
        }
        let d = least_symmetrizer(n, &b)?;
        Ok(ExchangeMatrix { n, b, d })
    }

    /// Like [`ExchangeMatrix::new`] but also checks a caller-supplied symmetrizer.
    pub fn with_symmetrizer(rows: Vec<Vec<i64>>, d: &[u64]) -> Result<Self, MatrixError> {
        let m = Self::new(rows)?;
        if d.len() != m.n || d.contains(&0) {
            return Err(MatrixError::InvalidSymmetrizer);
        }
        for i in 0..m.n {
            for j in 0..m.n {
                let lhs = d[i] as i128 * m.get(i, j) as i128;
                let rhs = d[j] as i128 * m.get(j, i) as i128;
                if lhs != -rhs {
                    return Err(MatrixError::InvalidSymmetrizer);
                }
            }
        }
        Ok(m)
    }

    /// The skew-symmetric matrix of a quiver given as `(tail, head, multiplicity)` arrows.
    pub fn from_arrows(n: usize, arrows: &[(usize, usize, i64)]) -> Result<Self, MatrixError> {
        if n == 0 {
            return Err(MatrixError::Empty);
        }
        let mut b = vec![0i64; n * n];
        for &(i, j, m) in arrows {
            for x in [i, j] {
                if x >= n {
                    return Err(MatrixError::IndexOutOfRange { index: x, n });
                }
            }
            b[i * n + j] += m;
            b[j * n + i] -= m;
        }
        Self::from_flat(n, b)
    }

    pub(crate) fn from_parts_unchecked(n: usize, b: Vec<i64>, d: Vec<u64>) -> Self {
        debug_assert_eq!(b.len(), n * n);
        debug_assert_eq!(d.len(), n);
        ExchangeMatrix { n, b, d }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.b[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.b[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.b.chunks(self.n).map(<[i64]>::to_vec).collect()
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[i64] {
        &self.b
    }

    pub fn symmetrizer(&self) -> &[u64] {
        &self.d
    }

    pub fn is_skew_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| self.get(i, j) == -self.get(j, i)))
    }

    pub fn max_abs_entry(&self) -> u64 {
        self.b.iter().map(|x| x.unsigned_abs()).max().unwrap_or(0)
    }

    fn check_index(&self, k: usize) -> Result<(), MatrixError> {
        if k >= self.n {
            Err(MatrixError::IndexOutOfRange { index: k, n: self.n })
        } else {
            Ok(())
        }
    }

    /// Matrix mutation at `k`.
    pub fn mutate(&self, k: usize) -> Result<Self, MatrixError> {
        self.check_index(k)?;
        let n = self.n;
        let overflow = MatrixError::Overflow { k };
        let mut out = self.b.clone();
        for i in 0..n {
            let bik = self.b[i * n + k];
            for j in 0..n {
                let idx = i * n + j;
                if i == k || j == k {
                    out[idx] = self.b[idx].checked_neg().ok_or(overflow.clone())?;
                    continue;
                }
                let bkj = self.b[k * n + j];
                if (bik > 0 && bkj > 0) || (bik < 0 && bkj < 0) {
                    let prod = bik.checked_mul(bkj).ok_or(overflow.clone())?;
                    let delta = if bik > 0 { prod } else { -prod };
                    out[idx] = out[idx].checked_add(delta).ok_or(overflow.clone())?;
                }
            }
        }
        Ok(ExchangeMatrix { n, b: out, d: self.d.clone() })
    }

    /// Applies mutations left to right: `seq = [k1, k2]` means `mu_k2(mu_k1(B))`.
    pub fn mutate_sequence(&self, seq: &[usize]) -> Result<Self, MatrixError> {
        let mut m = self.clone();
        for &k in seq {
            m = m.mutate(k)?;
        }
        Ok(m)
    }

    /// Quiver mutation by the three-step rule: compose paths through `k`,
    /// reverse arrows at `k`, cancel 2-cycles.
    pub fn mutate_quiver(&self, k: usize) -> Result<Self, MatrixError> {
        self.check_index(k)?;
        if !self.is_skew_symmetric() {
            return Err(MatrixError::NotSkewSymmetric);
        }
        let n = self.n;
        let mut a: Vec<i64> = self.b.iter().map(|&x| x.max(0)).collect();
        let arrows = a.clone();
        for i in 0..n {
            for j in 0..n {
                if i != k && j != k && i != j {
                    let extra = arrows[i * n + k].checked_mul(arrows[k * n + j]).ok_or(MatrixError::Overflow { k })?;
                    a[i * n + j] = a[i * n + j].checked_add(extra).ok_or(MatrixError::Overflow { k })?;
                }
            }
        }
        for i in 0..n {
            a.swap(i * n + k, k * n + i);
        }
        for i in 0..n {
            for j in (i + 1)..n {
                let m = a[i * n + j].min(a[j * n + i]);
                a[i * n + j] -= m;
                a[j * n + i] -= m;
            }
        }
        let b = (0..n * n).map(|idx| a[idx] - a[(idx % n) * n + idx / n]).collect();
        Ok(ExchangeMatrix { n, b, d: self.d.clone() })
    }

    /// Number of arrows `i -> j` in the quiver reading of the matrix.
    pub fn arrows(&self, i: usize, j: usize) -> u64 {
        self.get(i, j).max(0) as u64
    }

    /// All `(tail, head, multiplicity)` arrows with positive entry, in row-major order.
    pub fn arrow_list(&self) -> Vec<(usize, usize, u64)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in 0..self.n {
                let v = self.get(i, j);
                if v > 0 {
                    out.push((i, j, v as u64));
                }
            }
        }
        out
    }

    /// The Cartan counterpart: `2` on the diagonal and `-|b_ij|` off it.
    pub fn cartan(&self) -> CartanMatrix {
        let n = self.n;
        let c = (0..n * n).map(|idx| if idx / n == idx % n { 2 } else { -self.b[idx].abs() }).collect();
        CartanMatrix { n, c }
    }

    /// Whether the directed graph `i -> j` for `b_ij > 0` has no oriented cycle.
    pub fn is_acyclic(&self) -> bool {
        let n = self.n;
        let mut indeg = vec![0usize; n];
        for i in 0..n {
            for j in 0..n {
                if self.get(i, j) > 0 {
                    indeg[j] += 1;
                }
            }
        }
        let mut queue: VecDeque<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
        let mut removed = 0;
        while let Some(i) = queue.pop_front() {
            removed += 1;
            for j in 0..n {
                if self.get(i, j) > 0 {
                    indeg[j] -= 1;
                    if indeg[j] == 0 {
                        queue.push_back(j);
                    }
                }
            }
        }
        removed == n
    }

    /// Principal submatrix on a strictly increasing, nonempty vertex subset.
    pub fn restrict(&self, subset: &[usize]) -> Result<Self, MatrixError> {
        if subset.is_empty() {
            return Err(MatrixError::EmptySubset);
        }
        for &x in subset {
            self.check_index(x)?;
        }
        if subset.windows(2).any(|w| w[0] >= w[1]) {
            return Err(MatrixError::UnsortedSubset);
        }
        let m = subset.len();
        let mut b = Vec::with_capacity(m * m);
        for &i in subset {
            for &j in subset {
                b.push(self.get(i, j));
            }
        }
        Self::from_flat(m, b)
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        let b: Vec<i64> = (0..n * n).map(|idx| self.b[(idx % n) * n + idx / n]).collect();
        let d = least_symmetrizer(n, &b).expect("transpose of a skew-symmetrizable matrix");
        ExchangeMatrix { n, b, d }
    }

    /// The matrix with vertex `i` renamed to `p[i]`: `out[p(i)][p(j)] = b[i][j]`.
    pub fn relabel(&self, p: &crate::Permutation) -> Self {
        assert_eq!(p.len(), self.n, "permutation degree must match matrix size");
        let n = self.n;
        let mut b = vec![0; n * n];
        let mut d = vec![0; n];
        for i in 0..n {
            d[p.apply(i)] = self.d[i];
            for j in 0..n {
                b[p.apply(i) * n + p.apply(j)] = self.b[i * n + j];
            }
        }
        ExchangeMatrix { n, b, d }
    }

    /// Whether relabeling by `p` fixes the matrix and its symmetrizer.
    pub fn is_fixed_by(&self, p: &crate::Permutation) -> bool {
        let n = self.n;
        p.len() == n
            && (0..n).all(|i| {
                self.d[p.apply(i)] == self.d[i] && (0..n).all(|j| self.get(p.apply(i), p.apply(j)) == self.get(i, j))
            })
    }

    /// Connected components of the underlying graph, each sorted, ordered by least vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        components(self.n, |i, j| self.get(i, j) != 0)
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() == 1
    }
}

impl fmt::Display for ExchangeMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.b.chunks(self.n).enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            let cells: Vec<String> = row.iter().map(|x| format!("{x:>3}")).collect();
            write!(f, "[{}]", cells.join(""))?;
        }
        Ok(())
    }
}

/// A generalized Cartan matrix, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CartanMatrix {
    n: usize,
    c: Vec<i64>,
}

impl CartanMatrix {
    pub fn from_flat(n: usize, c: Vec<i64>) -> Self {
        assert_eq!(c.len(), n * n);
        CartanMatrix { n, c }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.c[i * self.n + j]
    }

    pub fn entries(&self) -> &[i64] {
        &self.c
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.c.chunks(self.n).map(<[i64]>::to_vec).collect()
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        CartanMatrix { n, c: (0..n * n).map(|idx| self.c[(idx % n) * n + idx / n]).collect() }
    }

    /// Isomorphism up to simultaneous permutation of rows and columns.
    pub fn is_isomorphic(&self, other: &CartanMatrix) -> bool {
        self.n == other.n
            && crate::canon::canonical_labeling(self.n, &self.c, &vec![0; self.n]).0
                == crate::canon::canonical_labeling(other.n, &other.c, &vec![0; other.n]).0
    }
}

pub(crate) fn components(n: usize, adjacent: impl Fn(usize, usize) -> bool) -> Vec<Vec<usize>> {
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut comp = vec![start];
        let mut queue = VecDeque::from([start]);
        while let Some(i) = queue.pop_front() {
            for j in 0..n {
                if !seen[j] && (adjacent(i, j) || adjacent(j, i)) {
                    seen[j] = true;
                    comp.push(j);
                    queue.push_back(j);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

fn least_symmetrizer(n: usize, b: &[i64]) -> Result<Vec<u64>, MatrixError> {
    let get = |i: usize, j: usize| b[i * n + j];
    for i in 0..n {
        for j in i..n {
            let (x, y) = (get(i, j), get(j, i));
            if (x == 0) != (y == 0) || (x != 0 && x.signum() == y.signum()) {
                return Err(MatrixError::NotSkewSymmetrizable { i, j });
            }
        }
    }
    let mut ratio: Vec<Option<BigRational>> = vec![None; n];
    let mut d = vec![0u64; n];
    for comp in components(n, |i, j| get(i, j) != 0) {
        ratio[comp[0]] = Some(BigRational::one());
        let mut queue = VecDeque::from([comp[0]]);
        while let Some(i) = queue.pop_front() {
            let di = ratio[i].clone().expect("visited vertex has a ratio");
            for j in 0..n {
                let (bij, bji) = (get(i, j), get(j, i));
                if bij == 0 {
                    continue;
                }
                let dj = &di * BigRational::new(BigInt::from(bij.abs()), BigInt::from(bji.abs()));
                match &ratio[j] {
                    None => {
                        ratio[j] = Some(dj);
                        queue.push_back(j);
                    }
                    Some(existing) if *existing != dj => {
                        return Err(MatrixError::NotSkewSymmetrizable { i, j });
                    }
                    Some(_) => {}
                }
            }
        }
        let denom_lcm = comp
            .iter()
            .map(|&i| ratio[i].as_ref().expect("component vertex").denom().clone())
            .fold(BigInt::one(), |acc, x| acc.lcm(&x));
        let scaled: Vec<BigInt> = comp
            .iter()
            .map(|&i| {
                let r = ratio[i].as_ref().expect("component vertex");
                r.numer() * (&denom_lcm / r.denom())
            })
            .collect();
        let g = scaled.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        for (&i, v) in comp.iter().zip(scaled) {
            let v = (v / &g).abs();
            d[i] = v.to_u64().ok_or(MatrixError::InvalidSymmetrizer)?;
        }
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetrizer_of_b2() {
        let m = ExchangeMatrix::new(vec![vec![0, 2], vec![-1, 0]]).unwrap();
        assert_eq!(m.symmetrizer(), &[1, 2]);
        assert_eq!(m.transpose().symmetrizer(), &[2, 1]);
    }

    #[test]
    fn rejects_same_sign_pair() {
        let err = ExchangeMatrix::new(vec![vec![0, 1], vec![1, 0]]).unwrap_err();
        assert_eq!(err, MatrixError::NotSkewSymmetrizable { i: 0, j: 1 });
    }

    #[test]
    fn rejects_inconsistent_cycle() {
        let rows = vec![vec![0, 1, -1], vec![-2, 0, 1], vec![1, -1, 0]];
        assert!(ExchangeMatrix::new(rows).is_err());
    }

    #[test]
    fn mutation_overflow_is_reported() {
        let big = i64::MAX / 2;
        let m = ExchangeMatrix::new(vec![vec![0, big, 0], vec![-big, 0, big], vec![0, -big, 0]]).unwrap();
        assert_eq!(m.mutate(1), Err(MatrixError::Overflow { k: 1 }));
    }

    #[test]
    fn restrict_recomputes_symmetrizer() {
        let m = ExchangeMatrix::new(vec![vec![0, 2, 0], vec![-1, 0, 0], vec![0, 0, 0]]).unwrap();
        assert_eq!(m.symmetrizer(), &[1, 2, 1]);
        assert_eq!(m.restrict(&[1]).unwrap().symmetrizer(), &[1]);
        assert_eq!(m.restrict(&[1, 0]), Err(MatrixError::UnsortedSubset));
    }
}
