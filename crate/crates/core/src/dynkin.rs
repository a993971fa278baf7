//! Finite, untwisted affine and twisted affine Dynkin types, their diagrams,
//! Cartan matrices and oriented exchange matrices.
//!
//! A bond `(i, j, c_ij, c_ji)` with `|c_ij| > 1` is drawn as a multiple edge
//! whose arrow head points from `i` to `j`; the tail `i` carries the larger
//! entry. Vertex numbering of each family is listed on [`DynkinType::bonds`].

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::{CartanMatrix, ExchangeMatrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DynkinError {
    #[error("cannot parse Dynkin type {0:?}")]
    Parse(String),
    #[error("{0} is out of range for its family")]
    OutOfRange(String),
    #[error("invalid orientation: {0}")]
    InvalidOrientation(String),
    #[error("A~{{p,q}} requires p, q >= 1")]
    InvalidParameters,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DynkinType {
    A(usize),
    B(usize),
    C(usize),
    D(usize),
    E(usize),
    F4,
    G2,
    /// Affine A with `p` arrows one way round the cycle and `q` the other; `p <= q`.
    AffineA {
        p: usize,
        q: usize,
    },
    AffineB(usize),
    AffineC(usize),
    AffineD(usize),
    AffineE(usize),
    AffineF4,
    AffineG2,
    /// `A_m^(2)`.
    TwistedA(usize),
    /// `D_m^(2)`.
    TwistedD(usize),
    /// `E_6^(2)`.
    TwistedE6,
    /// `D_4^(3)`.
    TwistedD4,
}

/// One edge of a Dynkin diagram with its default orientation `tail -> head`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bond {
    pub tail: usize,
    pub head: usize,
    pub c_tail_head: i64,
    pub c_head_tail: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub enum Orientation {
    /// The orientation listed with each family's bonds.
    #[default]
    Default,
    /// Arrows from vertices at even distance from vertex 0 to vertices at odd distance.
    Bipartite,
    /// Explicit `(tail, head)` pairs, 0-based, one per bond.
    Arrows(Vec<(usize, usize)>),
}

impl DynkinType {
    /// `A~{p,q}` with the parameters normalized so that `p <= q`.
    pub fn affine_a(p: usize, q: usize) -> Result<Self, DynkinError> {
        if p == 0 || q == 0 {
            return Err(DynkinError::InvalidParameters);
        }
        Ok(DynkinType::AffineA { p: p.min(q), q: p.max(q) })
    }

    pub fn validate(&self) -> Result<(), DynkinError> {
        use DynkinType::*;
        let ok = match *self {
            A(n) => n >= 1,
            B(n) => n >= 2,
            C(n) => n >= 3,
            D(n) => n >= 4,
            E(n) | AffineE(n) => (6..=8).contains(&n),
            F4 | G2 | AffineF4 | AffineG2 | TwistedE6 | TwistedD4 => true,
            AffineA { p, q } => p >= 1 && p <= q,
            AffineB(n) => n >= 3,
            AffineC(n) => n >= 2,
            AffineD(n) => n >= 4,
            TwistedA(m) => m == 2 || m == 4 || m >= 5,
            TwistedD(m) => m >= 3,
        };
        if ok {
            Ok(())
        } else {
            Err(DynkinError::OutOfRange(self.to_string()))
        }
    }

    pub fn is_finite(&self) -> bool {
        use DynkinType::*;
        matches!(self, A(_) | B(_) | C(_) | D(_) | E(_) | F4 | G2)
    }

    pub fn is_twisted(&self) -> bool {
        use DynkinType::*;
        matches!(self, TwistedA(_) | TwistedD(_) | TwistedE6 | TwistedD4)
    }

    pub fn is_affine(&self) -> bool {
        !self.is_finite()
    }

    /// Whether the Cartan matrix is symmetric, i.e. the type is realized by quivers.
    pub fn is_simply_laced(&self) -> bool {
        use DynkinType::*;
        matches!(self, A(_) | D(_) | E(_) | AffineA { .. } | AffineD(_) | AffineE(_))
    }

    pub fn vertex_count(&self) -> usize {
        use DynkinType::*;
        match *self {
            A(n) | B(n) | C(n) | D(n) | E(n) => n,
            F4 => 4,
            G2 => 2,
            AffineA { p, q } => p + q,
            AffineB(n) | AffineC(n) | AffineD(n) | AffineE(n) => n + 1,
            AffineF4 => 5,
            AffineG2 => 3,
            TwistedA(2) => 2,
            TwistedA(m) => m / 2 + 1 + (m % 2),
            TwistedD(m) => m,
            TwistedE6 => 5,
            TwistedD4 => 3,
        }
    }

    /// The type whose Cartan matrix is the transpose of this one.
    pub fn dual(&self) -> DynkinType {
        use DynkinType::*;
        match *self {
            B(2) => B(2),
            B(n) => C(n),
            C(n) => B(n),
            AffineB(n) => TwistedA(2 * n - 1),
            TwistedA(m) if m % 2 == 1 => AffineB(m.div_ceil(2)),
            AffineC(n) => TwistedD(n + 1),
            TwistedD(m) => AffineC(m - 1),
            AffineF4 => TwistedE6,
            TwistedE6 => AffineF4,
            AffineG2 => TwistedD4,
            TwistedD4 => AffineG2,
            other => other,
        }
    }

    /// Diagram bonds on vertices `0..vertex_count()`, with default orientation.
    ///
    /// Numbering, 1-based:
    /// * `A_n`, `B_n`, `C_n`: path `1 - ... - n`; `B_n` has `c_{n-1,n} = -2`, `C_n` has `c_{n,n-1} = -2`.
    /// * `D_n`: path `1 - ... - (n-2)` with `n-1` and `n` attached to `n-2`.
    /// * `E_n`: path `1 - 3 - 4 - ... - n` with `2` attached to `4`.
    /// * `F_4`: `1 - 2 => 3 - 4`; `G_2`: `1 => 2` triple.
    /// * `A~{p,p}`: top path `1 - 2 - ... - p - 2p`, bottom path `1 - (p+1) - ... - (2p-1) - 2p`,
    ///   all arrows from lower to higher label; `A~{1,1}` is the Kronecker quiver.
    /// * `A~{p,q}`, `p < q`: `1 -> 2 -> ... -> p+1` and `1 -> p+q -> p+q-1 -> ... -> p+1`.
    /// * `B~_r`: `1` and `2` attached to `3`, path `3 - ... - r => r+1`.
    /// * `C~_r`: `1 => 2 - ... - r <= r+1`.
    /// * `D~_4`: centre `1` with leaves `2..5`. `D~_r`, `r >= 5`: `2`, `3`, `4` attached to `1`,
    ///   path `4 - 5 - ... - (r-1)`, then `r` and `r+1` attached to `r-1`.
    /// * `E~_6`: arms `1-2-3`, `1-4-5`, `1-6-7`. `E~_7`: arms `1-2`, `1-3-4-5`, `1-6-7-8`.
    ///   `E~_8`: path `1 - 3 - 4 - ... - 9` with `2` attached to `4`.
    /// * `F~_4`: `1 - 2 - 3 => 4 - 5`; `G~_2`: `1 - 2 => 3` triple.
    /// * `A_2^(2)`: `c_21 = -4`. `A_2k^(2)`: path `1 => 2 - ... - k => k+1`.
    /// * `A_(2k-1)^(2)`: `1` and `2` attached to `3`, path `3 - ... - k <= k+1`.
    /// * `D_m^(2)`: path `1 <= 2 - ... - (m-1) => m`.
    /// * `E_6^(2)`: `1 - 2 - 3 <= 4 - 5`; `D_4^(3)`: `1 - 2 <= 3` triple.
    pub fn bonds(&self) -> Vec<Bond> {
        use DynkinType::*;
        let single = |a: usize, b: usize| Bond { tail: a - 1, head: b - 1, c_tail_head: -1, c_head_tail: -1 };
        // multiple bond from `a` to `b` with `c_ab = -k`, drawn in direction `a -> b`
        let heavy = |a: usize, b: usize, k: i64| Bond { tail: a - 1, head: b - 1, c_tail_head: -k, c_head_tail: -1 };
        // multiple bond with `c_ba = -k` but default arrow `a -> b`
        let heavy_rev =
            |a: usize, b: usize, k: i64| Bond { tail: a - 1, head: b - 1, c_tail_head: -1, c_head_tail: -k };
        let path = |from: usize, to: usize| (from..to).map(|i| single(i, i + 1)).collect::<Vec<_>>();
        match *self {
            A(n) => path(1, n),
            B(n) => {
                let mut v = path(1, n - 1);
                v.push(heavy(n - 1, n, 2));
                v
            }
            C(n) => {
                let mut v = path(1, n - 1);
                v.push(heavy_rev(n - 1, n, 2));
                v
            }
            D(n) => {
                let mut v = path(1, n - 2);
                v.push(single(n - 2, n - 1));
                v.push(single(n - 2, n));
                v
            }
            E(n) => {
                let mut v = vec![single(1, 3)];
                v.extend(path(3, n));
                v.push(single(2, 4));
                v
            }
            F4 => vec![single(1, 2), heavy(2, 3, 2), single(3, 4)],
            G2 => vec![heavy(1, 2, 3)],
            AffineA { p: 1, q: 1 } => {
                vec![Bond { tail: 0, head: 1, c_tail_head: -2, c_head_tail: -2 }]
            }
            AffineA { p, q } if p == q => {
                let mut v = path(1, p);
                v.push(single(p, 2 * p));
                v.push(single(1, p + 1));
                v.extend(path(p + 1, 2 * p));
                v
            }
            AffineA { p, q } => {
                let mut v = path(1, p + 1);
                v.push(single(1, p + q));
                v.extend(((p + 2)..=(p + q)).rev().map(|i| single(i, i - 1)));
                v
            }
            AffineB(r) => {
                let mut v = vec![single(1, 3), single(2, 3)];
                v.extend(path(3, r));
                v.push(heavy(r, r + 1, 2));
                v
            }
            AffineC(r) => {
                let mut v = vec![heavy(1, 2, 2)];
                v.extend(path(2, r));
                v.push(heavy_rev(r, r + 1, 2));
                v
            }
            AffineD(4) => (2..=5).map(|leaf| single(1, leaf)).collect(),
            AffineD(r) => {
                let mut v = vec![single(1, 2), single(1, 3), single(1, 4)];
                v.extend(path(4, r - 1));
                v.push(single(r - 1, r));
                v.push(single(r - 1, r + 1));
                v
            }
            AffineE(6) => vec![single(1, 2), single(2, 3), single(1, 4), single(4, 5), single(1, 6), single(6, 7)],
            AffineE(7) => {
                vec![single(1, 2), single(1, 3), single(3, 4), single(4, 5), single(1, 6), single(6, 7), single(7, 8)]
            }
            AffineE(_) => {
                let mut v = vec![single(1, 3)];
                v.extend(path(3, 9));
                v.push(single(2, 4));
                v
            }
            AffineF4 => vec![single(1, 2), single(2, 3), heavy(3, 4, 2), single(4, 5)],
            AffineG2 => vec![single(1, 2), heavy(2, 3, 3)],
            TwistedA(2) => vec![heavy_rev(1, 2, 4)],
            TwistedA(m) if m % 2 == 0 => {
                let k = m / 2;
                let mut v = vec![heavy(1, 2, 2)];
                v.extend(path(2, k));
                v.push(heavy(k, k + 1, 2));
                v
            }
            TwistedA(m) => {
                let k = m.div_ceil(2);
                let mut v = vec![single(1, 3), single(2, 3)];
                v.extend(path(3, k));
                v.push(heavy_rev(k, k + 1, 2));
                v
            }
            TwistedD(m) => {
                let mut v = vec![heavy_rev(1, 2, 2)];
                v.extend(path(2, m - 1));
                v.push(heavy(m - 1, m, 2));
                v
            }
            TwistedE6 => vec![single(1, 2), single(2, 3), heavy_rev(3, 4, 2), single(4, 5)],
            TwistedD4 => vec![single(1, 2), heavy_rev(2, 3, 3)],
        }
    }

    pub fn cartan_matrix(&self) -> CartanMatrix {
        let n = self.vertex_count();
        let mut c = vec![0i64; n * n];
        for i in 0..n {
            c[i * n + i] = 2;
        }
        for b in self.bonds() {
            c[b.tail * n + b.head] = b.c_tail_head;
            c[b.head * n + b.tail] = b.c_head_tail;
        }
        CartanMatrix::from_flat(n, c)
    }

    /// The exchange matrix of the diagram under the given orientation.
    pub fn diagram(&self, orientation: &Orientation) -> Result<ExchangeMatrix, DynkinError> {
        self.validate()?;
        let n = self.vertex_count();
        let bonds = self.bonds();
        let forward: Vec<bool> = match orientation {
            Orientation::Default => vec![true; bonds.len()],
            Orientation::Bipartite => {
                let parity = bipartition(n, &bonds)
                    .ok_or_else(|| DynkinError::InvalidOrientation(format!("{self} has an odd cycle")))?;
                bonds.iter().map(|b| parity[b.tail] == 0).collect()
            }
            Orientation::Arrows(arrows) => {
                if arrows.len() != bonds.len() {
                    return Err(DynkinError::InvalidOrientation(format!(
                        "expected {} arrows, got {}",
                        bonds.len(),
                        arrows.len()
                    )));
                }
                let mut used = vec![false; arrows.len()];
                let mut forward = Vec::with_capacity(bonds.len());
                for b in &bonds {
                    let pos = arrows.iter().enumerate().position(|(idx, &(t, h))| {
                        !used[idx] && ((t, h) == (b.tail, b.head) || (t, h) == (b.head, b.tail))
                    });
                    let idx = pos.ok_or_else(|| {
                        DynkinError::InvalidOrientation(format!("no arrow for bond {}-{}", b.tail + 1, b.head + 1))
                    })?;
                    used[idx] = true;
                    forward.push(arrows[idx] == (b.tail, b.head));
                }
                forward
            }
        };
        let mut rows = vec![vec![0i64; n]; n];
        for (b, &fwd) in bonds.iter().zip(&forward) {
            let (t, h, cth, cht) = if fwd {
                (b.tail, b.head, b.c_tail_head, b.c_head_tail)
            } else {
                (b.head, b.tail, b.c_head_tail, b.c_tail_head)
            };
            rows[t][h] = -cth;
            rows[h][t] = cht;
        }
        let m = ExchangeMatrix::new(rows).expect("Dynkin diagrams are symmetrizable");
        if let DynkinType::AffineA { p, q } = *self {
            if n >= 3 {
                let found = cycle_split(&m);
                if found != (p, q) {
                    return Err(DynkinError::InvalidOrientation(format!(
                        "orientation has {} and {} arrows around the cycle, expected {p} and {q}",
                        found.0, found.1
                    )));
                }
            }
        }
        Ok(m)
    }

    /// Every type of the given kind with exactly `n` vertices.
    pub fn with_vertex_count(n: usize) -> Vec<DynkinType> {
        use DynkinType::*;
        let mut out = vec![A(n), B(n), C(n), D(n), E(n), F4, G2];
        if n >= 1 {
            out.extend([AffineB(n - 1), AffineC(n - 1), AffineD(n - 1), AffineE(n - 1)]);
        }
        out.extend([AffineF4, AffineG2, TwistedE6, TwistedD4, TwistedD(n)]);
        out.extend((1..n).map(|p| AffineA { p, q: n - p }).filter(|t| matches!(t, AffineA { p, q } if p <= q)));
        out.extend((2..=2 * n).map(TwistedA));
        out.retain(|t| t.validate().is_ok() && t.vertex_count() == n);
        out.sort();
        out.dedup();
        out
    }
}

fn bipartition(n: usize, bonds: &[Bond]) -> Option<Vec<u8>> {
    let mut parity = vec![u8::MAX; n];
    for start in 0..n {
        if parity[start] != u8::MAX {
            continue;
        }
        parity[start] = 0;
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for b in bonds {
                let w = if b.tail == v {
                    b.head
                } else if b.head == v {
                    b.tail
                } else {
                    continue;
                };
                if parity[w] == u8::MAX {
                    parity[w] = 1 - parity[v];
                    queue.push_back(w);
                } else if parity[w] == parity[v] {
                    return None;
                }
            }
        }
    }
    Some(parity)
}

/// For a quiver whose underlying graph is a simple cycle, the numbers of arrows
/// pointing each way round it, smaller first. `(0, 0)` otherwise.
pub(crate) fn cycle_split(m: &ExchangeMatrix) -> (usize, usize) {
    let n = m.n();
    let adj: Vec<Vec<usize>> = (0..n).map(|i| (0..n).filter(|&j| m.get(i, j) != 0).collect()).collect();
    if n < 3 || !m.is_connected() || adj.iter().any(|a| a.len() != 2) {
        return (0, 0);
    }
    if (0..n).any(|i| (0..n).any(|j| m.get(i, j).abs() > 1)) {
        return (0, 0);
    }
    let (mut prev, mut cur) = (0, adj[0][0]);
    let mut fwd = usize::from(m.get(0, cur) > 0);
    let mut steps = 1;
    while cur != 0 {
        let next = if adj[cur][0] == prev { adj[cur][1] } else { adj[cur][0] };
        fwd += usize::from(m.get(cur, next) > 0);
        prev = cur;
        cur = next;
        steps += 1;
    }
    let bwd = steps - fwd;
    (fwd.min(bwd), fwd.max(bwd))
}

impl fmt::Display for DynkinType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use DynkinType::*;
        match *self {
            A(n) => write!(f, "A{n}"),
            B(n) => write!(f, "B{n}"),
            C(n) => write!(f, "C{n}"),
            D(n) => write!(f, "D{n}"),
            E(n) => write!(f, "E{n}"),
            F4 => write!(f, "F4"),
            G2 => write!(f, "G2"),
            AffineA { p: 1, q: 1 } => write!(f, "A~1"),
            AffineA { p, q } => write!(f, "A~{{{p},{q}}}"),
            AffineB(n) => write!(f, "B~{n}"),
            AffineC(n) => write!(f, "C~{n}"),
            AffineD(n) => write!(f, "D~{n}"),
            AffineE(n) => write!(f, "E~{n}"),
            AffineF4 => write!(f, "F~4"),
            AffineG2 => write!(f, "G~2"),
            TwistedA(m) => write!(f, "A{m}(2)"),
            TwistedD(m) => write!(f, "D{m}(2)"),
            TwistedE6 => write!(f, "E6(2)"),
            TwistedD4 => write!(f, "D4(3)"),
        }
    }
}

impl FromStr for DynkinType {
    type Err = DynkinError;

    /// Accepts `A5`, `A~1`, `A~{2,3}`, `D~7`, `E~6`, `F~4`, `A4(2)`, `D4(3)` and similar.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        use DynkinType::*;
        let text: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || DynkinError::Parse(s.to_string());
        let mut chars = text.chars();
        let letter = chars.next().ok_or_else(bad)?.to_ascii_uppercase();
        let rest: &str = chars.as_str();
        let number = |t: &str| t.parse::<usize>().map_err(|_| bad());
        let parsed = if let Some(body) = rest.strip_prefix('~') {
            if letter == 'A' {
                if let Some(inner) = body.strip_prefix('{').and_then(|b| b.strip_suffix('}')) {
                    let (p, q) = inner.split_once(',').ok_or_else(bad)?;
                    DynkinType::affine_a(number(p)?, number(q)?)?
                } else if number(body)? == 1 {
                    AffineA { p: 1, q: 1 }
                } else {
                    return Err(bad());
                }
            } else {
                let n = number(body)?;
                match letter {
                    'B' => AffineB(n),
                    'C' => AffineC(n),
                    'D' => AffineD(n),
                    'E' => AffineE(n),
                    'F' if n == 4 => AffineF4,
                    'G' if n == 2 => AffineG2,
                    _ => return Err(bad()),
                }
            }
        } else if let Some(body) = rest.strip_suffix(')') {
            let (rank, order) = body.split_once('(').ok_or_else(bad)?;
            let (rank, order) = (number(rank)?, number(order)?);
            match (letter, rank, order) {
                ('A', m, 2) => TwistedA(m),
                ('D', m, 2) => TwistedD(m),
                ('E', 6, 2) => TwistedE6,
                ('D', 4, 3) => TwistedD4,
                _ => return Err(bad()),
            }
        } else {
            let n = number(rest)?;
            match letter {
                'A' => A(n),
                'B' => B(n),
                'C' => C(n),
                'D' => D(n),
                'E' => E(n),
                'F' if n == 4 => F4,
                'G' if n == 2 => G2,
                _ => return Err(bad()),
            }
        };
        parsed.validate()?;
        Ok(parsed)
    }
}

/// Number of isomorphism classes in the mutation class of `A~{p,q}`.
pub fn apq_class_count(p: usize, q: usize) -> Result<BigInt, DynkinError> {
    if p == 0 || q == 0 {
        return Err(DynkinError::InvalidParameters);
    }
    let binom = |n: usize, k: usize| -> BigInt {
        (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
    };
    let phi = |k: usize| (1..=k).filter(|&j| j.gcd(&k) == 1).count();
    let ratio = |num: BigInt, den: usize| BigRational::new(num, BigInt::from(den));
    let total = if p != q {
        let mut sum = BigRational::zero();
        for k in (1..=p.min(q)).filter(|k| p.is_multiple_of(*k) && q.is_multiple_of(*k)) {
            let term = BigInt::from(phi(k)) * binom(2 * p / k, p / k) * binom(2 * q / k, q / k);
            sum += ratio(term, p + q);
        }
        sum / BigInt::from(2)
    } else {
        let mut sum = ratio(binom(2 * p, p), 2);
        for k in (1..=p).filter(|k| p.is_multiple_of(*k)) {
            let c = binom(2 * p / k, p / k);
            sum += ratio(BigInt::from(phi(k)) * &c * &c, 4 * p);
        }
        sum / BigInt::from(2)
    };
    assert!(total.is_integer(), "class count must be integral");
    Ok(total.to_integer())
}

/// Convenience conversion for small counts.
pub fn apq_class_count_u64(p: usize, q: usize) -> Result<u64, DynkinError> {
    apq_class_count(p, q).map(|c| c.to_u64().expect("class count fits in u64"))
}
