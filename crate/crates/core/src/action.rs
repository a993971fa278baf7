//! Finite group actions on vertex sets and the standard folding triples
//! `(X, G, Y)` of affine Dynkin diagrams.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::dynkin::DynkinType;
use crate::perm::{orbits, Permutation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ActionError {
    #[error("unknown group tag {0:?}")]
    UnknownGroup(String),
    #[error("generators do not define a faithful action of {0}")]
    WrongGroup(GroupTag),
    #[error("generator acts on {found} points, expected {expected}")]
    WrongDegree { expected: usize, found: usize },
    #[error("no standard folding {0}")]
    UnknownTriple(String),
    #[error("several standard foldings match {0}: {1}")]
    AmbiguousTriple(String, String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupTag {
    Z2,
    Z3,
    Z2xZ2,
}

impl GroupTag {
    pub fn order(&self) -> usize {
        match self {
            GroupTag::Z2 => 2,
            GroupTag::Z3 => 3,
            GroupTag::Z2xZ2 => 4,
        }
    }
}

impl fmt::Display for GroupTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GroupTag::Z2 => "Z2",
            GroupTag::Z3 => "Z3",
            GroupTag::Z2xZ2 => "Z2xZ2",
        })
    }
}

impl FromStr for GroupTag {
    type Err = ActionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "Z2" => Ok(GroupTag::Z2),
            "Z3" => Ok(GroupTag::Z3),
            "Z2xZ2" | "Z2^2" | "(Z2)^2" => Ok(GroupTag::Z2xZ2),
            other => Err(ActionError::UnknownGroup(other.to_string())),
        }
    }
}

/// A faithful action of `Z2`, `Z3` or `Z2 x Z2` on `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupAction {
    tag: GroupTag,
    generators: Vec<Permutation>,
    elements: Vec<Permutation>,
    orbits: Vec<Vec<usize>>,
    orbit_of: Vec<usize>,
}

impl GroupAction {
    pub fn new(n: usize, tag: GroupTag, generators: Vec<Permutation>) -> Result<Self, ActionError> {
        for g in &generators {
            if g.len() != n {
                return Err(ActionError::WrongDegree { expected: n, found: g.len() });
            }
        }
        let wrong = || ActionError::WrongGroup(tag);
        let elements = match (tag, generators.as_slice()) {
            (GroupTag::Z2, [g]) if g.order() == 2 => vec![Permutation::identity(n), g.clone()],
            (GroupTag::Z3, [g]) if g.order() == 3 => {
                vec![Permutation::identity(n), g.clone(), g.compose(g)]
            }
            (GroupTag::Z2xZ2, [g, h]) => {
                let gh = g.compose(h);
                if g.order() != 2 || h.order() != 2 || gh != h.compose(g) || gh.is_identity() {
                    return Err(wrong());
                }
                vec![Permutation::identity(n), g.clone(), h.clone(), gh]
            }
            _ => return Err(wrong()),
        };
        let orbits = orbits(n, &generators);
        let mut orbit_of = vec![0; n];
        for (idx, o) in orbits.iter().enumerate() {
            for &v in o {
                orbit_of[v] = idx;
            }
        }
        Ok(GroupAction { tag, generators, elements, orbits, orbit_of })
    }

    pub fn degree(&self) -> usize {
        self.orbit_of.len()
    }

    pub fn tag(&self) -> GroupTag {
        self.tag
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    /// All group elements, identity first.
    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    /// Orbits sorted internally and ordered by least element.
    pub fn orbits(&self) -> &[Vec<usize>] {
        &self.orbits
    }

    pub fn orbit_of(&self, v: usize) -> usize {
        self.orbit_of[v]
    }

    pub fn same_orbit(&self, a: usize, b: usize) -> bool {
        self.orbit_of[a] == self.orbit_of[b]
    }

    /// The action transported along the relabeling `p`: generators `p g p^-1`.
    pub fn conjugate(&self, p: &Permutation) -> GroupAction {
        let inv = p.inverse();
        let gens = self.generators.iter().map(|g| p.compose(g).compose(&inv)).collect();
        GroupAction::new(self.degree(), self.tag, gens).expect("conjugation preserves the group")
    }
}

/// A standard folding `(X, G, Y)`: `G` acts on the diagram of `X` and folds it to `Y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FoldingTriple {
    pub source: DynkinType,
    pub group: GroupTag,
    pub target: DynkinType,
}

impl FoldingTriple {
    /// Every standard triple whose source has at most `max_vertices` vertices.
    pub fn all(max_vertices: usize) -> Vec<FoldingTriple> {
        use DynkinType::*;
        let mut out = Vec::new();
        let mut push = |source: DynkinType, group: GroupTag, target: DynkinType| {
            if source.vertex_count() <= max_vertices {
                out.push(FoldingTriple { source, group, target });
            }
        };
        push(AffineA { p: 2, q: 2 }, GroupTag::Z2, AffineA { p: 1, q: 1 });
        for n in 2..=max_vertices / 2 {
            push(AffineA { p: n, q: n }, GroupTag::Z2, TwistedD(n + 1));
        }
        push(AffineD(4), GroupTag::Z2xZ2, TwistedA(2));
        push(AffineD(4), GroupTag::Z3, TwistedD4);
        for n in 5..max_vertices {
            push(AffineD(n), GroupTag::Z2, AffineC(n - 2));
            push(AffineD(n), GroupTag::Z2, TwistedA(2 * n - 3));
            if n % 2 == 0 {
                push(AffineD(n), GroupTag::Z2, AffineB(n / 2));
                push(AffineD(n), GroupTag::Z2xZ2, TwistedA(n - 2));
            }
        }
        push(AffineE(6), GroupTag::Z3, AffineG2);
        push(AffineE(6), GroupTag::Z2, TwistedE6);
        push(AffineE(7), GroupTag::Z2, AffineF4);
        out
    }

    /// Validates that `(source, group, target)` is a standard triple.
    pub fn new(source: DynkinType, group: GroupTag, target: DynkinType) -> Result<Self, ActionError> {
        let t = FoldingTriple { source, group, target };
        if FoldingTriple::all(source.vertex_count()).contains(&t) {
            Ok(t)
        } else {
            Err(ActionError::UnknownTriple(t.to_string()))
        }
    }

    /// The standard action of `group` on the diagram of `source`.
    pub fn action(&self) -> GroupAction {
        use DynkinType::*;
        let n = self.source.vertex_count();
        let cyc = |cycles: &[&[usize]]| {
            let zero: Vec<Vec<usize>> = cycles.iter().map(|c| c.iter().map(|x| x - 1).collect()).collect();
            let refs: Vec<&[usize]> = zero.iter().map(Vec::as_slice).collect();
            Permutation::from_cycles(n, &refs).expect("standard actions are valid permutations")
        };
        let gens = match (self.source, self.group, self.target) {
            (AffineA { p: 2, q: 2 }, GroupTag::Z2, AffineA { .. }) => vec![cyc(&[&[1, 4], &[2, 3]])],
            (AffineA { p, .. }, GroupTag::Z2, _) => {
                let pairs: Vec<[usize; 2]> = (2..=p).map(|i| [i, p + i - 1]).collect();
                let refs: Vec<&[usize]> = pairs.iter().map(|c| c.as_slice()).collect();
                vec![cyc(&refs)]
            }
            (AffineD(4), GroupTag::Z2xZ2, _) => vec![cyc(&[&[2, 4], &[3, 5]]), cyc(&[&[2, 3], &[4, 5]])],
            (AffineD(4), GroupTag::Z3, _) => vec![cyc(&[&[3, 4, 5]])],
            (AffineD(r), GroupTag::Z2, AffineC(_)) => vec![cyc(&[&[2, 3], &[r, r + 1]])],
            (AffineD(r), GroupTag::Z2, TwistedA(_)) => vec![cyc(&[&[r, r + 1]])],
            (AffineD(r), GroupTag::Z2, AffineB(_)) => vec![d_reflection(r)],
            (AffineD(r), GroupTag::Z2xZ2, _) => vec![d_reflection(r), cyc(&[&[2, 3], &[r, r + 1]])],
            (AffineE(6), GroupTag::Z3, _) => vec![cyc(&[&[2, 4, 6], &[3, 5, 7]])],
            (AffineE(6), GroupTag::Z2, _) => vec![cyc(&[&[4, 6], &[5, 7]])],
            (AffineE(7), GroupTag::Z2, _) => vec![cyc(&[&[3, 6], &[4, 7], &[5, 8]])],
            _ => unreachable!("FoldingTriple values are validated on construction"),
        };
        GroupAction::new(n, self.group, gens).expect("standard actions are faithful")
    }

    /// The standard triples with the given source and group.
    pub fn matching(source: DynkinType, group: GroupTag) -> Vec<FoldingTriple> {
        FoldingTriple::all(source.vertex_count())
            .into_iter()
            .filter(|t| t.source == source && t.group == group)
            .collect()
    }
}

/// The reflection of `D~_r`, `r = 2m`, that swaps the two ends and fixes the middle vertex `m + 1`.
fn d_reflection(r: usize) -> Permutation {
    let n = r + 1;
    let mut images: Vec<usize> = (0..n).collect();
    let mut swap = |a: usize, b: usize| {
        images[a - 1] = b - 1;
        images[b - 1] = a - 1;
    };
    swap(1, r - 1);
    swap(2, r);
    swap(3, r + 1);
    for v in 4..=(r - 2) {
        if v < r + 2 - v {
            swap(v, r + 2 - v);
        }
    }
    Permutation::from_images(images).expect("reflection is a bijection")
}

impl fmt::Display for FoldingTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}/{}", self.source, self.group, self.target)
    }
}

impl FromStr for FoldingTriple {
    type Err = ActionError;

    /// Parses `X/G/Y`, or `X/G` when only one standard triple matches.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let unknown = || ActionError::UnknownTriple(s.to_string());
        let parts: Vec<&str> = s.split('/').map(str::trim).collect();
        let (source, group) = match parts.as_slice() {
            [x, g] | [x, g, _] => (x.parse::<DynkinType>().map_err(|_| unknown())?, g.parse::<GroupTag>()?),
            _ => return Err(unknown()),
        };
        if let [_, _, y] = parts.as_slice() {
            let target: DynkinType = y.parse().map_err(|_| unknown())?;
            return FoldingTriple::new(source, group, target);
        }
        let candidates = FoldingTriple::matching(source, group);
        match candidates.as_slice() {
            [one] => Ok(*one),
            [] => Err(unknown()),
            many => {
                let names: Vec<String> = many.iter().map(ToString::to_string).collect();
                Err(ActionError::AmbiguousTriple(s.to_string(), names.join(", ")))
            }
        }
    }
}
