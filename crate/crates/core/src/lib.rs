//! Mutation of skew-symmetrizable exchange matrices and folding of affine
//! Dynkin quivers along admissible group actions.

#![allow(clippy::needless_range_loop)]

pub mod action;
pub mod api;
pub mod canon;
pub mod class;
pub mod doc;
pub mod dynkin;
pub mod folding;
pub mod labeled;
pub mod laurent;
pub mod matrix;
pub mod perm;
pub mod seed;

pub use action::{ActionError, FoldingTriple, GroupAction, GroupTag};
pub use canon::{are_isomorphic, canonical_form, content_hash, CanonicalForm};
pub use class::{
    enumerate_class, is_mutation_finite, recognize_type, reduces_to, ClassError, Finiteness, MutationClass, Recognition,
};
pub use doc::{DocError, QuiverDocument};
pub use dynkin::{DynkinError, DynkinType, Orientation};
pub use folding::{check, fold, globally_foldable, orbit_mutate, FoldingError, Violation};
pub use laurent::LaurentPolynomial;
pub use matrix::{CartanMatrix, ExchangeMatrix, MatrixError};
pub use perm::{PermGroup, Permutation};
pub use seed::Seed;
