//! Positroids through their ranked essential families.
//!
//! A positroid on `[n]` is encoded by a bounded affine permutation. This crate
//! reads its essential sets off the permutation's diagram, recovers ranks of
//! cyclic intervals from them, validates candidate families axiomatically,
//! reconstructs permutations from rank conditions, and computes cell
//! codimensions, polytope facets and bases.

pub mod diagram;
pub mod enumerate;
pub mod essential;
pub mod geometry;
pub mod interval;
pub mod json;
pub mod perm;
pub mod realize;
pub mod retrieval;
pub mod smallrank;

pub use diagram::{ranked_essential_family, Square};
pub use enumerate::BoundedAffinePermutations;
pub use essential::{Entry, RankedEssentialFamily};
pub use interval::{CyclicInterval, CyclicOrder, Lift};
pub use perm::BoundedAffinePermutation;
pub use retrieval::{retrieve, RankConditionSet};
