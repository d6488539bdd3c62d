//! Toolkit for conflict-avoiding codes (CAC) and strongly conflict-avoiding
//! codes (SCAC) of the collision channel without feedback.
//!
//! A codeword is an ω-subset of Z_L; a code is a set of codewords whose
//! difference sets are pairwise disjoint (CAC), or whose *shifted* difference
//! sets are pairwise disjoint and avoid {1, L−1} (SCAC). CACs guarantee each
//! of `M` users one collision-free packet per period when users are slot
//! synchronized; SCACs give the same guarantee when slot boundaries are not
//! aligned. The crate provides:
//!
//! - [`ring`]: residue arithmetic, difference profiles, tube/gap
//!   decomposition, weight-3 codeword classification;
//! - [`validate`]: CAC/SCAC membership, solitary gaps, the gap-count
//!   feasibility inequality, leaves;
//! - [`numth`]: primes, factorization, multiplicative order/suborder of 2;
//! - [`bounds`]: every closed-form exact value and bound for M(L,3) and
//!   M_S(L,3) implemented here, with provenance tags;
//! - [`construct`]: the CAC→SCAC doubling map, the doubling-fold cycle graph,
//!   matching-based optimal equi-difference codes, existence predicates;
//! - [`search`]: exact branch-and-bound maximization of |code| over canonical
//!   codeword classes — the reference oracle for small lengths;
//! - [`sim`]: slot-asynchronous collision channel simulator and worst-case
//!   success counts over the half-slot offset grid.

// Residue arithmetic is the subject here; `x % n == 0` is the notation the
// math is written in, so don't rewrite it as `x.is_multiple_of(n)`.
#![allow(clippy::manual_is_multiple_of)]

pub mod bounds;
pub mod construct;
pub mod numth;
pub mod ring;
pub mod search;
pub mod sim;
pub mod validate;

pub use bounds::{BoundKind, BoundResult, Quantity};
pub use ring::{Codeword, DifferenceProfile, ResidueSet, TubeGapDecomposition};
pub use search::{SearchMode, SearchOutcome};
pub use sim::{OffsetAssignment, SimulationReport};
pub use validate::{Code, ValidationReport};
