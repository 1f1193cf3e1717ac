//! Exact primitives and brute-force verification for the edge-isoperimetric
//! inequality for antipodal families of subsets of `[n]`.
//!
//! - [`cube`]: families as bitvectors over `Q_n`, edge counts, sections,
//!   antipodal and complement maps, the potential `f(A) = 2e(A) + |A ∩ Ā|`.
//! - [`binary_order`]: initial segments `I_{n,k}` and `F(k) = e(I_{n,k})`.
//! - [`antipodal`]: the extremal families `I_{n,k} ∪ Ī_{n,k}`, enumeration
//!   and sampling of antipodal families.
//! - [`verify`]: exhaustive and sampled checkers for the inequality and
//!   its supporting lemmas and identities.
//! - [`certificate`]: replays the induction on a concrete family as a
//!   certificate tree, with an independent checker.

pub mod antipodal;
pub mod binary_order;
pub mod certificate;
pub mod cli;
pub mod cube;
pub mod error;
pub mod sampling;
pub mod verify;

pub use cube::{EdgeProfile, Family, FamilyCounts, Sign, Vertex};
pub use error::{Error, Result};
