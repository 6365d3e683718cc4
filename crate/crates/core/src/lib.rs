//! Groups of odd prime exponent `p` and nilpotency class at most two, represented
//! by the alternating bilinear map `V x V -> W` that their commutator induces on
//! `V = G/G'` and `W = G'`.
//!
//! The crate computes central-quotient invariants, tests isomorphism and central
//! decomposability, and carries a catalog of the special groups with `|G'| = p^2`
//! of orders `p^5` through `p^9` together with procedures that re-derive their
//! tabulated data.

pub mod catalog;
pub mod central_products;
pub mod digraph;
mod error;
pub mod ff;
pub mod invariants;
pub mod isomorphism;
pub mod structure;
pub mod verify;

pub use digraph::{FlowDigraph, ParseError, ParseErrorKind};
pub use error::{Error, Result};
pub use structure::{CommutatorStructure, NormalForm, ScharlauPair};
