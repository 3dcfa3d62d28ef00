//! Exact computations for the Torelli subgroup of `Out(F_n)`: free-group
//! automorphisms, the norm-ordered complex of roses, labelled marked graphs,
//! descending links and the toy model.

pub mod error;
pub mod freegroup;
pub mod graphs;
pub mod lattice;
pub mod morse;
pub mod torelli;
pub mod toymodel;

pub use error::{Error, Result};
