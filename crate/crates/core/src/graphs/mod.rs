//! Labelled marked graphs: validation, collapse, blowups of roses, stars,
//! canonical forms and cactus graphs.

mod blowup;
mod cactus;
mod canon;
mod dot;
mod graph;
mod ideal;

pub use blowup::{
    blowup_1edge, blowup_family, candidate_sets, coefficients, compatible, compatible_families, family_valences,
    full_mask, normalize_set, rose_rows, simultaneous_blowup,
};
pub use cactus::{enumerate_cactus_types, is_cactus, simple_cycles};
pub use canon::{automorphisms, canonical_form, canonical_key, isomorphic_bruteforce, CanonicalForm};
pub use dot::to_dot;
pub(crate) use graph::UnionFind;
pub use graph::{
    equal_up_to_sign, in_frontier, in_star, mask_to_vec, neg, parse_rational, roses_whose_star_contains,
    sign_canonical, to_i64_vec, validate, Edge, Label, LabelledGraph, ValidationReport, Violation,
};
pub use ideal::IdealEdge;
