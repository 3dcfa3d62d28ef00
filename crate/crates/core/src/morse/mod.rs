//! Morse theory on the space of roses: descending ideal edges, descending
//! links, completely descending complexes, their homology, and the rank-2
//! tree.

mod cdlk;
mod complex;
mod descending;
mod farey;
mod homology;
mod link;

pub use cdlk::{admissible_forests, completely_descending_complex, edge_classes, MAX_CDLK_RANK};
pub use complex::{CellComplexModel, CellRecord, FaceRecord};
pub use descending::{
    descending_edges, descending_witness, descending_witness_oracle, forbidden_pair_check, is_descending,
    is_descending_oracle, opposite, subordinate_2letter, ForbiddenPairReport, WitnessSource,
};
pub use farey::{farey_adjacent, farey_pair, rank2_tree, Fraction, Rank2TreeReport};
pub use homology::{homology, sparse_invariant_factors, DeltaComplex, HomologyGroup};
pub use link::{descending_link, descending_link_connected, jointly_realizable, DescendingLinkModel};
