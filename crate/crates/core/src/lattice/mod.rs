//! Integer matrices, the norm order on roses, canonical coset
//! representatives and Smith normal form.

mod coset;
mod matrix;
mod norm;
mod snf;

pub use coset::{enumerate_roses, matrix_norm, right_action, sign_normalize, standard_representative, RoseCoset};
pub use matrix::IntMatrix;
#[allow(unused_imports)]
pub(crate) use matrix::{bigint_from_json, bigint_to_json};
pub use norm::{vector_norm, MatrixNorm, VectorNorm};
pub use snf::{invariant_factors, smith_normal_form, SmithForm};
