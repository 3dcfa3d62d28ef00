use std::fmt;

use num_bigint::BigInt;
use num_traits::Signed;
use serde::Serialize;

/// Componentwise absolute value, ordered lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct VectorNorm(pub Vec<BigInt>);

/// Row norms of a standard representative read bottom-up, ordered
/// lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct MatrixNorm(pub Vec<VectorNorm>);

pub fn vector_norm(v: &[BigInt]) -> VectorNorm {
    VectorNorm(v.iter().map(Signed::abs).collect())
}

impl fmt::Display for VectorNorm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl fmt::Display for MatrixNorm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn norms() {
        assert_eq!(vector_norm(&v(&[1, -2, 0])), VectorNorm(v(&[1, 2, 0])));
        assert_eq!(vector_norm(&v(&[0, 0, 0])), VectorNorm(v(&[0, 0, 0])));
        assert!(vector_norm(&v(&[1, -2, 0])) < vector_norm(&v(&[2, 0, 0])));
    }
}
