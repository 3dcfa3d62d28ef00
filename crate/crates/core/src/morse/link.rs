use serde::Serialize;

use super::descending::descending_edges;
use crate::error::{Error, Result};
use crate::graphs::{IdealEdge, UnionFind};
use crate::lattice::RoseCoset;

/// Descending ideal edges of a rose and the pairs that realize together.
#[derive(Debug, Clone, Serialize)]
pub struct DescendingLinkModel {
    pub rose: RoseCoset,
    pub vertices: Vec<IdealEdge>,
    pub adjacency: Vec<(usize, usize)>,
}

impl DescendingLinkModel {
    pub fn components(&self) -> usize {
        let mut uf = UnionFind::new(self.vertices.len());
        for &(a, b) in &self.adjacency {
            uf.union(a, b);
        }
        uf.count()
    }

    pub fn is_connected(&self) -> bool {
        self.components() == 1
    }
}

/// Subordinate in either direction, or two non-opposite 2-letter edges.
pub fn jointly_realizable(a: &IdealEdge, b: &IdealEdge) -> bool {
    a.is_subordinate_to(b)
        || b.is_subordinate_to(a)
        || (a.letters() == 2 && b.letters() == 2 && a != b && !a.is_opposite(b))
}

pub fn descending_link(rho: &RoseCoset) -> Result<DescendingLinkModel> {
    let vertices = descending_edges(rho)?;
    if vertices.is_empty() {
        return Err(Error::EmptyLink);
    }
    let mut adjacency = Vec::new();
    for a in 0..vertices.len() {
        for b in a + 1..vertices.len() {
            if jointly_realizable(&vertices[a], &vertices[b]) {
                adjacency.push((a, b));
            }
        }
    }
    Ok(DescendingLinkModel { rose: rho.clone(), vertices, adjacency })
}

pub fn descending_link_connected(rho: &RoseCoset) -> Result<bool> {
    Ok(descending_link(rho)?.is_connected())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_has_empty_link() {
        assert!(matches!(descending_link_connected(&RoseCoset::identity(3)), Err(Error::EmptyLink)));
    }

    #[test]
    fn small_link() {
        let r = RoseCoset::from_i64(&[[2, 1, 0], [1, 1, 0], [0, 0, 1]]).unwrap();
        let m = descending_link(&r).unwrap();
        assert!(!m.vertices.is_empty());
        assert!(m.is_connected());
    }
}
