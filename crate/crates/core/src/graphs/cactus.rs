use std::collections::{BTreeMap, BTreeSet};

use super::blowup::{blowup_family, candidate_sets, compatible_families, rose_rows};
use super::canon::canonical_key;
use super::graph::{validate, LabelledGraph, UnionFind};
use crate::error::Result;
use crate::lattice::RoseCoset;

/// Edge sets (as bitmasks) of all embedded circles.
///
/// # Panics
/// If the graph has more than 64 edges.
pub fn simple_cycles(g: &LabelledGraph) -> Vec<u64> {
    assert!(g.num_edges() <= 64, "too many edges for bitmask cycles");
    let mut uf = UnionFind::new(g.num_vertices());
    let mut tree = Vec::new();
    let mut extra = Vec::new();
    for (i, e) in g.edges().iter().enumerate() {
        if uf.union(e.src, e.dst) {
            tree.push(i);
        } else {
            extra.push(i);
        }
    }
    let basis: Vec<u64> = extra.iter().map(|&i| fundamental_cycle(g, &tree, i)).collect();
    let mut out = Vec::new();
    for code in 1u64..(1u64 << basis.len()) {
        let mut m = 0u64;
        for (b, &c) in basis.iter().enumerate() {
            if code >> b & 1 == 1 {
                m ^= c;
            }
        }
        if is_simple_cycle(g, m) {
            out.push(m);
        }
    }
    out.sort();
    out
}

fn fundamental_cycle(g: &LabelledGraph, tree: &[usize], extra: usize) -> u64 {
    let e = g.edge(extra);
    let path = tree_path(g, tree, e.src, e.dst);
    path.iter().fold(1u64 << extra, |m, &i| m | 1 << i)
}

fn tree_path(g: &LabelledGraph, tree: &[usize], from: usize, to: usize) -> Vec<usize> {
    let mut prev: Vec<Option<(usize, usize)>> = vec![None; g.num_vertices()];
    let mut seen = vec![false; g.num_vertices()];
    let mut stack = vec![from];
    seen[from] = true;
    while let Some(v) = stack.pop() {
        for &i in tree {
            let e = g.edge(i);
            let w = if e.src == v {
                e.dst
            } else if e.dst == v {
                e.src
            } else {
                continue;
            };
            if !seen[w] {
                seen[w] = true;
                prev[w] = Some((v, i));
                stack.push(w);
            }
        }
    }
    let mut path = Vec::new();
    let mut v = to;
    while v != from {
        let (p, i) = prev[v].expect("tree spans the component");
        path.push(i);
        v = p;
    }
    path
}

fn is_simple_cycle(g: &LabelledGraph, mask: u64) -> bool {
    let mut deg = vec![0usize; g.num_vertices()];
    let mut uf = UnionFind::new(g.num_vertices());
    let mut touched = Vec::new();
    for (i, e) in g.edges().iter().enumerate() {
        if mask >> i & 1 == 1 {
            deg[e.src] += 1;
            deg[e.dst] += 1;
            uf.union(e.src, e.dst);
            touched.push(e.src);
        }
    }
    if deg.iter().any(|&d| d != 0 && d != 2) {
        return false;
    }
    let Some(&root) = touched.first() else { return false };
    let root = uf.find(root);
    (0..g.num_vertices()).filter(|&v| deg[v] > 0).all(|v| uf.find(v) == root)
}

/// Exactly `n` embedded circles, and every edge lies on exactly one.
pub fn is_cactus(g: &LabelledGraph) -> bool {
    let cycles = simple_cycles(g);
    if cycles.len() != g.rank() {
        return false;
    }
    (0..g.num_edges()).all(|i| cycles.iter().filter(|&&c| c >> i & 1 == 1).count() == 1)
}

/// Canonical keys of cactus graphs in the star of `ρ` with at most
/// `max_vertices` vertices, grouped by vertex count.
pub fn enumerate_cactus_types(rho: &RoseCoset, max_vertices: usize) -> Result<BTreeMap<usize, BTreeSet<String>>> {
    let n = rho.rank();
    let rows = rose_rows(rho)?;
    let cands = candidate_sets(n, |k| k.iter().filter(|&&x| x != 0).count() == 1);
    let mut out: BTreeMap<usize, BTreeSet<String>> = BTreeMap::new();
    for fam in compatible_families(n, &cands, max_vertices.saturating_sub(1)) {
        let g = blowup_family(&rows, &fam)?;
        if validate(&g).is_ok() && is_cactus(&g) {
            out.entry(g.num_vertices()).or_default().insert(canonical_key(&g));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::graph::Edge;

    #[test]
    fn two_vertex_graph_is_cactus() {
        let g = LabelledGraph::new(
            3,
            2,
            vec![
                Edge::new(0, 0, vec![1, 0, 0]),
                Edge::new(1, 1, vec![0, 1, 0]),
                Edge::new(0, 1, vec![0, 0, 1]),
                Edge::new(1, 0, vec![0, 0, 1]),
            ],
        )
        .unwrap();
        assert!(is_cactus(&g));
        assert_eq!(simple_cycles(&g).len(), 3);
    }

    #[test]
    fn rose_is_cactus() {
        let r = LabelledGraph::rose(&RoseCoset::identity(2)).unwrap();
        assert!(is_cactus(&r));
        let types = enumerate_cactus_types(&RoseCoset::identity(2), 1).unwrap();
        assert_eq!(types[&1].len(), 1);
    }

    #[test]
    fn theta_is_not_cactus() {
        let g = LabelledGraph::new(
            2,
            2,
            vec![Edge::new(0, 1, vec![1, 0]), Edge::new(0, 1, vec![0, 1]), Edge::new(1, 0, vec![1, 1])],
        )
        .unwrap();
        assert!(!is_cactus(&g));
        assert_eq!(simple_cycles(&g).len(), 3);
    }
}
