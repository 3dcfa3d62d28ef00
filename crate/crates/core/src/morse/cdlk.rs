use std::collections::{HashMap, HashSet};

use super::complex::{CellComplexModel, CellRecord, FaceRecord};
use super::descending::is_descending;
use crate::error::{Error, Result};
use crate::graphs::{
    automorphisms, blowup_family, candidate_sets, canonical_form, coefficients, compatible_families, equal_up_to_sign,
    mask_to_vec, rose_rows, validate, IdealEdge, Label, LabelledGraph,
};
use crate::lattice::RoseCoset;

pub const MAX_CDLK_RANK: usize = 4;

/// Class of each edge: `i + 1` when labelled `±v_i`, `0` otherwise.
pub fn edge_classes(g: &LabelledGraph, rows: &[Label]) -> Vec<usize> {
    g.edges().iter().map(|e| rows.iter().position(|v| equal_up_to_sign(&e.label, v)).map_or(0, |i| i + 1)).collect()
}

/// Forests whose collapse keeps an edge of every class.
pub fn admissible_forests(g: &LabelledGraph, classes: &[usize], nclasses: usize) -> Vec<u64> {
    let ne = g.num_edges();
    (1u64..(1u64 << ne))
        .filter(|&m| g.is_forest_mask(m))
        .filter(|&m| (0..nclasses).all(|c| (0..ne).any(|i| classes[i] == c && m >> i & 1 == 0)))
        .collect()
}

/// Graphs in the star of `ρ` whose non-rose edges are all descending, with
/// at least one such edge; faces are forest collapses that keep a
/// descending edge and an edge of each class `±v_i`.
pub fn completely_descending_complex(rho: &RoseCoset) -> Result<CellComplexModel> {
    let n = rho.rank();
    if n > MAX_CDLK_RANK {
        return Err(Error::ResourceLimit(format!(
            "complex enumeration supports rank at most {MAX_CDLK_RANK}, got {n}"
        )));
    }
    if n < 2 {
        return Err(Error::InvalidInput(format!("rank {n} is too small")));
    }
    let rows = rose_rows(rho)?;
    let letters = |k: &[i8]| k.iter().filter(|&&x| x != 0).count();
    let mut descending: HashSet<Vec<i8>> = HashSet::new();
    for e in IdealEdge::all(n) {
        if is_descending(rho, &e)? {
            descending.insert(e.coeffs().iter().map(|&x| -x).collect());
            descending.insert(e.coeffs().to_vec());
        }
    }
    let cands = candidate_sets(n, |k| letters(k) == 1 || descending.contains(k));
    let mut graphs: Vec<LabelledGraph> = Vec::new();
    let mut keys: Vec<String> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    for fam in compatible_families(n, &cands, 2 * n - 3) {
        if !fam.iter().any(|&s| letters(&coefficients(s, n)) >= 2) {
            continue;
        }
        let g = blowup_family(&rows, &fam)?;
        if let Some(v) = validate(&g).violation {
            return Err(Error::ImpossibleState(format!("blowup {fam:?} is invalid: {v:?}")));
        }
        let cf = canonical_form(&g);
        if !index.contains_key(&cf.key) {
            index.insert(cf.key.clone(), graphs.len());
            keys.push(cf.key);
            graphs.push(cf.graph);
        }
    }
    let mut cells = Vec::with_capacity(graphs.len());
    for (g, key) in graphs.iter().zip(&keys) {
        let classes = edge_classes(g, &rows);
        let mut faces = Vec::new();
        for m in admissible_forests(g, &classes, n + 1) {
            let h = g.collapse(&mask_to_vec(m))?;
            let cf = canonical_form(&h);
            let Some(&cell) = index.get(&cf.key) else {
                return Err(Error::ImpossibleState(format!("collapse of {key} by {m:#b} is not a cell")));
            };
            let mut pos = 0;
            let element_map = (0..g.num_edges())
                .map(|i| {
                    if m >> i & 1 == 1 {
                        None
                    } else {
                        pos += 1;
                        Some(cf.edge_map[pos - 1])
                    }
                })
                .collect();
            faces.push(FaceRecord { cell, removed: m, element_map });
        }
        cells.push(CellRecord {
            key: key.clone(),
            dim: g.num_vertices() - 2,
            elements: g.num_edges(),
            faces,
            automorphisms: automorphisms(g),
            graph: Some(g.clone()),
        });
    }
    Ok(CellComplexModel { cells })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_is_empty() {
        assert!(completely_descending_complex(&RoseCoset::identity(3)).unwrap().is_empty());
    }

    #[test]
    fn rank_limit() {
        assert!(matches!(completely_descending_complex(&RoseCoset::identity(5)), Err(Error::ResourceLimit(_))));
    }

    #[test]
    fn single_descending_edge_is_a_point() {
        let r = RoseCoset::from_i64(&[[1, 1], [0, 1]]).unwrap();
        let x = completely_descending_complex(&r).unwrap();
        assert_eq!(x.f_vector(), vec![1]);
    }
}
