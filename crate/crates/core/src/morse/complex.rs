use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use super::homology::DeltaComplex;
use crate::error::{Error, Result};
use crate::graphs::LabelledGraph;

/// A proper face of a cell, reached by removing the local elements in
/// `removed`. `element_map[i]` is where a surviving element `i` of the
/// parent lands in the face.
#[derive(Debug, Clone, Serialize)]
pub struct FaceRecord {
    pub cell: usize,
    pub removed: u64,
    pub element_map: Vec<Option<usize>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CellRecord {
    pub key: String,
    pub dim: usize,
    pub elements: usize,
    pub faces: Vec<FaceRecord>,
    /// Permutations of local elements that fix the cell.
    pub automorphisms: Vec<Vec<usize>>,
    #[serde(skip)]
    pub graph: Option<LabelledGraph>,
}

impl CellRecord {
    fn face_index(&self) -> HashMap<u64, usize> {
        self.faces.iter().enumerate().map(|(i, f)| (f.removed, i)).collect()
    }
}

/// Cells with their faces. The face records must be closed under
/// composition: a face of a face is a face.
#[derive(Debug, Clone, Default, Serialize)]
pub struct CellComplexModel {
    pub cells: Vec<CellRecord>,
}

type Simplex = (usize, Vec<u64>);

impl CellComplexModel {
    /// Regular complex from cell dimensions and codimension-one faces.
    pub fn regular(dims: &[usize], boundary: &[Vec<usize>]) -> Result<Self> {
        if dims.len() != boundary.len() {
            return Err(Error::InvalidInput("one boundary list per cell".into()));
        }
        let mut closures: Vec<BTreeSet<usize>> = Vec::with_capacity(dims.len());
        let mut order: Vec<usize> = (0..dims.len()).collect();
        order.sort_by_key(|&c| dims[c]);
        closures.resize(dims.len(), BTreeSet::new());
        for &c in &order {
            let mut cl = BTreeSet::from([c]);
            for &f in &boundary[c] {
                if f >= dims.len() || dims[f] + 1 != dims[c] {
                    return Err(Error::InvalidInput(format!("cell {c} has bad face {f}")));
                }
                cl.extend(closures[f].iter().copied());
            }
            if cl.len() > 64 {
                return Err(Error::ResourceLimit(format!("closure of cell {c} exceeds 64 cells")));
            }
            closures[c] = cl;
        }
        let local: Vec<Vec<usize>> = closures.iter().map(|s| s.iter().copied().collect()).collect();
        let cells = (0..dims.len())
            .map(|c| {
                let faces = local[c]
                    .iter()
                    .filter(|&&f| f != c)
                    .map(|&f| {
                        let mut removed = 0u64;
                        let element_map = local[c]
                            .iter()
                            .enumerate()
                            .map(|(i, g)| {
                                let pos = local[f].iter().position(|x| x == g);
                                if pos.is_none() {
                                    removed |= 1 << i;
                                }
                                pos
                            })
                            .collect();
                        FaceRecord { cell: f, removed, element_map }
                    })
                    .collect();
                CellRecord {
                    key: format!("cell{c}"),
                    dim: dims[c],
                    elements: local[c].len(),
                    faces,
                    automorphisms: vec![(0..local[c].len()).collect()],
                    graph: None,
                }
            })
            .collect();
        Ok(CellComplexModel { cells })
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn dimension(&self) -> Option<usize> {
        self.cells.iter().map(|c| c.dim).max()
    }

    /// Number of cells in each dimension.
    pub fn f_vector(&self) -> Vec<usize> {
        let mut f = vec![0; self.dimension().map_or(0, |d| d + 1)];
        for c in &self.cells {
            f[c.dim] += 1;
        }
        f
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.f_vector().iter().enumerate().map(|(d, &n)| if d % 2 == 0 { n as i64 } else { -(n as i64) }).sum()
    }

    pub fn index_of(&self, key: &str) -> Option<usize> {
        self.cells.iter().position(|c| c.key == key)
    }

    fn canonical_chain(&self, cell: usize, chain: &[u64]) -> Vec<u64> {
        let rec = &self.cells[cell];
        rec.automorphisms
            .iter()
            .map(|sigma| chain.iter().map(|&m| permute_mask(m, sigma)).collect::<Vec<u64>>())
            .min()
            .unwrap_or_else(|| chain.to_vec())
    }

    /// The semi-simplicial set whose `k`-simplices are chains
    /// `(c; F_1 ⊊ … ⊊ F_k)` of faces of a cell `c`, up to symmetries of `c`.
    pub fn subdivision(&self) -> Result<DeltaComplex> {
        let indexes: Vec<HashMap<u64, usize>> = self.cells.iter().map(CellRecord::face_index).collect();
        let mut levels: Vec<Vec<Simplex>> = Vec::new();
        let mut lookup: Vec<HashMap<Simplex, usize>> = Vec::new();
        for (c, rec) in self.cells.iter().enumerate() {
            let mut masks: Vec<u64> = rec.faces.iter().map(|f| f.removed).collect();
            masks.sort_by_key(|m| (m.count_ones(), *m));
            let mut chain = Vec::new();
            self.chains(c, &masks, &mut chain, &mut levels, &mut lookup);
        }
        let mut faces: Vec<Vec<Vec<usize>>> = vec![vec![Vec::new(); levels.first().map_or(0, Vec::len)]];
        for (k, level) in levels.iter().enumerate().skip(1) {
            let mut fk = Vec::with_capacity(level.len());
            for (cell, chain) in level {
                let rec = &self.cells[*cell];
                let first = rec.faces.get(indexes[*cell][&chain[0]]).expect("chain element is a face");
                let mapped: Vec<u64> = chain[1..]
                    .iter()
                    .map(|&m| {
                        let mut out = 0u64;
                        for i in 0..rec.elements {
                            if m >> i & 1 == 1 && first.removed >> i & 1 == 0 {
                                out |= 1 << first.element_map[i].expect("surviving element has an image");
                            }
                        }
                        out
                    })
                    .collect();
                let d0 = (first.cell, self.canonical_chain(first.cell, &mapped));
                let mut fs = vec![find(&lookup, k - 1, &d0)?];
                for i in 0..k {
                    let mut rest = chain.clone();
                    rest.remove(i);
                    let di = (*cell, self.canonical_chain(*cell, &rest));
                    fs.push(find(&lookup, k - 1, &di)?);
                }
                fk.push(fs);
            }
            faces.push(fk);
        }
        Ok(DeltaComplex { faces })
    }

    fn chains(
        &self,
        cell: usize,
        masks: &[u64],
        chain: &mut Vec<u64>,
        levels: &mut Vec<Vec<Simplex>>,
        lookup: &mut Vec<HashMap<Simplex, usize>>,
    ) {
        let k = chain.len();
        let canon = (cell, self.canonical_chain(cell, chain));
        if levels.len() <= k {
            levels.resize(k + 1, Vec::new());
            lookup.resize(k + 1, HashMap::new());
        }
        if !lookup[k].contains_key(&canon) {
            lookup[k].insert(canon.clone(), levels[k].len());
            levels[k].push(canon);
        }
        let last = chain.last().copied().unwrap_or(0);
        for &m in masks {
            if m != last && m & last == last {
                chain.push(m);
                self.chains(cell, masks, chain, levels, lookup);
                chain.pop();
            }
        }
    }
}

fn find(lookup: &[HashMap<Simplex, usize>], k: usize, s: &Simplex) -> Result<usize> {
    lookup
        .get(k)
        .and_then(|m| m.get(s))
        .copied()
        .ok_or_else(|| Error::ImpossibleState(format!("face {s:?} of a chain is missing")))
}

fn permute_mask(m: u64, sigma: &[usize]) -> u64 {
    let mut out = 0u64;
    for (i, &j) in sigma.iter().enumerate() {
        if m >> i & 1 == 1 {
            out |= 1 << j;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point() {
        let x = CellComplexModel::regular(&[0], &[vec![]]).unwrap();
        let h = x.subdivision().unwrap().homology().unwrap();
        assert_eq!(h.len(), 1);
        assert_eq!(h[0].rank, 1);
    }

    #[test]
    fn triangle_boundary() {
        let x = CellComplexModel::regular(
            &[0, 0, 0, 1, 1, 1],
            &[vec![], vec![], vec![], vec![0, 1], vec![1, 2], vec![0, 2]],
        )
        .unwrap();
        let d = x.subdivision().unwrap();
        assert_eq!(d.euler_characteristic(), x.euler_characteristic());
        let h = d.homology().unwrap();
        assert_eq!((h[0].rank, h[1].rank), (1, 1));
    }

    #[test]
    fn filled_square() {
        let x = CellComplexModel::regular(
            &[0, 0, 0, 0, 1, 1, 1, 1, 2],
            &[vec![], vec![], vec![], vec![], vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 0], vec![4, 5, 6, 7]],
        )
        .unwrap();
        let h = x.subdivision().unwrap().homology().unwrap();
        assert_eq!(h[0].rank, 1);
        assert!(h[1..].iter().all(|g| g.is_trivial()));
    }
}
