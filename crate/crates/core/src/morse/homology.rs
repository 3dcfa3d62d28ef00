use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::complex::CellComplexModel;
use crate::error::{Error, Result};
use crate::lattice::{invariant_factors, IntMatrix};

/// `Z^rank ⊕ ⊕ Z/t`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomologyGroup {
    pub dim: usize,
    pub rank: usize,
    pub torsion: Vec<BigInt>,
}

impl HomologyGroup {
    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }
}

impl std::fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts = Vec::new();
        if self.rank > 0 {
            parts.push(if self.rank == 1 { "Z".to_string() } else { format!("Z^{}", self.rank) });
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        if parts.is_empty() {
            write!(f, "H{} = 0", self.dim)
        } else {
            write!(f, "H{} = {}", self.dim, parts.join(" + "))
        }
    }
}

/// A semi-simplicial set: `faces[k][s][i]` is the index of `d_i` of the
/// `k`-simplex `s` among the `(k-1)`-simplices.
#[derive(Debug, Clone, Default)]
pub struct DeltaComplex {
    pub faces: Vec<Vec<Vec<usize>>>,
}

impl DeltaComplex {
    pub fn count(&self, k: usize) -> usize {
        self.faces.get(k).map_or(0, Vec::len)
    }

    pub fn euler_characteristic(&self) -> i64 {
        (0..self.faces.len()).map(|k| if k % 2 == 0 { self.count(k) as i64 } else { -(self.count(k) as i64) }).sum()
    }

    fn boundary(&self, k: usize) -> (usize, usize, Vec<(usize, usize, i64)>) {
        let mut entries: BTreeMap<(usize, usize), i64> = BTreeMap::new();
        for (s, fs) in self.faces[k].iter().enumerate() {
            for (i, &f) in fs.iter().enumerate() {
                *entries.entry((f, s)).or_default() += if i % 2 == 0 { 1 } else { -1 };
            }
        }
        let entries = entries.into_iter().filter(|(_, v)| *v != 0).map(|((r, c), v)| (r, c, v)).collect();
        (self.count(k - 1), self.count(k), entries)
    }

    pub fn homology(&self) -> Result<Vec<HomologyGroup>> {
        let top = self.faces.len();
        let mut ranks = vec![0usize; top + 1];
        let mut torsion = vec![Vec::new(); top + 1];
        for k in 1..top {
            let (r, c, e) = self.boundary(k);
            let (rk, tors) = sparse_invariant_factors(r, c, e)?;
            ranks[k] = rk;
            torsion[k - 1] = tors;
        }
        Ok((0..top)
            .map(|k| HomologyGroup {
                dim: k,
                rank: self.count(k) - ranks[k] - ranks[k + 1],
                torsion: std::mem::take(&mut torsion[k]),
            })
            .collect())
    }
}

/// Rank and the invariant factors greater than one of a sparse integer
/// matrix. Unit pivots are eliminated first; the rest goes through a dense
/// Smith normal form.
pub fn sparse_invariant_factors(
    nrows: usize,
    ncols: usize,
    entries: Vec<(usize, usize, i64)>,
) -> Result<(usize, Vec<BigInt>)> {
    let mut rows: Vec<BTreeMap<usize, i128>> = vec![BTreeMap::new(); nrows];
    let mut cols: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); ncols];
    for (r, c, v) in entries {
        if r >= nrows || c >= ncols {
            return Err(Error::InvalidInput(format!("entry ({r},{c}) outside {nrows}x{ncols}")));
        }
        if v != 0 {
            *rows[r].entry(c).or_default() += v as i128;
            cols[c].insert(r);
        }
    }
    let mut alive = vec![true; nrows];
    let mut rank = 0;
    loop {
        let mut progress = false;
        let mut order: Vec<usize> = (0..nrows).filter(|&r| alive[r] && !rows[r].is_empty()).collect();
        order.sort_by_key(|&r| rows[r].len());
        for r in order {
            if !alive[r] {
                continue;
            }
            let Some((&c, &p)) = rows[r].iter().filter(|(_, v)| v.abs() == 1).min_by_key(|(c, _)| cols[**c].len())
            else {
                continue;
            };
            let pivot_row = rows[r].clone();
            for other in cols[c].clone() {
                if other == r {
                    continue;
                }
                let f = rows[other][&c] * p;
                for (&c2, &v) in &pivot_row {
                    let slot = rows[other].entry(c2).or_default();
                    *slot = slot.checked_sub(f.checked_mul(v).ok_or_else(overflow)?).ok_or_else(overflow)?;
                    if *slot == 0 {
                        rows[other].remove(&c2);
                        cols[c2].remove(&other);
                    } else {
                        cols[c2].insert(other);
                    }
                }
            }
            for &c2 in pivot_row.keys() {
                cols[c2].remove(&r);
            }
            rows[r].clear();
            alive[r] = false;
            rank += 1;
            progress = true;
        }
        if !progress {
            break;
        }
    }
    let rest: Vec<usize> = (0..nrows).filter(|&r| alive[r] && !rows[r].is_empty()).collect();
    if rest.is_empty() {
        return Ok((rank, Vec::new()));
    }
    let used: BTreeSet<usize> = rest.iter().flat_map(|&r| rows[r].keys().copied()).collect();
    let col_index: HashMap<usize, usize> = used.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let mut dense = IntMatrix::zeros(rest.len(), used.len());
    for (i, &r) in rest.iter().enumerate() {
        for (c, v) in &rows[r] {
            dense.set(i, col_index[c], BigInt::from(*v));
        }
    }
    let factors = invariant_factors(&dense);
    let nonzero: Vec<BigInt> = factors.into_iter().filter(|d| !d.is_zero()).map(|d| d.abs()).collect();
    rank += nonzero.len();
    Ok((rank, nonzero.into_iter().filter(|d| !d.is_one()).collect()))
}

fn overflow() -> Error {
    Error::ResourceLimit("integer overflow during sparse elimination".into())
}

/// Integral homology of the cell complex, computed on its forest-chain
/// subdivision.
pub fn homology(x: &CellComplexModel) -> Result<Vec<HomologyGroup>> {
    x.subdivision()?.homology()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sparse_rank_and_torsion() {
        let (r, t) = sparse_invariant_factors(2, 2, vec![(0, 0, 2), (1, 1, 3)]).unwrap();
        assert_eq!(r, 2);
        assert_eq!(t, vec![BigInt::from(6)]);
        let (r, t) = sparse_invariant_factors(3, 3, vec![(0, 0, 1), (1, 0, 1), (1, 1, 1), (2, 2, 0)]).unwrap();
        assert_eq!(r, 2);
        assert!(t.is_empty());
    }

    #[test]
    fn triangle_boundary() {
        let d = DeltaComplex { faces: vec![vec![vec![]; 3], vec![vec![1, 0], vec![2, 1], vec![2, 0]]] };
        let h = d.homology().unwrap();
        assert_eq!(h[0].rank, 1);
        assert_eq!(h[1].rank, 1);
        assert_eq!(d.euler_characteristic(), 0);
    }

    #[test]
    fn mod_two_torsion() {
        let d = DeltaComplex {
            faces: vec![vec![vec![]; 1], vec![vec![0, 0], vec![0, 0]], vec![vec![0, 1, 0], vec![1, 1, 1]]],
        };
        let h = d.homology().unwrap();
        assert_eq!(h[0].rank, 1);
        assert_eq!(h[1].rank, 0);
        assert_eq!(h[1].torsion, vec![BigInt::from(2)]);
        assert!(h[2].is_trivial());
        assert_eq!(d.euler_characteristic(), 1);
    }
}
