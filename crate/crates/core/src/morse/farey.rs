use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graphs::{blowup_1edge, canonical_key, roses_whose_star_contains, IdealEdge, UnionFind};
use crate::lattice::{enumerate_roses, RoseCoset};

/// Reduced fraction `p/q` with `q ≥ 0`; `1/0` is the point at infinity.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Fraction {
    pub num: BigInt,
    pub den: BigInt,
}

impl Fraction {
    pub fn new(num: BigInt, den: BigInt) -> Result<Self> {
        if num.is_zero() && den.is_zero() {
            return Err(Error::InvalidInput("0/0 is not a fraction".into()));
        }
        let g = num.gcd(&den);
        let (mut p, mut q) = (num / &g, den / &g);
        if q.is_negative() || (q.is_zero() && p.is_negative()) {
            p = -p;
            q = -q;
        }
        Ok(Fraction { num: p, den: q })
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// `[[a,b],[c,d]] ↦ {b/a, d/c}`.
pub fn farey_pair(rho: &RoseCoset) -> Result<BTreeSet<Fraction>> {
    if rho.rank() != 2 {
        return Err(Error::InvalidInput(format!("rank {} coset has no Farey pair", rho.rank())));
    }
    let (r0, r1) = (rho.row(0), rho.row(1));
    Ok(BTreeSet::from([Fraction::new(r0[1].clone(), r0[0].clone())?, Fraction::new(r1[1].clone(), r1[0].clone())?]))
}

/// Farey neighbours: `|ps − qr| = 1`.
pub fn farey_adjacent(x: &Fraction, y: &Fraction) -> bool {
    (&x.num * &y.den - &x.den * &y.num).abs() == BigInt::from(1)
}

#[derive(Debug, Clone, Serialize)]
pub struct Rank2TreeReport {
    pub bound: i64,
    pub roses: Vec<RoseCoset>,
    /// Canonical keys of the two-vertex graphs in the stars.
    pub thetas: Vec<String>,
    /// `(rose, theta)` incidences.
    pub incidences: Vec<(usize, usize)>,
    pub acyclic: bool,
    pub connected: bool,
    /// Roses below the smallest norm missing from the window.
    pub core: Vec<usize>,
    pub core_acyclic: bool,
    pub core_connected: bool,
    /// Every pair of roses sharing a theta shares exactly one fraction,
    /// and every Farey pair is a pair of Farey neighbours.
    pub farey_consistent: bool,
}

impl Rank2TreeReport {
    pub fn is_tree(&self) -> bool {
        self.acyclic && self.connected
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph rank2 {\n");
        for (i, r) in self.roses.iter().enumerate() {
            s.push_str(&format!("  r{i} [label=\"{r}\", shape=box];\n"));
        }
        for j in 0..self.thetas.len() {
            s.push_str(&format!("  t{j} [label=\"\", shape=point];\n"));
        }
        for (r, t) in &self.incidences {
            s.push_str(&format!("  r{r} -- t{t};\n"));
        }
        s.push_str("}\n");
        s
    }
}

fn forest_check(nodes: usize, edges: &[(usize, usize)]) -> (bool, bool) {
    let mut uf = UnionFind::new(nodes);
    let mut acyclic = true;
    for &(a, b) in edges {
        if !uf.union(a, b) {
            acyclic = false;
        }
    }
    (acyclic, uf.count() <= 1)
}

/// Incidence graph between rank-2 roses with entries bounded by `bound`
/// and the theta graphs in their stars.
pub fn rank2_tree(bound: i64) -> Result<Rank2TreeReport> {
    let roses: Vec<RoseCoset> = enumerate_roses(2, bound);
    let pos: BTreeMap<RoseCoset, usize> = roses.iter().cloned().enumerate().map(|(i, r)| (r, i)).collect();
    let mut theta_ids: BTreeMap<String, usize> = BTreeMap::new();
    let mut incid: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut farey_consistent = true;
    for r in &roses {
        let pair = farey_pair(r)?;
        let v: Vec<&Fraction> = pair.iter().collect();
        if v.len() != 2 || !farey_adjacent(v[0], v[1]) {
            farey_consistent = false;
        }
        for k in [[1i8, 1], [1, -1]] {
            let g = blowup_1edge(r, &IdealEdge::new(&k)?)?;
            let key = canonical_key(&g);
            let next = theta_ids.len();
            let t = *theta_ids.entry(key).or_insert(next);
            let star = roses_whose_star_contains(&g)?;
            if star.len() != 3 {
                return Err(Error::ImpossibleState(format!("theta graph over {r} lies in {} stars", star.len())));
            }
            let members: Vec<usize> = star.iter().filter_map(|s| pos.get(s).copied()).collect();
            for &a in &members {
                incid.insert((a, t));
            }
            let pairs: Vec<BTreeSet<Fraction>> = star.iter().map(farey_pair).collect::<Result<_>>()?;
            for a in 0..3 {
                for b in a + 1..3 {
                    if pairs[a].intersection(&pairs[b]).count() != 1 {
                        farey_consistent = false;
                    }
                }
            }
        }
    }
    let mut thetas = vec![String::new(); theta_ids.len()];
    for (k, i) in theta_ids {
        thetas[i] = k;
    }
    let incidences: Vec<(usize, usize)> = incid.into_iter().collect();
    let nr = roses.len();
    let edges: Vec<(usize, usize)> = incidences.iter().map(|&(r, t)| (r, nr + t)).collect();
    let (acyclic, connected) = forest_check(nr + thetas.len(), &edges);

    let smallest_missing = smallest_missing_norm(bound);
    let core: Vec<usize> = (0..nr).filter(|&i| roses[i].norm() < smallest_missing).collect();
    let in_core: BTreeSet<usize> = core.iter().copied().collect();
    let mut core_thetas: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &(r, t) in &incidences {
        if in_core.contains(&r) {
            core_thetas.entry(t).or_default().push(r);
        }
    }
    let core_index: BTreeMap<usize, usize> = core.iter().enumerate().map(|(i, &r)| (r, i)).collect();
    let mut nodes = core.len();
    let mut core_edges = Vec::new();
    for rs in core_thetas.into_values() {
        if rs.len() < 2 {
            continue;
        }
        for r in rs {
            core_edges.push((core_index[&r], nodes));
        }
        nodes += 1;
    }
    let (core_acyclic, core_connected) = forest_check(nodes, &core_edges);
    Ok(Rank2TreeReport {
        bound,
        roses,
        thetas,
        incidences,
        acyclic,
        connected,
        core,
        core_acyclic,
        core_connected,
        farey_consistent,
    })
}

/// Norm of the smallest rank-2 coset with an entry above `bound`:
/// `[[1, bound+1], [0, 1]]`.
fn smallest_missing_norm(bound: i64) -> crate::lattice::MatrixNorm {
    RoseCoset::from_i64(&[[1, bound + 1], [0, 1]]).expect("unimodular").norm()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn farey_pairs() {
        let id = farey_pair(&RoseCoset::identity(2)).unwrap();
        let want: BTreeSet<Fraction> =
            [Fraction::new(0.into(), 1.into()).unwrap(), Fraction::new(1.into(), 0.into()).unwrap()].into();
        assert_eq!(id, want);
        let r = RoseCoset::from_i64(&[[2, 1], [1, 1]]).unwrap();
        let p: Vec<String> = farey_pair(&r).unwrap().iter().map(ToString::to_string).collect();
        assert_eq!(p, vec!["1/1", "1/2"]);
    }

    #[test]
    fn small_tree() {
        let rep = rank2_tree(2).unwrap();
        assert!(rep.acyclic);
        assert!(rep.connected);
        assert!(rep.farey_consistent);
        assert!(rep.core_acyclic && rep.core_connected);
        assert!(!rep.core.is_empty());
    }
}
