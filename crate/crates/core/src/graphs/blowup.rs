//! Blowups of a rose. A blowup is described by a family of pairwise
//! compatible sets of half-edges at the rose vertex; half-edge `2i` is the
//! tail `t_i` of loop `a_i` and `2i+1` its head `h_i`.

use crate::error::{Error, Result};
use crate::lattice::RoseCoset;

use super::graph::{to_i64_vec, validate, Edge, Label, LabelledGraph};
use super::ideal::IdealEdge;

pub fn full_mask(n: usize) -> u64 {
    if 2 * n >= 64 {
        u64::MAX
    } else {
        (1u64 << (2 * n)) - 1
    }
}

/// `k_i = [t_i ∈ H] − [h_i ∈ H]`.
pub fn coefficients(set: u64, n: usize) -> Vec<i8> {
    (0..n).map(|i| (set >> (2 * i) & 1) as i8 - (set >> (2 * i + 1) & 1) as i8).collect()
}

/// Representative of `{H, complement}` avoiding half-edge `t_1`.
pub fn normalize_set(set: u64, n: usize) -> u64 {
    if set & 1 == 1 {
        full_mask(n) & !set
    } else {
        set
    }
}

/// Nested, disjoint, or covering.
pub fn compatible(a: u64, b: u64, n: usize) -> bool {
    a & b == a || a & b == b || a & b == 0 || a | b == full_mask(n)
}

pub fn rose_rows(rho: &RoseCoset) -> Result<Vec<Label>> {
    (0..rho.rank()).map(|i| to_i64_vec(rho.row(i))).collect()
}

fn combine(rows: &[Label], k: &[i8]) -> Label {
    let mut s = vec![0i64; rows.first().map_or(0, Vec::len)];
    for (row, &c) in rows.iter().zip(k) {
        for (a, b) in s.iter_mut().zip(row) {
            *a += c as i64 * b;
        }
    }
    s
}

/// Vertex valences of the blowup along a laminar family of normalized sets,
/// root first.
pub fn family_valences(sets: &[u64], n: usize) -> Vec<usize> {
    let parent = parents(sets);
    let mut val = vec![0usize; sets.len() + 1];
    for h in 0..2 * n {
        val[home(sets, h)] += 1;
    }
    for (j, p) in parent.iter().enumerate() {
        val[j + 1] += 1;
        val[*p] += 1;
    }
    val
}

/// Smallest set containing half-edge `h`, as a vertex index (root = 0).
fn home(sets: &[u64], h: usize) -> usize {
    let mut best: Option<usize> = None;
    for (j, &s) in sets.iter().enumerate() {
        if s >> h & 1 == 1 && best.is_none_or(|b| s.count_ones() < sets[b].count_ones()) {
            best = Some(j);
        }
    }
    best.map_or(0, |j| j + 1)
}

fn parents(sets: &[u64]) -> Vec<usize> {
    sets.iter()
        .enumerate()
        .map(|(j, &s)| {
            let mut best: Option<usize> = None;
            for (k, &t) in sets.iter().enumerate() {
                if k != j && s & t == s && s != t && best.is_none_or(|b| t.count_ones() < sets[b].count_ones()) {
                    best = Some(k);
                }
            }
            best.map_or(0, |k| k + 1)
        })
        .collect()
}

/// Blow up the rose with rows `rows` along a compatible family of half-edge
/// sets. Edges `0..n` are the loops `a_i`; edge `n + j` is the new edge
/// for `sets[j]`.
pub fn blowup_family(rows: &[Label], sets: &[u64]) -> Result<LabelledGraph> {
    let n = rows.len();
    let norm: Vec<u64> = sets.iter().map(|&s| normalize_set(s, n)).collect();
    for (a, &s) in norm.iter().enumerate() {
        if s.count_ones() < 2 || (full_mask(n) & !s).count_ones() < 2 {
            return Err(Error::InvalidInput(format!("half-edge set {s:#b} is too small")));
        }
        for &t in &norm[a + 1..] {
            if s == t || !(s & t == s || s & t == t || s & t == 0) {
                return Err(Error::InvalidInput(format!("half-edge sets {s:#b} and {t:#b} are incompatible")));
            }
        }
    }
    let vertex = |h: usize| home(&norm, h);
    let mut edges: Vec<Edge> = (0..n).map(|i| Edge::new(vertex(2 * i), vertex(2 * i + 1), rows[i].clone())).collect();
    let parent = parents(&norm);
    for (j, (&orig, &s)) in sets.iter().zip(&norm).enumerate() {
        let k = coefficients(s, n);
        let e = Edge::new(parent[j], j + 1, combine(rows, &k));
        edges.push(if orig == s { e } else { e.reversed() });
    }
    LabelledGraph::new(n, norm.len() + 1, edges)
}

/// Two-vertex blowup realizing `ι`: new edge `P → Q` labelled `Σ k_i v_i`,
/// participating loops split between `P` and `Q`, spectators at `P`.
pub fn blowup_1edge(rho: &RoseCoset, iota: &IdealEdge) -> Result<LabelledGraph> {
    if iota.rank() != rho.rank() {
        return Err(Error::RankMismatch { left: rho.rank(), right: iota.rank() });
    }
    let rows = rose_rows(rho)?;
    let (p, q) = (0, 1);
    let mut edges: Vec<Edge> = iota
        .coeffs()
        .iter()
        .zip(&rows)
        .map(|(&k, v)| match k {
            1 => Edge::new(q, p, v.clone()),
            -1 => Edge::new(p, q, v.clone()),
            _ => Edge::new(p, p, v.clone()),
        })
        .collect();
    edges.push(Edge::new(p, q, combine(&rows, iota.coeffs())));
    LabelledGraph::new(rho.rank(), 2, edges)
}

/// A graph in the star of `ρ` realizing both `ι` and `ι′`: either one is
/// subordinate to the other, or both have two letters and are not opposite.
pub fn simultaneous_blowup(rho: &RoseCoset, iota: &IdealEdge, iota2: &IdealEdge) -> Result<LabelledGraph> {
    if iota.rank() != rho.rank() || iota2.rank() != rho.rank() {
        return Err(Error::RankMismatch { left: rho.rank(), right: iota2.rank() });
    }
    if iota == iota2 {
        return blowup_1edge(rho, iota);
    }
    if iota.is_opposite(iota2) {
        return Err(Error::OppositePair(iota.to_string(), iota2.to_string()));
    }
    let supported =
        iota.is_subordinate_to(iota2) || iota2.is_subordinate_to(iota) || (iota.letters() == 2 && iota2.letters() == 2);
    if !supported {
        return Err(Error::UnsupportedPair(iota.to_string(), iota2.to_string()));
    }
    let n = rho.rank();
    let a = iota.half_edges();
    let b = [iota2.half_edges(), iota2.negated_half_edges()]
        .into_iter()
        .find(|&b| compatible(a, b, n))
        .ok_or_else(|| Error::UnsupportedPair(iota.to_string(), iota2.to_string()))?;
    let g = blowup_family(&rose_rows(rho)?, &[a, b])?;
    match validate(&g).violation {
        None => Ok(g),
        Some(v) => Err(Error::ImpossibleState(format!("simultaneous blowup failed validation: {v}"))),
    }
}

/// Every half-edge set (normalized, so avoiding `t_1`) whose blowup edge is
/// non-separating and whose coefficient vector passes `accept`.
pub fn candidate_sets(n: usize, accept: impl Fn(&[i8]) -> bool) -> Vec<u64> {
    let full = full_mask(n);
    (0..=full)
        .filter(|&s| s & 1 == 0)
        .filter(|&s| s.count_ones() >= 2 && (full & !s).count_ones() >= 2)
        .filter(|&s| {
            let k = coefficients(s, n);
            k.iter().any(|&x| x != 0) && accept(&k)
        })
        .collect()
}

/// Every family of pairwise compatible candidate sets (including the empty
/// family) whose blowup has all valences at least 3, with at most
/// `max_sets` sets.
pub fn compatible_families(n: usize, cands: &[u64], max_sets: usize) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    families_rec(n, cands, 0, max_sets, &mut cur, &mut out);
    out
}

fn families_rec(n: usize, cands: &[u64], start: usize, max_sets: usize, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
    out.push(cur.clone());
    if cur.len() == max_sets {
        return;
    }
    for i in start..cands.len() {
        let s = cands[i];
        if !cur.iter().all(|&t| s & t == s || s & t == t || s & t == 0) {
            continue;
        }
        cur.push(s);
        if family_valences(cur, n).iter().all(|&v| v >= 3) {
            families_rec(n, cands, i + 1, max_sets, cur, out);
        }
        cur.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::graph::{roses_whose_star_contains, validate};

    #[test]
    fn three_letter_blowup() {
        let rho = RoseCoset::identity(5);
        let iota = IdealEdge::parse(5, "a1-a3+a4").unwrap();
        let g = blowup_1edge(&rho, &iota).unwrap();
        assert!(validate(&g).is_ok());
        assert_eq!(g.edge(5).label, vec![1, 0, -1, 1, 0]);
        assert!(g.edge(1).is_loop() && g.edge(4).is_loop() && g.edge(1).src == g.edge(4).src);
        assert_eq!(g.num_vertices(), 2);
        let back = g.collapse(&[5]).unwrap();
        assert_eq!(roses_whose_star_contains(&back).unwrap().into_iter().next().unwrap(), rho);
    }

    #[test]
    fn theta_in_rank_three() {
        let rho = RoseCoset::identity(3);
        let g = blowup_1edge(&rho, &IdealEdge::parse(3, "a1+a2").unwrap()).unwrap();
        assert!(validate(&g).is_ok());
        assert_eq!(g.edge(3).label, vec![1, 1, 0]);
        let r = g.collapse(&[0]).unwrap();
        let got = roses_whose_star_contains(&r).unwrap().into_iter().next().unwrap();
        assert_eq!(got, rho.replace_row(0, &[1.into(), 1.into(), 0.into()]).unwrap());
    }

    #[test]
    fn family_matches_template() {
        let rho = RoseCoset::from_i64(&[[2, 1, 0], [1, 1, 0], [0, 0, 1]]).unwrap();
        let rows = rose_rows(&rho).unwrap();
        for iota in IdealEdge::all(3) {
            let g = blowup_family(&rows, &[iota.half_edges()]).unwrap();
            assert!(validate(&g).is_ok(), "{iota}");
        }
    }

    #[test]
    fn simultaneous_templates() {
        let rho = RoseCoset::identity(4);
        let big = IdealEdge::parse(4, "a1+a2+a3+a4").unwrap();
        let small = IdealEdge::parse(4, "a1+a2").unwrap();
        let g = simultaneous_blowup(&rho, &big, &small).unwrap();
        assert_eq!(g.num_vertices(), 3);
        let labels: Vec<_> = g.edges()[4..].iter().map(|e| super::super::graph::sign_canonical(&e.label)).collect();
        assert!(labels.contains(&vec![1, 1, 1, 1]) && labels.contains(&vec![1, 1, 0, 0]));
        let g = simultaneous_blowup(&rho, &small, &IdealEdge::parse(4, "a3+a4").unwrap()).unwrap();
        assert_eq!(g.num_vertices(), 3);
        let g = simultaneous_blowup(&rho, &small, &IdealEdge::parse(4, "a1+a3").unwrap()).unwrap();
        assert!(validate(&g).is_ok());
    }

    #[test]
    fn opposite_and_unsupported() {
        let rho = RoseCoset::identity(4);
        let a = IdealEdge::parse(4, "a1+a2").unwrap();
        let b = IdealEdge::parse(4, "-a1+a2").unwrap();
        assert!(matches!(simultaneous_blowup(&rho, &a, &b), Err(Error::OppositePair(..))));
        let c = IdealEdge::parse(4, "a1+a2+a3").unwrap();
        let d = IdealEdge::parse(4, "a2+a3+a4").unwrap();
        assert!(matches!(simultaneous_blowup(&rho, &c, &d), Err(Error::UnsupportedPair(..))));
    }
}
