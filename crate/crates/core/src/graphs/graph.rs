use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_rational::Rational64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::lattice::{standard_representative, IntMatrix, RoseCoset};

pub type Label = Vec<i64>;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Edge {
    pub src: usize,
    pub dst: usize,
    pub label: Label,
    pub len: Rational64,
}

impl Edge {
    pub fn new(src: usize, dst: usize, label: Label) -> Self {
        Edge { src, dst, label, len: Rational64::one() }
    }

    pub fn with_len(mut self, len: Rational64) -> Self {
        self.len = len;
        self
    }

    pub fn is_loop(&self) -> bool {
        self.src == self.dst
    }

    /// Same edge traversed backwards.
    pub fn reversed(&self) -> Self {
        Edge { src: self.dst, dst: self.src, label: neg(&self.label), len: self.len }
    }
}

pub fn neg(v: &[i64]) -> Label {
    v.iter().map(|x| -x).collect()
}

/// `v` with its first nonzero entry made positive.
pub fn sign_canonical(v: &[i64]) -> Label {
    match v.iter().find(|&&x| x != 0) {
        Some(&x) if x < 0 => neg(v),
        _ => v.to_vec(),
    }
}

pub fn equal_up_to_sign(a: &[i64], b: &[i64]) -> bool {
    a == b || a.iter().zip(b).all(|(x, y)| *x == -*y)
}

pub fn to_i64_vec(v: &[BigInt]) -> Result<Label> {
    v.iter()
        .map(|x| x.to_i64().ok_or_else(|| Error::ResourceLimit(format!("label entry {x} exceeds 64 bits"))))
        .collect()
}

/// Finite graph with oriented edges carrying integer labels and rational
/// lengths. Vertices are `0..num_vertices`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LabelledGraph {
    rank: usize,
    num_vertices: usize,
    edges: Vec<Edge>,
}

/// First violated condition found by [`validate`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    BadEndpoint { edge: usize },
    LabelLength { edge: usize },
    EdgeLength { edge: usize },
    Disconnected { unreachable: usize },
    HomologyRank { expected: usize, found: usize },
    LowValence { vertex: usize, valence: usize },
    ZeroLabel { edge: usize },
    SeparatingEdge { edge: usize },
    Flow { vertex: usize, imbalance: Label },
    NotParallel { first: usize, second: usize },
    LabelsNotBasis,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", serde_json::to_string(self).unwrap_or_default())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violation: Option<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violation.is_none()
    }
}

impl LabelledGraph {
    pub fn new(rank: usize, num_vertices: usize, edges: Vec<Edge>) -> Result<Self> {
        for (i, e) in edges.iter().enumerate() {
            if e.src >= num_vertices || e.dst >= num_vertices {
                return Err(Error::InvalidInput(format!("edge {i} has an endpoint out of range")));
            }
            if e.label.len() != rank {
                return Err(Error::InvalidInput(format!("edge {i} label has length {}", e.label.len())));
            }
        }
        Ok(LabelledGraph { rank, num_vertices, edges })
    }

    /// The rose realizing `ρ`: one vertex, loop `i` labelled `v_i`.
    pub fn rose(rho: &RoseCoset) -> Result<Self> {
        let edges =
            (0..rho.rank()).map(|i| Ok(Edge::new(0, 0, to_i64_vec(rho.row(i))?))).collect::<Result<Vec<_>>>()?;
        LabelledGraph::new(rho.rank(), 1, edges)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, i: usize) -> &Edge {
        &self.edges[i]
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn valence(&self, v: usize) -> usize {
        self.edges.iter().map(|e| (e.src == v) as usize + (e.dst == v) as usize).sum()
    }

    /// Copy with edge `i` reversed and its label negated.
    pub fn flip_edge(&self, i: usize) -> Self {
        let mut g = self.clone();
        g.edges[i] = g.edges[i].reversed();
        g
    }

    pub fn with_len(&self, i: usize, len: Rational64) -> Self {
        let mut g = self.clone();
        g.edges[i].len = len;
        g
    }

    /// Components of the graph with the edges in `skip` deleted.
    pub fn components_without(&self, skip: &[usize]) -> usize {
        let mut uf = UnionFind::new(self.num_vertices);
        for (i, e) in self.edges.iter().enumerate() {
            if !skip.contains(&i) {
                uf.union(e.src, e.dst);
            }
        }
        uf.count()
    }

    pub fn is_connected(&self) -> bool {
        self.components_without(&[]) == 1
    }

    pub fn betti_number(&self) -> usize {
        (self.edges.len() + self.components_without(&[])).saturating_sub(self.num_vertices)
    }

    pub fn is_forest(&self, edges: &[usize]) -> bool {
        let mut uf = UnionFind::new(self.num_vertices);
        edges.iter().all(|&i| uf.union(self.edges[i].src, self.edges[i].dst))
    }

    pub fn is_forest_mask(&self, mask: u64) -> bool {
        self.is_forest(&mask_to_vec(mask))
    }

    /// Quotient by a forest. Surviving edges keep their relative order and
    /// labels.
    pub fn collapse(&self, forest: &[usize]) -> Result<LabelledGraph> {
        let mut uf = UnionFind::new(self.num_vertices);
        for &i in forest {
            let e = self.edges.get(i).ok_or_else(|| Error::InvalidForest(format!("no edge {i}")))?;
            if !uf.union(e.src, e.dst) {
                return Err(Error::InvalidForest(format!("edge {i} closes a cycle")));
            }
        }
        let mut ids = vec![usize::MAX; self.num_vertices];
        let mut next = 0;
        for v in 0..self.num_vertices {
            let r = uf.find(v);
            if ids[r] == usize::MAX {
                ids[r] = next;
                next += 1;
            }
            ids[v] = ids[r];
        }
        let edges = self
            .edges
            .iter()
            .enumerate()
            .filter(|(i, _)| !forest.contains(i))
            .map(|(_, e)| Edge { src: ids[e.src], dst: ids[e.dst], label: e.label.clone(), len: e.len })
            .collect();
        Ok(LabelledGraph { rank: self.rank, num_vertices: next, edges })
    }

    /// Every spanning tree, as sorted edge-index lists.
    pub fn spanning_trees(&self) -> Vec<Vec<usize>> {
        let need = self.num_vertices.saturating_sub(1);
        let mut out = Vec::new();
        let mut cur = Vec::new();
        self.trees_rec(0, need, &mut cur, &mut out);
        out
    }

    fn trees_rec(&self, start: usize, need: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == need {
            out.push(cur.clone());
            return;
        }
        for i in start..self.edges.len() {
            if self.edges.len() - i < need - cur.len() {
                break;
            }
            cur.push(i);
            if self.is_forest(cur) {
                self.trees_rec(i + 1, need, cur, out);
            }
            cur.pop();
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "rank": self.rank,
            "vertices": (0..self.num_vertices).collect::<Vec<_>>(),
            "edges": self.edges.iter().map(|e| json!({
                "src": e.src,
                "dst": e.dst,
                "label": e.label,
                "len": e.len.to_string(),
            })).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let perr = |m: &str| Error::Parse(m.to_string());
        let rank = v["rank"].as_u64().ok_or_else(|| perr("missing rank"))? as usize;
        let ids: Vec<Value> = v["vertices"].as_array().ok_or_else(|| perr("missing vertices"))?.clone();
        let key = |x: &Value| x.to_string();
        let index = |x: &Value| -> Result<usize> {
            ids.iter().position(|y| key(y) == key(x)).ok_or_else(|| Error::Parse(format!("unknown vertex {x}")))
        };
        let edges = v["edges"]
            .as_array()
            .ok_or_else(|| perr("missing edges"))?
            .iter()
            .map(|e| {
                let label = e["label"]
                    .as_array()
                    .ok_or_else(|| perr("missing label"))?
                    .iter()
                    .map(|x| x.as_i64().ok_or_else(|| perr("label entries must be integers")))
                    .collect::<Result<Label>>()?;
                let len = match &e["len"] {
                    Value::Null => Rational64::one(),
                    Value::String(s) => parse_rational(s)?,
                    Value::Number(n) => Rational64::from_integer(n.as_i64().ok_or_else(|| perr("bad len"))?),
                    _ => return Err(perr("bad len")),
                };
                Ok(Edge { src: index(&e["src"])?, dst: index(&e["dst"])?, label, len })
            })
            .collect::<Result<Vec<_>>>()?;
        LabelledGraph::new(rank, ids.len(), edges)
    }
}

pub fn parse_rational(s: &str) -> Result<Rational64> {
    let bad = || Error::Parse(format!("bad rational `{s}`"));
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: i64 = p.trim().parse().map_err(|_| bad())?;
            let q: i64 = q.trim().parse().map_err(|_| bad())?;
            if q == 0 {
                return Err(bad());
            }
            Ok(Rational64::new(p, q))
        }
        None => Ok(Rational64::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Check every structural condition on a labelled graph, stopping at the
/// first failure.
pub fn validate(g: &LabelledGraph) -> ValidationReport {
    ValidationReport { violation: first_violation(g) }
}

fn first_violation(g: &LabelledGraph) -> Option<Violation> {
    let n = g.rank;
    for (i, e) in g.edges.iter().enumerate() {
        if e.src >= g.num_vertices || e.dst >= g.num_vertices {
            return Some(Violation::BadEndpoint { edge: i });
        }
        if e.label.len() != n {
            return Some(Violation::LabelLength { edge: i });
        }
        if !(e.len > Rational64::zero() && e.len <= Rational64::one()) {
            return Some(Violation::EdgeLength { edge: i });
        }
    }
    if g.num_vertices == 0 {
        return Some(Violation::Disconnected { unreachable: 0 });
    }
    let mut uf = UnionFind::new(g.num_vertices);
    for e in &g.edges {
        uf.union(e.src, e.dst);
    }
    if let Some(v) = (0..g.num_vertices).find(|&v| uf.find(v) != uf.find(0)) {
        return Some(Violation::Disconnected { unreachable: v });
    }
    let b = g.betti_number();
    if b != n {
        return Some(Violation::HomologyRank { expected: n, found: b });
    }
    for v in 0..g.num_vertices {
        let val = g.valence(v);
        if val < 3 {
            return Some(Violation::LowValence { vertex: v, valence: val });
        }
    }
    for (i, e) in g.edges.iter().enumerate() {
        if e.label.iter().all(|&x| x == 0) {
            return Some(Violation::ZeroLabel { edge: i });
        }
    }
    for (i, e) in g.edges.iter().enumerate() {
        if !e.is_loop() && g.components_without(&[i]) > 1 {
            return Some(Violation::SeparatingEdge { edge: i });
        }
    }
    for v in 0..g.num_vertices {
        let mut net = vec![0i64; n];
        for e in &g.edges {
            if e.dst == v {
                net.iter_mut().zip(&e.label).for_each(|(a, b)| *a += b);
            }
            if e.src == v {
                net.iter_mut().zip(&e.label).for_each(|(a, b)| *a -= b);
            }
        }
        if net.iter().any(|&x| x != 0) {
            return Some(Violation::Flow { vertex: v, imbalance: net });
        }
    }
    for i in 0..g.edges.len() {
        for j in i + 1..g.edges.len() {
            if equal_up_to_sign(&g.edges[i].label, &g.edges[j].label) && g.components_without(&[i, j]) < 2 {
                return Some(Violation::NotParallel { first: i, second: j });
            }
        }
    }
    if n > 0 {
        let rows: Vec<Vec<BigInt>> =
            g.edges.iter().map(|e| e.label.iter().map(|&x| BigInt::from(x)).collect()).collect();
        let basis = match IntMatrix::from_rows(rows) {
            Ok(m) => {
                let f = crate::lattice::invariant_factors(&m);
                f.len() == n && f.iter().all(|x| x.abs().is_one())
            }
            Err(_) => false,
        };
        if !basis {
            return Some(Violation::LabelsNotBasis);
        }
    }
    None
}

/// Cosets of all roses obtained by collapsing a maximal forest.
pub fn roses_whose_star_contains(g: &LabelledGraph) -> Result<BTreeSet<RoseCoset>> {
    let mut out = BTreeSet::new();
    for t in g.spanning_trees() {
        let rose = g.collapse(&t)?;
        let rows = rose.edges.iter().map(|e| e.label.iter().map(|&x| BigInt::from(x)).collect()).collect();
        out.insert(standard_representative(&IntMatrix::from_rows(rows)?)?);
    }
    Ok(out)
}

fn is_unit_length(e: &Edge) -> bool {
    e.len == Rational64::one()
}

/// Every row `v_i` of `ρ` labels some length-1 edge, up to sign.
pub fn in_star(g: &LabelledGraph, rho: &RoseCoset) -> Result<bool> {
    for i in 0..rho.rank() {
        let v = to_i64_vec(rho.row(i))?;
        if !g.edges.iter().any(|e| is_unit_length(e) && equal_up_to_sign(&e.label, &v)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Some length-1 edge is labelled by none of the `±v_i`.
pub fn in_frontier(g: &LabelledGraph, rho: &RoseCoset) -> Result<bool> {
    if !in_star(g, rho)? {
        return Err(Error::Precondition("graph is not in the star of the rose".into()));
    }
    let rows = (0..rho.rank()).map(|i| to_i64_vec(rho.row(i))).collect::<Result<Vec<_>>>()?;
    Ok(g.edges.iter().any(|e| is_unit_length(e) && !rows.iter().any(|v| equal_up_to_sign(&e.label, v))))
}

pub fn mask_to_vec(mask: u64) -> Vec<usize> {
    (0..64).filter(|i| mask >> i & 1 == 1).collect()
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
    sets: usize,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect(), sets: n }
    }

    pub(crate) fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut y = x;
        while self.parent[y] != r {
            let next = self.parent[y];
            self.parent[y] = r;
            y = next;
        }
        r
    }

    /// Returns false if already joined.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        self.sets -= 1;
        true
    }

    pub(crate) fn count(&self) -> usize {
        self.sets
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Two vertices; `v1`, `v2` loops on either side of a pair of parallel
    /// edges labelled `v3`.
    pub(crate) fn two_vertex_graph() -> LabelledGraph {
        LabelledGraph::new(
            3,
            2,
            vec![
                Edge::new(0, 0, vec![1, 0, 0]),
                Edge::new(1, 1, vec![0, 1, 0]),
                Edge::new(0, 1, vec![0, 0, 1]),
                Edge::new(1, 0, vec![0, 0, 1]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn two_vertex_graph_validates() {
        assert!(validate(&two_vertex_graph()).is_ok());
    }

    #[test]
    fn wrong_rank_fails() {
        let g = LabelledGraph::new(2, 1, vec![Edge::new(0, 0, vec![1, 0])]).unwrap();
        assert!(matches!(validate(&g).violation, Some(Violation::HomologyRank { expected: 2, found: 1 })));
    }

    #[test]
    fn flow_violation_has_witness() {
        let mut g = two_vertex_graph();
        g.edges[3].label = vec![0, 0, -1];
        assert!(matches!(validate(&g).violation, Some(Violation::Flow { vertex: 0, .. })));
    }

    #[test]
    fn other_violations() {
        let g = two_vertex_graph().with_len(0, Rational64::new(3, 2));
        assert!(matches!(validate(&g).violation, Some(Violation::EdgeLength { edge: 0 })));
        let mut g = two_vertex_graph();
        g.edges[0].label = vec![2, 0, 0];
        assert_eq!(validate(&g).violation, Some(Violation::LabelsNotBasis));
    }

    #[test]
    fn collapse_examples() {
        let g = two_vertex_graph();
        assert_eq!(g.collapse(&[]).unwrap(), g);
        let r = g.collapse(&[2]).unwrap();
        assert_eq!(r.num_vertices(), 1);
        assert_eq!(
            roses_whose_star_contains(&r).unwrap().into_iter().collect::<Vec<_>>(),
            vec![RoseCoset::identity(3)]
        );
        assert!(matches!(g.collapse(&[2, 3]), Err(Error::InvalidForest(_))));
        assert!(matches!(g.collapse(&[0]), Err(Error::InvalidForest(_))));
    }

    #[test]
    fn star_examples() {
        let g = two_vertex_graph();
        let id = RoseCoset::identity(3);
        let roses: Vec<_> = roses_whose_star_contains(&g).unwrap().into_iter().collect();
        assert_eq!(roses, vec![id.clone()]);
        assert!(in_star(&g, &id).unwrap());
        assert!(!in_frontier(&g, &id).unwrap());
        let rose = LabelledGraph::rose(&id).unwrap();
        assert!(in_star(&rose, &id).unwrap());
        assert!(!in_star(&g.with_len(0, Rational64::new(1, 2)), &id).unwrap());
    }

    #[test]
    fn json_round_trip() {
        let g = two_vertex_graph().with_len(1, Rational64::new(1, 3));
        let v = g.to_json();
        assert_eq!(v["edges"][1]["len"], "1/3");
        assert_eq!(LabelledGraph::from_json(&v).unwrap(), g);
        assert!(LabelledGraph::from_json(&json!({"rank": 1})).is_err());
    }
}
