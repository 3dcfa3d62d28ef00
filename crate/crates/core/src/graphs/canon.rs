use std::collections::BTreeMap;

use num_rational::Rational64;

use super::graph::{neg, sign_canonical, Edge, Label, LabelledGraph};

type EdgeKey = (usize, usize, Label, Rational64);

/// Canonical relabelling of a graph: equal keys exactly for graphs that are
/// isomorphic through a map that preserves lengths and preserves labels up
/// to reversing an edge together with negating its label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalForm {
    pub graph: LabelledGraph,
    pub key: String,
    /// Original edge `i` becomes canonical edge `edge_map[i]`.
    pub edge_map: Vec<usize>,
}

fn edge_key(e: &Edge, pi: &[usize]) -> (EdgeKey, bool) {
    let (s, d) = (pi[e.src], pi[e.dst]);
    let flip = if s == d { sign_canonical(&e.label) != e.label } else { d < s };
    if flip {
        ((d, s, neg(&e.label), e.len), true)
    } else {
        ((s, d, e.label.clone(), e.len), false)
    }
}

fn vertex_invariant(g: &LabelledGraph, v: usize) -> (usize, Vec<(bool, Label, Rational64)>) {
    let mut inc: Vec<(bool, Label, Rational64)> = g
        .edges()
        .iter()
        .filter(|e| e.src == v || e.dst == v)
        .map(|e| (e.is_loop(), sign_canonical(&e.label), e.len))
        .collect();
    inc.sort();
    (g.valence(v), inc)
}

/// Vertex orders respecting the invariant classes.
fn candidate_orders(g: &LabelledGraph) -> Vec<Vec<usize>> {
    let mut classes: BTreeMap<_, Vec<usize>> = BTreeMap::new();
    for v in 0..g.num_vertices() {
        classes.entry(vertex_invariant(g, v)).or_default().push(v);
    }
    let mut orders: Vec<Vec<usize>> = vec![Vec::new()];
    for members in classes.into_values() {
        let perms = permutations(&members);
        orders = orders
            .into_iter()
            .flat_map(|o| {
                perms.iter().map(move |p| {
                    let mut o = o.clone();
                    o.extend_from_slice(p);
                    o
                })
            })
            .collect();
    }
    orders
}

pub(crate) fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

struct Labelling {
    keys: Vec<EdgeKey>,
    /// original edge index per sorted slot, with its flip flag
    slots: Vec<(usize, bool)>,
}

fn labelling(g: &LabelledGraph, order: &[usize]) -> Labelling {
    let mut pi = vec![0; g.num_vertices()];
    for (pos, &v) in order.iter().enumerate() {
        pi[v] = pos;
    }
    let mut tagged: Vec<(EdgeKey, usize, bool)> = g
        .edges()
        .iter()
        .enumerate()
        .map(|(i, e)| {
            let (k, f) = edge_key(e, &pi);
            (k, i, f)
        })
        .collect();
    tagged.sort();
    Labelling { keys: tagged.iter().map(|t| t.0.clone()).collect(), slots: tagged.iter().map(|t| (t.1, t.2)).collect() }
}

fn best_labellings(g: &LabelledGraph) -> Vec<Labelling> {
    let mut best: Vec<Labelling> = Vec::new();
    for order in candidate_orders(g) {
        let l = labelling(g, &order);
        match best.first().map(|b| l.keys.cmp(&b.keys)) {
            None | Some(std::cmp::Ordering::Equal) => best.push(l),
            Some(std::cmp::Ordering::Less) => best = vec![l],
            Some(std::cmp::Ordering::Greater) => {}
        }
    }
    best
}

pub fn canonical_form(g: &LabelledGraph) -> CanonicalForm {
    let best = best_labellings(g).swap_remove(0);
    let edges: Vec<Edge> =
        best.keys.iter().map(|(s, d, l, len)| Edge { src: *s, dst: *d, label: l.clone(), len: *len }).collect();
    let mut edge_map = vec![0; g.num_edges()];
    for (slot, &(orig, _)) in best.slots.iter().enumerate() {
        edge_map[orig] = slot;
    }
    let key = encode(g.rank(), g.num_vertices(), &best.keys);
    let graph = LabelledGraph::new(g.rank(), g.num_vertices(), edges).expect("canonical relabelling is well formed");
    CanonicalForm { graph, key, edge_map }
}

pub fn canonical_key(g: &LabelledGraph) -> String {
    canonical_form(g).key
}

fn encode(rank: usize, nv: usize, keys: &[EdgeKey]) -> String {
    let mut s = format!("r{rank}v{nv}");
    for (a, b, l, len) in keys {
        let l: Vec<String> = l.iter().map(i64::to_string).collect();
        s.push_str(&format!("|{a}-{b}:{}:{len}", l.join(",")));
    }
    s
}

/// Label-preserving automorphisms of `g` as permutations of edge indices.
pub fn automorphisms(g: &LabelledGraph) -> Vec<Vec<usize>> {
    let best = best_labellings(g);
    let base = &best[0];
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut start = 0;
    while start < base.keys.len() {
        let mut end = start + 1;
        while end < base.keys.len() && base.keys[end] == base.keys[start] {
            end += 1;
        }
        if end - start > 1 {
            groups.push((start..end).collect());
        }
        start = end;
    }
    let mut slot_perms: Vec<Vec<usize>> = vec![(0..base.keys.len()).collect()];
    for grp in &groups {
        let perms = permutations(grp);
        slot_perms = slot_perms
            .into_iter()
            .flat_map(|sp| {
                perms.iter().map(move |p| {
                    let mut sp = sp.clone();
                    for (a, &b) in grp.iter().zip(p) {
                        sp[*a] = b;
                    }
                    sp
                })
            })
            .collect();
    }
    let mut out: Vec<Vec<usize>> = Vec::new();
    for l in &best {
        for sp in &slot_perms {
            let mut sigma = vec![0; g.num_edges()];
            for (slot, &(orig, _)) in l.slots.iter().enumerate() {
                sigma[orig] = base.slots[sp[slot]].0;
            }
            out.push(sigma);
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Exhaustive isomorphism test over all vertex bijections; independent of
/// the invariant refinement used by [`canonical_form`].
pub fn isomorphic_bruteforce(g: &LabelledGraph, h: &LabelledGraph) -> bool {
    if g.rank() != h.rank() || g.num_vertices() != h.num_vertices() || g.num_edges() != h.num_edges() {
        return false;
    }
    let ident: Vec<usize> = (0..h.num_vertices()).collect();
    let mut target: Vec<EdgeKey> = h.edges().iter().map(|e| edge_key(e, &ident).0).collect();
    target.sort();
    let verts: Vec<usize> = (0..g.num_vertices()).collect();
    permutations(&verts).into_iter().any(|pi| {
        let mut mine: Vec<EdgeKey> = g.edges().iter().map(|e| edge_key(e, &pi).0).collect();
        mine.sort();
        mine == target
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::graph::Edge;

    fn two_vertex_graph() -> LabelledGraph {
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
    fn orientation_flip_is_invisible() {
        let g = two_vertex_graph();
        assert_eq!(canonical_key(&g), canonical_key(&g.flip_edge(2)));
        assert_eq!(canonical_key(&g), canonical_key(&g.flip_edge(0)));
    }

    #[test]
    fn label_change_is_visible() {
        let g = two_vertex_graph();
        let mut h = g.clone();
        h = LabelledGraph::new(3, 2, {
            let mut e = h.edges().to_vec();
            e[0].label = vec![1, 1, 0];
            e
        })
        .unwrap();
        assert_ne!(canonical_key(&g), canonical_key(&h));
    }

    #[test]
    fn swapping_parallel_edges() {
        let g = two_vertex_graph();
        let mut e = g.edges().to_vec();
        e.swap(2, 3);
        let h = LabelledGraph::new(3, 2, e).unwrap();
        assert!(isomorphic_bruteforce(&g, &h));
        assert_eq!(canonical_key(&g), canonical_key(&h));
        assert_eq!(automorphisms(&g).len(), 1);
        let twin = LabelledGraph::new(3, 2, {
            let mut e = g.edges().to_vec();
            e[3] = e[2].clone();
            e
        })
        .unwrap();
        let auts = automorphisms(&twin);
        assert_eq!(auts.len(), 2);
        assert!(auts.contains(&vec![0, 1, 3, 2]));
    }

    #[test]
    fn edge_map_is_consistent() {
        let g = two_vertex_graph().flip_edge(3);
        let c = canonical_form(&g);
        assert_eq!(canonical_form(&c.graph).key, c.key);
        for (i, &j) in c.edge_map.iter().enumerate() {
            assert_eq!(sign_canonical(&g.edge(i).label), sign_canonical(&c.graph.edge(j).label));
        }
    }
}
