use std::fmt::Write;

use super::canon::canonical_form;
use super::graph::LabelledGraph;

/// Graphviz text for the canonical relabelling of `g`.
pub fn to_dot(g: &LabelledGraph) -> String {
    let c = canonical_form(g).graph;
    let mut s = String::from("digraph G {\n");
    for v in 0..c.num_vertices() {
        let _ = writeln!(s, "  v{v};");
    }
    for e in c.edges() {
        let label: Vec<String> = e.label.iter().map(i64::to_string).collect();
        let _ = writeln!(s, "  v{} -> v{} [label=\"({}) len={}\"];", e.src, e.dst, label.join(","), e.len);
    }
    s.push_str("}\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::RoseCoset;

    #[test]
    fn rose_has_loops() {
        let dot = to_dot(&LabelledGraph::rose(&RoseCoset::identity(3)).unwrap());
        assert_eq!(dot.matches("v0 -> v0").count(), 3);
        assert!(dot.contains("(1,0,0) len=1"));
        assert_eq!(dot, to_dot(&LabelledGraph::rose(&RoseCoset::identity(3)).unwrap()));
    }
}
