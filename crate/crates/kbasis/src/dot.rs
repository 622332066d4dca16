//! DOT export for graphs and embeddings; layout is non-contractual.

use crate::embedding::OnePlaneEmbedding;
use crate::graph::Graph;

pub fn graph_to_dot(g: &Graph) -> String {
    let mut out = String::from("graph {\n  node [shape=circle];\n");
    for v in g.vertices() {
        out.push_str(&format!("  v{v};\n"));
    }
    for e in g.edges() {
        out.push_str(&format!("  v{} -- v{} [label=\"{}\"];\n", e.u, e.v, e.id));
    }
    out.push_str("}\n");
    out
}

/// Planarization view: dummy crossing vertices drawn as small squares,
/// crossed edges split into their segments.
pub fn embedding_to_dot(emb: &OnePlaneEmbedding) -> String {
    let plan = emb.planarize();
    let mut out = String::from("graph {\n  node [shape=circle];\n");
    for v in emb.graph.vertices() {
        out.push_str(&format!("  v{v};\n"));
    }
    for d in emb.dummies.keys() {
        out.push_str(&format!(
            "  v{d} [shape=box, width=0.15, height=0.15, label=\"\"];\n"
        ));
    }
    for s in &plan.segs {
        out.push_str(&format!("  v{} -- v{} [label=\"{}\"];\n", s.a, s.b, s.edge));
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dot_mentions_dummies_as_boxes() {
        let emb = crate::embedding::tests::k4_crossing();
        let dot = embedding_to_dot(&emb);
        assert!(dot.contains("shape=box"));
        assert!(dot.lines().filter(|l| l.contains("--")).count() == 8);
        let plain = graph_to_dot(&emb.graph);
        assert!(plain.lines().filter(|l| l.contains("--")).count() == 6);
    }
}
