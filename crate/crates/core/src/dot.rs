//! Deterministic DOT emission for dual graphs and pairs.

use crate::dualgraph::{CurveKind, DualGraph};
use crate::pair::SurfacePair;

fn sort_key(kind: CurveKind) -> (u8, u32) {
    match kind {
        CurveKind::StrictBoundary => (0, 0),
        CurveKind::Exceptional { birth } => (1, birth),
    }
}

/// Renders a graph as DOT: vertices sorted by (kind, birth, id), labels
/// `id (self_int)`.  Byte-identical across runs for equal inputs.
pub fn emit_dot(g: &DualGraph) -> String {
    let mut out = String::from("graph dual {\n");
    let mut vs: Vec<_> = g.vertices().collect();
    vs.sort_by_key(|v| (sort_key(v.kind), v.id.clone()));
    for v in vs {
        out.push_str(&format!("  \"{}\" [label=\"{} ({})\"];\n", v.id, v.id, v.self_int));
    }
    for (a, b) in g.edges() {
        out.push_str(&format!("  \"{a}\" -- \"{b}\";\n"));
    }
    out.push_str("}\n");
    out
}

/// Like [`emit_dot`], with singularity chains grouped into clusters.
pub fn emit_dot_pair(p: &SurfacePair) -> String {
    let g = &p.resolution;
    let mut out = String::from("graph pair {\n");
    let mut vs: Vec<_> = g.vertices().collect();
    vs.sort_by_key(|v| (sort_key(v.kind), v.id.clone()));
    let chain_member = |id: &crate::dualgraph::CurveId| {
        p.chains.iter().position(|c| c.curves.contains(id))
    };
    for v in vs.iter().filter(|v| chain_member(&v.id).is_none()) {
        out.push_str(&format!("  \"{}\" [label=\"{} ({})\"];\n", v.id, v.id, v.self_int));
    }
    for (i, chain) in p.chains.iter().enumerate() {
        out.push_str(&format!("  subgraph cluster_sing{} {{\n", i + 1));
        out.push_str(&format!("    label=\"{}\";\n", chain.hj_type(g).expect("valid chain")));
        for id in &chain.curves {
            let v = g.vertex(id).expect("chain curve present");
            out.push_str(&format!("    \"{}\" [label=\"{} ({})\"];\n", v.id, v.id, v.self_int));
        }
        out.push_str("  }\n");
    }
    for (a, b) in g.edges() {
        out.push_str(&format!("  \"{a}\" -- \"{b}\";\n"));
    }
    out.push_str("}\n");
    out
}
