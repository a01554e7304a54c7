//! Graphviz and TikZ renderings of quivers and dissections.

use std::fmt::Write;

use crate::quiver::GentleAlgebra;
use crate::surface::{DissectedSurface, PolygonKind};

fn dot_id(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// The quiver as a directed graph. Each relation `xy` is drawn as a dotted
/// undirected edge from the source of `x` to the target of `y`.
pub fn algebra_to_dot(alg: &GentleAlgebra) -> String {
    let q = alg.quiver();
    let mut out = String::from("digraph quiver {\n  node [shape=circle];\n");
    for v in 0..q.vertex_count() {
        writeln!(out, "  {};", dot_id(q.vertex_name(v))).unwrap();
    }
    for a in q.arrows() {
        writeln!(
            out,
            "  {} -> {} [label={}];",
            dot_id(q.vertex_name(a.source)),
            dot_id(q.vertex_name(a.target)),
            dot_id(&a.id)
        )
        .unwrap();
    }
    for &(x, y) in alg.relations_in_order() {
        writeln!(
            out,
            "  // relation {}{}\n  {} -> {} [style=dotted, arrowhead=none, constraint=false, label={}];",
            q.arrow(x).id,
            q.arrow(y).id,
            dot_id(q.vertex_name(q.arrow(x).source)),
            dot_id(q.vertex_name(q.arrow(y).target)),
            dot_id(&format!("{}·{} = 0", q.arrow(x).id, q.arrow(y).id))
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}

/// The dual graph of the dissection: one node per polygon and one edge per
/// arc, labelled by the arc name.
pub fn surface_to_dot(s: &DissectedSurface) -> String {
    let mut out = String::from("graph dissection {\n");
    for (i, p) in s.polygons().iter().enumerate() {
        let shape = match p.kind {
            PolygonKind::Boundary => "box",
            PolygonKind::Puncture => "doublecircle",
        };
        writeln!(out, "  P{i} [shape={shape}, label=\"P{i}\"];").unwrap();
    }
    for arc in 0..s.rank() {
        let [a, b] = s.sides(arc);
        writeln!(out, "  P{} -- P{} [label={}];", a.polygon, b.polygon, dot_id(&s.arc_names()[arc])).unwrap();
    }
    out.push_str("}\n");
    out
}

fn tikz_text(s: &str) -> String {
    s.replace('_', "\\_").replace('^', "\\textasciicircum{}")
}

/// The quiver with vertices evenly spaced on a circle.
pub fn algebra_to_tikz(alg: &GentleAlgebra) -> String {
    let q = alg.quiver();
    let n = q.vertex_count().max(1);
    let radius = 1.0 + 0.4 * n as f64;
    let mut out = String::from("\\begin{tikzpicture}[>=stealth]\n");
    for v in 0..q.vertex_count() {
        let angle = 90.0 - 360.0 * v as f64 / n as f64;
        writeln!(out, "  \\node (v{v}) at ({angle:.1}:{radius:.2}) {{${}$}};", tikz_text(q.vertex_name(v))).unwrap();
    }
    for (i, a) in q.arrows().iter().enumerate() {
        let bend = if a.source == a.target {
            "[loop above]".to_string()
        } else {
            let parallel = q.arrows()[..i].iter().filter(|b| b.source == a.source && b.target == a.target).count();
            format!("[bend left={}]", 10 * parallel)
        };
        writeln!(
            out,
            "  \\draw[->] (v{}) to{bend} node[midway, fill=white, inner sep=1pt] {{\\scriptsize ${}$}} (v{});",
            a.source,
            tikz_text(&a.id),
            a.target
        )
        .unwrap();
    }
    let rels: Vec<String> = alg
        .relations_in_order()
        .iter()
        .map(|&(x, y)| format!("{}{}", tikz_text(&q.arrow(x).id), tikz_text(&q.arrow(y).id)))
        .collect();
    if !rels.is_empty() {
        writeln!(out, "  \\node[below] at (0,-{:.2}) {{relations: ${}$}};", radius + 0.6, rels.join(",\\ ")).unwrap();
    }
    out.push_str("\\end{tikzpicture}\n");
    out
}

/// The dual graph of the dissection with polygons on a circle.
pub fn surface_to_tikz(s: &DissectedSurface) -> String {
    let n = s.polygons().len().max(1);
    let radius = 1.0 + 0.5 * n as f64;
    let mut out = String::from("\\begin{tikzpicture}\n");
    for (i, p) in s.polygons().iter().enumerate() {
        let angle = 90.0 - 360.0 * i as f64 / n as f64;
        let style = match p.kind {
            PolygonKind::Boundary => "draw, rectangle",
            PolygonKind::Puncture => "draw, circle, double",
        };
        writeln!(out, "  \\node[{style}] (p{i}) at ({angle:.1}:{radius:.2}) {{$P_{{{i}}}$}};").unwrap();
    }
    for arc in 0..s.rank() {
        let [a, b] = s.sides(arc);
        let path = if a.polygon == b.polygon { "to[loop above]".to_string() } else { "--".to_string() };
        writeln!(
            out,
            "  \\draw (p{}) {path} node[midway, fill=white, inner sep=1pt] {{\\scriptsize ${}$}} (p{});",
            a.polygon,
            tikz_text(&s.arc_names()[arc]),
            b.polygon
        )
        .unwrap();
    }
    out.push_str("\\end{tikzpicture}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn dot_mentions_every_arrow_and_relation() {
        let e = corpus::load("fig2").unwrap();
        let s = e.surface().unwrap();
        let dot = algebra_to_dot(s.algebra());
        let q = s.algebra().quiver();
        assert!(dot.starts_with("digraph"));
        for a in q.arrows() {
            assert!(dot.contains(&format!("label=\"{}\"", a.id)));
        }
        assert_eq!(dot.matches("style=dotted").count(), s.algebra().relations_in_order().len());
        let sd = surface_to_dot(&s);
        assert_eq!(sd.matches(" -- ").count(), s.rank());
    }

    #[test]
    fn one_vertex_and_a3() {
        let one = GentleAlgebra::from_names(&["1"], &[], &[]).unwrap();
        let dot = algebra_to_dot(&one);
        assert_eq!(dot.matches(';').count(), 2);
        assert!(!dot.contains("->"));
        let a3 = corpus::load("fig12-n3").unwrap().expected_algebra().unwrap();
        let dot = algebra_to_dot(&a3);
        assert_eq!(dot.matches("->").count(), 4 + 3);
        assert_eq!(dot.matches("style=dotted").count(), 3);
        assert_eq!(dot, algebra_to_dot(&a3));
    }

    #[test]
    fn tikz_is_balanced() {
        let s = corpus::load("fig12-n3").unwrap().surface().unwrap();
        for t in [algebra_to_tikz(s.algebra()), surface_to_tikz(&s)] {
            assert!(t.starts_with("\\begin{tikzpicture}") && t.trim_end().ends_with("\\end{tikzpicture}"));
            assert_eq!(t.matches('{').count(), t.matches('}').count());
        }
    }
}
