//! Graphviz DOT export. Edge `style` mirrors the style class; colour is
//! blue for positive and red for negative edges.

use std::fmt::Write as _;

use crate::graph::{EdgeSign, ProjectionGraph};
use crate::rational::{format_decimal, format_rational};
use crate::render::layout::LayoutResult;
use crate::render::svg::{BLUE, RED};

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => {}
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

pub fn to_dot(graph: &ProjectionGraph, layout: Option<&LayoutResult>) -> String {
    let mut out = String::from("graph G {\n");
    let _ = write!(
        out,
        "  graph [kind={}, threshold={}",
        quote(graph.kind.as_str()),
        quote(&format_rational(&graph.threshold_used))
    );
    if let Some(t) = graph.negative_threshold_used {
        let _ = write!(out, ", negative_threshold={}", quote(&format_rational(&t)));
    }
    out.push_str("];\n  node [shape=circle];\n");
    for (i, node) in graph.nodes().iter().enumerate() {
        let mut attrs: Vec<String> = node
            .attributes
            .iter()
            .map(|(k, v)| format!("{}={}", quote(k), quote(v)))
            .collect();
        if let Some(l) = layout {
            let [x, y] = l.positions[i];
            attrs.push(format!("pos={}", quote(&format!("{x:.6},{y:.6}!"))));
        }
        if attrs.is_empty() {
            let _ = writeln!(out, "  {};", quote(&node.id));
        } else {
            let _ = writeln!(out, "  {} [{}];", quote(&node.id), attrs.join(", "));
        }
    }
    for e in graph.edges() {
        let color = match e.sign {
            EdgeSign::Positive => BLUE,
            EdgeSign::Negative => RED,
        };
        let _ = writeln!(
            out,
            "  {} -- {} [weight={}, weight_decimal={}, sign={}, style={}, color={}];",
            quote(graph.node_id(e.u)),
            quote(graph.node_id(e.v)),
            quote(&format_rational(&e.weight)),
            quote(&format_decimal(&e.weight)),
            quote(e.sign.as_str()),
            quote(e.style.as_str()),
            quote(color)
        );
    }
    out.push_str("}\n");
    out
}
