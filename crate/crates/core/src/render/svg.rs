//! SVG 1.1 figures.
//!
//! Coordinates are mapped into an 800×800 canvas and printed with two
//! decimals, so the bytes depend only on the graph, the layout and the
//! colour scheme.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{EdgeSign, EdgeStyle, ProjectionGraph};
use crate::normalize::NormalizedMatrix;
use crate::rational::int;
use crate::render::graphml::escape_xml;
use crate::render::layout::LayoutResult;

pub const BLUE: &str = "#1f4e9c";
pub const RED: &str = "#c0282d";
pub const YELLOW: &str = "#e6b800";
pub const GREY: &str = "#7f7f7f";

const SIZE: f64 = 800.0;
const MARGIN: f64 = 24.0;

/// Node fills: the value of `attribute` looked up in `colors`, falling back
/// to `default_color`. With no attribute every node gets `default_color`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColorScheme {
    #[serde(default)]
    pub attribute: Option<String>,
    #[serde(default)]
    pub colors: BTreeMap<String, String>,
    #[serde(default = "default_fill")]
    pub default_color: String,
}

fn default_fill() -> String {
    GREY.to_string()
}

impl Default for ColorScheme {
    fn default() -> Self {
        ColorScheme::uniform(GREY)
    }
}

impl ColorScheme {
    pub fn uniform(color: &str) -> Self {
        ColorScheme {
            attribute: None,
            colors: BTreeMap::new(),
            default_color: color.to_string(),
        }
    }

    pub fn by_attribute<'a>(attribute: &str, colors: impl IntoIterator<Item = (&'a str, &'a str)>, default_color: &str) -> Self {
        ColorScheme {
            attribute: Some(attribute.to_string()),
            colors: colors.into_iter().map(|(k, v)| (k.to_string(), v.to_string())).collect(),
            default_color: default_color.to_string(),
        }
    }

    /// `D` blue, `R` red, anything else yellow.
    pub fn party(attribute: &str) -> Self {
        ColorScheme::by_attribute(attribute, [("D", BLUE), ("R", RED)], YELLOW)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidArgument(format!("colour scheme: {e}")))
    }

    fn fills(&self, graph: &ProjectionGraph) -> Result<Vec<&str>> {
        let Some(attr) = &self.attribute else {
            return Ok(vec![self.default_color.as_str(); graph.n_nodes()]);
        };
        let missing: Vec<String> = graph
            .nodes()
            .iter()
            .filter(|n| !n.attributes.contains_key(attr))
            .map(|n| n.id.clone())
            .collect();
        if !missing.is_empty() {
            return Err(Error::MissingAttribute {
                attribute: attr.clone(),
                nodes: missing,
            });
        }
        Ok(graph
            .nodes()
            .iter()
            .map(|n| {
                self.colors
                    .get(&n.attributes[attr])
                    .map_or(self.default_color.as_str(), String::as_str)
            })
            .collect())
    }
}

fn dasharray(style: EdgeStyle) -> &'static str {
    match style {
        EdgeStyle::Solid => "",
        EdgeStyle::Dashed => " stroke-dasharray=\"6,4\"",
        EdgeStyle::Dotted => " stroke-dasharray=\"1.5,3\"",
    }
}

fn header(out: &mut String, width: f64, height: f64) {
    let _ = writeln!(out, "<?xml version=\"1.0\" encoding=\"UTF-8\"?>");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{width:.0}\" height=\"{height:.0}\" viewBox=\"0 0 {width:.0} {height:.0}\">"
    );
    let _ = writeln!(out, "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>");
}

pub fn render_svg(graph: &ProjectionGraph, layout: &LayoutResult, scheme: &ColorScheme) -> Result<String> {
    if layout.positions.len() != graph.n_nodes() {
        return Err(Error::InvalidArgument(format!(
            "layout has {} positions for {} nodes",
            layout.positions.len(),
            graph.n_nodes()
        )));
    }
    let fills = scheme.fills(graph)?;

    let [x0, y0, x1, y1] = layout.bounding_box;
    let span = (x1 - x0).max(y1 - y0);
    let scale = if span > 0.0 { (SIZE - 2.0 * MARGIN) / span } else { 0.0 };
    let px = |p: [f64; 2]| {
        (
            MARGIN + (p[0] - x0) * scale + ((SIZE - 2.0 * MARGIN) - (x1 - x0) * scale) / 2.0,
            MARGIN + (p[1] - y0) * scale + ((SIZE - 2.0 * MARGIN) - (y1 - y0) * scale) / 2.0,
        )
    };
    let radius = (240.0 / (graph.n_nodes().max(1) as f64).sqrt()).clamp(1.5, 8.0);

    let mut out = String::new();
    header(&mut out, SIZE, SIZE);
    out.push_str("<g stroke-width=\"1\" stroke-opacity=\"0.6\">\n");
    for e in graph.edges() {
        let (ax, ay) = px(layout.positions[e.u]);
        let (bx, by) = px(layout.positions[e.v]);
        let color = match e.sign {
            EdgeSign::Positive => BLUE,
            EdgeSign::Negative => RED,
        };
        let _ = writeln!(
            out,
            "<line x1=\"{ax:.2}\" y1=\"{ay:.2}\" x2=\"{bx:.2}\" y2=\"{by:.2}\" stroke=\"{color}\"{}/>",
            dasharray(e.style)
        );
    }
    out.push_str("</g>\n<g stroke=\"#000000\" stroke-width=\"0.5\">\n");
    for (i, node) in graph.nodes().iter().enumerate() {
        let (x, y) = px(layout.positions[i]);
        let _ = writeln!(
            out,
            "<circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"{radius:.2}\" fill=\"{}\"><title>{}</title></circle>",
            escape_xml(fills[i]),
            escape_xml(&node.id)
        );
    }
    out.push_str("</g>\n</svg>\n");
    Ok(out)
}

/// Two-layer drawing of the bipartite response network: items along the
/// top, participants along the bottom, one edge per answered item. Edge
/// colour is the response sign (blue positive, red negative, yellow
/// neutral); extreme answers are solid, all others dashed.
pub fn render_bipartite_svg(matrix: &NormalizedMatrix) -> String {
    let n = matrix.n_participants();
    let m = matrix.n_items();
    let width = SIZE.max(6.0 * n as f64 + 2.0 * MARGIN);
    let height = 400.0;
    let (top, bottom) = (MARGIN + 20.0, height - MARGIN);
    let spread = |i: usize, count: usize| {
        if count <= 1 {
            width / 2.0
        } else {
            MARGIN + i as f64 * (width - 2.0 * MARGIN) / (count - 1) as f64
        }
    };

    let mut out = String::new();
    header(&mut out, width, height);
    out.push_str("<g stroke-width=\"1\" stroke-opacity=\"0.7\">\n");
    for p in 0..n {
        let xp = spread(p, n);
        for (i, v) in matrix.row(p).into_iter().enumerate() {
            let Some(v) = v else { continue };
            let color = if v > int(0) {
                BLUE
            } else if v < int(0) {
                RED
            } else {
                YELLOW
            };
            let style = if v == int(1) || v == int(-1) {
                EdgeStyle::Solid
            } else {
                EdgeStyle::Dashed
            };
            let _ = writeln!(
                out,
                "<line x1=\"{:.2}\" y1=\"{top:.2}\" x2=\"{xp:.2}\" y2=\"{bottom:.2}\" stroke=\"{color}\"{}/>",
                spread(i, m),
                dasharray(style)
            );
        }
    }
    out.push_str("</g>\n<g stroke=\"#000000\" stroke-width=\"0.5\">\n");
    for (i, item) in matrix.items().iter().enumerate() {
        let x = spread(i, m);
        let _ = writeln!(
            out,
            "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"8\" height=\"8\" fill=\"{GREY}\"><title>{}</title></rect>",
            x - 4.0,
            top - 4.0,
            escape_xml(&item.id)
        );
        let _ = writeln!(
            out,
            "<text x=\"{x:.2}\" y=\"{:.2}\" font-size=\"10\" text-anchor=\"middle\" stroke=\"none\">{}</text>",
            top - 10.0,
            escape_xml(&item.id)
        );
    }
    for (p, id) in matrix.source().participants().iter().enumerate() {
        let _ = writeln!(
            out,
            "<circle cx=\"{:.2}\" cy=\"{bottom:.2}\" r=\"3\" fill=\"#ffffff\"><title>{}</title></circle>",
            spread(p, n),
            escape_xml(id)
        );
    }
    out.push_str("</g>\n</svg>\n");
    out
}
