//! GraphML 1.0 import/export.
//!
//! Graph-level keys carry the kind and thresholds (`meta.*` keys carry
//! metadata); node keys carry every attribute plus optional `x`/`y`
//! positions; edge keys carry the exact weight string, its decimal form,
//! sign and style. Keys and nodes are written in a stable order.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use quick_xml::events::{BytesStart, Event};
use quick_xml::Reader;

use crate::error::{Error, Result};
use crate::graph::{GraphKind, Node, ProjectionGraph};
use crate::rational::{format_decimal, format_rational, parse_rational};
use crate::render::layout::LayoutResult;

pub(crate) fn escape_xml(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            '\n' => out.push_str("&#10;"),
            '\r' => out.push_str("&#13;"),
            '\t' => out.push_str("&#9;"),
            c => out.push(c),
        }
    }
    out
}

pub fn to_graphml(graph: &ProjectionGraph, layout: Option<&LayoutResult>) -> String {
    let attr_names: BTreeSet<&str> = graph
        .nodes()
        .iter()
        .flat_map(|n| n.attributes.keys().map(String::as_str))
        .collect();
    let attr_keys: Vec<(&str, String)> = attr_names
        .iter()
        .enumerate()
        .map(|(i, name)| (*name, format!("na{i}")))
        .collect();
    let meta_keys: Vec<(&String, String)> = graph
        .metadata
        .keys()
        .enumerate()
        .map(|(i, name)| (name, format!("gm{i}")))
        .collect();

    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    out.push_str("<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n");
    let key = |out: &mut String, id: &str, for_: &str, name: &str, ty: &str| {
        let _ = writeln!(
            out,
            "  <key id=\"{}\" for=\"{for_}\" attr.name=\"{}\" attr.type=\"{ty}\"/>",
            escape_xml(id),
            escape_xml(name)
        );
    };
    key(&mut out, "g_kind", "graph", "kind", "string");
    key(&mut out, "g_threshold", "graph", "threshold_used", "string");
    key(&mut out, "g_negative_threshold", "graph", "negative_threshold_used", "string");
    for (name, id) in &meta_keys {
        key(&mut out, id, "graph", &format!("meta.{name}"), "string");
    }
    for (name, id) in &attr_keys {
        key(&mut out, id, "node", name, "string");
    }
    if layout.is_some() {
        key(&mut out, "pos_x", "node", "x", "double");
        key(&mut out, "pos_y", "node", "y", "double");
    }
    key(&mut out, "e_weight", "edge", "weight", "string");
    key(&mut out, "e_weight_decimal", "edge", "weight_decimal", "double");
    key(&mut out, "e_sign", "edge", "sign", "string");
    key(&mut out, "e_style", "edge", "style", "string");

    out.push_str("  <graph id=\"G\" edgedefault=\"undirected\">\n");
    let data = |out: &mut String, indent: &str, key: &str, value: &str| {
        let _ = writeln!(out, "{indent}<data key=\"{key}\">{}</data>", escape_xml(value));
    };
    data(&mut out, "    ", "g_kind", graph.kind.as_str());
    data(&mut out, "    ", "g_threshold", &format_rational(&graph.threshold_used));
    if let Some(t) = graph.negative_threshold_used {
        data(&mut out, "    ", "g_negative_threshold", &format_rational(&t));
    }
    for (name, id) in &meta_keys {
        data(&mut out, "    ", id, &graph.metadata[*name]);
    }
    for (i, node) in graph.nodes().iter().enumerate() {
        let _ = writeln!(out, "    <node id=\"{}\">", escape_xml(&node.id));
        for (name, id) in &attr_keys {
            if let Some(v) = node.attributes.get(*name) {
                data(&mut out, "      ", id, v);
            }
        }
        if let Some(l) = layout {
            data(&mut out, "      ", "pos_x", &format!("{:.6}", l.positions[i][0]));
            data(&mut out, "      ", "pos_y", &format!("{:.6}", l.positions[i][1]));
        }
        out.push_str("    </node>\n");
    }
    for e in graph.edges() {
        let _ = writeln!(
            out,
            "    <edge source=\"{}\" target=\"{}\">",
            escape_xml(graph.node_id(e.u)),
            escape_xml(graph.node_id(e.v))
        );
        data(&mut out, "      ", "e_weight", &format_rational(&e.weight));
        data(&mut out, "      ", "e_weight_decimal", &format_decimal(&e.weight));
        data(&mut out, "      ", "e_sign", e.sign.as_str());
        data(&mut out, "      ", "e_style", e.style.as_str());
        out.push_str("    </edge>\n");
    }
    out.push_str("  </graph>\n</graphml>\n");
    out
}

/// A graph read back from GraphML, with positions when the file has them.
#[derive(Clone, Debug)]
pub struct GraphDocument {
    pub graph: ProjectionGraph,
    pub layout: Option<LayoutResult>,
}

#[derive(Default)]
struct PendingEdge {
    source: String,
    target: String,
    data: HashMap<String, String>,
}

enum Scope {
    Graph,
    Node(usize),
    Edge,
}

fn xml_err(e: impl std::fmt::Display) -> Error {
    Error::GraphMl(e.to_string())
}

fn attr(e: &BytesStart<'_>, name: &str) -> Result<Option<String>> {
    for a in e.attributes() {
        let a = a.map_err(xml_err)?;
        if a.key.as_ref() == name {
            let v = a
                .normalized_value(quick_xml::XmlVersion::Implicit1_0)
                .map_err(xml_err)?;
            return Ok(Some(v.into_owned()));
        }
    }
    Ok(None)
}

fn pending_edge(e: &BytesStart<'_>) -> Result<PendingEdge> {
    Ok(PendingEdge {
        source: attr(e, "source")?.ok_or_else(|| xml_err("edge without source"))?,
        target: attr(e, "target")?.ok_or_else(|| xml_err("edge without target"))?,
        data: HashMap::new(),
    })
}

fn resolve_entity(name: &str) -> Option<char> {
    Some(match name {
        "amp" => '&',
        "lt" => '<',
        "gt" => '>',
        "quot" => '"',
        "apos" => '\'',
        _ => return None,
    })
}

pub fn from_graphml(text: &str) -> Result<GraphDocument> {
    let mut reader = Reader::from_str(text);
    // key id -> (for, attr.name)
    let mut keys: HashMap<String, (String, String)> = HashMap::new();
    let mut graph_data: HashMap<String, String> = HashMap::new();
    let mut nodes: Vec<(String, HashMap<String, String>)> = Vec::new();
    let mut edges: Vec<PendingEdge> = Vec::new();
    let mut scope = Scope::Graph;
    let mut current_key: Option<String> = None;
    let mut buffer = String::new();
    let mut saw_graph = false;

    loop {
        match reader.read_event().map_err(xml_err)? {
            Event::Eof => break,
            Event::Start(e) | Event::Empty(e) if e.name().as_ref() == "key" => {
                let id = attr(&e, "id")?.ok_or_else(|| xml_err("key without id"))?;
                let for_ = attr(&e, "for")?.unwrap_or_else(|| "all".into());
                let name = attr(&e, "attr.name")?.unwrap_or_else(|| id.clone());
                keys.insert(id, (for_, name));
            }
            Event::Start(e) if e.name().as_ref() == "graph" => saw_graph = true,
            Event::Start(e) if e.name().as_ref() == "node" => {
                let id = attr(&e, "id")?.ok_or_else(|| xml_err("node without id"))?;
                nodes.push((id, HashMap::new()));
                scope = Scope::Node(nodes.len() - 1);
            }
            Event::Empty(e) if e.name().as_ref() == "node" => {
                let id = attr(&e, "id")?.ok_or_else(|| xml_err("node without id"))?;
                nodes.push((id, HashMap::new()));
            }
            Event::Start(e) if e.name().as_ref() == "edge" => {
                edges.push(pending_edge(&e)?);
                scope = Scope::Edge;
            }
            Event::Empty(e) if e.name().as_ref() == "edge" => edges.push(pending_edge(&e)?),
            Event::Start(e) if e.name().as_ref() == "data" => {
                current_key = Some(attr(&e, "key")?.ok_or_else(|| xml_err("data without key"))?);
                buffer.clear();
            }
            Event::Text(t) if current_key.is_some() => buffer.push_str(&t.xml10_content()),
            Event::GeneralRef(r) if current_key.is_some() => {
                let c = if r.is_char_ref() {
                    r.resolve_char_ref().map_err(xml_err)?
                } else {
                    resolve_entity(&r)
                };
                buffer.push(c.ok_or_else(|| xml_err(format!("unknown entity &{};", &*r)))?);
            }
            Event::CData(c) if current_key.is_some() => {
                buffer.push_str(&c);
            }
            Event::End(e) if e.name().as_ref() == "data" => {
                let key = current_key.take().ok_or_else(|| xml_err("stray </data>"))?;
                let value = std::mem::take(&mut buffer);
                match scope {
                    Scope::Graph => {
                        graph_data.insert(key, value);
                    }
                    Scope::Node(i) => {
                        nodes[i].1.insert(key, value);
                    }
                    Scope::Edge => {
                        edges.last_mut().expect("edge scope").data.insert(key, value);
                    }
                }
            }
            Event::Empty(e) if e.name().as_ref() == "data" => {
                let key = attr(&e, "key")?.ok_or_else(|| xml_err("data without key"))?;
                match scope {
                    Scope::Graph => graph_data.insert(key, String::new()),
                    Scope::Node(i) => nodes[i].1.insert(key, String::new()),
                    Scope::Edge => edges.last_mut().expect("edge scope").data.insert(key, String::new()),
                };
            }
            Event::End(e) if matches!(e.name().as_ref(), "node" | "edge") => scope = Scope::Graph,
            _ => {}
        }
    }
    if !saw_graph {
        return Err(xml_err("no <graph> element"));
    }

    let named = |data: &HashMap<String, String>, wanted: &str| -> Option<String> {
        data.iter()
            .find(|(k, _)| keys.get(*k).map(|(_, n)| n.as_str()) == Some(wanted))
            .map(|(_, v)| v.clone())
    };
    let kind: GraphKind = named(&graph_data, "kind")
        .unwrap_or_else(|| "participant".into())
        .parse()?;
    let threshold = match named(&graph_data, "threshold_used") {
        Some(t) => parse_rational(&t)?,
        None => crate::rational::int(i64::MIN / 4),
    };
    let negative = named(&graph_data, "negative_threshold_used")
        .map(|t| parse_rational(&t))
        .transpose()?;
    let mut metadata = BTreeMap::new();
    for (k, v) in &graph_data {
        if let Some((_, name)) = keys.get(k) {
            if let Some(meta) = name.strip_prefix("meta.") {
                metadata.insert(meta.to_string(), v.clone());
            }
        }
    }

    let mut positions = Vec::with_capacity(nodes.len());
    let mut has_positions = !nodes.is_empty();
    let graph_nodes: Vec<Node> = nodes
        .iter()
        .map(|(id, data)| {
            let mut attributes = BTreeMap::new();
            let mut xy = [None, None];
            for (k, v) in data {
                match k.as_str() {
                    "pos_x" => xy[0] = v.parse::<f64>().ok(),
                    "pos_y" => xy[1] = v.parse::<f64>().ok(),
                    _ => {
                        let name = keys.get(k).map(|(_, n)| n.clone()).unwrap_or_else(|| k.clone());
                        attributes.insert(name, v.clone());
                    }
                }
            }
            match xy {
                [Some(x), Some(y)] => positions.push([x, y]),
                _ => has_positions = false,
            }
            Node {
                id: id.clone(),
                attributes,
            }
        })
        .collect();

    let mut graph = ProjectionGraph::new(kind, graph_nodes, threshold, negative)?;
    graph.metadata = metadata;
    for e in &edges {
        let weight = named(&e.data, "weight").ok_or_else(|| xml_err("edge without weight"))?;
        let sign = named(&e.data, "sign").unwrap_or_else(|| "positive".into());
        let style = named(&e.data, "style").unwrap_or_else(|| "solid".into());
        graph.add_edge_by_id(&e.source, &e.target, parse_rational(&weight)?, sign.parse()?, style.parse()?)?;
    }
    let layout = has_positions.then(|| {
        LayoutResult::from_positions(
            graph.nodes().iter().map(|n| n.id.clone()).collect(),
            positions,
            0,
            0,
        )
    });
    Ok(GraphDocument { graph, layout })
}
