//! Layout and export.

mod dot;
mod edgelist;
mod graphml;
mod layout;
mod svg;

use std::path::Path;

pub use dot::to_dot;
pub use edgelist::{to_edgelist, write_edgelist, EDGELIST_HEADER};
pub use graphml::{from_graphml, to_graphml, GraphDocument};
pub use layout::{fr_layout, fr_layout_with, LayoutOptions, LayoutResult, DEFAULT_ITERATIONS, DEFAULT_SEED};
pub use svg::{render_bipartite_svg, render_svg, ColorScheme, BLUE, GREY, RED, YELLOW};

use crate::error::{Error, Result};
use crate::graph::ProjectionGraph;

pub fn write_text(path: impl AsRef<Path>, text: &str) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn export_graphml(graph: &ProjectionGraph, layout: Option<&LayoutResult>, path: impl AsRef<Path>) -> Result<()> {
    write_text(path, &to_graphml(graph, layout))
}

pub fn export_dot(graph: &ProjectionGraph, layout: Option<&LayoutResult>, path: impl AsRef<Path>) -> Result<()> {
    write_text(path, &to_dot(graph, layout))
}

pub fn export_edgelist(graph: &ProjectionGraph, path: impl AsRef<Path>) -> Result<()> {
    write_text(path, &to_edgelist(graph))
}

pub fn import_graphml(path: impl AsRef<Path>) -> Result<GraphDocument> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    from_graphml(&text)
}
