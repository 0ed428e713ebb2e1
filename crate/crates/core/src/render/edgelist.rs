//! Edge-list CSV: `u,v,weight,weight_decimal,sign,style`, one row per edge
//! in graph order. `weight` is the exact fraction.

use std::io::Write;

use crate::error::{Error, Result};
use crate::graph::ProjectionGraph;
use crate::rational::{format_decimal, format_rational};

pub const EDGELIST_HEADER: [&str; 6] = ["u", "v", "weight", "weight_decimal", "sign", "style"];

pub fn write_edgelist<W: Write>(graph: &ProjectionGraph, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(EDGELIST_HEADER).map_err(csv_err)?;
    for e in graph.edges() {
        w.write_record([
            graph.node_id(e.u),
            graph.node_id(e.v),
            &format_rational(&e.weight),
            &format_decimal(&e.weight),
            e.sign.as_str(),
            e.style.as_str(),
        ])
        .map_err(csv_err)?;
    }
    w.flush().map_err(|e| Error::Csv(e.to_string()))?;
    Ok(())
}

fn csv_err(e: csv::Error) -> Error {
    Error::Csv(e.to_string())
}

pub fn to_edgelist(graph: &ProjectionGraph) -> String {
    let mut buf = Vec::new();
    write_edgelist(graph, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("utf-8 input")
}
