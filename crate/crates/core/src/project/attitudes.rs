use std::collections::BTreeMap;

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{EdgeSign, EdgeStyle, GraphKind, Node, ProjectionGraph};
use crate::normalize::{binarize, NormalizedMatrix};
use crate::rational::{int, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttitudePair {
    pub a: usize,
    pub b: usize,
    /// Participants positive on both items.
    pub pos_count: u64,
    /// Participants negative on both items.
    pub neg_count: u64,
}

/// Co-endorsement counts for every unordered item pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttitudeGraph {
    pub items: Vec<String>,
    /// Participants counted (all rows of the matrix).
    pub n_participants: u64,
    /// Every pair `a < b`, in lexicographic order.
    pub pairs: Vec<AttitudePair>,
}

impl AttitudeGraph {
    pub fn pair(&self, a: usize, b: usize) -> &AttitudePair {
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        let m = self.items.len();
        &self.pairs[a * m - a * (a + 1) / 2 + (b - a - 1)]
    }

    /// `pos_count - neg_count`, in `[-N, N]`.
    pub fn signed_weight(&self, a: usize, b: usize) -> i64 {
        let p = self.pair(a, b);
        p.pos_count as i64 - p.neg_count as i64
    }

    fn empty_graph(&self) -> Result<ProjectionGraph> {
        let nodes = self
            .items
            .iter()
            .map(|id| Node {
                id: id.clone(),
                attributes: BTreeMap::new(),
            })
            .collect();
        let mut g = ProjectionGraph::new(GraphKind::Attitude, nodes, int(1), Some(int(-1)))?;
        g.metadata
            .insert("n_participants".into(), self.n_participants.to_string());
        Ok(g)
    }

    /// Dual-count graph: a positive edge weighted `pos_count` and a negative
    /// edge weighted `-neg_count` per pair, styled by thirds of `N`.
    pub fn to_graph(&self) -> Result<ProjectionGraph> {
        let mut g = self.empty_graph()?;
        for p in &self.pairs {
            if p.pos_count > 0 {
                g.add_edge(p.a, p.b, int(p.pos_count as i64), EdgeSign::Positive, EdgeStyle::Solid)?;
            }
            if p.neg_count > 0 {
                g.add_edge(p.a, p.b, int(-(p.neg_count as i64)), EdgeSign::Negative, EdgeStyle::Solid)?;
            }
        }
        Ok(style_edges(&g, int(self.n_participants as i64)))
    }

    /// Single signed edge `pos_count - neg_count` per pair.
    pub fn to_signed_graph(&self) -> Result<ProjectionGraph> {
        let mut g = self.empty_graph()?;
        g.metadata.insert("attitude_mode".into(), "signed".into());
        for p in &self.pairs {
            let w = p.pos_count as i64 - p.neg_count as i64;
            let sign = if w > 0 {
                EdgeSign::Positive
            } else if w < 0 {
                EdgeSign::Negative
            } else {
                continue;
            };
            g.add_edge(p.a, p.b, int(w), sign, EdgeStyle::Solid)?;
        }
        Ok(style_edges(&g, int(self.n_participants as i64)))
    }
}

pub fn project_attitudes(matrix: &NormalizedMatrix) -> Result<AttitudeGraph> {
    let m = matrix.n_items();
    if m < 2 {
        return Err(Error::TooFewItems {
            required: 2,
            got: m,
        });
    }
    let signs = binarize(matrix);
    let mut pairs: Vec<AttitudePair> = Vec::with_capacity(m * (m - 1) / 2);
    for a in 0..m {
        for b in a + 1..m {
            pairs.push(AttitudePair {
                a,
                b,
                pos_count: 0,
                neg_count: 0,
            });
        }
    }
    for p in 0..signs.n_participants() {
        let row = signs.row(p);
        let mut idx = 0;
        for a in 0..m {
            for b in a + 1..m {
                match (row[a], row[b]) {
                    (1, 1) => pairs[idx].pos_count += 1,
                    (-1, -1) => pairs[idx].neg_count += 1,
                    _ => {}
                }
                idx += 1;
            }
        }
    }
    Ok(AttitudeGraph {
        items: matrix.items().iter().map(|i| i.id.clone()).collect(),
        n_participants: signs.n_participants() as u64,
        pairs,
    })
}

/// Thirds of `(0, scale]`: `(0, s/3]` dotted, `(s/3, 2s/3]` dashed,
/// `(2s/3, s]` solid. Zero is not styled.
pub fn thirds_style(magnitude: Rational, scale: Rational) -> Option<EdgeStyle> {
    if magnitude <= int(0) {
        return None;
    }
    let third = scale / int(3);
    Some(if magnitude <= third {
        EdgeStyle::Dotted
    } else if magnitude <= third * int(2) {
        EdgeStyle::Dashed
    } else {
        EdgeStyle::Solid
    })
}

/// Restyles every edge by the thirds rule on `|weight|` relative to
/// `scale`; zero-weight edges are dropped.
pub fn style_edges(graph: &ProjectionGraph, scale: Rational) -> ProjectionGraph {
    let mut out = graph.clone();
    let kept: Vec<_> = graph
        .edges()
        .iter()
        .filter_map(|e| thirds_style(e.weight.abs(), scale).map(|s| (e.clone(), s)))
        .collect();
    if kept.len() != graph.n_edges() {
        let mut rebuilt = ProjectionGraph::new(
            graph.kind,
            graph.nodes().to_vec(),
            graph.threshold_used,
            graph.negative_threshold_used,
        )
        .expect("node ids already validated");
        rebuilt.metadata = graph.metadata.clone();
        for (e, style) in kept {
            rebuilt
                .add_edge(e.u, e.v, e.weight, e.sign, style)
                .expect("edge already validated");
        }
        return rebuilt;
    }
    for (edge, (_, style)) in out.edges_mut().iter_mut().zip(kept) {
        edge.style = style;
    }
    out
}
