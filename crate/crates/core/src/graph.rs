//! Signed, styled one-mode graphs produced by the projections.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{format_rational, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GraphKind {
    Participant,
    Attitude,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeSign {
    Positive,
    Negative,
}

/// Line style class. For attitude graphs it encodes which third of
/// `[0, N]` the count falls in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeStyle {
    Solid,
    Dashed,
    Dotted,
}

macro_rules! str_enum {
    ($ty:ident { $($variant:ident => $name:literal),+ $(,)? }) => {
        impl $ty {
            pub fn as_str(self) -> &'static str {
                match self { $($ty::$variant => $name),+ }
            }
        }
        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }
        impl FromStr for $ty {
            type Err = Error;
            fn from_str(s: &str) -> Result<Self> {
                match s {
                    $($name => Ok($ty::$variant),)+
                    other => Err(Error::Graph(format!(
                        concat!("unknown ", stringify!($ty), " `{}`"), other
                    ))),
                }
            }
        }
    };
}

str_enum!(GraphKind { Participant => "participant", Attitude => "attitude" });
str_enum!(EdgeSign { Positive => "positive", Negative => "negative" });
str_enum!(EdgeStyle { Solid => "solid", Dashed => "dashed", Dotted => "dotted" });

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Node {
    pub id: String,
    pub attributes: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProjectionEdge {
    /// Node indices with `u < v`.
    pub u: usize,
    pub v: usize,
    #[serde(with = "crate::rational::as_string")]
    pub weight: Rational,
    pub sign: EdgeSign,
    pub style: EdgeStyle,
}

/// Which edges count as connections.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeFilter {
    /// Negative edges express disagreement and are ignored.
    #[default]
    PositiveOnly,
    All,
}

impl EdgeFilter {
    pub fn admits(self, sign: EdgeSign) -> bool {
        matches!(self, EdgeFilter::All) || sign == EdgeSign::Positive
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectionGraph {
    pub kind: GraphKind,
    nodes: Vec<Node>,
    edges: Vec<ProjectionEdge>,
    pub threshold_used: Rational,
    pub negative_threshold_used: Option<Rational>,
    /// Free-form metadata (mode, item count, participant count, ...).
    pub metadata: BTreeMap<String, String>,
    index: HashMap<String, usize>,
    relations: HashSet<(usize, usize, EdgeSign)>,
}

impl ProjectionGraph {
    pub fn new(
        kind: GraphKind,
        nodes: Vec<Node>,
        threshold_used: Rational,
        negative_threshold_used: Option<Rational>,
    ) -> Result<Self> {
        let mut index = HashMap::with_capacity(nodes.len());
        for (i, node) in nodes.iter().enumerate() {
            if index.insert(node.id.clone(), i).is_some() {
                return Err(Error::Graph(format!("duplicate node id `{}`", node.id)));
            }
        }
        Ok(ProjectionGraph {
            kind,
            nodes,
            edges: Vec::new(),
            threshold_used,
            negative_threshold_used,
            metadata: BTreeMap::new(),
            index,
            relations: HashSet::new(),
        })
    }

    /// Graph over nodes with the given ids and no attributes.
    pub fn with_ids<S: Into<String>>(
        kind: GraphKind,
        ids: impl IntoIterator<Item = S>,
        threshold_used: Rational,
    ) -> Result<Self> {
        let nodes = ids
            .into_iter()
            .map(|id| Node {
                id: id.into(),
                attributes: BTreeMap::new(),
            })
            .collect();
        Self::new(kind, nodes, threshold_used, None)
    }

    pub fn add_edge(
        &mut self,
        a: usize,
        b: usize,
        weight: Rational,
        sign: EdgeSign,
        style: EdgeStyle,
    ) -> Result<()> {
        let n = self.nodes.len();
        if a >= n || b >= n {
            return Err(Error::Graph(format!("edge ({a}, {b}) references a missing node")));
        }
        if a == b {
            return Err(Error::Graph(format!("self-loop on `{}`", self.nodes[a].id)));
        }
        let (u, v) = if a < b { (a, b) } else { (b, a) };
        match sign {
            EdgeSign::Positive if weight < self.threshold_used => {
                return Err(Error::Graph(format!(
                    "positive edge weight {} below threshold {}",
                    format_rational(&weight),
                    format_rational(&self.threshold_used)
                )))
            }
            EdgeSign::Negative => match self.negative_threshold_used {
                Some(t) if weight <= t => {}
                _ => {
                    return Err(Error::Graph(format!(
                        "negative edge weight {} not at or below the negative threshold",
                        format_rational(&weight)
                    )))
                }
            },
            _ => {}
        }
        let other = match sign {
            EdgeSign::Positive => EdgeSign::Negative,
            EdgeSign::Negative => EdgeSign::Positive,
        };
        if self.relations.contains(&(u, v, sign))
            || (self.kind == GraphKind::Participant && self.relations.contains(&(u, v, other)))
        {
            return Err(Error::Graph(format!(
                "duplicate relation between `{}` and `{}`",
                self.nodes[u].id, self.nodes[v].id
            )));
        }
        self.relations.insert((u, v, sign));
        self.edges.push(ProjectionEdge {
            u,
            v,
            weight,
            sign,
            style,
        });
        Ok(())
    }

    pub fn add_edge_by_id(
        &mut self,
        a: &str,
        b: &str,
        weight: Rational,
        sign: EdgeSign,
        style: EdgeStyle,
    ) -> Result<()> {
        let u = self.require(a)?;
        let v = self.require(b)?;
        self.add_edge(u, v, weight, sign, style)
    }

    fn require(&self, id: &str) -> Result<usize> {
        self.index_of(id)
            .ok_or_else(|| Error::Graph(format!("unknown node `{id}`")))
    }

    pub fn n_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn edges(&self) -> &[ProjectionEdge] {
        &self.edges
    }

    pub(crate) fn edges_mut(&mut self) -> &mut [ProjectionEdge] {
        &mut self.edges
    }

    pub fn node_id(&self, index: usize) -> &str {
        &self.nodes[index].id
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn count_edges(&self, filter: EdgeFilter) -> usize {
        self.edges.iter().filter(|e| filter.admits(e.sign)).count()
    }

    /// Sorted, deduplicated neighbor lists over the admitted edges.
    pub fn adjacency(&self, filter: EdgeFilter) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.nodes.len()];
        for e in self.edges.iter().filter(|e| filter.admits(e.sign)) {
            adj[e.u].push(e.v);
            adj[e.v].push(e.u);
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        adj
    }

    /// Canonical edge ordering: by `(u, v, sign)`.
    pub fn sort_edges(&mut self) {
        self.edges.sort_by(|a, b| (a.u, a.v, a.sign).cmp(&(b.u, b.v, b.sign)));
    }

    /// Structural equality up to edge order.
    pub fn same_as(&self, other: &ProjectionGraph) -> bool {
        let mut a = self.clone();
        let mut b = other.clone();
        a.sort_edges();
        b.sort_edges();
        a == b
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn rejects_invalid_edges() {
        let mut g = ProjectionGraph::with_ids(GraphKind::Participant, ["a", "b", "c"], int(2)).unwrap();
        assert!(g.add_edge(0, 0, int(3), EdgeSign::Positive, EdgeStyle::Solid).is_err());
        assert!(g.add_edge(0, 1, int(1), EdgeSign::Positive, EdgeStyle::Solid).is_err());
        assert!(g.add_edge(0, 1, int(-5), EdgeSign::Negative, EdgeStyle::Solid).is_err());
        g.add_edge(1, 0, int(2), EdgeSign::Positive, EdgeStyle::Solid).unwrap();
        assert_eq!((g.edges()[0].u, g.edges()[0].v), (0, 1));
        assert!(g.add_edge(0, 1, int(3), EdgeSign::Positive, EdgeStyle::Solid).is_err());
    }

    #[test]
    fn participant_graphs_hold_one_relation_per_pair() {
        let mut g = ProjectionGraph::new(
            GraphKind::Participant,
            vec![
                Node { id: "a".into(), attributes: BTreeMap::new() },
                Node { id: "b".into(), attributes: BTreeMap::new() },
            ],
            int(2),
            Some(int(-1)),
        )
        .unwrap();
        g.add_edge(0, 1, int(-3), EdgeSign::Negative, EdgeStyle::Solid).unwrap();
        assert!(g.add_edge(0, 1, int(3), EdgeSign::Positive, EdgeStyle::Solid).is_err());
        g.kind = GraphKind::Attitude;
        g.add_edge(0, 1, int(3), EdgeSign::Positive, EdgeStyle::Solid).unwrap();
    }

    #[test]
    fn duplicate_node_ids() {
        assert!(ProjectionGraph::with_ids(GraphKind::Participant, ["a", "a"], int(0)).is_err());
    }

    #[test]
    fn adjacency_respects_filter() {
        let mut g = ProjectionGraph::new(
            GraphKind::Participant,
            ["a", "b", "c"]
                .iter()
                .map(|s| Node { id: s.to_string(), attributes: BTreeMap::new() })
                .collect(),
            int(1),
            Some(int(-1)),
        )
        .unwrap();
        g.add_edge(0, 1, int(1), EdgeSign::Positive, EdgeStyle::Solid).unwrap();
        g.add_edge(1, 2, int(-1), EdgeSign::Negative, EdgeStyle::Solid).unwrap();
        assert_eq!(g.adjacency(EdgeFilter::PositiveOnly), vec![vec![1], vec![0], vec![]]);
        assert_eq!(g.adjacency(EdgeFilter::All), vec![vec![1], vec![0, 2], vec![1]]);
    }
}
