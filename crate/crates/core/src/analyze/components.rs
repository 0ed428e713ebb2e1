use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::analyze::union_find::UnionFind;
use crate::graph::{EdgeFilter, ProjectionGraph};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentReport {
    /// Node ids per component, largest first; ties broken by the smallest
    /// member id. Members appear in graph node order.
    pub components: Vec<Vec<String>>,
    #[serde(with = "crate::rational::as_string")]
    pub giant_fraction: Rational,
}

impl ComponentReport {
    pub fn sizes(&self) -> Vec<usize> {
        self.components.iter().map(Vec::len).collect()
    }

    pub fn n_components(&self) -> usize {
        self.components.len()
    }
}

/// Component label per node (labels are arbitrary but dense).
pub(crate) fn component_labels(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Vec<usize> {
    let mut uf = UnionFind::new(n);
    for (u, v) in edges {
        uf.union(u, v);
    }
    (0..n).map(|x| uf.find(x)).collect()
}

pub(crate) fn group_components(graph: &ProjectionGraph, labels: &[usize]) -> ComponentReport {
    let n = graph.n_nodes();
    let mut by_root: HashMap<usize, Vec<usize>> = HashMap::new();
    for (node, &root) in labels.iter().enumerate() {
        by_root.entry(root).or_default().push(node);
    }
    let mut groups: Vec<Vec<String>> = by_root
        .into_values()
        .map(|members| members.into_iter().map(|i| graph.node_id(i).to_string()).collect())
        .collect();
    groups.sort_by(|a, b| {
        b.len()
            .cmp(&a.len())
            .then_with(|| a.iter().min().cmp(&b.iter().min()))
    });
    let largest = groups.first().map_or(0, Vec::len);
    let giant_fraction = if n == 0 {
        Rational::from_integer(0)
    } else {
        Rational::new(largest as i64, n as i64)
    };
    ComponentReport {
        components: groups,
        giant_fraction,
    }
}

pub fn connected_components(graph: &ProjectionGraph, edge_filter: EdgeFilter) -> ComponentReport {
    let labels = component_labels(
        graph.n_nodes(),
        graph
            .edges()
            .iter()
            .filter(|e| edge_filter.admits(e.sign))
            .map(|e| (e.u, e.v)),
    );
    group_components(graph, &labels)
}
