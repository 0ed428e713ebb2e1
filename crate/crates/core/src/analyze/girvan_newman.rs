//! Girvan–Newman splitting: repeatedly delete the edge of highest
//! betweenness until the graph falls apart into the requested number of
//! components.
//!
//! Betweenness is recomputed after every deletion, but only inside the
//! component that lost the edge; other components keep bit-identical values.
//! Ties (relative difference within `1e-9`) go to the lexicographically
//! smallest pair of node ids.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::analyze::betweenness::{betweenness_all, betweenness_from_sources, id_pair, EdgeGraph};
use crate::analyze::components::{component_labels, group_components};
use crate::error::{Error, Result};
use crate::graph::{EdgeFilter, ProjectionGraph};
use crate::rational::{int, Rational};

const TIE_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GnStatus {
    /// The input already had enough components; nothing was removed.
    AlreadySplit,
    Split,
    /// The removal budget ran out (or no edges were left) before the split.
    BudgetExhausted,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Removal {
    pub edge: (String, String),
    pub betweenness: f64,
    pub n_components: usize,
    pub largest_component: usize,
    /// Component sizes (descending), recorded when the count changed.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub component_sizes: Option<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CommunityReport {
    pub status: GnStatus,
    pub removed_edges: Vec<(String, String)>,
    pub original_edges: usize,
    #[serde(with = "crate::rational::as_string")]
    pub removed_fraction: Rational,
    pub final_components: Vec<Vec<String>>,
    pub history: Vec<Removal>,
}

impl CommunityReport {
    pub fn final_sizes(&self) -> Vec<usize> {
        self.final_components.iter().map(Vec::len).collect()
    }
}

fn count_distinct(labels: &[usize]) -> usize {
    labels.iter().collect::<HashSet<_>>().len()
}

fn sizes_desc(labels: &[usize]) -> Vec<usize> {
    let mut counts = std::collections::HashMap::new();
    for &l in labels {
        *counts.entry(l).or_insert(0usize) += 1;
    }
    let mut sizes: Vec<usize> = counts.into_values().collect();
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    sizes
}

/// Splits the positive-edge graph into at least `target_components`
/// components, removing at most `floor(max_removed_fraction · E)` edges.
pub fn girvan_newman(
    graph: &ProjectionGraph,
    target_components: usize,
    max_removed_fraction: Rational,
) -> Result<CommunityReport> {
    if target_components == 0 {
        return Err(Error::InvalidArgument("target_components must be at least 1".into()));
    }
    if max_removed_fraction < int(0) || max_removed_fraction > int(1) {
        return Err(Error::InvalidArgument("max_removed_fraction must lie in [0, 1]".into()));
    }
    let g = EdgeGraph::from_projection(graph, EdgeFilter::PositiveOnly);
    let n_edges = g.edges.len();
    let budget = (max_removed_fraction * int(n_edges as i64)).floor().to_integer() as usize;
    let mut active = vec![true; n_edges];
    let active_edges = |active: &[bool]| -> Vec<(usize, usize)> {
        g.edges
            .iter()
            .zip(active)
            .filter(|(_, &a)| a)
            .map(|(&e, _)| e)
            .collect()
    };

    let mut labels = component_labels(g.n, active_edges(&active));
    let mut n_components = count_distinct(&labels);
    let mut betweenness = if n_components < target_components {
        betweenness_all(&g, &active)
    } else {
        vec![0.0; n_edges]
    };
    let mut removed: Vec<usize> = Vec::new();
    let mut history = Vec::new();

    let status = loop {
        if n_components >= target_components {
            break if removed.is_empty() {
                GnStatus::AlreadySplit
            } else {
                GnStatus::Split
            };
        }
        if removed.len() >= budget || removed.len() == n_edges {
            break GnStatus::BudgetExhausted;
        }
        let best = pick_edge(graph, &g, &active, &betweenness);
        let (u, v) = g.edges[best];
        let value = betweenness[best];
        active[best] = false;
        removed.push(best);

        labels = component_labels(g.n, active_edges(&active));
        let previous = n_components;
        n_components = count_distinct(&labels);
        let (lu, lv) = (labels[u], labels[v]);
        let sources: Vec<usize> = (0..g.n).filter(|&x| labels[x] == lu || labels[x] == lv).collect();
        let updated = betweenness_from_sources(&g, &active, &sources);
        for (e, &(a, _)) in g.edges.iter().enumerate() {
            if labels[a] == lu || labels[a] == lv {
                betweenness[e] = if active[e] { updated[e] } else { 0.0 };
            }
        }
        let sizes = sizes_desc(&labels);
        history.push(Removal {
            edge: id_pair(graph, u, v),
            betweenness: value,
            n_components,
            largest_component: sizes[0],
            component_sizes: (n_components != previous).then_some(sizes),
        });
    };

    let report = group_components(graph, &labels);
    Ok(CommunityReport {
        status,
        removed_edges: removed
            .iter()
            .map(|&e| id_pair(graph, g.edges[e].0, g.edges[e].1))
            .collect(),
        original_edges: n_edges,
        removed_fraction: if n_edges == 0 {
            int(0)
        } else {
            Rational::new(removed.len() as i64, n_edges as i64)
        },
        final_components: report.components,
        history,
    })
}

fn pick_edge(graph: &ProjectionGraph, g: &EdgeGraph, active: &[bool], betweenness: &[f64]) -> usize {
    let max = betweenness
        .iter()
        .zip(active)
        .filter(|(_, &a)| a)
        .map(|(&b, _)| b)
        .fold(f64::NEG_INFINITY, f64::max);
    let tol = TIE_TOLERANCE * max.abs().max(1.0);
    (0..g.edges.len())
        .filter(|&e| active[e] && max - betweenness[e] <= tol)
        .min_by(|&a, &b| {
            let (au, av) = g.edges[a];
            let (bu, bv) = g.edges[b];
            id_pair(graph, au, av).cmp(&id_pair(graph, bu, bv))
        })
        .expect("at least one active edge")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{EdgeSign, EdgeStyle, GraphKind};

    fn graph(n: usize, edges: &[(usize, usize)]) -> ProjectionGraph {
        let mut g = ProjectionGraph::with_ids(GraphKind::Participant, (0..n).map(|i| format!("n{i:02}")), int(1)).unwrap();
        for &(u, v) in edges {
            g.add_edge(u, v, int(1), EdgeSign::Positive, EdgeStyle::Solid).unwrap();
        }
        g
    }

    fn barbell() -> ProjectionGraph {
        let mut edges = Vec::new();
        for base in [0, 4] {
            for i in 0..4 {
                for j in i + 1..4 {
                    edges.push((base + i, base + j));
                }
            }
        }
        edges.push((3, 4));
        graph(8, &edges)
    }

    #[test]
    fn barbell_loses_its_bridge() {
        let r = girvan_newman(&barbell(), 2, int(1)).unwrap();
        assert_eq!(r.status, GnStatus::Split);
        assert_eq!(r.removed_edges, vec![("n03".to_string(), "n04".to_string())]);
        assert_eq!(r.removed_fraction, Rational::new(1, 13));
        assert_eq!(r.final_sizes(), vec![4, 4]);
        assert_eq!(r.history[0].betweenness, 16.0);
    }

    #[test]
    fn disconnected_input_returns_immediately() {
        let g = graph(4, &[(0, 1), (2, 3)]);
        let r = girvan_newman(&g, 2, int(1)).unwrap();
        assert_eq!(r.status, GnStatus::AlreadySplit);
        assert!(r.removed_edges.is_empty());
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let r = girvan_newman(&barbell(), 2, int(0)).unwrap();
        assert_eq!(r.status, GnStatus::BudgetExhausted);
        assert!(r.removed_edges.is_empty());
        let cycle = graph(4, &[(0, 1), (1, 2), (2, 3), (0, 3)]);
        let r = girvan_newman(&cycle, 2, Rational::new(1, 4)).unwrap();
        assert_eq!(r.status, GnStatus::BudgetExhausted);
        assert_eq!(r.removed_edges.len(), 1);
    }

    #[test]
    fn ties_break_on_smallest_id_pair() {
        let cycle = graph(4, &[(2, 3), (1, 2), (0, 3), (0, 1)]);
        let r = girvan_newman(&cycle, 2, int(1)).unwrap();
        assert_eq!(r.removed_edges[0], ("n00".to_string(), "n01".to_string()));
        assert_eq!(r.removed_edges.len(), 2);
    }

    #[test]
    fn incremental_matches_full_recomputation() {
        // two 5-cycles joined twice plus chords
        let edges = [
            (0, 1), (1, 2), (2, 3), (3, 4), (0, 4), (0, 2),
            (5, 6), (6, 7), (7, 8), (8, 9), (5, 9), (6, 8),
            (4, 5), (2, 7),
        ];
        let g = graph(10, &edges);
        let r = girvan_newman(&g, 4, int(1)).unwrap();
        // replay with full recomputation
        let eg = EdgeGraph::from_projection(&g, EdgeFilter::PositiveOnly);
        let mut active = vec![true; eg.edges.len()];
        for removed in &r.removed_edges {
            let full = betweenness_all(&eg, &active);
            let e = pick_edge(&g, &eg, &active, &full);
            assert_eq!(&id_pair(&g, eg.edges[e].0, eg.edges[e].1), removed);
            active[e] = false;
        }
    }
}
