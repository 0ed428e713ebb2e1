//! Exact edge betweenness (Brandes accumulation, unweighted paths).
//!
//! Each unordered node pair contributes once, split equally among all of
//! its shortest paths: on a path `a - b - c` both edges score 2. Values are
//! `f64`; per-source contributions are summed within fixed blocks of
//! source indices and blocks are reduced in index order, so results do not
//! depend on the thread count.

use std::collections::BTreeMap;
use std::collections::VecDeque;

use rayon::prelude::*;

use crate::graph::{EdgeFilter, ProjectionGraph};

const SOURCE_BLOCK: usize = 32;
const BLOCKS_PER_WAVE: usize = 16;

/// Undirected graph with edge ids, used by betweenness and Girvan–Newman.
#[derive(Clone, Debug)]
pub(crate) struct EdgeGraph {
    pub n: usize,
    /// `(u, v)` with `u < v`, graph node indices.
    pub edges: Vec<(usize, usize)>,
    /// `(neighbor, edge id)`, sorted by neighbor.
    pub adj: Vec<Vec<(usize, usize)>>,
}

impl EdgeGraph {
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Self {
        let mut adj = vec![Vec::new(); n];
        for (id, &(u, v)) in edges.iter().enumerate() {
            adj[u].push((v, id));
            adj[v].push((u, id));
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        EdgeGraph { n, edges, adj }
    }

    pub fn from_projection(graph: &ProjectionGraph, filter: EdgeFilter) -> Self {
        let edges = graph
            .edges()
            .iter()
            .filter(|e| filter.admits(e.sign))
            .map(|e| (e.u, e.v))
            .collect();
        Self::new(graph.n_nodes(), edges)
    }
}

struct Workspace {
    dist: Vec<i64>,
    sigma: Vec<f64>,
    delta: Vec<f64>,
    order: Vec<usize>,
    queue: VecDeque<usize>,
}

impl Workspace {
    fn new(n: usize) -> Self {
        Workspace {
            dist: vec![-1; n],
            sigma: vec![0.0; n],
            delta: vec![0.0; n],
            order: Vec::with_capacity(n),
            queue: VecDeque::new(),
        }
    }
}

fn accumulate_source(g: &EdgeGraph, active: &[bool], s: usize, acc: &mut [f64], ws: &mut Workspace) {
    ws.order.clear();
    ws.dist[s] = 0;
    ws.sigma[s] = 1.0;
    ws.queue.push_back(s);
    while let Some(v) = ws.queue.pop_front() {
        ws.order.push(v);
        let dv = ws.dist[v];
        for &(w, e) in &g.adj[v] {
            if !active[e] {
                continue;
            }
            if ws.dist[w] < 0 {
                ws.dist[w] = dv + 1;
                ws.queue.push_back(w);
            }
            if ws.dist[w] == dv + 1 {
                ws.sigma[w] += ws.sigma[v];
            }
        }
    }
    for &w in ws.order.iter().rev() {
        let dw = ws.dist[w];
        let coeff = (1.0 + ws.delta[w]) / ws.sigma[w];
        for &(v, e) in &g.adj[w] {
            if active[e] && ws.dist[v] == dw - 1 {
                let c = ws.sigma[v] * coeff;
                acc[e] += c;
                ws.delta[v] += c;
            }
        }
    }
    for &v in &ws.order {
        ws.dist[v] = -1;
        ws.sigma[v] = 0.0;
        ws.delta[v] = 0.0;
    }
}

/// Betweenness of every edge, counting only paths that start at `sources`
/// (sorted ascending). Inactive edges score zero.
pub(crate) fn betweenness_from_sources(g: &EdgeGraph, active: &[bool], sources: &[usize]) -> Vec<f64> {
    let n_edges = g.edges.len();
    let mut blocks: Vec<&[usize]> = Vec::new();
    let mut start = 0;
    while start < sources.len() {
        let block = sources[start] / SOURCE_BLOCK;
        let mut end = start + 1;
        while end < sources.len() && sources[end] / SOURCE_BLOCK == block {
            end += 1;
        }
        blocks.push(&sources[start..end]);
        start = end;
    }
    let mut total = vec![0.0f64; n_edges];
    for wave in blocks.chunks(BLOCKS_PER_WAVE) {
        let partials: Vec<Vec<f64>> = wave
            .par_iter()
            .map(|block| {
                let mut acc = vec![0.0f64; n_edges];
                let mut ws = Workspace::new(g.n);
                for &s in *block {
                    accumulate_source(g, active, s, &mut acc, &mut ws);
                }
                acc
            })
            .collect();
        for partial in partials {
            for (t, p) in total.iter_mut().zip(partial) {
                *t += p;
            }
        }
    }
    // every unordered pair was counted from both ends
    for t in &mut total {
        *t /= 2.0;
    }
    total
}

pub(crate) fn betweenness_all(g: &EdgeGraph, active: &[bool]) -> Vec<f64> {
    let sources: Vec<usize> = (0..g.n).collect();
    betweenness_from_sources(g, active, &sources)
}

/// Betweenness of each admitted edge as `((u, v), value)` in graph edge order
/// (node indices, `u < v`).
pub fn edge_betweenness_indexed(graph: &ProjectionGraph, filter: EdgeFilter) -> Vec<((usize, usize), f64)> {
    let g = EdgeGraph::from_projection(graph, filter);
    let active = vec![true; g.edges.len()];
    let values = betweenness_all(&g, &active);
    g.edges.iter().copied().zip(values).collect()
}

/// Betweenness of every positive edge keyed by its node ids, the pair
/// ordered lexicographically.
pub fn edge_betweenness(graph: &ProjectionGraph) -> BTreeMap<(String, String), f64> {
    edge_betweenness_indexed(graph, EdgeFilter::PositiveOnly)
        .into_iter()
        .map(|((u, v), b)| (id_pair(graph, u, v), b))
        .collect()
}

pub(crate) fn id_pair(graph: &ProjectionGraph, u: usize, v: usize) -> (String, String) {
    let (a, b) = (graph.node_id(u), graph.node_id(v));
    if a <= b {
        (a.to_string(), b.to_string())
    } else {
        (b.to_string(), a.to_string())
    }
}
