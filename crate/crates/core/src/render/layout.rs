//! Fruchterman–Reingold force-directed layout.
//!
//! Nodes start uniformly on the unit disc (seeded ChaCha8), the ideal edge
//! length is `sqrt(1 / n)`, and the step cap cools linearly from `0.1` to
//! zero. Every node repels every other node; positive edges attract.
//! Per-node displacements are summed in a fixed order, so the result is a
//! pure function of the graph, the seed and the options.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::graph::{EdgeSign, ProjectionGraph};

pub const DEFAULT_SEED: u64 = 1;
pub const DEFAULT_ITERATIONS: usize = 500;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LayoutOptions {
    pub seed: u64,
    pub iterations: usize,
    /// Negative edges push their endpoints apart (off: they exert no force).
    pub repel_negative: bool,
    pub initial_temperature: f64,
}

impl Default for LayoutOptions {
    fn default() -> Self {
        LayoutOptions {
            seed: DEFAULT_SEED,
            iterations: DEFAULT_ITERATIONS,
            repel_negative: false,
            initial_temperature: 0.1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LayoutResult {
    pub ids: Vec<String>,
    /// `[x, y]` per node, in graph node order.
    pub positions: Vec<[f64; 2]>,
    pub seed: u64,
    pub iterations: usize,
    /// `[min_x, min_y, max_x, max_y]`.
    pub bounding_box: [f64; 4],
}

impl LayoutResult {
    pub fn from_positions(ids: Vec<String>, positions: Vec<[f64; 2]>, seed: u64, iterations: usize) -> Self {
        let bounding_box = bounding_box(&positions);
        LayoutResult {
            ids,
            positions,
            seed,
            iterations,
            bounding_box,
        }
    }

    pub fn position(&self, id: &str) -> Option<[f64; 2]> {
        self.ids.iter().position(|x| x == id).map(|i| self.positions[i])
    }
}

fn bounding_box(positions: &[[f64; 2]]) -> [f64; 4] {
    if positions.is_empty() {
        return [0.0; 4];
    }
    positions.iter().fold(
        [f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY],
        |b, p| [b[0].min(p[0]), b[1].min(p[1]), b[2].max(p[0]), b[3].max(p[1])],
    )
}

pub fn fr_layout(graph: &ProjectionGraph, seed: u64, iterations: usize) -> LayoutResult {
    fr_layout_with(
        graph,
        &LayoutOptions {
            seed,
            iterations,
            ..LayoutOptions::default()
        },
    )
}

pub fn fr_layout_with(graph: &ProjectionGraph, options: &LayoutOptions) -> LayoutResult {
    let n = graph.n_nodes();
    let ids: Vec<String> = graph.nodes().iter().map(|n| n.id.clone()).collect();
    if n <= 1 {
        return LayoutResult::from_positions(ids, vec![[0.0, 0.0]; n], options.seed, options.iterations);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let mut pos: Vec<[f64; 2]> = (0..n)
        .map(|_| {
            let r: f64 = rng.gen::<f64>().sqrt();
            let theta: f64 = rng.gen::<f64>() * std::f64::consts::TAU;
            [r * theta.cos(), r * theta.sin()]
        })
        .collect();

    let mut attract: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut repel: Vec<Vec<usize>> = vec![Vec::new(); n];
    for e in graph.edges() {
        let lists = match e.sign {
            EdgeSign::Positive => &mut attract,
            EdgeSign::Negative if options.repel_negative => &mut repel,
            EdgeSign::Negative => continue,
        };
        lists[e.u].push(e.v);
        lists[e.v].push(e.u);
    }
    for l in attract.iter_mut().chain(repel.iter_mut()) {
        l.sort_unstable();
        l.dedup();
    }

    let k = (1.0 / n as f64).sqrt();
    let k2 = k * k;
    for iter in 0..options.iterations {
        let temperature =
            options.initial_temperature * (1.0 - iter as f64 / options.iterations as f64);
        let disp: Vec<[f64; 2]> = (0..n)
            .into_par_iter()
            .map(|v| {
                let [xv, yv] = pos[v];
                let mut dx = 0.0;
                let mut dy = 0.0;
                for (u, p) in pos.iter().enumerate() {
                    if u == v {
                        continue;
                    }
                    let (ex, ey, d) = separation(xv, yv, p, v, u);
                    let f = k2 / d;
                    dx += ex * f;
                    dy += ey * f;
                }
                for &u in &repel[v] {
                    let (ex, ey, d) = separation(xv, yv, &pos[u], v, u);
                    let f = k2 / d;
                    dx += ex * f;
                    dy += ey * f;
                }
                for &u in &attract[v] {
                    let (ex, ey, d) = separation(xv, yv, &pos[u], v, u);
                    let f = d * d / k;
                    dx -= ex * f;
                    dy -= ey * f;
                }
                [dx, dy]
            })
            .collect();
        for (p, d) in pos.iter_mut().zip(&disp) {
            let len = (d[0] * d[0] + d[1] * d[1]).sqrt();
            if len > 0.0 {
                let step = len.min(temperature) / len;
                p[0] += d[0] * step;
                p[1] += d[1] * step;
            }
        }
    }
    LayoutResult::from_positions(ids, pos, options.seed, options.iterations)
}

/// Unit vector from `other` to `(x, y)` and the distance; coincident
/// nodes are separated along the x axis by index order.
#[inline]
fn separation(x: f64, y: f64, other: &[f64; 2], v: usize, u: usize) -> (f64, f64, f64) {
    let dx = x - other[0];
    let dy = y - other[1];
    let d = (dx * dx + dy * dy).sqrt();
    if d < 1e-12 {
        let s = if v < u { -1.0 } else { 1.0 };
        return (s, 0.0, 1e-12);
    }
    (dx / d, dy / d, d)
}
