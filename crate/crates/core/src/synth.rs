//! Seeded synthetic surveys and planted graphs for tests, demos and
//! benchmarks.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{EdgeSign, EdgeStyle, GraphKind, Node, ProjectionGraph};
use crate::ingest::{Item, ResponseMatrix, SurveySchema};
use crate::rational::int;

/// Participants drawn around block prototypes: each answer copies the
/// block prototype, except that with probability `noise` it is redrawn
/// uniformly, and with probability `missing_rate` it is left blank.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockSurveySpec {
    pub scales: Vec<u32>,
    pub block_sizes: Vec<usize>,
    /// One prototype row per block; generated at random when empty.
    #[serde(default)]
    pub prototypes: Vec<Vec<u32>>,
    pub noise: f64,
    #[serde(default)]
    pub missing_rate: f64,
    pub seed: u64,
}

impl BlockSurveySpec {
    pub fn new(scales: Vec<u32>, block_sizes: Vec<usize>, noise: f64, seed: u64) -> Self {
        BlockSurveySpec {
            scales,
            block_sizes,
            prototypes: Vec::new(),
            noise,
            missing_rate: 0.0,
            seed,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SyntheticSurvey {
    pub matrix: ResponseMatrix,
    pub schema: SurveySchema,
    /// Planted block of each participant.
    pub labels: Vec<usize>,
}

/// Attribute column written by the generator; blocks 0, 1, 2, … map to
/// `D`, `R`, `I`, `I`, ….
pub const BLOCK_ATTRIBUTE: &str = "party";

fn block_party(b: usize) -> &'static str {
    match b {
        0 => "D",
        1 => "R",
        _ => "I",
    }
}

pub fn block_survey(spec: &BlockSurveySpec) -> Result<SyntheticSurvey> {
    let m = spec.scales.len();
    if !(0.0..=1.0).contains(&spec.noise) || !(0.0..1.0).contains(&spec.missing_rate) {
        return Err(Error::InvalidArgument("noise must lie in [0, 1] and missing_rate in [0, 1)".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let prototypes: Vec<Vec<u32>> = if spec.prototypes.is_empty() {
        (0..spec.block_sizes.len())
            .map(|_| spec.scales.iter().map(|&k| rng.gen_range(0..k)).collect())
            .collect()
    } else {
        if spec.prototypes.len() != spec.block_sizes.len()
            || spec.prototypes.iter().any(|p| p.len() != m)
        {
            return Err(Error::InvalidArgument("one prototype of length m per block".into()));
        }
        spec.prototypes.clone()
    };

    let n: usize = spec.block_sizes.iter().sum();
    let width = n.to_string().len();
    let mut labels = Vec::with_capacity(n);
    let mut rows = Vec::with_capacity(n);
    for (b, &size) in spec.block_sizes.iter().enumerate() {
        for _ in 0..size {
            let row: Vec<Option<u32>> = spec
                .scales
                .iter()
                .zip(&prototypes[b])
                .map(|(&k, &code)| {
                    if rng.gen::<f64>() < spec.missing_rate {
                        None
                    } else if rng.gen::<f64>() < spec.noise {
                        Some(rng.gen_range(0..k))
                    } else {
                        Some(code)
                    }
                })
                .collect();
            rows.push(row);
            labels.push(b);
        }
    }
    let items: Vec<Item> = spec
        .scales
        .iter()
        .enumerate()
        .map(|(i, &k)| Item::new(format!("q{:02}", i + 1), k))
        .collect();
    let participants = (0..n).map(|p| format!("r{:0width$}", p + 1)).collect();
    let attributes = labels
        .iter()
        .map(|&b| BTreeMap::from([(BLOCK_ATTRIBUTE.to_string(), block_party(b).to_string())]))
        .collect();
    let matrix = ResponseMatrix::new(
        participants,
        items.clone(),
        &rows,
        vec![BLOCK_ATTRIBUTE.to_string()],
        attributes,
    )?;
    let schema = SurveySchema::new("respondent", items)
        .with_attributes([BLOCK_ATTRIBUTE])
        .with_missing_token("NA");
    Ok(SyntheticSurvey {
        matrix,
        schema,
        labels,
    })
}

/// Planted-partition participant graph: edges inside each block appear
/// independently with probability `p_in`, and exactly `cross_edges`
/// distinct edges join different blocks. All weights are 1.
pub fn planted_partition(
    block_sizes: &[usize],
    p_in: f64,
    cross_edges: usize,
    seed: u64,
) -> Result<(ProjectionGraph, Vec<usize>)> {
    let labels: Vec<usize> = block_sizes
        .iter()
        .enumerate()
        .flat_map(|(b, &s)| std::iter::repeat(b).take(s))
        .collect();
    let n = labels.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nodes = labels
        .iter()
        .enumerate()
        .map(|(i, &b)| Node {
            id: format!("v{i:04}"),
            attributes: BTreeMap::from([("block".to_string(), b.to_string())]),
        })
        .collect();
    let mut g = ProjectionGraph::new(GraphKind::Participant, nodes, int(1), None)?;
    let mut cross = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if labels[u] == labels[v] {
                if rng.gen::<f64>() < p_in {
                    g.add_edge(u, v, int(1), EdgeSign::Positive, EdgeStyle::Solid)?;
                }
            } else {
                cross.push((u, v));
            }
        }
    }
    if cross_edges > cross.len() {
        return Err(Error::InvalidArgument(format!(
            "{cross_edges} cross edges requested, only {} pairs available",
            cross.len()
        )));
    }
    let (chosen, _) = cross.partial_shuffle(&mut rng, cross_edges);
    let mut chosen = chosen.to_vec();
    chosen.sort_unstable();
    for (u, v) in chosen {
        g.add_edge(u, v, int(1), EdgeSign::Positive, EdgeStyle::Solid)?;
    }
    g.sort_edges();
    Ok((g, labels))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn noiseless_blocks_copy_prototypes() {
        let mut spec = BlockSurveySpec::new(vec![4, 5, 2], vec![3, 2], 0.0, 9);
        spec.prototypes = vec![vec![0, 4, 1], vec![3, 2, 0]];
        let s = block_survey(&spec).unwrap();
        assert_eq!(s.labels, vec![0, 0, 0, 1, 1]);
        assert_eq!(s.matrix.code(4, 1), Some(2));
        assert_eq!(s.matrix.attributes(3)[BLOCK_ATTRIBUTE], "R");
        s.schema.validate().unwrap();
    }

    #[test]
    fn seeded() {
        let mut spec = BlockSurveySpec::new(vec![4; 6], vec![20, 20], 0.3, 5);
        spec.missing_rate = 0.1;
        let a = block_survey(&spec).unwrap().matrix;
        assert_eq!(a, block_survey(&spec).unwrap().matrix);
        assert!(a.has_missing());
    }

    #[test]
    fn planted_cross_edges_exact() {
        let (g, labels) = planted_partition(&[10, 10], 0.5, 3, 1).unwrap();
        let cross = g.edges().iter().filter(|e| labels[e.u] != labels[e.v]).count();
        assert_eq!(cross, 3);
    }
}
