//! Participant and attitude projections of the bipartite survey graph.

mod attitudes;
mod kernel;
mod participants;

pub use attitudes::{project_attitudes, style_edges, thirds_style, AttitudeGraph, AttitudePair};
pub use kernel::{
    binarized_agreement_weights, collect_pairs, exact_agreement_weights, pair_count,
    score_weights, weight_histogram, KernelOptions, PairKernel, PairSource, PairWeights,
    ScoreDenominator, WeightMode, DEFAULT_PAIR_BUDGET,
};
pub use participants::{project_exact_bucketed, project_participants};
