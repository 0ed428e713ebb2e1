//! Survey responses as a participant–item bipartite network.
//!
//! The pipeline runs in five stages, one module each:
//!
//! * [`ingest`] parses a survey CSV against a [`SurveySchema`] into a validated
//!   [`ResponseMatrix`] (the bipartite graph in matrix form).
//! * [`normalize`] maps ordinal codes onto an equally spaced, exact rational
//!   scale in `[-1, +1]` and onto signs.
//! * [`project`] computes pairwise participant weights (exact agreement,
//!   score-based similarity, binarized agreement), thresholds them into
//!   participant projections, and builds the co-endorsement attitude graph.
//! * [`analyze`] finds connected components, picks the agreement threshold
//!   at which a giant component appears, splits graphs with Girvan–Newman
//!   and tallies binarized response profiles.
//! * [`render`] lays graphs out with Fruchterman–Reingold and writes SVG,
//!   GraphML, DOT and edge-list files.
//!
//! All weights and thresholds are exact rationals ([`Rational`]), so
//! inclusive threshold comparisons such as `w >= 23/2` are never subject to
//! floating-point rounding.

pub mod analyze;
pub mod error;
pub mod graph;
pub mod ingest;
pub mod normalize;
pub mod project;
pub mod rational;
pub mod render;
pub mod synth;

pub use analyze::{
    connected_components, edge_betweenness, girvan_newman, profile_census, select_threshold,
    CommunityReport, ComponentReport, GnStatus, ProfileCensus, ThresholdSelection,
};
pub use error::{Error, Result};
pub use graph::{EdgeFilter, EdgeSign, EdgeStyle, GraphKind, Node, ProjectionEdge, ProjectionGraph};
pub use ingest::{load_survey, LoadReport, MissingPolicy, ResponseMatrix, SurveySchema};
pub use normalize::{binarize, renormalize, NormalizedMatrix, SignMatrix};
pub use project::{
    binarized_agreement_weights, exact_agreement_weights, project_attitudes,
    project_participants, score_weights, style_edges, AttitudeGraph, PairKernel, PairSource,
    PairWeights, WeightMode,
};
pub use rational::Rational;
pub use render::{
    fr_layout, render_bipartite_svg, render_svg, to_dot, to_edgelist, to_graphml, ColorScheme,
    LayoutResult,
};
