use std::path::PathBuf;

use crate::analyze::SweepPoint;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed CSV: {0}")]
    Csv(String),

    #[error("invalid schema: {0}")]
    Schema(String),

    #[error("column `{0}` referenced by the schema is not in the CSV header")]
    UnknownColumn(String),

    #[error("row {row}, column `{column}`: code `{value}` is outside 0..={max}")]
    OutOfRange {
        row: usize,
        column: String,
        value: String,
        max: u32,
    },

    #[error("duplicate participant id `{id}` (rows {first} and {second})")]
    DuplicateParticipant {
        id: String,
        first: usize,
        second: usize,
    },

    #[error("survey has no participant rows{0}")]
    EmptySurvey(String),

    #[error("need at least {required} participants, got {got}")]
    TooFewParticipants { required: usize, got: usize },

    #[error("need at least {required} items, got {got}")]
    TooFewItems { required: usize, got: usize },

    #[error("threshold {threshold} lies outside the weight range [{min}, {max}]")]
    ThresholdOutOfRange {
        threshold: String,
        min: String,
        max: String,
    },

    #[error("negative threshold {negative} must be strictly below threshold {threshold}")]
    NegativeThresholdNotBelow { negative: String, threshold: String },

    #[error("no agreement level reaches a giant component of {target} ({} levels swept)", sweep.len())]
    NoGiantComponent {
        target: String,
        sweep: Vec<SweepPoint>,
    },

    #[error("{pairs} participant pairs exceed the materialization budget of {budget}")]
    PairBudget { pairs: u64, budget: u64 },

    #[error("arithmetic overflow: {0}")]
    Overflow(String),

    #[error("cannot parse `{0}` as a decimal or fraction")]
    ParseRational(String),

    #[error("attribute `{attribute}` missing on nodes: {}", nodes.join(", "))]
    MissingAttribute {
        attribute: String,
        nodes: Vec<String>,
    },

    #[error("invalid graph: {0}")]
    Graph(String),

    #[error("GraphML: {0}")]
    GraphMl(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for failures of an algorithm on valid input, as opposed to
    /// invalid input or environment problems.
    pub fn is_algorithmic(&self) -> bool {
        matches!(self, Error::NoGiantComponent { .. } | Error::PairBudget { .. })
    }

    /// Short machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Io { .. } => "io",
            Error::Csv(_) => "csv",
            Error::Schema(_) => "schema",
            Error::UnknownColumn(_) => "unknown_column",
            Error::OutOfRange { .. } => "out_of_range",
            Error::DuplicateParticipant { .. } => "duplicate_participant",
            Error::EmptySurvey(_) => "empty_survey",
            Error::TooFewParticipants { .. } => "too_few_participants",
            Error::TooFewItems { .. } => "too_few_items",
            Error::ThresholdOutOfRange { .. } => "threshold_out_of_range",
            Error::NegativeThresholdNotBelow { .. } => "negative_threshold_not_below",
            Error::NoGiantComponent { .. } => "no_giant_component",
            Error::PairBudget { .. } => "pair_budget",
            Error::Overflow(_) => "overflow",
            Error::ParseRational(_) => "parse_rational",
            Error::MissingAttribute { .. } => "missing_attribute",
            Error::Graph(_) => "graph",
            Error::GraphMl(_) => "graphml",
            Error::InvalidArgument(_) => "invalid_argument",
        }
    }
}
