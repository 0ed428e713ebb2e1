//! `surveynet`: survey CSV in, projection graphs, reports and figures out.
//!
//! Exit status is 0 on success, 2 for invalid input or arguments and 3 when
//! an algorithm cannot produce a result on valid input. Failures print a
//! JSON error block on stderr.

mod commands;
mod manifest;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

#[derive(Debug)]
pub enum CliError {
    Core(surveynet::Error),
    Usage(String),
}

impl CliError {
    pub fn io(path: &Path, e: std::io::Error) -> Self {
        CliError::Core(surveynet::Error::Io {
            path: path.to_path_buf(),
            source: e,
        })
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_algorithmic() => 3,
            _ => 2,
        }
    }

    fn block(&self) -> serde_json::Value {
        match self {
            CliError::Core(e) => {
                let mut block = json!({ "kind": e.kind(), "message": e.to_string() });
                match e {
                    surveynet::Error::NoGiantComponent { sweep, .. } => block["sweep"] = json!(sweep),
                    surveynet::Error::MissingAttribute { nodes, .. } => block["nodes"] = json!(nodes),
                    _ => {}
                }
                json!({ "error": block })
            }
            CliError::Usage(msg) => json!({ "error": { "kind": "usage", "message": msg } }),
        }
    }
}

impl From<surveynet::Error> for CliError {
    fn from(e: surveynet::Error) -> Self {
        CliError::Core(e)
    }
}

#[derive(Parser, Debug)]
#[command(name = "surveynet", version, about = "Opinion networks from survey responses")]
struct Cli {
    /// Worker threads (outputs do not depend on it).
    #[arg(long, global = true, env = "SURVEYNET_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct SurveyArgs {
    /// Survey CSV with a header row.
    #[arg(long)]
    pub survey: PathBuf,
    /// JSON schema naming the id column, attribute columns and items.
    #[arg(long)]
    pub schema: PathBuf,
    /// What to do with participants who skipped items.
    #[arg(long, value_enum, default_value_t = Missing::Drop)]
    pub missing: Missing,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Missing {
    /// Drop any participant with a missing answer.
    Drop,
    /// Keep them; pair weights use co-answered items only.
    Keep,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Score,
    Binarized,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScoreScale {
    /// Range `[-co, co]` over co-answered items.
    CoAnswered,
    /// Stretch to `[-m, m]`.
    Rescale,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Summarize a survey: participants, items, scales, missingness.
    Inspect {
        #[command(flatten)]
        survey: SurveyArgs,
        /// Print JSON instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Project participants into an agreement graph.
    Project(commands::ProjectArgs),
    /// Item co-endorsement graph.
    Attitudes(commands::AttitudeArgs),
    /// Split a graph with Girvan–Newman.
    Communities(commands::CommunityArgs),
    /// Tally binarized response profiles.
    Census {
        #[command(flatten)]
        survey: SurveyArgs,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Lay out a GraphML graph and draw it as SVG.
    Render(commands::RenderArgs),
    /// Draw the participant–item network in two layers.
    RenderBipartite {
        #[command(flatten)]
        survey: SurveyArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write a synthetic block survey and its schema.
    Generate(commands::GenerateArgs),
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
    }
    match cli.command {
        Command::Inspect { survey, json } => commands::inspect(&survey, json),
        Command::Project(args) => commands::project(&args),
        Command::Attitudes(args) => commands::attitudes(&args),
        Command::Communities(args) => commands::communities(&args),
        Command::Census { survey, out_dir } => commands::census(&survey, &out_dir),
        Command::Render(args) => commands::render(&args),
        Command::RenderBipartite { survey, out } => commands::render_bipartite(&survey, &out),
        Command::Generate(args) => commands::generate(&args),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", serde_json::to_string_pretty(&e.block()).expect("error block"));
            ExitCode::from(e.exit_code())
        }
    }
}
