use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::Args;
use serde_json::json;
use surveynet::analyze::{labels_from_components, rand_index};
use surveynet::project::{project_exact_bucketed, KernelOptions, PairKernel, ScoreDenominator};
use surveynet::rational::{format_decimal, format_rational, parse_rational};
use surveynet::render::{
    fr_layout_with, import_graphml, render_bipartite_svg, render_svg, to_dot, to_edgelist,
    to_graphml, write_text, ColorScheme, LayoutOptions,
};
use surveynet::synth::{block_survey, BlockSurveySpec};
use surveynet::{
    binarize, connected_components, girvan_newman, load_survey, profile_census, project_attitudes,
    project_participants, renormalize, select_threshold, EdgeFilter, LoadReport, MissingPolicy,
    PairSource, ProjectionGraph, Rational, ResponseMatrix, SurveySchema,
};

use crate::manifest::RunManifest;
use crate::{CliError, Missing, Mode, ScoreScale, SurveyArgs};

type Result<T> = std::result::Result<T, CliError>;

fn rational(name: &str, text: &str) -> Result<Rational> {
    parse_rational(text).map_err(|_| CliError::Usage(format!("--{name}: `{text}` is not a number or fraction")))
}

fn load(args: &SurveyArgs) -> Result<(ResponseMatrix, LoadReport)> {
    let schema = SurveySchema::from_path(&args.schema)?;
    let policy = match args.missing {
        Missing::Drop => MissingPolicy::DropParticipant,
        Missing::Keep => MissingPolicy::KeepPairwise,
    };
    Ok(load_survey(&args.survey, &schema, policy)?)
}

fn survey_manifest(command: &str, args: &SurveyArgs) -> Result<RunManifest> {
    let mut m = RunManifest::new(command);
    m.input(&args.survey)?.schema(&args.schema)?;
    m.param("missing", format!("{:?}", args.missing).to_lowercase());
    Ok(m)
}

fn create_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
}

/// Writes GraphML, edge-list CSV and DOT files for `graph` under `dir`.
fn write_graph(graph: &ProjectionGraph, dir: &Path, name: &str) -> Result<Vec<PathBuf>> {
    let files = [
        (dir.join(format!("{name}.graphml")), to_graphml(graph, None)),
        (dir.join(format!("{name}.edges.csv")), to_edgelist(graph)),
        (dir.join(format!("{name}.dot")), to_dot(graph, None)),
    ];
    let mut paths = Vec::new();
    for (path, text) in files {
        write_text(&path, &text)?;
        paths.push(path);
    }
    Ok(paths)
}

fn write_json(path: &Path, value: &impl serde::Serialize) -> Result<()> {
    let text = serde_json::to_string_pretty(value).expect("serializable report") + "\n";
    Ok(write_text(path, &text)?)
}

pub fn inspect(args: &SurveyArgs, as_json: bool) -> Result<()> {
    let (x, report) = load(args)?;
    if as_json {
        let summary = json!({
            "n_participants": x.n_participants(),
            "n_items": x.n_items(),
            "scales": x.scale_counts(),
            "scale_summary": x.scale_summary(),
            "attribute_columns": x.attribute_columns(),
            "rows_read": report.rows_read,
            "rows_dropped": report.rows_dropped,
            "missing_cells": report.missing_cells,
            "missing_policy": report.policy,
        });
        println!("{}", serde_json::to_string_pretty(&summary).expect("summary"));
    } else {
        println!("N={}, m={}, scales: {}", x.n_participants(), x.n_items(), x.scale_summary());
        println!("rows read: {}, dropped: {}", report.rows_read, report.rows_dropped);
        println!("missing cells kept: {}", report.missing_cells);
        if !x.attribute_columns().is_empty() {
            println!("attributes: {}", x.attribute_columns().join(", "));
        }
    }
    Ok(())
}

#[derive(Args, Debug)]
pub struct ProjectArgs {
    #[command(flatten)]
    pub survey: SurveyArgs,
    #[arg(long, value_enum, default_value_t = Mode::Exact)]
    pub mode: Mode,
    /// Minimum weight for a positive edge, or `auto` to pick the highest
    /// level with a giant component.
    #[arg(long)]
    pub threshold: String,
    /// Giant-component fraction required by `--threshold auto`.
    #[arg(long, default_value = "1/2")]
    pub target_fraction: String,
    /// Add negative edges for weights at or below this value.
    #[arg(long, allow_hyphen_values = true)]
    pub negative_threshold: Option<String>,
    #[arg(long, value_enum, default_value_t = ScoreScale::CoAnswered)]
    pub score_scale: ScoreScale,
    /// Binarized mode: two neutral answers do not count as agreement.
    #[arg(long)]
    pub neutral_disagrees: bool,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
    /// Base name of the output files.
    #[arg(long, default_value = "participants")]
    pub name: String,
}

pub fn project(args: &ProjectArgs) -> Result<()> {
    let (x, report) = load(&args.survey)?;
    let options = KernelOptions {
        neutral_agrees: !args.neutral_disagrees,
        score_denominator: match args.score_scale {
            ScoreScale::CoAnswered => ScoreDenominator::CoAnswered,
            ScoreScale::Rescale => ScoreDenominator::RescaleToItems,
        },
    };
    let kernel = match args.mode {
        Mode::Exact => PairKernel::exact(&x)?,
        Mode::Score => PairKernel::score(&renormalize(&x), options)?,
        Mode::Binarized => PairKernel::binarized(&binarize(&renormalize(&x)), options)?,
    };
    let negative = args
        .negative_threshold
        .as_deref()
        .map(|t| rational("negative-threshold", t))
        .transpose()?;
    create_dir(&args.out_dir)?;
    let mut outputs = Vec::new();

    let selection = if args.threshold.trim() == "auto" {
        let target = rational("target-fraction", &args.target_fraction)?;
        let sel = select_threshold(&kernel, target)?;
        let path = args.out_dir.join(format!("{}.sweep.csv", args.name));
        write_text(&path, &sel.sweep_csv())?;
        outputs.push(path);
        Some(sel)
    } else {
        None
    };
    let threshold = match &selection {
        Some(sel) => sel.chosen_threshold,
        None => rational("threshold", &args.threshold)?,
    };

    let bucketed = match (args.mode, negative) {
        (Mode::Exact, None) => project_exact_bucketed(&x, threshold)?,
        _ => None,
    };
    let graph = match bucketed {
        Some(g) => g,
        None => project_participants(&kernel, threshold, negative)?,
    };
    let components = connected_components(&graph, EdgeFilter::PositiveOnly);
    outputs.extend(write_graph(&graph, &args.out_dir, &args.name)?);

    let summary = json!({
        "mode": kernel.mode(),
        "n_participants": graph.n_nodes(),
        "n_items": x.n_items(),
        "rows_dropped": report.rows_dropped,
        "threshold": format_rational(&threshold),
        "negative_threshold": negative.map(|t| format_rational(&t)),
        "edges": graph.n_edges(),
        "positive_edges": graph.count_edges(EdgeFilter::PositiveOnly),
        "selection": selection,
        "components": components,
    });
    let report_path = args.out_dir.join(format!("{}.report.json", args.name));
    write_json(&report_path, &summary)?;
    outputs.push(report_path);

    let mut manifest = survey_manifest("project", &args.survey)?;
    manifest
        .param("mode", kernel.mode())
        .param("threshold", args.threshold.trim())
        .param("threshold_used", format_rational(&threshold))
        .param("target_fraction", &args.target_fraction)
        .param("negative_threshold", negative.map(|t| format_rational(&t)))
        .param("score_scale", format!("{:?}", args.score_scale).to_lowercase())
        .param("neutral_agrees", options.neutral_agrees);
    manifest.finish(&outputs, &args.out_dir.join(format!("{}.manifest.json", args.name)))?;

    println!(
        "threshold {} ({}): {} participants, {} edges, giant component {}/{}",
        format_rational(&threshold),
        kernel.mode().as_str(),
        graph.n_nodes(),
        graph.n_edges(),
        components.sizes().first().copied().unwrap_or(0),
        graph.n_nodes()
    );
    Ok(())
}

#[derive(Args, Debug)]
pub struct AttitudeArgs {
    #[command(flatten)]
    pub survey: SurveyArgs,
    /// One signed edge per item pair instead of separate positive and
    /// negative edges.
    #[arg(long)]
    pub signed: bool,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
    #[arg(long, default_value = "attitudes")]
    pub name: String,
}

pub fn attitudes(args: &AttitudeArgs) -> Result<()> {
    let (x, _) = load(&args.survey)?;
    let att = project_attitudes(&renormalize(&x))?;
    let graph = if args.signed { att.to_signed_graph()? } else { att.to_graph()? };
    create_dir(&args.out_dir)?;
    let mut outputs = write_graph(&graph, &args.out_dir, &args.name)?;
    let counts = args.out_dir.join(format!("{}.counts.json", args.name));
    write_json(&counts, &att)?;
    outputs.push(counts);
    let mut manifest = survey_manifest("attitudes", &args.survey)?;
    manifest.param("signed", args.signed);
    manifest.finish(&outputs, &args.out_dir.join(format!("{}.manifest.json", args.name)))?;
    println!(
        "{} items, {} participants, {} edges",
        graph.n_nodes(),
        att.n_participants,
        graph.n_edges()
    );
    Ok(())
}

#[derive(Args, Debug)]
pub struct CommunityArgs {
    /// GraphML file written by `project` (or any GraphML with weights).
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long, default_value_t = 2)]
    pub target: usize,
    /// Stop after removing this fraction of the positive edges.
    #[arg(long, default_value = "1")]
    pub max_removed_fraction: String,
    /// Node attribute holding reference labels; reports the Rand index.
    #[arg(long)]
    pub compare_attribute: Option<String>,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
    #[arg(long, default_value = "communities")]
    pub name: String,
}

pub fn communities(args: &CommunityArgs) -> Result<()> {
    let doc = import_graphml(&args.graph)?;
    let graph = doc.graph;
    let budget = rational("max-removed-fraction", &args.max_removed_fraction)?;
    let report = girvan_newman(&graph, args.target, budget)?;
    let ids: Vec<String> = graph.nodes().iter().map(|n| n.id.clone()).collect();
    let labels = labels_from_components(&report.final_components, &ids);

    let rand = match &args.compare_attribute {
        Some(attr) => {
            let missing: Vec<String> = graph
                .nodes()
                .iter()
                .filter(|n| !n.attributes.contains_key(attr))
                .map(|n| n.id.clone())
                .collect();
            if !missing.is_empty() {
                return Err(surveynet::Error::MissingAttribute {
                    attribute: attr.clone(),
                    nodes: missing,
                }
                .into());
            }
            let mut codes = BTreeMap::new();
            let reference: Vec<usize> = graph
                .nodes()
                .iter()
                .map(|n| {
                    let next = codes.len();
                    *codes.entry(n.attributes[attr].clone()).or_insert(next)
                })
                .collect();
            Some(rand_index(&labels, &reference))
        }
        None => None,
    };

    // the input graph with a `community` attribute per node
    let mut labelled = ProjectionGraph::new(
        graph.kind,
        graph
            .nodes()
            .iter()
            .zip(&labels)
            .map(|(n, &c)| {
                let mut n = n.clone();
                n.attributes.insert("community".into(), c.to_string());
                n
            })
            .collect(),
        graph.threshold_used,
        graph.negative_threshold_used,
    )?;
    labelled.metadata = graph.metadata.clone();
    for e in graph.edges() {
        labelled.add_edge(e.u, e.v, e.weight, e.sign, e.style)?;
    }

    create_dir(&args.out_dir)?;
    let report_path = args.out_dir.join(format!("{}.json", args.name));
    let mut value = serde_json::to_value(&report).expect("report");
    if let Some(ri) = rand {
        value["rand_index"] = json!(format_rational(&ri));
        value["rand_index_decimal"] = json!(format_decimal(&ri));
    }
    write_json(&report_path, &value)?;
    let graph_path = args.out_dir.join(format!("{}.graphml", args.name));
    write_text(&graph_path, &to_graphml(&labelled, None))?;

    let mut manifest = RunManifest::new("communities");
    manifest.input(&args.graph)?;
    manifest
        .param("target", args.target)
        .param("max_removed_fraction", &args.max_removed_fraction)
        .param("compare_attribute", &args.compare_attribute);
    manifest.finish(&[report_path, graph_path], &args.out_dir.join(format!("{}.manifest.json", args.name)))?;

    println!(
        "{:?}: removed {} of {} edges ({}), component sizes {:?}",
        report.status,
        report.removed_edges.len(),
        report.original_edges,
        format_rational(&report.removed_fraction),
        report.final_sizes()
    );
    if let Some(ri) = rand {
        println!("Rand index vs `{}`: {}", args.compare_attribute.as_deref().unwrap_or(""), format_decimal(&ri));
    }
    Ok(())
}

pub fn census(args: &SurveyArgs, out_dir: &Path) -> Result<()> {
    let (x, _) = load(args)?;
    let census = profile_census(&binarize(&renormalize(&x)))?;
    create_dir(out_dir)?;
    let path = out_dir.join("census.json");
    write_json(&path, &census)?;
    survey_manifest("census", args)?.finish(&[path], &out_dir.join("census.manifest.json"))?;
    println!(
        "{} distinct profiles over {} items ({} of possible profiles)",
        census.distinct,
        census.m_binary,
        format_rational(&census.realized_fraction)
    );
    Ok(())
}

#[derive(Args, Debug)]
pub struct RenderArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = surveynet::render::DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, default_value_t = surveynet::render::DEFAULT_ITERATIONS)]
    pub iterations: usize,
    /// Node attribute used for fills. Without `--color`, `D` is blue, `R`
    /// red and any other value yellow.
    #[arg(long)]
    pub color_attribute: Option<String>,
    /// `VALUE=COLOR` fill for the colour attribute (repeatable).
    #[arg(long = "color", value_name = "VALUE=COLOR")]
    pub colors: Vec<String>,
    /// Fill for nodes whose value has no `--color` entry.
    #[arg(long)]
    pub default_color: Option<String>,
    /// JSON colour scheme (`attribute`, `colors`, `default_color`).
    #[arg(long, conflicts_with_all = ["color_attribute", "colors", "default_color"])]
    pub scheme: Option<PathBuf>,
    /// Negative edges push their endpoints apart.
    #[arg(long)]
    pub repel_negative: bool,
    /// Also write the graph with positions as GraphML.
    #[arg(long)]
    pub layout_out: Option<PathBuf>,
}

fn color_scheme(args: &RenderArgs) -> Result<ColorScheme> {
    if let Some(path) = &args.scheme {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        return Ok(ColorScheme::from_json(&text)?);
    }
    let Some(attr) = &args.color_attribute else {
        if !args.colors.is_empty() {
            return Err(CliError::Usage("--color needs --color-attribute".into()));
        }
        return Ok(match &args.default_color {
            Some(c) => ColorScheme::uniform(c),
            None => ColorScheme::default(),
        });
    };
    let mut scheme = ColorScheme::party(attr);
    if !args.colors.is_empty() {
        scheme.colors.clear();
        for entry in &args.colors {
            let (value, color) = entry
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("--color `{entry}` is not VALUE=COLOR")))?;
            scheme.colors.insert(value.to_string(), color.to_string());
        }
    }
    if let Some(c) = &args.default_color {
        scheme.default_color = c.clone();
    }
    Ok(scheme)
}

pub fn render(args: &RenderArgs) -> Result<()> {
    let scheme = color_scheme(args)?;
    let doc = import_graphml(&args.graph)?;
    let options = LayoutOptions {
        seed: args.seed,
        iterations: args.iterations,
        repel_negative: args.repel_negative,
        ..LayoutOptions::default()
    };
    let layout = fr_layout_with(&doc.graph, &options);
    let svg = render_svg(&doc.graph, &layout, &scheme)?;
    write_text(&args.out, &svg)?;
    let mut outputs = vec![args.out.clone()];
    if let Some(path) = &args.layout_out {
        write_text(path, &to_graphml(&doc.graph, Some(&layout)))?;
        outputs.push(path.clone());
    }
    let mut manifest = RunManifest::new("render");
    manifest.input(&args.graph)?;
    manifest
        .param("seed", args.seed)
        .param("iterations", args.iterations)
        .param("repel_negative", args.repel_negative)
        .param("color_scheme", &scheme);
    manifest.finish(&outputs, &sidecar(&args.out))?;
    println!("{} nodes, {} edges -> {}", doc.graph.n_nodes(), doc.graph.n_edges(), args.out.display());
    Ok(())
}

fn sidecar(out: &Path) -> PathBuf {
    let mut name = out.file_name().unwrap_or_default().to_os_string();
    name.push(".manifest.json");
    out.with_file_name(name)
}

pub fn render_bipartite(args: &SurveyArgs, out: &Path) -> Result<()> {
    let (x, _) = load(args)?;
    write_text(out, &render_bipartite_svg(&renormalize(&x)))?;
    survey_manifest("render-bipartite", args)?.finish(&[out.to_path_buf()], &sidecar(out))?;
    println!("{} participants × {} items -> {}", x.n_participants(), x.n_items(), out.display());
    Ok(())
}

#[derive(Args, Debug)]
pub struct GenerateArgs {
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
    #[arg(long, default_value_t = 1000)]
    pub participants: usize,
    /// Item scales as `COUNTxK` groups, e.g. `10x4,3x5`.
    #[arg(long, default_value = "10x4,3x5")]
    pub scales: String,
    /// Opinion blocks; participants are split evenly.
    #[arg(long, default_value_t = 2)]
    pub blocks: usize,
    /// Probability that an answer is redrawn uniformly.
    #[arg(long, default_value_t = 0.3)]
    pub noise: f64,
    #[arg(long, default_value_t = 0.0)]
    pub missing_rate: f64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

fn parse_scales(text: &str) -> Result<Vec<u32>> {
    let mut scales = Vec::new();
    for group in text.split(',').map(str::trim).filter(|g| !g.is_empty()) {
        let bad = || CliError::Usage(format!("--scales: `{group}` is not COUNTxK"));
        let (count, k) = group.split_once(['x', 'X', '×']).ok_or_else(bad)?;
        let count: usize = count.trim().parse().map_err(|_| bad())?;
        let k: u32 = k.trim().parse().map_err(|_| bad())?;
        scales.extend(std::iter::repeat(k).take(count));
    }
    Ok(scales)
}

pub fn generate(args: &GenerateArgs) -> Result<()> {
    let scales = parse_scales(&args.scales)?;
    if args.blocks == 0 || args.participants < args.blocks {
        return Err(CliError::Usage("need at least one participant per block".into()));
    }
    let sizes: Vec<usize> = (0..args.blocks)
        .map(|b| args.participants / args.blocks + usize::from(b < args.participants % args.blocks))
        .collect();
    let mut spec = BlockSurveySpec::new(scales, sizes, args.noise, args.seed);
    spec.missing_rate = args.missing_rate;
    let survey = block_survey(&spec)?;
    create_dir(&args.out_dir)?;
    let csv = args.out_dir.join("survey.csv");
    let schema = args.out_dir.join("schema.json");
    survey.matrix.write_csv_path(&survey.schema, &csv)?;
    write_text(&schema, &survey.schema.to_json())?;
    let mut manifest = RunManifest::new("generate");
    manifest.param("spec", &spec);
    manifest.finish(&[csv.clone(), schema.clone()], &args.out_dir.join("generate.manifest.json"))?;
    println!(
        "N={}, m={}, scales: {} -> {}",
        survey.matrix.n_participants(),
        survey.matrix.n_items(),
        survey.matrix.scale_summary(),
        csv.display()
    );
    Ok(())
}
