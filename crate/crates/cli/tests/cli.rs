use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn surveynet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_surveynet"))
        .args(args)
        .env_remove("SURVEYNET_THREADS")
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = surveynet(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn error_block(out: &Output) -> Value {
    serde_json::from_slice(&out.stderr).expect("JSON error block")
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

const SCHEMA_3: &str = r#"{"id_column":"id","attribute_columns":["party"],"missing_token":"NA",
  "items":[{"id":"a","scale":4},{"id":"b","scale":4},{"id":"c","scale":5}]}"#;

#[test]
fn inspect_wellcome_shape() {
    let dir = tempfile::tempdir().unwrap();
    let gen = dir.path().join("gen");
    ok(&["generate", "--out-dir", p(&gen), "--participants", "1000", "--seed", "3"]);
    let survey = gen.join("survey.csv");
    let schema = gen.join("schema.json");
    let text = ok(&["inspect", "--survey", p(&survey), "--schema", p(&schema)]);
    assert!(text.starts_with("N=1000, m=13, scales: 10×4pt, 3×5pt\n"), "{text}");
    let json: Value = serde_json::from_str(&ok(&["inspect", "--survey", p(&survey), "--schema", p(&schema), "--json"])).unwrap();
    assert_eq!(json["n_items"], 13);
}

#[test]
fn inspect_reports_dropped_rows_and_empty_files() {
    let dir = tempfile::tempdir().unwrap();
    let schema = write(dir.path(), "schema.json", SCHEMA_3);
    let csv = write(
        dir.path(),
        "s.csv",
        "id,party,a,b,c\n1,D,0,1,2\n2,R,NA,1,2\n3,I,0,NA,2\n4,D,0,1,NA\n5,R,3,3,4\n",
    );
    let text = ok(&["inspect", "--survey", &csv, "--schema", &schema]);
    assert!(text.contains("dropped: 3"), "{text}");
    let kept = ok(&["inspect", "--survey", &csv, "--schema", &schema, "--missing", "keep"]);
    assert!(kept.contains("missing cells kept: 3"), "{kept}");

    let empty = write(dir.path(), "empty.csv", "id,party,a,b,c\n");
    let out = surveynet(&["inspect", "--survey", &empty, "--schema", &schema]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_block(&out)["error"]["kind"], "empty_survey");
}

fn two_blocks(dir: &Path) -> (String, String) {
    let schema = write(dir, "schema.json", SCHEMA_3);
    let mut csv = String::from("id,party,a,b,c\n");
    for i in 0..4 {
        csv.push_str(&format!("d{i},D,0,0,0\n"));
        csv.push_str(&format!("r{i},R,3,3,4\n"));
    }
    (write(dir, "s.csv", &csv), schema)
}

#[test]
fn project_auto_then_communities_and_render() {
    let dir = tempfile::tempdir().unwrap();
    let (csv, schema) = two_blocks(dir.path());
    let out = dir.path().join("out");
    let text = ok(&[
        "project", "--survey", &csv, "--schema", &schema, "--mode", "exact", "--threshold", "auto", "--out-dir", p(&out),
    ]);
    assert!(text.starts_with("threshold 3 "), "{text}");
    let report: Value = serde_json::from_str(&std::fs::read_to_string(out.join("participants.report.json")).unwrap()).unwrap();
    assert_eq!(report["selection"]["chosen_threshold"], "3");
    assert_eq!(report["selection"]["giant_fraction_at_chosen"], "1/2");
    let manifest: Value = serde_json::from_str(&std::fs::read_to_string(out.join("participants.manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["parameters"]["threshold_used"], "3");
    assert_eq!(manifest["inputs"][0]["sha256"].as_str().unwrap().len(), 64);
    assert_eq!(manifest["outputs"].as_array().unwrap().len(), 5);

    let graph = out.join("participants.graphml");
    let text = ok(&["communities", "--graph", p(&graph), "--out-dir", p(&out), "--compare-attribute", "party"]);
    assert!(text.starts_with("AlreadySplit: removed 0 of 12 edges"), "{text}");
    assert!(text.contains("Rand index vs `party`: 1.000000"), "{text}");

    let svg = out.join("fig.svg");
    ok(&["render", "--graph", p(&out.join("communities.graphml")), "--out", p(&svg), "--color-attribute", "party"]);
    let a = std::fs::read(&svg).unwrap();
    ok(&["--threads", "1", "render", "--graph", p(&out.join("communities.graphml")), "--out", p(&svg), "--color-attribute", "party"]);
    assert_eq!(a, std::fs::read(&svg).unwrap());
    let svg = String::from_utf8(a).unwrap();
    assert!(svg.contains(&format!("fill=\"{}\"", surveynet::render::BLUE)));
    assert!(svg.contains(&format!("fill=\"{}\"", surveynet::render::RED)));
    assert!(!svg.contains(&format!("stroke=\"{}\"", surveynet::render::RED)));
}

#[test]
fn negative_threshold_adds_disagreement_edges() {
    let dir = tempfile::tempdir().unwrap();
    let (csv, schema) = two_blocks(dir.path());
    let out = dir.path().join("neg");
    ok(&[
        "project", "--survey", &csv, "--schema", &schema, "--mode", "score", "--threshold", "3", "--negative-threshold", "-3",
        "--out-dir", p(&out),
    ]);
    let edges = std::fs::read_to_string(out.join("participants.edges.csv")).unwrap();
    assert_eq!(edges.lines().filter(|l| l.ends_with(",negative,solid")).count(), 16);
    assert_eq!(edges.lines().filter(|l| l.ends_with(",positive,solid")).count(), 12);
}

#[test]
fn no_giant_component_exits_3_with_sweep() {
    let dir = tempfile::tempdir().unwrap();
    let (csv, schema) = two_blocks(dir.path());
    let out = surveynet(&[
        "project", "--survey", &csv, "--schema", &schema, "--threshold", "auto", "--target-fraction", "3/4",
        "--out-dir", p(&dir.path().join("x")),
    ]);
    assert_eq!(out.status.code(), Some(3));
    let block = error_block(&out);
    assert_eq!(block["error"]["kind"], "no_giant_component");
    assert_eq!(block["error"]["sweep"][0]["threshold"], "3");
}

#[test]
fn attitudes_and_single_item_error() {
    let dir = tempfile::tempdir().unwrap();
    let schema = write(dir.path(), "schema.json", r#"{"id_column":"id","items":[{"id":"x","scale":4},{"id":"y","scale":4}]}"#);
    let csv = write(dir.path(), "s.csv", "id,x,y\n1,3,2\n2,2,2\n3,3,3\n");
    ok(&["attitudes", "--survey", &csv, "--schema", &schema, "--out-dir", p(dir.path())]);
    let edges = std::fs::read_to_string(dir.path().join("attitudes.edges.csv")).unwrap();
    assert_eq!(edges, "u,v,weight,weight_decimal,sign,style\nx,y,3,3.000000,positive,solid\n");

    let one = write(dir.path(), "one.json", r#"{"id_column":"id","items":[{"id":"x","scale":4}]}"#);
    let out = surveynet(&["attitudes", "--survey", &csv, "--schema", &one, "--out-dir", p(dir.path())]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_block(&out)["error"]["kind"], "too_few_items");
}

#[test]
fn census_and_bipartite() {
    let dir = tempfile::tempdir().unwrap();
    let (csv, schema) = two_blocks(dir.path());
    let text = ok(&["census", "--survey", &csv, "--schema", &schema, "--out-dir", p(dir.path())]);
    assert!(text.starts_with("2 distinct profiles over 3 items (1/4 "), "{text}");
    let svg = dir.path().join("bip.svg");
    ok(&["render-bipartite", "--survey", &csv, "--schema", &schema, "--out", p(&svg)]);
    assert!(dir.path().join("bip.svg.manifest.json").exists());
}

#[test]
fn barbell_graphml_loses_one_edge() {
    let dir = tempfile::tempdir().unwrap();
    let mut g = surveynet::ProjectionGraph::with_ids(surveynet::GraphKind::Participant, (0..8).map(|i| format!("n{i}")), surveynet::Rational::from_integer(1)).unwrap();
    let mut pairs = vec![(3, 4)];
    for base in [0, 4] {
        for i in 0..4 {
            for j in i + 1..4 {
                pairs.push((base + i, base + j));
            }
        }
    }
    for (u, v) in pairs {
        g.add_edge(u, v, surveynet::Rational::from_integer(1), surveynet::EdgeSign::Positive, surveynet::EdgeStyle::Solid).unwrap();
    }
    let path = write(dir.path(), "barbell.graphml", &surveynet::to_graphml(&g, None));
    let text = ok(&["communities", "--graph", &path, "--out-dir", p(dir.path())]);
    assert!(text.starts_with("Split: removed 1 of 13 edges (1/13), component sizes [4, 4]"), "{text}");
}

#[test]
fn usage_errors_exit_2() {
    let out = surveynet(&["project", "--survey", "nope.csv"]);
    assert_eq!(out.status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let (csv, schema) = two_blocks(dir.path());
    let out = surveynet(&["project", "--survey", &csv, "--schema", &schema, "--threshold", "lots", "--out-dir", p(dir.path())]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_block(&out)["error"]["kind"], "usage");
}
