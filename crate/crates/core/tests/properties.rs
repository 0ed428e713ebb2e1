mod common;

use std::collections::BTreeSet;

use common::*;
use proptest::prelude::*;
use surveynet::analyze::edge_betweenness_indexed;
use surveynet::ingest::read_survey;
use surveynet::render::{from_graphml, to_graphml};
use surveynet::{
    binarize, connected_components, exact_agreement_weights, girvan_newman, profile_census,
    project_participants, renormalize, score_weights, EdgeFilter, EdgeSign, EdgeStyle, GraphKind,
    MissingPolicy, Node, PairSource, ProjectionGraph, Rational, ResponseMatrix,
};

fn survey(max_n: usize, max_m: usize) -> impl Strategy<Value = ResponseMatrix> {
    (2..=max_n, 1..=max_m, any::<u64>(), prop_oneof![Just(0.0), Just(0.2)])
        .prop_map(|(n, m, seed, missing)| random_survey(&mut rng(seed), n, m, missing))
}

fn graph(max_n: usize) -> impl Strategy<Value = ProjectionGraph> {
    (1..=max_n, any::<u64>(), 0.05f64..0.6).prop_map(|(n, seed, p)| {
        let mut g = ProjectionGraph::with_ids(GraphKind::Participant, (0..n).map(|i| format!("n{i:02}")), Rational::from_integer(1)).unwrap();
        for (u, v) in random_graph(&mut rng(seed), n, p) {
            g.add_edge(u, v, Rational::from_integer(1), EdgeSign::Positive, EdgeStyle::Solid).unwrap();
        }
        g
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn weights_are_symmetric_and_in_range(x in survey(12, 8)) {
        let m = x.n_items() as i64;
        let exact = exact_agreement_weights(&x).unwrap();
        let score = score_weights(&renormalize(&x)).unwrap();
        for u in 0..x.n_participants() {
            for v in 0..x.n_participants() {
                if u == v { continue; }
                prop_assert_eq!(exact.weight(u, v), exact.weight(v, u));
                prop_assert_eq!(score.weight(u, v), score.weight(v, u));
                let e = exact.weight(u, v);
                prop_assert!(e >= q(0) && e <= q(m));
                let s = score.weight(u, v);
                prop_assert!(s >= q(-m) && s <= q(m));
                // each item scores at most 1, exactly 1 only on identical codes
                let co = q(exact.co_answered(u, v) as i64);
                prop_assert!(s <= co);
                prop_assert_eq!(s == co, e == co);
            }
        }
    }

    #[test]
    fn relabeling_permutes_weights(x in survey(10, 6), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        let mut order: Vec<usize> = (0..x.n_participants()).collect();
        order.shuffle(&mut rng(seed));
        let y = x.permuted(&order);
        let (wx, wy) = (score_weights(&renormalize(&x)).unwrap(), score_weights(&renormalize(&y)).unwrap());
        for a in 0..order.len() {
            for b in a + 1..order.len() {
                prop_assert_eq!(wy.weight(a, b), wx.weight(order[a], order[b]));
            }
        }
    }

    #[test]
    fn higher_threshold_gives_edge_subset(x in survey(15, 7), t in 0i64..8) {
        let w = exact_agreement_weights(&x).unwrap();
        let m = x.n_items() as i64;
        let lo = Rational::from_integer(t.min(m));
        let hi = Rational::from_integer((t + 1).min(m));
        let edges = |thr| -> BTreeSet<(usize, usize)> {
            project_participants(&w, thr, None).unwrap().edges().iter().map(|e| (e.u, e.v)).collect()
        };
        prop_assert!(edges(hi).is_subset(&edges(lo)));
    }

    #[test]
    fn csv_round_trip(x in survey(12, 6)) {
        let schema = surveynet::SurveySchema::new("id", x.items().to_vec()).with_missing_token("NA");
        let mut buf = Vec::new();
        x.write_csv(&schema, &mut buf).unwrap();
        let (y, report) = read_survey(&buf[..], &schema, MissingPolicy::KeepPairwise).unwrap();
        prop_assert_eq!(report.rows_dropped, 0);
        prop_assert_eq!(y, x);
    }

    #[test]
    fn graphml_round_trip(g in graph(15), attrs in proptest::collection::vec("[ -~\t\n]{0,6}", 15)) {
        let nodes: Vec<Node> = g.nodes().iter().enumerate().map(|(i, n)| Node {
            id: format!("{}<&>{}", n.id, attrs[i].len()),
            attributes: [("label".to_string(), attrs[i].clone())].into(),
        }).collect();
        let mut h = ProjectionGraph::new(g.kind, nodes, Rational::new(7, 3), Some(Rational::from_integer(-1))).unwrap();
        for (k, e) in g.edges().iter().enumerate() {
            let (w, sign) = if k % 3 == 0 { (Rational::new(-5, 2), EdgeSign::Negative) } else { (Rational::new(8 + k as i64, 3), EdgeSign::Positive) };
            let style = [EdgeStyle::Solid, EdgeStyle::Dashed, EdgeStyle::Dotted][k % 3];
            h.add_edge(e.u, e.v, w, sign, style).unwrap();
        }
        let back = from_graphml(&to_graphml(&h, None)).unwrap().graph;
        prop_assert_eq!(back, h);
    }

    #[test]
    fn census_counts_sum_to_n(x in survey(30, 8)) {
        let c = profile_census(&binarize(&renormalize(&x))).unwrap();
        prop_assert_eq!(c.realized_profiles.values().sum::<u64>(), x.n_participants() as u64);
        prop_assert_eq!(c.distinct, c.realized_profiles.len());
    }

    #[test]
    fn components_partition_nodes(g in graph(20)) {
        let report = connected_components(&g, EdgeFilter::PositiveOnly);
        let mut all: Vec<String> = report.components.iter().flatten().cloned().collect();
        all.sort();
        let mut ids: Vec<String> = g.nodes().iter().map(|n| n.id.clone()).collect();
        ids.sort();
        prop_assert_eq!(all, ids);
        let sizes = report.sizes();
        prop_assert!(sizes.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn girvan_newman_is_deterministic(g in graph(14)) {
        let a = girvan_newman(&g, 3, Rational::from_integer(1)).unwrap();
        let b = girvan_newman(&g, 3, Rational::from_integer(1)).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert!(a.removed_fraction <= Rational::from_integer(1));
        let removed = Rational::new(a.removed_edges.len() as i64, a.original_edges.max(1) as i64);
        prop_assert_eq!(a.removed_fraction, if a.original_edges == 0 { Rational::from_integer(0) } else { removed });
    }

    #[test]
    fn betweenness_is_nonnegative_and_bridges_count_cuts(g in graph(12)) {
        for ((u, v), b) in edge_betweenness_indexed(&g, EdgeFilter::PositiveOnly) {
            prop_assert!(b >= 1.0, "{}-{}: {}", u, v, b);
        }
    }
}
