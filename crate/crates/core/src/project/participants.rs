use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::graph::{EdgeSign, EdgeStyle, GraphKind, Node, ProjectionGraph};
use crate::ingest::ResponseMatrix;
use crate::project::kernel::{collect_pairs, PairSource};
use crate::rational::{format_rational, int, numer_ge, numer_le, Rational};

pub(crate) fn participant_nodes(matrix: &ResponseMatrix) -> Vec<Node> {
    (0..matrix.n_participants())
        .map(|p| Node {
            id: matrix.participants()[p].clone(),
            attributes: matrix.attributes(p).clone(),
        })
        .collect()
}

fn check_thresholds<S: PairSource + ?Sized>(
    weights: &S,
    threshold: Rational,
    negative_threshold: Option<Rational>,
) -> Result<()> {
    let (lo, hi) = weights.weight_range();
    for t in std::iter::once(threshold).chain(negative_threshold) {
        if t < lo || t > hi {
            return Err(Error::ThresholdOutOfRange {
                threshold: format_rational(&t),
                min: format_rational(&lo),
                max: format_rational(&hi),
            });
        }
    }
    if let Some(neg) = negative_threshold {
        if neg >= threshold {
            return Err(Error::NegativeThresholdNotBelow {
                negative: format_rational(&neg),
                threshold: format_rational(&threshold),
            });
        }
    }
    Ok(())
}

fn empty_projection<S: PairSource + ?Sized>(
    weights: &S,
    threshold: Rational,
    negative_threshold: Option<Rational>,
) -> Result<ProjectionGraph> {
    let mut graph = ProjectionGraph::new(
        GraphKind::Participant,
        participant_nodes(weights.matrix()),
        threshold,
        negative_threshold,
    )?;
    graph
        .metadata
        .insert("mode".into(), weights.mode().as_str().into());
    graph
        .metadata
        .insert("n_items".into(), weights.n_items().to_string());
    Ok(graph)
}

/// Participant graph with a positive edge wherever `w >= threshold` and,
/// when `negative_threshold` is given, a negative edge wherever
/// `w <= negative_threshold`. Isolated participants stay in the graph.
pub fn project_participants<S: PairSource + ?Sized>(
    weights: &S,
    threshold: Rational,
    negative_threshold: Option<Rational>,
) -> Result<ProjectionGraph> {
    check_thresholds(weights, threshold, negative_threshold)?;
    let denom = weights.denominator();
    let edges = collect_pairs(weights, |u, v, w| {
        if numer_ge(w, denom, &threshold) {
            Some((u, v, w, EdgeSign::Positive))
        } else if negative_threshold.is_some_and(|t| numer_le(w, denom, &t)) {
            Some((u, v, w, EdgeSign::Negative))
        } else {
            None
        }
    });
    let mut graph = empty_projection(weights, threshold, negative_threshold)?;
    for (u, v, w, sign) in edges {
        graph.add_edge(u, v, Rational::new(w, denom), sign, EdgeStyle::Solid)?;
    }
    Ok(graph)
}

/// Exact-agreement projection for thresholds above `m - 2` without a
/// pairwise scan: identical rows are grouped by their full response
/// vector, rows one item apart by each leave-one-item-out sub-vector.
///
/// Returns `None` when the shortcut does not apply (missing data, or a
/// threshold admitting weights below `m - 1`). Output equals
/// [`project_participants`] on exact-agreement weights.
pub fn project_exact_bucketed(
    matrix: &ResponseMatrix,
    threshold: Rational,
) -> Result<Option<ProjectionGraph>> {
    let n = matrix.n_participants();
    let m = matrix.n_items();
    if n < 2 {
        return Err(Error::TooFewParticipants {
            required: 2,
            got: n,
        });
    }
    let m_i = m as i64;
    if threshold > int(m_i) || threshold < int(0) {
        return Err(Error::ThresholdOutOfRange {
            threshold: format_rational(&threshold),
            min: "0".into(),
            max: m.to_string(),
        });
    }
    if matrix.has_missing() || threshold <= int(m_i - 2) {
        return Ok(None);
    }
    let include_near = threshold <= int(m_i - 1);

    let mut edges: Vec<(usize, usize, i64)> = Vec::new();
    let mut groups: HashMap<&[u8], Vec<usize>> = HashMap::new();
    for p in 0..n {
        groups.entry(matrix.raw_row(p)).or_default().push(p);
    }
    for members in groups.values() {
        for (i, &u) in members.iter().enumerate() {
            for &v in &members[i + 1..] {
                edges.push((u, v, m_i));
            }
        }
    }
    if include_near && m >= 1 {
        let mut masked = vec![0u8; m];
        for item in 0..m {
            let mut near: HashMap<Vec<u8>, Vec<usize>> = HashMap::new();
            for p in 0..n {
                masked.copy_from_slice(matrix.raw_row(p));
                masked[item] = u8::MAX;
                near.entry(masked.clone()).or_default().push(p);
            }
            for members in near.values() {
                for (i, &u) in members.iter().enumerate() {
                    for &v in &members[i + 1..] {
                        if matrix.raw_row(u)[item] != matrix.raw_row(v)[item] {
                            edges.push((u, v, m_i - 1));
                        }
                    }
                }
            }
        }
    }
    edges.sort_unstable();

    let mut graph = ProjectionGraph::new(
        GraphKind::Participant,
        participant_nodes(matrix),
        threshold,
        None,
    )?;
    graph
        .metadata
        .insert("mode".into(), crate::project::WeightMode::ExactAgreement.as_str().into());
    graph.metadata.insert("n_items".into(), m.to_string());
    for (u, v, w) in edges {
        graph.add_edge(u, v, int(w), EdgeSign::Positive, EdgeStyle::Solid)?;
    }
    Ok(Some(graph))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::normalize::renormalize;
    use crate::project::{exact_agreement_weights, score_weights};

    fn mat(scales: &[u32], rows: &[Vec<u32>]) -> ResponseMatrix {
        ResponseMatrix::from_complete(scales, rows).unwrap()
    }

    #[test]
    fn threshold_m_minus_one() {
        let x = mat(&[3; 4], &[vec![0, 0, 0, 0], vec![0, 0, 0, 1], vec![2, 2, 0, 1]]);
        let w = exact_agreement_weights(&x).unwrap();
        let g = project_participants(&w, int(3), None).unwrap();
        assert_eq!(g.n_edges(), 1);
        assert_eq!(g.n_nodes(), 3);
        assert_eq!((g.edges()[0].u, g.edges()[0].v), (0, 1));
    }

    #[test]
    fn identical_pair_at_full_score() {
        let row: Vec<u32> = vec![1; 13];
        let x = mat(&[4; 13], &[row.clone(), row, vec![0; 13]]);
        let w = score_weights(&renormalize(&x)).unwrap();
        let g = project_participants(&w, int(13), None).unwrap();
        assert_eq!(g.n_edges(), 1);
        assert_eq!(g.edges()[0].weight, int(13));
    }

    #[test]
    fn eleven_and_a_half_means_difference_at_most_one_and_a_half() {
        // 5-point items: a step is 1/2.
        let base = vec![2u32; 13];
        let mut rows = vec![base.clone()];
        for steps in 1..=4u32 {
            let mut r = base.clone();
            for s in 0..steps as usize {
                r[s] = 3;
            }
            rows.push(r);
        }
        let x = mat(&[5; 13], &rows);
        let w = score_weights(&renormalize(&x)).unwrap();
        let g = project_participants(&w, Rational::new(23, 2), None).unwrap();
        for e in g.edges() {
            let diff = int(13) - e.weight;
            assert!(diff <= Rational::new(3, 2));
        }
        // participant 0 links to 1, 2, 3 (diff 1/2, 1, 3/2) but not 4 (diff 2)
        let from0: Vec<usize> = g.edges().iter().filter(|e| e.u == 0).map(|e| e.v).collect();
        assert_eq!(from0, vec![1, 2, 3]);
    }

    #[test]
    fn negative_edges() {
        let x = mat(&[5; 4], &[vec![0; 4], vec![4; 4], vec![0; 4]]);
        let w = score_weights(&renormalize(&x)).unwrap();
        let g = project_participants(&w, int(3), Some(int(-3))).unwrap();
        let neg: Vec<_> = g.edges().iter().filter(|e| e.sign == EdgeSign::Negative).collect();
        assert_eq!(neg.len(), 2);
        assert!(neg.iter().all(|e| e.weight == int(-4)));
    }

    #[test]
    fn threshold_validation() {
        let x = mat(&[5; 4], &[vec![0; 4], vec![4; 4]]);
        let w = exact_agreement_weights(&x).unwrap();
        assert!(matches!(
            project_participants(&w, int(5), None),
            Err(Error::ThresholdOutOfRange { .. })
        ));
        assert!(matches!(
            project_participants(&w, int(-1), None),
            Err(Error::ThresholdOutOfRange { .. })
        ));
        let s = score_weights(&renormalize(&x)).unwrap();
        assert!(project_participants(&s, int(-4), None).is_ok());
        assert!(matches!(
            project_participants(&s, int(1), Some(int(1))),
            Err(Error::NegativeThresholdNotBelow { .. })
        ));
    }

    #[test]
    fn bucketed_matches_scan() {
        let rows = vec![
            vec![0, 1, 2],
            vec![0, 1, 2],
            vec![0, 1, 0],
            vec![1, 1, 0],
            vec![3, 3, 3],
            vec![0, 1, 2],
        ];
        let x = mat(&[4; 3], &rows);
        let w = exact_agreement_weights(&x).unwrap();
        for t in [int(3), int(2), Rational::new(5, 2), Rational::new(3, 2)] {
            let fast = project_exact_bucketed(&x, t).unwrap();
            if t <= int(1) {
                assert!(fast.is_none());
                continue;
            }
            assert_eq!(fast.unwrap(), project_participants(&w, t, None).unwrap());
        }
        assert!(project_exact_bucketed(&x, int(1)).unwrap().is_none());
    }
}
