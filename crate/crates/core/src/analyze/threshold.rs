//! Agreement-threshold selection.
//!
//! Edges are added level by level from the highest weight down; all pairs
//! sharing a weight are added together. The chosen threshold is the first
//! (highest) level at which the largest component covers at least the
//! target fraction of participants. Only strictly positive levels are
//! swept: a weight of zero or below is not agreement.

use serde::{Deserialize, Serialize};

use crate::analyze::union_find::UnionFind;
use crate::error::{Error, Result};
use crate::project::{collect_pairs, weight_histogram, PairSource};
use crate::rational::{format_rational, int, Rational};

/// Default cap on edges held in memory per streaming pass.
pub const DEFAULT_EDGE_BUDGET: u64 = 1 << 25;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepPoint {
    #[serde(with = "crate::rational::as_string")]
    pub threshold: Rational,
    #[serde(with = "crate::rational::as_string")]
    pub giant_fraction: Rational,
    pub largest_component: usize,
    /// Edges present at this level (pairs with weight >= threshold).
    pub edges: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThresholdSelection {
    #[serde(with = "crate::rational::as_string")]
    pub chosen_threshold: Rational,
    #[serde(with = "crate::rational::as_string")]
    pub giant_fraction_at_chosen: Rational,
    #[serde(with = "crate::rational::as_string")]
    pub target_fraction: Rational,
    /// Levels in evaluation order (descending threshold).
    pub sweep: Vec<SweepPoint>,
}

impl ThresholdSelection {
    /// `threshold,giant_fraction` CSV with exact fractions.
    pub fn sweep_csv(&self) -> String {
        sweep_csv(&self.sweep)
    }
}

pub fn sweep_csv(sweep: &[SweepPoint]) -> String {
    let mut out = String::from("threshold,giant_fraction,giant_fraction_decimal,largest_component,edges\n");
    for p in sweep {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            format_rational(&p.threshold),
            format_rational(&p.giant_fraction),
            crate::rational::format_decimal(&p.giant_fraction),
            p.largest_component,
            p.edges
        ));
    }
    out
}

pub fn select_threshold<S: PairSource + ?Sized>(
    weights: &S,
    target_fraction: Rational,
) -> Result<ThresholdSelection> {
    select_threshold_with_budget(weights, target_fraction, DEFAULT_EDGE_BUDGET)
}

/// As [`select_threshold`], holding at most about `edge_budget` edges in
/// memory at a time (levels are streamed in batches).
pub fn select_threshold_with_budget<S: PairSource + ?Sized>(
    weights: &S,
    target_fraction: Rational,
    edge_budget: u64,
) -> Result<ThresholdSelection> {
    if target_fraction <= int(0) || target_fraction > int(1) {
        return Err(Error::InvalidArgument(format!(
            "target fraction {} must lie in (0, 1]",
            format_rational(&target_fraction)
        )));
    }
    let sweep = run_sweep(weights, Some(target_fraction), edge_budget);
    match sweep.last() {
        Some(last) if last.giant_fraction >= target_fraction => Ok(ThresholdSelection {
            chosen_threshold: last.threshold,
            giant_fraction_at_chosen: last.giant_fraction,
            target_fraction,
            sweep,
        }),
        _ => Err(Error::NoGiantComponent {
            target: format_rational(&target_fraction),
            sweep,
        }),
    }
}

/// Giant-component fraction at every positive weight level, highest first.
pub fn threshold_sweep<S: PairSource + ?Sized>(weights: &S) -> Vec<SweepPoint> {
    run_sweep(weights, None, DEFAULT_EDGE_BUDGET)
}

fn run_sweep<S: PairSource + ?Sized>(
    weights: &S,
    stop_at: Option<Rational>,
    edge_budget: u64,
) -> Vec<SweepPoint> {
    let n = weights.n_participants();
    let denom = weights.denominator();
    let levels: Vec<(i64, u64)> = weight_histogram(weights)
        .into_iter()
        .rev()
        .filter(|&(w, _)| w > 0)
        .collect();

    let mut uf = UnionFind::new(n);
    let mut sweep = Vec::with_capacity(levels.len());
    let mut edges_so_far = 0u64;
    let mut start = 0;
    while start < levels.len() {
        // One streaming pass per batch of levels that fits the budget.
        let mut end = start + 1;
        let mut batch_edges = levels[start].1;
        while end < levels.len() && batch_edges + levels[end].1 <= edge_budget {
            batch_edges += levels[end].1;
            end += 1;
        }
        let hi = levels[start].0;
        let lo = levels[end - 1].0;
        let mut batch = collect_pairs(weights, |u, v, w| (lo..=hi).contains(&w).then_some((w, u, v)));
        batch.sort_unstable_by(|a, b| b.0.cmp(&a.0).then((a.1, a.2).cmp(&(b.1, b.2))));

        let mut cursor = 0;
        for &(level, count) in &levels[start..end] {
            while cursor < batch.len() && batch[cursor].0 == level {
                uf.union(batch[cursor].1, batch[cursor].2);
                cursor += 1;
            }
            edges_so_far += count;
            let fraction = Rational::new(uf.largest() as i64, n as i64);
            sweep.push(SweepPoint {
                threshold: Rational::new(level, denom),
                giant_fraction: fraction,
                largest_component: uf.largest(),
                edges: edges_so_far,
            });
            if stop_at.is_some_and(|t| fraction >= t) {
                return sweep;
            }
        }
        start = end;
    }
    sweep
}
