//! Components, threshold selection, Girvan–Newman and profile census.

mod betweenness;
mod census;
mod components;
mod girvan_newman;
mod threshold;
pub mod union_find;

pub use betweenness::{edge_betweenness, edge_betweenness_indexed};
pub use census::{profile_census, ProfileCensus};
pub use components::{connected_components, ComponentReport};
pub use girvan_newman::{girvan_newman, CommunityReport, GnStatus, Removal};
pub use threshold::{
    select_threshold, select_threshold_with_budget, sweep_csv, threshold_sweep, SweepPoint,
    ThresholdSelection, DEFAULT_EDGE_BUDGET,
};

pub use crate::graph::EdgeFilter;

use crate::rational::Rational;

/// Rand index between two labelings of the same items: the fraction of
/// item pairs on which they agree (same group in both, or split in both).
pub fn rand_index(a: &[usize], b: &[usize]) -> Rational {
    assert_eq!(a.len(), b.len(), "labelings differ in length");
    let n = a.len();
    if n < 2 {
        return Rational::from_integer(1);
    }
    let mut agree = 0i64;
    for i in 0..n {
        for j in i + 1..n {
            agree += ((a[i] == a[j]) == (b[i] == b[j])) as i64;
        }
    }
    Rational::new(agree, (n * (n - 1) / 2) as i64)
}

/// Component index per node id for a list of components.
pub fn labels_from_components(components: &[Vec<String>], ids: &[String]) -> Vec<usize> {
    let mut label = std::collections::HashMap::new();
    for (c, members) in components.iter().enumerate() {
        for id in members {
            label.insert(id.as_str(), c);
        }
    }
    ids.iter().map(|id| label[id.as_str()]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rand_index_basics() {
        assert_eq!(rand_index(&[0, 0, 1, 1], &[5, 5, 7, 7]), Rational::from_integer(1));
        // pairs: (0,1) same/same, (0,2) diff/same, (1,2) diff/same
        assert_eq!(rand_index(&[0, 0, 1], &[0, 0, 0]), Rational::new(1, 3));
    }
}
