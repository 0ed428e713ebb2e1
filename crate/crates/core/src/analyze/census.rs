use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::normalize::SignMatrix;
use crate::rational::Rational;

/// Tally of distinct binarized response vectors.
///
/// Profiles are written one character per item: `+`, `-`, `0` (neutral) or
/// `?` (missing).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileCensus {
    pub m_binary: usize,
    pub n_participants: usize,
    pub realized_profiles: BTreeMap<String, u64>,
    pub distinct: usize,
    /// True when any neutral or missing answer occurs.
    pub has_neutral_or_missing: bool,
    /// `distinct / 2^m`, when `2^m` fits in 64 bits.
    #[serde(with = "crate::rational::option_as_string")]
    pub fraction_of_binary: Option<Rational>,
    /// `distinct / 3^m`, when `3^m` fits in 64 bits.
    #[serde(with = "crate::rational::option_as_string")]
    pub fraction_of_ternary: Option<Rational>,
    /// Against `2^m` for purely binary data, else against `3^m`.
    #[serde(with = "crate::rational::as_string")]
    pub realized_fraction: Rational,
}

fn profile_char(sign: Option<i8>) -> char {
    match sign {
        Some(1) => '+',
        Some(-1) => '-',
        Some(_) => '0',
        None => '?',
    }
}

pub fn profile_census(signs: &SignMatrix) -> Result<ProfileCensus> {
    let m = signs.n_items();
    let mut realized: BTreeMap<String, u64> = BTreeMap::new();
    let mut impure = false;
    for p in 0..signs.n_participants() {
        let profile: String = (0..m)
            .map(|i| {
                let s = signs.sign(p, i);
                impure |= !matches!(s, Some(1) | Some(-1));
                profile_char(s)
            })
            .collect();
        *realized.entry(profile).or_insert(0) += 1;
    }
    let distinct = realized.len();
    let over = |base: i64| -> Option<Rational> {
        base.checked_pow(m as u32)
            .map(|d| Rational::new(distinct as i64, d))
    };
    let fraction_of_binary = over(2);
    let fraction_of_ternary = over(3);
    let realized_fraction = if impure { fraction_of_ternary } else { fraction_of_binary }
        .ok_or_else(|| Error::Overflow(format!("profile space for {m} items exceeds 64 bits")))?;
    Ok(ProfileCensus {
        m_binary: m,
        n_participants: signs.n_participants(),
        realized_profiles: realized,
        distinct,
        has_neutral_or_missing: impure,
        fraction_of_binary,
        fraction_of_ternary,
        realized_fraction,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::ResponseMatrix;
    use crate::normalize::{binarize, renormalize};

    fn census(scales: &[u32], rows: &[Vec<u32>]) -> ProfileCensus {
        profile_census(&binarize(&renormalize(
            &ResponseMatrix::from_complete(scales, rows).unwrap(),
        )))
        .unwrap()
    }

    #[test]
    fn single_profile() {
        let c = census(&[4; 8], &vec![vec![3, 2, 0, 1, 3, 3, 0, 0]; 10]);
        assert_eq!(c.realized_fraction, Rational::new(1, 256));
        assert_eq!(c.realized_profiles["++--++--"], 10);
    }

    #[test]
    fn three_profiles_of_hundred() {
        let rows: Vec<Vec<u32>> = (0..100).map(|p| vec![(p % 3 == 0) as u32 * 3; 8]).collect();
        let mut rows = rows;
        rows[1][0] = 2;
        rows[2] = vec![0, 3, 0, 3, 0, 3, 0, 3];
        let c = census(&[4; 8], &rows);
        // all-low, all-high, first-flipped-high, alternating
        assert_eq!(c.distinct, 4);
        let rows3: Vec<Vec<u32>> = (0..100).map(|p| vec![(p % 3) as u32 * 3 / 2; 8]).collect();
        // codes 0, 1, 3 -> "--------", "--------", "++++++++"
        assert_eq!(census(&[4; 8], &rows3).distinct, 2);
        let rows_three: Vec<Vec<u32>> = (0..100)
            .map(|p| match p % 3 {
                0 => vec![0; 8],
                1 => vec![3; 8],
                _ => vec![3, 0, 3, 0, 3, 0, 3, 0],
            })
            .collect();
        let c = census(&[4; 8], &rows_three);
        assert_eq!(c.realized_fraction, Rational::new(3, 256));
        assert_eq!(c.realized_profiles.values().sum::<u64>(), 100);
    }

    #[test]
    fn neutral_answers_switch_to_ternary() {
        let c = census(&[3; 2], &[vec![1, 2], vec![0, 2]]);
        assert!(c.has_neutral_or_missing);
        assert_eq!(c.realized_fraction, Rational::new(2, 9));
        assert_eq!(c.fraction_of_binary, Some(Rational::new(2, 4)));
    }
}
