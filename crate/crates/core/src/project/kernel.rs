//! Pairwise participant weights.
//!
//! Every mode produces an integer numerator over a fixed denominator so
//! that threshold tests are exact integer comparisons:
//!
//! | mode                  | weight                                   | denominator          |
//! |-----------------------|------------------------------------------|----------------------|
//! | `ExactAgreement`      | items with identical codes               | 1                    |
//! | `BinarizedAgreement`  | items with identical signs               | 1                    |
//! | `Score`               | `co - Σ|v_u - v_v|` over co-answered items | lcm of `k_i - 1`   |
//!
//! With complete data `co = m`, giving the `[-m, +m]` similarity score.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::{ResponseMatrix, MISSING_CODE};
use crate::normalize::{NormalizedMatrix, SignMatrix, MISSING_SIGN, MISSING_VALUE};
use crate::rational::{int, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightMode {
    ExactAgreement,
    Score,
    BinarizedAgreement,
}

impl WeightMode {
    pub fn as_str(self) -> &'static str {
        match self {
            WeightMode::ExactAgreement => "exact_agreement",
            WeightMode::Score => "score",
            WeightMode::BinarizedAgreement => "binarized_agreement",
        }
    }
}

/// How score weights treat pairs that co-answered fewer than `m` items.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScoreDenominator {
    /// `co - Σ|Δ|`, ranging over `[-co, +co]`.
    #[default]
    CoAnswered,
    /// `(co - Σ|Δ|) · m / co`, stretched back onto `[-m, +m]`.
    RescaleToItems,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelOptions {
    /// Binarized mode: two neutral answers count as agreement.
    pub neutral_agrees: bool,
    pub score_denominator: ScoreDenominator,
}

impl Default for KernelOptions {
    fn default() -> Self {
        KernelOptions {
            neutral_agrees: true,
            score_denominator: ScoreDenominator::CoAnswered,
        }
    }
}

/// Default cap on materialized pairs (16M pairs, 128 MiB of numerators).
pub const DEFAULT_PAIR_BUDGET: u64 = 1 << 24;

/// Anything that can report a weight for every unordered participant pair.
pub trait PairSource: Sync {
    fn mode(&self) -> WeightMode;
    fn n_participants(&self) -> usize;
    fn n_items(&self) -> usize;
    /// Common denominator of all weights.
    fn denominator(&self) -> i64;
    /// Weight numerator for `u != v`.
    fn numerator(&self, u: usize, v: usize) -> i64;
    /// Items answered by both participants.
    fn co_answered(&self, u: usize, v: usize) -> usize;
    /// The participants the pairs refer to.
    fn matrix(&self) -> &ResponseMatrix;

    fn weight(&self, u: usize, v: usize) -> Rational {
        Rational::new(self.numerator(u, v), self.denominator())
    }

    /// Closed interval every weight of this mode lies in.
    fn weight_range(&self) -> (Rational, Rational) {
        let m = self.n_items() as i64;
        match self.mode() {
            WeightMode::Score => (int(-m), int(m)),
            _ => (int(0), int(m)),
        }
    }
}

#[derive(Clone, Debug)]
enum KernelData {
    Codes(Vec<u8>),
    Scaled(Vec<i32>),
    Signs(Vec<i8>),
}

const MISSING_SCALED: i32 = i32::MIN;

/// Computes pair weights on demand from a compact copy of the responses.
#[derive(Clone, Debug)]
pub struct PairKernel {
    mode: WeightMode,
    n: usize,
    m: usize,
    data: KernelData,
    /// Denominator of score values before any rescaling.
    base_denominator: i64,
    denominator: i64,
    /// `lcm(1..=m)` when rescaling pairwise scores to `m` items.
    rescale_lcm: Option<i64>,
    neutral_agrees: bool,
    has_missing: bool,
    matrix: Arc<ResponseMatrix>,
}

impl PairKernel {
    pub fn exact(matrix: &ResponseMatrix) -> Result<Self> {
        require_pairs(matrix.n_participants())?;
        let codes = (0..matrix.n_participants())
            .flat_map(|p| matrix.raw_row(p).iter().copied())
            .collect();
        Ok(PairKernel {
            mode: WeightMode::ExactAgreement,
            n: matrix.n_participants(),
            m: matrix.n_items(),
            data: KernelData::Codes(codes),
            base_denominator: 1,
            denominator: 1,
            rescale_lcm: None,
            neutral_agrees: true,
            has_missing: matrix.has_missing(),
            matrix: Arc::new(matrix.clone()),
        })
    }

    pub fn score(matrix: &NormalizedMatrix, options: KernelOptions) -> Result<Self> {
        require_pairs(matrix.n_participants())?;
        let m = matrix.n_items();
        let d = matrix.common_denominator()?;
        let factors: Vec<i32> = matrix
            .denominators()
            .iter()
            .map(|&k1| (d / k1 as i64) as i32)
            .collect();
        let scaled = matrix
            .raw_numerators()
            .chunks(m)
            .flat_map(|row| {
                row.iter().zip(&factors).map(|(&v, &f)| {
                    if v == MISSING_VALUE {
                        MISSING_SCALED
                    } else {
                        v as i32 * f
                    }
                })
            })
            .collect();
        let has_missing = matrix.source().has_missing();
        let rescale_lcm = match options.score_denominator {
            ScoreDenominator::RescaleToItems if has_missing => {
                let l = (1..=m as i64).fold(1i64, |acc, k| acc.lcm(&k));
                let bound = (m as i128) * (d as i128) * (l as i128) * 4;
                if bound > i64::MAX as i128 {
                    return Err(Error::Overflow(format!(
                        "rescaled score denominator for {m} items does not fit in 64 bits"
                    )));
                }
                Some(l)
            }
            _ => None,
        };
        Ok(PairKernel {
            mode: WeightMode::Score,
            n: matrix.n_participants(),
            m,
            data: KernelData::Scaled(scaled),
            base_denominator: d,
            denominator: d * rescale_lcm.unwrap_or(1),
            rescale_lcm,
            neutral_agrees: true,
            has_missing,
            matrix: Arc::new(matrix.source().clone()),
        })
    }

    pub fn binarized(signs: &SignMatrix, options: KernelOptions) -> Result<Self> {
        require_pairs(signs.n_participants())?;
        Ok(PairKernel {
            mode: WeightMode::BinarizedAgreement,
            n: signs.n_participants(),
            m: signs.n_items(),
            data: KernelData::Signs(signs.raw().to_vec()),
            base_denominator: 1,
            denominator: 1,
            rescale_lcm: None,
            neutral_agrees: options.neutral_agrees,
            has_missing: signs.source().has_missing(),
            matrix: Arc::new(signs.source().clone()),
        })
    }

    pub fn has_missing(&self) -> bool {
        self.has_missing
    }

    /// `(numerator, co_answered)` for a pair.
    #[inline]
    pub fn evaluate(&self, u: usize, v: usize) -> (i64, usize) {
        let m = self.m;
        let (ru, rv) = (u * m, v * m);
        match &self.data {
            KernelData::Codes(codes) => {
                let (a, b) = (&codes[ru..ru + m], &codes[rv..rv + m]);
                if !self.has_missing {
                    let same = a.iter().zip(b).filter(|(x, y)| x == y).count();
                    return (same as i64, m);
                }
                let mut same = 0;
                let mut co = 0;
                for (&x, &y) in a.iter().zip(b) {
                    if x != MISSING_CODE && y != MISSING_CODE {
                        co += 1;
                        same += (x == y) as usize;
                    }
                }
                (same as i64, co)
            }
            KernelData::Signs(signs) => {
                let (a, b) = (&signs[ru..ru + m], &signs[rv..rv + m]);
                let mut same = 0;
                let mut co = 0;
                for (&x, &y) in a.iter().zip(b) {
                    if x != MISSING_SIGN && y != MISSING_SIGN {
                        co += 1;
                        same += (x == y && (self.neutral_agrees || x != 0)) as usize;
                    }
                }
                (same as i64, co)
            }
            KernelData::Scaled(vals) => {
                let (a, b) = (&vals[ru..ru + m], &vals[rv..rv + m]);
                let d = self.base_denominator;
                if !self.has_missing {
                    let diff: i64 = a.iter().zip(b).map(|(x, y)| (x - y).abs() as i64).sum();
                    return (m as i64 * d - diff, m);
                }
                let mut diff = 0i64;
                let mut co = 0usize;
                for (&x, &y) in a.iter().zip(b) {
                    if x != MISSING_SCALED && y != MISSING_SCALED {
                        co += 1;
                        diff += (x - y).abs() as i64;
                    }
                }
                let numer = co as i64 * d - diff;
                match self.rescale_lcm {
                    None => (numer, co),
                    Some(_) if co == 0 => (0, 0),
                    Some(l) => (numer * m as i64 * (l / co as i64), co),
                }
            }
        }
    }

    /// Computes every pair, refusing when there are more than `budget` pairs.
    pub fn materialize(&self, budget: u64) -> Result<PairWeights> {
        let pairs = pair_count(self.n);
        if pairs > budget {
            return Err(Error::PairBudget { pairs, budget });
        }
        let n = self.n;
        let rows: Vec<Vec<(i64, u16)>> = (0..n)
            .into_par_iter()
            .map(|u| {
                (u + 1..n)
                    .map(|v| {
                        let (w, co) = self.evaluate(u, v);
                        (w, co as u16)
                    })
                    .collect()
            })
            .collect();
        let mut numerators = Vec::with_capacity(pairs as usize);
        let mut co_answered = self.has_missing.then(|| Vec::with_capacity(pairs as usize));
        for row in rows {
            for (w, co) in row {
                numerators.push(w);
                if let Some(c) = co_answered.as_mut() {
                    c.push(co);
                }
            }
        }
        Ok(PairWeights {
            mode: self.mode,
            n,
            m: self.m,
            denominator: self.denominator,
            numerators,
            co_answered,
            matrix: Arc::clone(&self.matrix),
        })
    }
}

impl PairSource for PairKernel {
    fn mode(&self) -> WeightMode {
        self.mode
    }
    fn n_participants(&self) -> usize {
        self.n
    }
    fn n_items(&self) -> usize {
        self.m
    }
    fn denominator(&self) -> i64 {
        self.denominator
    }
    fn numerator(&self, u: usize, v: usize) -> i64 {
        self.evaluate(u, v).0
    }
    fn co_answered(&self, u: usize, v: usize) -> usize {
        self.evaluate(u, v).1
    }
    fn matrix(&self) -> &ResponseMatrix {
        &self.matrix
    }
}

/// All pair weights held in memory (condensed upper triangle).
#[derive(Clone, Debug)]
pub struct PairWeights {
    mode: WeightMode,
    n: usize,
    m: usize,
    denominator: i64,
    numerators: Vec<i64>,
    /// Present when the matrix has missing responses.
    co_answered: Option<Vec<u16>>,
    matrix: Arc<ResponseMatrix>,
}

impl PairWeights {
    #[inline]
    fn index(&self, u: usize, v: usize) -> usize {
        assert!(u != v, "no self-pairs");
        let (u, v) = if u < v { (u, v) } else { (v, u) };
        u * self.n - u * (u + 1) / 2 + (v - u - 1)
    }

    pub fn has_co_answered(&self) -> bool {
        self.co_answered.is_some()
    }

    /// `((u, v), weight)` for every pair `u < v`.
    pub fn iter(&self) -> impl Iterator<Item = ((usize, usize), Rational)> + '_ {
        let n = self.n;
        (0..n)
            .flat_map(move |u| (u + 1..n).map(move |v| (u, v)))
            .zip(self.numerators.iter())
            .map(|(pair, &w)| (pair, Rational::new(w, self.denominator)))
    }
}

impl PairSource for PairWeights {
    fn mode(&self) -> WeightMode {
        self.mode
    }
    fn n_participants(&self) -> usize {
        self.n
    }
    fn n_items(&self) -> usize {
        self.m
    }
    fn denominator(&self) -> i64 {
        self.denominator
    }
    fn numerator(&self, u: usize, v: usize) -> i64 {
        self.numerators[self.index(u, v)]
    }
    fn co_answered(&self, u: usize, v: usize) -> usize {
        match &self.co_answered {
            Some(c) => c[self.index(u, v)] as usize,
            None => self.m,
        }
    }
    fn matrix(&self) -> &ResponseMatrix {
        &self.matrix
    }
}

fn require_pairs(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::TooFewParticipants {
            required: 2,
            got: n,
        });
    }
    Ok(())
}

pub fn pair_count(n: usize) -> u64 {
    let n = n as u64;
    n * n.saturating_sub(1) / 2
}

/// Items where both answered with the same code.
pub fn exact_agreement_weights(matrix: &ResponseMatrix) -> Result<PairWeights> {
    PairKernel::exact(matrix)?.materialize(DEFAULT_PAIR_BUDGET)
}

/// `m - Σ_i |v_u,i - v_v,i|` (co-answered items only when data are missing).
pub fn score_weights(matrix: &NormalizedMatrix) -> Result<PairWeights> {
    PairKernel::score(matrix, KernelOptions::default())?.materialize(DEFAULT_PAIR_BUDGET)
}

/// Items where both answers share a sign; two neutral answers agree.
pub fn binarized_agreement_weights(signs: &SignMatrix) -> Result<PairWeights> {
    PairKernel::binarized(signs, KernelOptions::default())?.materialize(DEFAULT_PAIR_BUDGET)
}

/// Streams all pairs `u < v` in parallel and keeps the mapped values,
/// returned in `(u, v)` order regardless of thread count.
pub fn collect_pairs<S, T, F>(source: &S, f: F) -> Vec<T>
where
    S: PairSource + ?Sized,
    T: Send,
    F: Fn(usize, usize, i64) -> Option<T> + Sync,
{
    let n = source.n_participants();
    (0..n)
        .into_par_iter()
        .flat_map_iter(|u| {
            let f = &f;
            (u + 1..n).filter_map(move |v| f(u, v, source.numerator(u, v)))
        })
        .collect()
}

/// Number of pairs at each distinct weight numerator.
pub fn weight_histogram<S: PairSource + ?Sized>(source: &S) -> BTreeMap<i64, u64> {
    let n = source.n_participants();
    let merged = (0..n)
        .into_par_iter()
        .fold(HashMap::<i64, u64>::new, |mut hist, u| {
            for v in u + 1..n {
                *hist.entry(source.numerator(u, v)).or_insert(0) += 1;
            }
            hist
        })
        .reduce(HashMap::new, |mut a, b| {
            for (k, c) in b {
                *a.entry(k).or_insert(0) += c;
            }
            a
        });
    merged.into_iter().collect()
}
