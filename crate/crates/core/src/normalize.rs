//! Ordinal codes → symmetric `[-1, +1]` values and signs.
//!
//! A code `c` on a `k`-point item maps to `(2c - (k-1)) / (k-1)`: equally
//! spaced steps from `-1` to `+1`, e.g. `{-1, -1/3, 1/3, 1}` for `k = 4`.
//! Values are stored as integer numerators over the per-item denominator
//! `k - 1`, so nothing downstream is rounded.

use std::io::Write;
use std::sync::Arc;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::ingest::{Item, ResponseMatrix};
use crate::rational::{format_rational, Rational};

pub(crate) const MISSING_VALUE: i16 = i16::MIN;
pub(crate) const MISSING_SIGN: i8 = i8::MIN;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalizedMatrix {
    source: Arc<ResponseMatrix>,
    /// `2c - (k-1)`, row-major; `MISSING_VALUE` for missing.
    numerators: Vec<i16>,
    /// `k - 1` per item.
    denominators: Vec<i16>,
}

impl NormalizedMatrix {
    pub fn source(&self) -> &ResponseMatrix {
        &self.source
    }

    pub fn n_participants(&self) -> usize {
        self.source.n_participants()
    }

    pub fn n_items(&self) -> usize {
        self.source.n_items()
    }

    pub fn items(&self) -> &[Item] {
        self.source.items()
    }

    pub fn value(&self, participant: usize, item: usize) -> Option<Rational> {
        match self.numerators[participant * self.n_items() + item] {
            MISSING_VALUE => None,
            n => Some(Rational::new(n as i64, self.denominators[item] as i64)),
        }
    }

    pub fn row(&self, participant: usize) -> Vec<Option<Rational>> {
        (0..self.n_items()).map(|i| self.value(participant, i)).collect()
    }

    pub(crate) fn raw_numerators(&self) -> &[i16] {
        &self.numerators
    }

    pub(crate) fn denominators(&self) -> &[i16] {
        &self.denominators
    }

    /// Least common multiple of the per-item denominators `k - 1`.
    pub fn common_denominator(&self) -> Result<i64> {
        self.denominators.iter().try_fold(1i64, |acc, &d| {
            let l = acc.lcm(&(d as i64));
            if l > i32::MAX as i64 {
                Err(Error::Overflow(format!(
                    "common denominator of item scales exceeds {}",
                    i32::MAX
                )))
            } else {
                Ok(l)
            }
        })
    }

    /// Debug dump: participant id followed by exact values, empty when missing.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(writer);
        let mut header = vec!["participant".to_string()];
        header.extend(self.items().iter().map(|i| i.id.clone()));
        out.write_record(&header).map_err(|e| Error::Csv(e.to_string()))?;
        for p in 0..self.n_participants() {
            let mut rec = vec![self.source.participants()[p].clone()];
            rec.extend(
                self.row(p)
                    .iter()
                    .map(|v| v.as_ref().map(format_rational).unwrap_or_default()),
            );
            out.write_record(&rec).map_err(|e| Error::Csv(e.to_string()))?;
        }
        out.flush().map_err(|e| Error::Csv(e.to_string()))?;
        Ok(())
    }
}

/// Signs of normalized values: `-1`, `0` (scale midpoint) or `+1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignMatrix {
    source: Arc<ResponseMatrix>,
    signs: Vec<i8>,
}

impl SignMatrix {
    pub fn source(&self) -> &ResponseMatrix {
        &self.source
    }

    pub fn n_participants(&self) -> usize {
        self.source.n_participants()
    }

    pub fn n_items(&self) -> usize {
        self.source.n_items()
    }

    pub fn sign(&self, participant: usize, item: usize) -> Option<i8> {
        match self.signs[participant * self.n_items() + item] {
            MISSING_SIGN => None,
            s => Some(s),
        }
    }

    pub fn row(&self, participant: usize) -> &[i8] {
        let m = self.n_items();
        &self.signs[participant * m..(participant + 1) * m]
    }

    pub(crate) fn raw(&self) -> &[i8] {
        &self.signs
    }
}

pub fn renormalize(matrix: &ResponseMatrix) -> NormalizedMatrix {
    let source = Arc::new(matrix.clone());
    let denominators: Vec<i16> = matrix.items().iter().map(|i| (i.scale - 1) as i16).collect();
    let m = matrix.n_items();
    let mut numerators = Vec::with_capacity(matrix.n_participants() * m);
    for p in 0..matrix.n_participants() {
        for (i, &code) in matrix.raw_row(p).iter().enumerate() {
            numerators.push(if code == crate::ingest::MISSING_CODE {
                MISSING_VALUE
            } else {
                2 * code as i16 - denominators[i]
            });
        }
    }
    NormalizedMatrix {
        source,
        numerators,
        denominators,
    }
}

pub fn binarize(matrix: &NormalizedMatrix) -> SignMatrix {
    let signs = matrix
        .numerators
        .iter()
        .map(|&n| match n {
            MISSING_VALUE => MISSING_SIGN,
            n => n.signum() as i8,
        })
        .collect();
    SignMatrix {
        source: Arc::clone(&matrix.source),
        signs,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn values_for_scale(k: u32) -> Vec<Rational> {
        let rows: Vec<Vec<u32>> = (0..k).map(|c| vec![c]).collect();
        let norm = renormalize(&ResponseMatrix::from_complete(&[k], &rows).unwrap());
        (0..k as usize).map(|p| norm.value(p, 0).unwrap()).collect()
    }

    #[test]
    fn five_point_scale() {
        let r = |n, d| Rational::new(n, d);
        assert_eq!(
            values_for_scale(5),
            vec![r(-1, 1), r(-1, 2), r(0, 1), r(1, 2), r(1, 1)]
        );
    }

    #[test]
    fn four_point_scale() {
        let r = |n, d| Rational::new(n, d);
        assert_eq!(values_for_scale(4), vec![r(-1, 1), r(-1, 3), r(1, 3), r(1, 1)]);
    }

    #[test]
    fn endpoints_and_midpoint() {
        assert_eq!(values_for_scale(2), vec![Rational::from_integer(-1), Rational::from_integer(1)]);
        assert_eq!(values_for_scale(3)[1], Rational::from_integer(0));
    }

    #[test]
    fn binarize_rows() {
        // k=4 code 2 -> +1/3, k=5 code 2 -> 0, k=5 code 0 -> -1, k=5 code 3 -> 1/2
        let m = ResponseMatrix::from_codes(&[4, 5, 5, 5], &[vec![Some(2), Some(2), Some(0), None]])
            .unwrap();
        let norm = renormalize(&m);
        assert_eq!(norm.value(0, 0), Some(Rational::new(1, 3)));
        let signs = binarize(&norm);
        assert_eq!(signs.sign(0, 0), Some(1));
        assert_eq!(signs.sign(0, 1), Some(0));
        assert_eq!(signs.sign(0, 2), Some(-1));
        assert_eq!(signs.sign(0, 3), None);
    }

    #[test]
    fn row_of_values_binarizes_componentwise() {
        // (-1, 0, 1/2)
        let m = ResponseMatrix::from_complete(&[5, 5, 5], &[vec![0, 2, 3]]).unwrap();
        let signs = binarize(&renormalize(&m));
        assert_eq!(signs.row(0), &[-1, 0, 1]);
    }

    #[test]
    fn common_denominator_is_lcm() {
        let m = ResponseMatrix::from_complete(&[4, 5, 7], &[vec![0, 0, 0]]).unwrap();
        assert_eq!(renormalize(&m).common_denominator().unwrap(), 12);
    }

    proptest! {
        #[test]
        fn reversal_negates(k in 2u32..12, codes in proptest::collection::vec(0u32..100, 1..20)) {
            let rows: Vec<Vec<u32>> = codes.iter().map(|c| vec![c % k]).collect();
            let rev: Vec<Vec<u32>> = codes.iter().map(|c| vec![k - 1 - c % k]).collect();
            let a = renormalize(&ResponseMatrix::from_complete(&[k], &rows).unwrap());
            let b = renormalize(&ResponseMatrix::from_complete(&[k], &rev).unwrap());
            for p in 0..rows.len() {
                prop_assert_eq!(a.value(p, 0).unwrap(), -b.value(p, 0).unwrap());
            }
        }

        #[test]
        fn sign_depends_only_on_midpoint_side(k in 2u32..12, c in 0u32..12) {
            let c = c % k;
            let m = ResponseMatrix::from_complete(&[k], &[vec![c]]).unwrap();
            let norm = renormalize(&m);
            let v = norm.value(0, 0).unwrap();
            prop_assert!(v >= Rational::from_integer(-1) && v <= Rational::from_integer(1));
            let expected = (2 * c as i64 - (k as i64 - 1)).signum() as i8;
            prop_assert_eq!(binarize(&norm).sign(0, 0), Some(expected));
        }
    }
}
