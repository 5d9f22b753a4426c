use std::ops::{Deref, Index};

use crate::common::rng::RandomStream;
use crate::error::{Error, Result};

/// A point in the n-dimensional input space.
///
/// Always nonempty with finite coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Vector(Vec<f64>);

impl Vector {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::EmptyVector);
        }
        if let Some(index) = coords.iter().position(|c| !c.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Vector(coords))
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "zero-dimensional vector");
        Vector(vec![0.0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    /// Moves `self` toward `target` by `rate`: `self += rate * (target - self)`.
    pub(crate) fn move_toward(&mut self, target: &[f64], rate: f64) {
        debug_assert_eq!(self.0.len(), target.len());
        for (w, x) in self.0.iter_mut().zip(target) {
            *w += rate * (x - *w);
        }
    }

    /// Coordinate-wise midpoint of two vectors.
    pub(crate) fn midpoint(a: &[f64], b: &[f64]) -> Self {
        Vector(a.iter().zip(b).map(|(x, y)| (x + y) / 2.0).collect())
    }
}

impl Deref for Vector {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl AsRef<[f64]> for Vector {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

impl TryFrom<Vec<f64>> for Vector {
    type Error = Error;

    fn try_from(coords: Vec<f64>) -> Result<Self> {
        Vector::new(coords)
    }
}

impl TryFrom<&[f64]> for Vector {
    type Error = Error;

    fn try_from(coords: &[f64]) -> Result<Self> {
        Vector::new(coords.to_vec())
    }
}

/// An ordered, nonempty collection of equal-length vectors.
///
/// Labels are carried for evaluation only. No training routine reads them.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    rows: Vec<Vector>,
    dim: usize,
    labels: Option<Vec<i64>>,
}

impl Dataset {
    pub fn new(rows: Vec<Vector>) -> Result<Self> {
        let dim = rows.first().ok_or(Error::EmptyDataset)?.dim();
        if let Some(bad) = rows.iter().find(|r| r.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: bad.dim(),
            });
        }
        Ok(Dataset {
            rows,
            dim,
            labels: None,
        })
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let rows = rows
            .into_iter()
            .map(Vector::new)
            .collect::<Result<Vec<_>>>()?;
        Dataset::new(rows)
    }

    pub fn with_labels(mut self, labels: Vec<i64>) -> Result<Self> {
        if labels.len() != self.rows.len() {
            return Err(Error::LabelCount {
                rows: self.rows.len(),
                labels: labels.len(),
            });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn rows(&self) -> &[Vector] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    /// Always false; kept for clippy's `len_without_is_empty`.
    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> Option<&[i64]> {
        self.labels.as_deref()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Vector> {
        self.rows.iter()
    }

    /// Returns a uniformly chosen row, advancing `rng` by one index draw.
    pub fn draw_sample<'a>(&'a self, rng: &mut RandomStream) -> &'a Vector {
        &self.rows[rng.index(self.rows.len())]
    }

    /// Per-coordinate `(min, max)` of the rows.
    pub fn bounds(&self) -> (Vec<f64>, Vec<f64>) {
        let mut lo = self.rows[0].as_slice().to_vec();
        let mut hi = lo.clone();
        for row in &self.rows[1..] {
            for (j, &v) in row.iter().enumerate() {
                lo[j] = lo[j].min(v);
                hi[j] = hi[j].max(v);
            }
        }
        (lo, hi)
    }

    /// Draws a vector uniformly inside the bounding box of the rows.
    pub fn sample_in_bounds(&self, rng: &mut RandomStream) -> Vector {
        let (lo, hi) = self.bounds();
        Vector(
            lo.iter()
                .zip(&hi)
                .map(|(&l, &h)| rng.uniform_in(l, h))
                .collect(),
        )
    }

    /// Coordinate-wise mean of the rows.
    ///
    /// Accumulated incrementally, so a dataset of identical rows has exactly
    /// that row as its mean.
    pub fn mean(&self) -> Vector {
        let mut acc = self.rows[0].as_slice().to_vec();
        for (k, row) in self.rows.iter().enumerate().skip(1) {
            let n = (k + 1) as f64;
            for (a, v) in acc.iter_mut().zip(row.iter()) {
                *a += (v - *a) / n;
            }
        }
        Vector(acc)
    }

    pub fn check_dim(&self, dim: usize) -> Result<()> {
        if self.dim != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: self.dim,
            });
        }
        Ok(())
    }
}

impl Index<usize> for Dataset {
    type Output = Vector;

    fn index(&self, i: usize) -> &Vector {
        &self.rows[i]
    }
}

impl<'a> IntoIterator for &'a Dataset {
    type Item = &'a Vector;
    type IntoIter = std::slice::Iter<'a, Vector>;

    fn into_iter(self) -> Self::IntoIter {
        self.rows.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_vectors() {
        assert!(matches!(Vector::new(vec![]), Err(Error::EmptyVector)));
        assert!(matches!(
            Vector::new(vec![1.0, f64::NAN]),
            Err(Error::NonFinite { index: 1 })
        ));
        assert!(Vector::new(vec![1.0, f64::INFINITY]).is_err());
    }

    #[test]
    fn rejects_ragged_and_empty_datasets() {
        assert!(matches!(Dataset::new(vec![]), Err(Error::EmptyDataset)));
        let err = Dataset::from_rows(vec![vec![0.0, 0.0], vec![1.0]]).unwrap_err();
        assert!(matches!(
            err,
            Error::DimensionMismatch {
                expected: 2,
                found: 1
            }
        ));
        let d = Dataset::from_rows(vec![vec![0.0], vec![1.0]]).unwrap();
        assert!(d.with_labels(vec![0]).is_err());
    }

    #[test]
    fn single_row_is_always_drawn() {
        let d = Dataset::from_rows(vec![vec![3.0, -1.0]]).unwrap();
        for seed in [0, 1, 42, u64::MAX] {
            let mut rng = RandomStream::new(seed);
            for _ in 0..10 {
                assert_eq!(d.draw_sample(&mut rng).as_slice(), &[3.0, -1.0]);
            }
        }
    }

    #[test]
    fn draws_replay_from_seed() {
        let d = Dataset::from_rows((0..17).map(|i| vec![i as f64]).collect()).unwrap();
        let draw = |seed| {
            let mut rng = RandomStream::new(seed);
            (0..200).map(|_| d.draw_sample(&mut rng)[0]).collect::<Vec<_>>()
        };
        assert_eq!(draw(42), draw(42));
        assert_ne!(draw(42), draw(43));
    }

    #[test]
    fn draws_are_uniform() {
        let d = Dataset::from_rows((0..4).map(|i| vec![i as f64]).collect()).unwrap();
        let mut rng = RandomStream::new(42);
        let n = 100_000;
        let mut counts = [0usize; 4];
        for _ in 0..n {
            counts[d.draw_sample(&mut rng)[0] as usize] += 1;
        }
        let expected = n as f64 / 4.0;
        let chi2: f64 = counts
            .iter()
            .map(|&c| (c as f64 - expected).powi(2) / expected)
            .sum();
        // 99.9% quantile of chi-square with 3 degrees of freedom.
        assert!(chi2 < 16.27, "chi2 = {chi2}, counts = {counts:?}");
        for &c in &counts {
            let freq = c as f64 / n as f64;
            assert!((freq - 0.25).abs() <= 0.01 * 0.25, "freq = {freq}");
        }
    }

    #[test]
    fn bounds_and_mean() {
        let d = Dataset::from_rows(vec![vec![0.0, 5.0], vec![2.0, -1.0], vec![1.0, 2.0]]).unwrap();
        assert_eq!(d.bounds(), (vec![0.0, -1.0], vec![2.0, 5.0]));
        assert_eq!(d.mean().as_slice(), &[1.0, 2.0]);
        let same = Dataset::from_rows(vec![vec![0.1, 0.7]; 9]).unwrap();
        assert_eq!(same.mean().as_slice(), &[0.1, 0.7]);
    }
}
