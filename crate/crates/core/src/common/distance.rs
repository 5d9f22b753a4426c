use crate::error::{Error, Result};

/// Euclidean distance between two equal-length coordinate slices.
pub fn euclidean_distance(a: &[f64], b: &[f64]) -> Result<f64> {
    check_same_dim(a.len(), b.len())?;
    Ok(squared_distance_unchecked(a, b).sqrt())
}

/// Squared Euclidean distance between two equal-length coordinate slices.
pub fn squared_distance(a: &[f64], b: &[f64]) -> Result<f64> {
    check_same_dim(a.len(), b.len())?;
    Ok(squared_distance_unchecked(a, b))
}

#[inline]
pub(crate) fn squared_distance_unchecked(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

#[inline]
pub(crate) fn check_same_dim(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

/// Index of the codebook vector closest to `x`. Ties go to the lowest index.
pub fn find_winner<V: AsRef<[f64]>>(codebook: &[V], x: &[f64]) -> Result<usize> {
    if codebook.is_empty() {
        return Err(Error::NotEnoughUnits {
            required: 1,
            found: 0,
        });
    }
    let mut best = 0;
    let mut best_d = f64::INFINITY;
    for (i, w) in codebook.iter().enumerate() {
        let w = w.as_ref();
        check_same_dim(x.len(), w.len())?;
        let d = squared_distance_unchecked(w, x);
        if d < best_d {
            best = i;
            best_d = d;
        }
    }
    Ok(best)
}

/// Indices of the closest and second-closest codebook vectors to `x`.
///
/// Ties go to the lowest index, so with two equidistant units the first
/// winner is the lower index and the second winner the next one.
pub fn find_winners<V: AsRef<[f64]>>(codebook: &[V], x: &[f64]) -> Result<(usize, usize)> {
    if codebook.len() < 2 {
        return Err(Error::NotEnoughUnits {
            required: 2,
            found: codebook.len(),
        });
    }
    let (mut best, mut second) = (usize::MAX, usize::MAX);
    let (mut best_d, mut second_d) = (f64::INFINITY, f64::INFINITY);
    for (i, w) in codebook.iter().enumerate() {
        let w = w.as_ref();
        check_same_dim(x.len(), w.len())?;
        let d = squared_distance_unchecked(w, x);
        if d < best_d {
            second = best;
            second_d = best_d;
            best = i;
            best_d = d;
        } else if d < second_d {
            second = i;
            second_d = d;
        }
    }
    // Infinite distances only arise from overflow; fall back to index order.
    if best == usize::MAX {
        best = 0;
    }
    if second == usize::MAX {
        second = if best == 0 { 1 } else { 0 };
    }
    Ok((best, second))
}
