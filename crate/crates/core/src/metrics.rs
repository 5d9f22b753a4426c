//! Codebook quality measures shared by all models.

use std::collections::BTreeSet;

use crate::common::{find_winner, find_winners, squared_distance_unchecked, Dataset, Vector};
use crate::error::{Error, Result};
use crate::som::SomGrid;

/// Best matching unit index for every input, lowest index on ties.
pub fn assignments<V: AsRef<[f64]>>(codebook: &[V], data: &Dataset) -> Result<Vec<usize>> {
    if codebook.is_empty() {
        return Err(Error::NotEnoughUnits { required: 1, found: 0 });
    }
    data.iter().map(|x| find_winner(codebook, x)).collect()
}

/// Mean Euclidean distance from each input to its best matching unit.
pub fn quantization_error<V: AsRef<[f64]>>(codebook: &[V], data: &Dataset) -> Result<f64> {
    Ok(bmu_distances(codebook, data)?.map(f64::sqrt).sum::<f64>() / data.len() as f64)
}

/// Mean squared distance from each input to its best matching unit.
pub fn squared_quantization_error<V: AsRef<[f64]>>(codebook: &[V], data: &Dataset) -> Result<f64> {
    Ok(bmu_distances(codebook, data)?.sum::<f64>() / data.len() as f64)
}

fn bmu_distances<'a, V: AsRef<[f64]>>(
    codebook: &'a [V],
    data: &'a Dataset,
) -> Result<impl Iterator<Item = f64> + 'a> {
    let bmus = assignments(codebook, data)?;
    Ok(bmus
        .into_iter()
        .zip(data.iter())
        .map(|(c, x)| squared_distance_unchecked(codebook[c].as_ref(), x)))
}

/// Fraction of inputs whose two best units are not radius-1 neighbors on the grid.
pub fn topographic_error(grid: &SomGrid, data: &Dataset) -> Result<f64> {
    if grid.len() < 2 {
        return Err(Error::NotEnoughUnits {
            required: 2,
            found: grid.len(),
        });
    }
    data.check_dim(grid.dim())?;
    let mut misses = 0usize;
    for x in data {
        let (a, b) = find_winners(grid.codebook(), x)?;
        if grid.grid_distance(a, b)? > 1 {
            misses += 1;
        }
    }
    Ok(misses as f64 / data.len() as f64)
}

/// Units that win no input.
pub fn dead_units<V: AsRef<[f64]>>(codebook: &[V], data: &Dataset) -> Result<usize> {
    let winners: BTreeSet<usize> = assignments(codebook, data)?.into_iter().collect();
    Ok(codebook.len() - winners.len())
}

/// Connected components of the undirected graph on `nodes` with `edges`.
/// Edge endpoints outside `nodes` are ignored.
pub fn component_count(nodes: impl IntoIterator<Item = usize>, edges: impl IntoIterator<Item = (usize, usize)>) -> usize {
    let ids: Vec<usize> = nodes.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
    let index = |id: usize| ids.binary_search(&id).ok();
    let mut parent: Vec<usize> = (0..ids.len()).collect();
    fn root(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    let mut count = ids.len();
    for (a, b) in edges {
        if let (Some(a), Some(b)) = (index(a), index(b)) {
            let (ra, rb) = (root(&mut parent, a), root(&mut parent, b));
            if ra != rb {
                parent[ra.max(rb)] = ra.min(rb);
                count -= 1;
            }
        }
    }
    count
}

/// Summary of a codebook against a dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricReport {
    pub quantization_error: f64,
    pub squared_quantization_error: f64,
    /// Only defined for grid models.
    pub topographic_error: Option<f64>,
    pub dead_units: usize,
    pub n_units: usize,
    pub n_inputs: usize,
}

impl MetricReport {
    pub fn for_codebook(codebook: &[Vector], data: &Dataset) -> Result<Self> {
        Ok(MetricReport {
            quantization_error: quantization_error(codebook, data)?,
            squared_quantization_error: squared_quantization_error(codebook, data)?,
            topographic_error: None,
            dead_units: dead_units(codebook, data)?,
            n_units: codebook.len(),
            n_inputs: data.len(),
        })
    }

    pub fn for_grid(grid: &SomGrid, data: &Dataset) -> Result<Self> {
        let mut report = Self::for_codebook(grid.codebook(), data)?;
        if grid.len() >= 2 {
            report.topographic_error = Some(topographic_error(grid, data)?);
        }
        Ok(report)
    }
}
