//! Reproducible synthetic datasets.
//!
//! Every generator draws from a [`RandomStream`] seeded with [`SynthSpec::seed`],
//! so the same [`SynthSpec`] always produces the same rows bit for bit. Gaussian coordinates
//! come from [`RandomStream::normal`].

use crate::common::{Dataset, RandomStream, Vector};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum SynthKind {
    /// Uniform in the axis-aligned box `[low, high]`.
    UniformRect { low: Vec<f64>, high: Vec<f64> },
    /// Isotropic Gaussian components; labels are component indices.
    GaussianMixture {
        centers: Vec<Vec<f64>>,
        sigmas: Vec<f64>,
        weights: Vec<f64>,
    },
    /// Uniform by area in the 2-D annulus `inner <= r <= outer` around `center`.
    Ring { center: [f64; 2], inner: f64, outer: f64 },
    /// Two `side x side` squares, the second shifted right by `side + gap`.
    /// Points are split evenly at random; labels are 0 (left) and 1 (right).
    TwoSquares { side: f64, gap: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthSpec {
    pub kind: SynthKind,
    pub n: usize,
    pub seed: u64,
}

impl SynthSpec {
    pub fn new(kind: SynthKind, n: usize, seed: u64) -> Self {
        SynthSpec { kind, n, seed }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::param("n", "must be >= 1"));
        }
        let finite = |v: &[f64]| v.iter().all(|x| x.is_finite());
        match &self.kind {
            SynthKind::UniformRect { low, high } => {
                if low.is_empty() || low.len() != high.len() {
                    return Err(Error::param("bounds", "low and high need the same nonzero length"));
                }
                if !finite(low) || !finite(high) || low.iter().zip(high).any(|(l, h)| l > h) {
                    return Err(Error::param("bounds", "need finite low <= high"));
                }
            }
            SynthKind::GaussianMixture { centers, sigmas, weights } => {
                let k = centers.len();
                if k == 0 || sigmas.len() != k || weights.len() != k {
                    return Err(Error::param(
                        "mixture",
                        "centers, sigmas and weights need the same nonzero length",
                    ));
                }
                let dim = centers[0].len();
                if dim == 0 || centers.iter().any(|c| c.len() != dim || !finite(c)) {
                    return Err(Error::param("centers", "need finite centers of one dimension"));
                }
                if sigmas.iter().any(|s| !(s.is_finite() && *s > 0.0)) {
                    return Err(Error::param("sigmas", "must be finite and > 0"));
                }
                if weights.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
                    return Err(Error::param("weights", "must be finite and > 0"));
                }
                let total: f64 = weights.iter().sum();
                if (total - 1.0).abs() > 1e-9 {
                    return Err(Error::param("weights", format!("must sum to 1, got {total}")));
                }
            }
            SynthKind::Ring { center, inner, outer } => {
                if !finite(center) || !(inner.is_finite() && outer.is_finite()) || *inner < 0.0 || inner > outer {
                    return Err(Error::param("ring", "need finite 0 <= inner <= outer"));
                }
            }
            SynthKind::TwoSquares { side, gap } => {
                if !(side.is_finite() && *side > 0.0 && gap.is_finite() && *gap >= 0.0) {
                    return Err(Error::param("two_squares", "need side > 0 and gap >= 0"));
                }
            }
        }
        Ok(())
    }
}

/// Draws `spec.n` rows. Mixtures and two-square data carry labels.
pub fn generate(spec: &SynthSpec) -> Result<Dataset> {
    spec.validate()?;
    let mut rng = RandomStream::new(spec.seed);
    let n = spec.n;
    let mut labels: Option<Vec<i64>> = None;
    let rows: Vec<Vec<f64>> = match &spec.kind {
        SynthKind::UniformRect { low, high } => (0..n)
            .map(|_| low.iter().zip(high).map(|(&l, &h)| rng.uniform_in(l, h)).collect())
            .collect(),
        SynthKind::GaussianMixture { centers, sigmas, weights } => {
            let mut cumulative = Vec::with_capacity(weights.len());
            let mut acc = 0.0;
            for w in weights {
                acc += w;
                cumulative.push(acc);
            }
            let mut tags = Vec::with_capacity(n);
            let rows = (0..n)
                .map(|_| {
                    let u = rng.unit() * acc;
                    let k = cumulative.iter().position(|&c| u < c).unwrap_or(weights.len() - 1);
                    tags.push(k as i64);
                    centers[k].iter().map(|&c| c + sigmas[k] * rng.normal()).collect()
                })
                .collect();
            labels = Some(tags);
            rows
        }
        SynthKind::Ring { center, inner, outer } => (0..n)
            .map(|_| {
                let theta = rng.unit() * std::f64::consts::TAU;
                let r2 = inner * inner + rng.unit() * (outer * outer - inner * inner);
                let r = r2.sqrt();
                vec![center[0] + r * theta.cos(), center[1] + r * theta.sin()]
            })
            .collect(),
        SynthKind::TwoSquares { side, gap } => {
            let mut tags = Vec::with_capacity(n);
            let rows = (0..n)
                .map(|_| {
                    let right = rng.index(2) == 1;
                    tags.push(right as i64);
                    let offset = if right { side + gap } else { 0.0 };
                    vec![offset + rng.uniform_in(0.0, *side), rng.uniform_in(0.0, *side)]
                })
                .collect();
            labels = Some(tags);
            rows
        }
    };
    let rows = rows.into_iter().map(Vector::new).collect::<Result<Vec<_>>>()?;
    let data = Dataset::new(rows)?;
    match labels {
        Some(l) => data.with_labels(l),
        None => Ok(data),
    }
}
