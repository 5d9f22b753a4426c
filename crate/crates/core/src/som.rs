//! Fixed-topology Kohonen self-organizing map.
//!
//! Units sit on a `width x height` lattice; unit `i` lives at column
//! `i % width`, row `i / width`. Each training step draws a sample, finds the
//! best matching unit `c` and moves every unit within grid distance `radius(t)`
//! of `c` toward the sample by `alpha(t)`. Units outside that ball are left
//! untouched.

use std::fmt;
use std::str::FromStr;

use crate::common::{check_same_dim, find_winner, Dataset, DecaySchedule, RandomStream, Vector};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Topology {
    #[default]
    Rectangular,
    /// Odd rows are shifted right by half a cell ("odd-r" offset layout).
    Hexagonal,
}

impl fmt::Display for Topology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Topology::Rectangular => "rectangular",
            Topology::Hexagonal => "hexagonal",
        })
    }
}

impl FromStr for Topology {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rectangular" | "rect" => Ok(Topology::Rectangular),
            "hexagonal" | "hex" => Ok(Topology::Hexagonal),
            other => Err(Error::param("topology", format!("unknown topology `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SomGrid {
    width: usize,
    height: usize,
    topology: Topology,
    codebook: Vec<Vector>,
}

impl SomGrid {
    pub fn new(width: usize, height: usize, topology: Topology, codebook: Vec<Vector>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::param("grid size", "width and height must be >= 1"));
        }
        if codebook.len() != width * height {
            return Err(Error::param(
                "codebook",
                format!("expected {} vectors, found {}", width * height, codebook.len()),
            ));
        }
        let dim = codebook[0].dim();
        for w in &codebook {
            check_same_dim(dim, w.dim())?;
        }
        Ok(SomGrid {
            width,
            height,
            topology,
            codebook,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn topology(&self) -> Topology {
        self.topology
    }

    pub fn codebook(&self) -> &[Vector] {
        &self.codebook
    }

    pub fn len(&self) -> usize {
        self.codebook.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codebook.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.codebook[0].dim()
    }

    fn position(&self, i: usize) -> (i64, i64) {
        ((i % self.width) as i64, (i / self.width) as i64)
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i >= self.len() {
            return Err(Error::IndexOutOfRange {
                index: i,
                len: self.len(),
            });
        }
        Ok(())
    }

    /// Lattice distance between two units: Chebyshev for rectangular grids,
    /// hex ring distance (via axial coordinates) for hexagonal ones.
    pub fn grid_distance(&self, a: usize, b: usize) -> Result<usize> {
        self.check_index(a)?;
        self.check_index(b)?;
        Ok(self.grid_distance_unchecked(a, b))
    }

    fn grid_distance_unchecked(&self, a: usize, b: usize) -> usize {
        let (ca, ra) = self.position(a);
        let (cb, rb) = self.position(b);
        let d = match self.topology {
            Topology::Rectangular => (ca - cb).abs().max((ra - rb).abs()),
            Topology::Hexagonal => {
                let qa = ca - (ra - (ra & 1)) / 2;
                let qb = cb - (rb - (rb & 1)) / 2;
                let (dq, dr) = (qa - qb, ra - rb);
                (dq.abs() + dr.abs() + (dq + dr).abs()) / 2
            }
        };
        d as usize
    }

    /// All units within lattice distance `radius` of `c`, including `c`, in index order.
    pub fn grid_neighbors(&self, c: usize, radius: f64) -> Result<Vec<usize>> {
        self.check_index(c)?;
        if radius.is_nan() || radius < 0.0 {
            return Err(Error::param("radius", "must be >= 0"));
        }
        Ok((0..self.len())
            .filter(|&i| self.grid_distance_unchecked(c, i) as f64 <= radius)
            .collect())
    }

    pub fn best_matching_unit(&self, x: &[f64]) -> Result<usize> {
        find_winner(&self.codebook, x)
    }

    /// One update with explicit rate and radius. Returns the BMU index.
    pub fn adapt(&mut self, x: &[f64], alpha: f64, radius: f64) -> Result<usize> {
        check_same_dim(self.dim(), x.len())?;
        let c = self.best_matching_unit(x)?;
        for i in self.grid_neighbors(c, radius)? {
            self.codebook[i].move_toward(x, alpha);
        }
        Ok(c)
    }
}

/// Training schedule: learning rate and neighborhood radius over a fixed step budget.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SomParams {
    alpha: DecaySchedule,
    radius: DecaySchedule,
}

impl SomParams {
    pub fn new(alpha: DecaySchedule, radius: DecaySchedule) -> Result<Self> {
        if alpha.initial() > 1.0 {
            return Err(Error::param("som.alpha_initial", "must lie in (0, 1]"));
        }
        if alpha.total_steps() != radius.total_steps() {
            return Err(Error::param(
                "som.steps",
                "learning-rate and radius schedules must share the step count",
            ));
        }
        Ok(SomParams { alpha, radius })
    }

    /// Linear schedules for both rate and radius.
    pub fn linear(
        alpha_initial: f64,
        alpha_final: f64,
        radius_initial: f64,
        radius_final: f64,
        total_steps: usize,
    ) -> Result<Self> {
        Self::new(
            DecaySchedule::linear(alpha_initial, alpha_final, total_steps)?,
            DecaySchedule::linear(radius_initial, radius_final, total_steps)?,
        )
    }

    pub fn alpha(&self) -> &DecaySchedule {
        &self.alpha
    }

    pub fn radius(&self) -> &DecaySchedule {
        &self.radius
    }

    pub fn total_steps(&self) -> usize {
        self.alpha.total_steps()
    }
}

/// Codebook drawn uniformly inside the bounding box of `data`.
pub fn som_init(
    width: usize,
    height: usize,
    topology: Topology,
    data: &Dataset,
    rng: &mut RandomStream,
) -> Result<SomGrid> {
    if width == 0 || height == 0 {
        return Err(Error::param("grid size", "width and height must be >= 1"));
    }
    let codebook = (0..width * height)
        .map(|_| data.sample_in_bounds(rng))
        .collect();
    SomGrid::new(width, height, topology, codebook)
}

/// Applies the update rule at step `t` (`t < T`). Returns the BMU index.
pub fn som_train_step(grid: &mut SomGrid, params: &SomParams, x: &[f64], t: usize) -> Result<usize> {
    let total = params.total_steps();
    if t >= total {
        return Err(Error::StepOutOfRange { step: t, total });
    }
    let alpha = params.alpha.value(t)?;
    let radius = params.radius.value(t)?;
    grid.adapt(x, alpha, radius)
}

/// Runs exactly `T` draw-and-update steps starting from `grid`.
pub fn som_train(
    data: &Dataset,
    params: &SomParams,
    mut grid: SomGrid,
    rng: &mut RandomStream,
) -> Result<SomGrid> {
    data.check_dim(grid.dim())?;
    for t in 0..params.total_steps() {
        let x = data.draw_sample(rng);
        som_train_step(&mut grid, params, x, t)?;
    }
    Ok(grid)
}
