//! Region atlas: classification of every point of a `(p_φ, E)` grid.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::orbit::{classify, OrbitClass, OrbitSpec, Params};
use crate::parallel;

/// Uniform grid; each axis includes both endpoints, and a single-point axis
/// sits at its lower bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub p_min: f64,
    pub p_max: f64,
    pub p_steps: usize,
    pub e_min: f64,
    pub e_max: f64,
    pub e_steps: usize,
}

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        if self.p_steps == 0 || self.e_steps == 0 {
            return Err(Error::InvalidConfig(
                "grid must have at least one point per axis".into(),
            ));
        }
        let finite = [self.p_min, self.p_max, self.e_min, self.e_max]
            .iter()
            .all(|v| v.is_finite());
        if !finite || self.p_min > self.p_max || self.e_min > self.e_max {
            return Err(Error::InvalidConfig(format!(
                "invalid grid bounds {self:?}"
            )));
        }
        Ok(())
    }

    fn axis(min: f64, max: f64, n: usize, k: usize) -> f64 {
        if n == 1 {
            min
        } else if k == n - 1 {
            max
        } else {
            min + (max - min) * k as f64 / (n - 1) as f64
        }
    }

    pub fn p_at(&self, k: usize) -> f64 {
        Self::axis(self.p_min, self.p_max, self.p_steps, k)
    }

    pub fn e_at(&self, k: usize) -> f64 {
        Self::axis(self.e_min, self.e_max, self.e_steps, k)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegionCell {
    pub p_phi: f64,
    pub energy: f64,
    pub class: OrbitClass,
}

/// Row-major cells: energy rows from `e_min` up, `p_φ` increasing within a row.
pub fn region_grid(params: Params, grid: &GridSpec) -> Result<Vec<RegionCell>> {
    grid.validate()?;
    let rows: Vec<usize> = (0..grid.e_steps).collect();
    Ok(parallel::map(&rows, |&j| row(params, grid, j))
        .into_iter()
        .flatten()
        .collect())
}

/// Same cells as [`region_grid`], computed on the calling thread.
pub fn region_grid_sequential(params: Params, grid: &GridSpec) -> Result<Vec<RegionCell>> {
    grid.validate()?;
    Ok((0..grid.e_steps)
        .flat_map(|j| row(params, grid, j))
        .collect())
}

fn row(params: Params, grid: &GridSpec, j: usize) -> Vec<RegionCell> {
    let energy = grid.e_at(j);
    (0..grid.p_steps)
        .map(|i| {
            let p_phi = grid.p_at(i);
            RegionCell {
                p_phi,
                energy,
                class: classify(params, &OrbitSpec::new(energy, p_phi)),
            }
        })
        .collect()
}
