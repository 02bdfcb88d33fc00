//! Raster representations: the heat kernel surface and the persistence image.
//!
//! Rasters hold one value per cell, sampled at the cell center.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::types::PersistenceDiagram;

use super::grid::{finite_points, span};

/// Margin around the diagram span, in multiples of the bandwidth.
pub const MARGIN_SIGMAS: f64 = 3.0;

/// Rectangular raster of `nx` by `ny` cells.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ImageGrid {
    pub x_range: (f64, f64),
    pub y_range: (f64, f64),
    pub nx: usize,
    pub ny: usize,
}

impl ImageGrid {
    pub fn new(x_range: (f64, f64), y_range: (f64, f64), nx: usize, ny: usize) -> Result<Self> {
        if nx == 0 || ny == 0 {
            return invalid("raster resolution must be at least 1x1");
        }
        let ok = |(lo, hi): (f64, f64)| lo.is_finite() && hi.is_finite() && lo < hi;
        if !ok(x_range) || !ok(y_range) {
            return invalid("raster ranges must be finite and non-empty");
        }
        Ok(Self { x_range, y_range, nx, ny })
    }

    pub fn cell_width(&self) -> f64 {
        (self.x_range.1 - self.x_range.0) / self.nx as f64
    }

    pub fn cell_height(&self) -> f64 {
        (self.y_range.1 - self.y_range.0) / self.ny as f64
    }

    pub fn x_center(&self, i: usize) -> f64 {
        self.x_range.0 + (i as f64 + 0.5) * self.cell_width()
    }

    pub fn y_center(&self, j: usize) -> f64 {
        self.y_range.0 + (j as f64 + 0.5) * self.cell_height()
    }

    /// Cell containing `(x, y)`, if inside the raster.
    pub fn cell_of(&self, x: f64, y: f64) -> Option<(usize, usize)> {
        let fx = (x - self.x_range.0) / self.cell_width();
        let fy = (y - self.y_range.0) / self.cell_height();
        if fx < 0.0 || fy < 0.0 || fx >= self.nx as f64 || fy >= self.ny as f64 {
            return None;
        }
        Some((fx as usize, fy as usize))
    }

    /// (birth, death) plane over `[min birth, max death]` on both axes, padded by 3 sigma.
    pub fn heat_default(dgm: &PersistenceDiagram, k: usize, sigma: f64, nx: usize, ny: usize) -> Result<Self> {
        let (lo, hi) = padded(span(dgm, k).unwrap_or((0.0, 1.0)), sigma);
        Self::new((lo, hi), (lo, hi), nx, ny)
    }

    /// (birth, persistence) plane, padded by 3 sigma.
    pub fn persistence_default(dgm: &PersistenceDiagram, k: usize, sigma: f64, nx: usize, ny: usize) -> Result<Self> {
        let (points, _) = finite_points(dgm, k);
        let range = |f: &dyn Fn(&(f64, f64)) -> f64| {
            points
                .iter()
                .map(f)
                .fold(None, |acc: Option<(f64, f64)>, v| Some(acc.map_or((v, v), |(lo, hi)| (lo.min(v), hi.max(v)))))
                .unwrap_or((0.0, 1.0))
        };
        let births = range(&|p| p.0);
        let pers = range(&|p| p.1 - p.0);
        Self::new(padded(births, sigma), padded(pers, sigma), nx, ny)
    }
}

fn padded((lo, hi): (f64, f64), sigma: f64) -> (f64, f64) {
    let margin = MARGIN_SIGMAS * sigma;
    let (lo, hi) = (lo - margin, hi + margin);
    if hi > lo {
        (lo, hi)
    } else {
        (lo - 0.5, hi + 0.5)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ImageMetadata {
    pub dim: usize,
    pub sigma: f64,
    pub infinite_substituted: bool,
}

/// Values indexed `[y][x]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagramImage {
    pub grid: ImageGrid,
    pub values: Vec<Vec<f64>>,
    pub metadata: ImageMetadata,
}

impl DiagramImage {
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.values[y][x]
    }

    /// Cell `(x, y)` of the largest value.
    pub fn argmax(&self) -> (usize, usize) {
        let mut best = (0, 0);
        for (j, row) in self.values.iter().enumerate() {
            for (i, &v) in row.iter().enumerate() {
                if v > self.values[best.1][best.0] {
                    best = (i, j);
                }
            }
        }
        best
    }

    /// `(sum |v|^p * cell area)^(1/p)`; `p = f64::INFINITY` gives the max.
    pub fn lp_norm(&self, p: f64) -> f64 {
        let cell = self.grid.cell_width() * self.grid.cell_height();
        super::curves::lp_norm(self.values.iter().flatten().map(|v| v.abs()), p, cell)
    }
}

#[inline]
fn gaussian(dx: f64, dy: f64, sigma: f64) -> f64 {
    let s2 = sigma * sigma;
    (-(dx * dx + dy * dy) / (2.0 * s2)).exp() / (2.0 * PI * s2)
}

fn check_sigma(sigma: f64) -> Result<()> {
    if !(sigma > 0.0) || !sigma.is_finite() {
        return invalid(format!("bandwidth must be positive, got {sigma}"));
    }
    Ok(())
}

/// Heat kernel value at `(x, y)`: Gaussians at each point minus Gaussians at their mirror images.
pub fn heat_value(points: &[(f64, f64)], sigma: f64, x: f64, y: f64) -> f64 {
    points.iter().map(|&(b, d)| gaussian(x - b, y - d, sigma) - gaussian(x - d, y - b, sigma)).sum()
}

pub fn heat_surface(dgm: &PersistenceDiagram, k: usize, sigma: f64, grid: &ImageGrid) -> Result<DiagramImage> {
    check_sigma(sigma)?;
    let (points, infinite_substituted) = finite_points(dgm, k);
    let values = (0..grid.ny)
        .map(|j| {
            let y = grid.y_center(j);
            (0..grid.nx).map(|i| heat_value(&points, sigma, grid.x_center(i), y)).collect()
        })
        .collect();
    Ok(DiagramImage { grid: *grid, values, metadata: ImageMetadata { dim: k, sigma, infinite_substituted } })
}

/// Weighting of diagram points in the persistence image.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ImageWeight {
    /// `persistence / scale`; `scale = None` uses the largest persistence of the diagram.
    Linear {
        scale: Option<f64>,
    },
    Constant,
}

impl Default for ImageWeight {
    fn default() -> Self {
        ImageWeight::Linear { scale: None }
    }
}

/// Weighted Gaussians centered at (birth, persistence).
pub fn persistence_image(
    dgm: &PersistenceDiagram,
    k: usize,
    sigma: f64,
    grid: &ImageGrid,
    weight: ImageWeight,
) -> Result<DiagramImage> {
    check_sigma(sigma)?;
    let (points, infinite_substituted) = finite_points(dgm, k);
    let centers: Vec<(f64, f64)> = points.iter().map(|&(b, d)| (b, d - b)).collect();
    let weights: Vec<f64> = match weight {
        ImageWeight::Constant => vec![1.0; centers.len()],
        ImageWeight::Linear { scale } => {
            let scale = scale.unwrap_or_else(|| centers.iter().map(|c| c.1).fold(0.0, f64::max));
            if scale > 0.0 {
                centers.iter().map(|c| c.1 / scale).collect()
            } else {
                vec![1.0; centers.len()]
            }
        }
    };
    let values = (0..grid.ny)
        .map(|j| {
            let y = grid.y_center(j);
            (0..grid.nx)
                .map(|i| {
                    let x = grid.x_center(i);
                    centers.iter().zip(&weights).map(|(&(b, p), w)| w * gaussian(x - b, y - p, sigma)).sum()
                })
                .collect()
        })
        .collect();
    Ok(DiagramImage { grid: *grid, values, metadata: ImageMetadata { dim: k, sigma, infinite_substituted } })
}
