//! Curve representations sampled on an explicit grid.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::types::PersistenceDiagram;

use super::grid::{finite_points, Grid};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CurveMetadata {
    pub dim: usize,
    /// Some infinite death was replaced by the largest finite value.
    pub infinite_substituted: bool,
}

/// One row of samples per layer, each as long as the grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagramCurve {
    pub grid: Grid,
    pub layers: Vec<Vec<f64>>,
    pub metadata: CurveMetadata,
}

impl DiagramCurve {
    pub fn new(grid: Grid, layers: Vec<Vec<f64>>, metadata: CurveMetadata) -> Result<Self> {
        if layers.is_empty() {
            return invalid("curve needs at least one layer");
        }
        if let Some(i) = layers.iter().position(|l| l.len() != grid.len()) {
            return invalid(format!("layer {i} has {} samples for a grid of {}", layers[i].len(), grid.len()));
        }
        if layers.iter().flatten().any(|v| !v.is_finite()) {
            return invalid("curve values must be finite");
        }
        Ok(Self { grid, layers, metadata })
    }

    pub fn zeros(grid: Grid, n_layers: usize, dim: usize) -> Self {
        let layers = vec![vec![0.0; grid.len()]; n_layers.max(1)];
        Self { grid, layers, metadata: CurveMetadata { dim, infinite_substituted: false } }
    }
}

#[inline]
fn tent(t: f64, birth: f64, death: f64) -> f64 {
    (t - birth).min(death - t).max(0.0)
}

/// Number of pairs with `birth <= t < death` at every grid point.
pub fn betti_curve(dgm: &PersistenceDiagram, k: usize, grid: &Grid) -> DiagramCurve {
    let points = dgm.points(k);
    let values =
        grid.points().iter().map(|&t| points.iter().filter(|&&(b, d)| b <= t && t < d).count() as f64).collect();
    DiagramCurve {
        grid: grid.clone(),
        layers: vec![values],
        metadata: CurveMetadata { dim: k, infinite_substituted: false },
    }
}

/// Layer `j` holds the j-th largest tent value at every grid point.
pub fn persistence_landscape(dgm: &PersistenceDiagram, k: usize, n_layers: usize, grid: &Grid) -> Result<DiagramCurve> {
    if n_layers == 0 {
        return invalid("a landscape needs at least one layer");
    }
    let (points, infinite_substituted) = finite_points(dgm, k);
    let mut layers = vec![vec![0.0; grid.len()]; n_layers];
    let mut tents = Vec::with_capacity(points.len());
    for (i, &t) in grid.points().iter().enumerate() {
        tents.clear();
        tents.extend(points.iter().map(|&(b, d)| tent(t, b, d)));
        tents.sort_unstable_by(|a, b| b.total_cmp(a));
        for (layer, &v) in layers.iter_mut().zip(&tents) {
            layer[i] = v;
        }
    }
    Ok(DiagramCurve { grid: grid.clone(), layers, metadata: CurveMetadata { dim: k, infinite_substituted } })
}

/// Tent functions averaged with weights `(death - birth)^p`.
pub fn silhouette(dgm: &PersistenceDiagram, k: usize, power: f64, grid: &Grid) -> Result<DiagramCurve> {
    if !(power >= 0.0) || !power.is_finite() {
        return invalid(format!("silhouette power must be a non-negative number, got {power}"));
    }
    let (points, infinite_substituted) = finite_points(dgm, k);
    let weights: Vec<f64> = points.iter().map(|&(b, d)| (d - b).powf(power)).collect();
    let total: f64 = weights.iter().sum();
    let values = grid
        .points()
        .iter()
        .map(|&t| {
            if total == 0.0 {
                return 0.0;
            }
            let acc: f64 = points.iter().zip(&weights).map(|(&(b, d), w)| w * tent(t, b, d)).sum();
            acc / total
        })
        .collect();
    Ok(DiagramCurve {
        grid: grid.clone(),
        layers: vec![values],
        metadata: CurveMetadata { dim: k, infinite_substituted },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveFeatures {
    pub max: f64,
    /// First grid location where the maximum is attained.
    pub argmax: f64,
    /// Trapezoid rule over the grid.
    pub area: f64,
}

/// Maximum, its location and area of every layer.
pub fn curve_features(curve: &DiagramCurve) -> Vec<CurveFeatures> {
    let t = curve.grid.points();
    curve
        .layers
        .iter()
        .map(|values| {
            let (mut max, mut argmax) = (values[0], t[0]);
            for (&v, &x) in values.iter().zip(t).skip(1) {
                if v > max {
                    max = v;
                    argmax = x;
                }
            }
            let area = t.windows(2).zip(values.windows(2)).map(|(x, y)| 0.5 * (x[1] - x[0]) * (y[0] + y[1])).sum();
            CurveFeatures { max, argmax, area }
        })
        .collect()
}

/// Discrete L^p distance `(sum |diff|^p * h)^(1/p)` over all layers, `h` the
/// grid spacing. `p = f64::INFINITY` gives the largest absolute difference.
pub fn lp_curve_distance(c1: &DiagramCurve, c2: &DiagramCurve, p: f64) -> Result<f64> {
    if !(p >= 1.0) {
        return invalid(format!("p must be at least 1, got {p}"));
    }
    if c1.grid != c2.grid {
        return invalid("curves are sampled on different grids");
    }
    if c1.layers.len() != c2.layers.len() {
        return invalid(format!("layer counts differ ({} vs {})", c1.layers.len(), c2.layers.len()));
    }
    let diffs = c1.layers.iter().zip(&c2.layers).flat_map(|(a, b)| a.iter().zip(b).map(|(x, y)| (x - y).abs()));
    Ok(lp_norm(diffs, p, c1.grid.spacing()))
}

pub(crate) fn lp_norm(values: impl Iterator<Item = f64>, p: f64, cell: f64) -> f64 {
    if p.is_infinite() {
        values.fold(0.0, f64::max)
    } else {
        (values.map(|v| v.powf(p)).sum::<f64>() * cell).powf(1.0 / p)
    }
}
