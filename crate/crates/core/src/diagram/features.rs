//! Scalar and vector features of a single diagram dimension.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::types::{PersistenceDiagram, PersistencePair};

use super::curves::{betti_curve, lp_curve_distance, persistence_landscape, DiagramCurve};
use super::grid::{finite_points, Grid, DEFAULT_BINS};
use super::images::{heat_surface, ImageGrid};
use super::matching::{bottleneck_distance, wasserstein_distance};

/// Shannon entropy (base 2) of the normalized finite lifetimes.
pub fn persistence_entropy(dgm: &PersistenceDiagram, k: usize) -> f64 {
    let lifetimes: Vec<f64> = dgm.in_dim(k).filter(|p| !p.is_essential()).map(PersistencePair::persistence).collect();
    let total: f64 = lifetimes.iter().sum();
    if total <= 0.0 {
        return 0.0;
    }
    -lifetimes.iter().map(|&l| l / total).filter(|&p| p > 0.0).map(|p| p * p.log2()).sum::<f64>()
}

pub fn count_points(dgm: &PersistenceDiagram, k: usize) -> usize {
    dgm.in_dim(k).count()
}

/// Metric under which [`amplitude`] measures the distance to the empty diagram.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "metric", rename_all = "snake_case")]
pub enum AmplitudeMetric {
    Bottleneck,
    Wasserstein { q: f64 },
    Landscape { p: f64, n_layers: usize, n_bins: usize },
    Betti { p: f64, n_bins: usize },
    Heat { p: f64, sigma: f64, n_bins: usize },
}

impl AmplitudeMetric {
    pub fn landscape(p: f64) -> Self {
        AmplitudeMetric::Landscape { p, n_layers: 1, n_bins: DEFAULT_BINS }
    }

    pub fn betti(p: f64) -> Self {
        AmplitudeMetric::Betti { p, n_bins: DEFAULT_BINS }
    }

    pub fn heat(p: f64, sigma: f64) -> Self {
        AmplitudeMetric::Heat { p, sigma, n_bins: DEFAULT_BINS }
    }
}

/// Distance from the finite part of dimension `k` to the empty diagram.
/// Representation metrics take the L^p norm of the representation on the
/// default grid of the diagram.
pub fn amplitude(dgm: &PersistenceDiagram, k: usize, metric: AmplitudeMetric) -> Result<f64> {
    let finite: PersistenceDiagram = dgm.in_dim(k).filter(|p| !p.is_essential()).copied().collect();
    if finite.is_empty() {
        return Ok(0.0);
    }
    let empty = PersistenceDiagram::empty();
    match metric {
        AmplitudeMetric::Bottleneck => Ok(bottleneck_distance(&finite, &empty, k)),
        AmplitudeMetric::Wasserstein { q } => wasserstein_distance(&finite, &empty, k, q),
        AmplitudeMetric::Landscape { p, n_layers, n_bins } => {
            let grid = Grid::spanning(&finite, k, n_bins)?;
            let curve = persistence_landscape(&finite, k, n_layers, &grid)?;
            curve_norm(&curve, p)
        }
        AmplitudeMetric::Betti { p, n_bins } => {
            let grid = Grid::spanning(&finite, k, n_bins)?;
            curve_norm(&betti_curve(&finite, k, &grid), p)
        }
        AmplitudeMetric::Heat { p, sigma, n_bins } => {
            if !(p >= 1.0) {
                return invalid(format!("p must be at least 1, got {p}"));
            }
            let grid = ImageGrid::heat_default(&finite, k, sigma, n_bins, n_bins)?;
            Ok(heat_surface(&finite, k, sigma, &grid)?.lp_norm(p))
        }
    }
}

fn curve_norm(curve: &DiagramCurve, p: f64) -> Result<f64> {
    let zero = DiagramCurve::zeros(curve.grid.clone(), curve.layers.len(), curve.metadata.dim);
    lp_curve_distance(curve, &zero, p)
}

/// Coefficients after the leading 1 of `prod (x - (b + i d))`, highest degree
/// first, zero-padded to `n_coefficients`.
pub fn complex_polynomial(dgm: &PersistenceDiagram, k: usize, n_coefficients: usize) -> Result<Vec<Complex64>> {
    if n_coefficients == 0 {
        return invalid("n_coefficients must be at least 1");
    }
    let (points, _) = finite_points(dgm, k);
    let mut coeffs = vec![Complex64::new(1.0, 0.0)];
    for &(b, d) in &points {
        let root = Complex64::new(b, d);
        coeffs.push(Complex64::new(0.0, 0.0));
        for i in (1..coeffs.len()).rev() {
            let prev = coeffs[i - 1];
            coeffs[i] -= root * prev;
        }
    }
    let mut out: Vec<Complex64> = coeffs.into_iter().skip(1).take(n_coefficients).collect();
    out.resize(n_coefficients, Complex64::new(0.0, 0.0));
    Ok(out)
}
