//! Vietoris-Rips and cubical filtrations, and their persistence diagrams.

mod cubical;
mod filtration;
mod reduction;

pub use cubical::{cubical_boundary_matrix, cubical_persistence};
pub use filtration::{build_vr_filtration, filtration_order, FilteredComplex, Simplex};
pub use reduction::{BoundaryMatrix, ReductionState};

use crate::distance::{pairwise_distances, Metric};
use crate::error::Result;
use crate::types::{DistanceMatrix, PersistenceDiagram, PointCloud};

/// Persistence diagram of a filtered simplicial complex.
pub fn reduce_filtration(fc: &FilteredComplex) -> Result<PersistenceDiagram> {
    let matrix = fc.boundary_matrix()?;
    Ok(ReductionState::reduce(matrix).diagram())
}

/// Rips persistence in homology dimensions `0..=max_dim`.
///
/// Simplices up to dimension `max_dim + 1` are built so that the top reported
/// classes can die. `max_edge` defaults to the largest pairwise distance.
pub fn vr_persistence(dm: &DistanceMatrix, max_dim: usize, max_edge: Option<f64>) -> Result<PersistenceDiagram> {
    let max_edge = max_edge.unwrap_or_else(|| dm.max_entry());
    let fc = build_vr_filtration(dm, max_dim + 1, max_edge)?;
    Ok(reduce_filtration(&fc)?.truncated(max_dim))
}

pub fn vr_persistence_cloud(
    pc: &PointCloud,
    metric: Metric,
    max_dim: usize,
    max_edge: Option<f64>,
) -> Result<PersistenceDiagram> {
    vr_persistence(&pairwise_distances(pc, metric)?, max_dim, max_edge)
}
