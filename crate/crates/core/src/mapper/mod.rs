//! Mapper graphs: filter, overlapping cover, per-fiber clustering and nerve.

mod cache;
mod cluster;
mod cover;
mod filter;
mod nerve;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::execution::Execution;
use crate::types::PointCloud;

pub use cache::{memo_key, CacheStatus, MapperCache, Stage, StageCounts};
pub use cluster::{cluster_fiber, Clusterer};
pub use cover::{assign_pullback, build_cover_1d, AxisCover, Cover, CoverSpec, Interval};
pub use filter::{eval_filter, Aggregate, FilterKind, FilterSpec, FilterValues};
pub use nerve::{build_nerve, MapperEdge, MapperGraph, MapperNode};

fn default_min_intersection() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MapperParams {
    pub filter: FilterSpec,
    pub cover: CoverSpec,
    pub clusterer: Clusterer,
    #[serde(default = "default_min_intersection")]
    pub min_intersection: usize,
}

impl MapperParams {
    /// Same interval count and overlap on every filter axis.
    pub fn new(filter: FilterSpec, n_intervals: usize, overlap: f64, clusterer: Clusterer) -> Self {
        let cover = CoverSpec::uniform(n_intervals, overlap, filter.dim());
        Self { filter, cover, clusterer, min_intersection: 1 }
    }

    pub fn with_min_intersection(mut self, min_intersection: usize) -> Self {
        self.min_intersection = min_intersection;
        self
    }

    pub fn validate(&self, ambient_dim: usize) -> Result<()> {
        self.filter.validate(ambient_dim)?;
        self.cover.validate(self.filter.dim())?;
        self.clusterer.validate()?;
        if self.min_intersection == 0 {
            return crate::error::invalid("min_intersection must be at least 1");
        }
        Ok(())
    }
}

pub fn run_mapper(pc: &PointCloud, params: &MapperParams) -> Result<MapperGraph> {
    run_mapper_with(pc, params, Execution::Parallel)
}

pub fn run_mapper_with(pc: &PointCloud, params: &MapperParams, exec: Execution) -> Result<MapperGraph> {
    params.validate(pc.dim())?;
    let values = eval_filter(pc, &params.filter)?;
    let cover = Cover::build(&values, &params.cover)?;
    let fibers = assign_pullback(&values, &cover);
    let clusters = cluster_fibers(pc, &fibers, &params.clusterer, exec);
    build_nerve(&clusters, &values, params.min_intersection)
}

pub(crate) fn cluster_fibers(
    pc: &PointCloud,
    fibers: &[Vec<usize>],
    clusterer: &Clusterer,
    exec: Execution,
) -> Vec<Vec<Vec<usize>>> {
    exec.map(fibers, |fiber| cluster_fiber(pc, fiber, clusterer))
}
