//! Stage-level memoization of Mapper runs.
//!
//! Each stage key hashes the stage name, the upstream key and the stage's own
//! parameters, so a parameter change invalidates exactly that stage and
//! everything downstream of it.

use std::collections::HashMap;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, OnceLock};

use parking_lot::Mutex;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::execution::Execution;
use crate::io::{fingerprint, point_cloud_fingerprint};
use crate::types::PointCloud;

use super::{
    assign_pullback, build_nerve, cluster_fibers, eval_filter, Cover, FilterValues, MapperGraph, MapperParams,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stage {
    Filter,
    Cover,
    Cluster,
    Nerve,
}

impl Stage {
    pub const ALL: [Stage; 4] = [Stage::Filter, Stage::Cover, Stage::Cluster, Stage::Nerve];

    fn name(self) -> &'static str {
        match self {
            Stage::Filter => "filter",
            Stage::Cover => "cover",
            Stage::Cluster => "cluster",
            Stage::Nerve => "nerve",
        }
    }
}

/// Key of `stage` given the key (or dataset fingerprint) it depends on.
pub fn memo_key(stage: Stage, upstream: u64, params: &impl Serialize) -> u64 {
    let params = serde_json::to_string(params).expect("stage parameters serialize");
    fingerprint(format!("{}\n{upstream:016x}\n{params}", stage.name()).as_bytes())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CacheStatus {
    Hit,
    Miss,
}

/// Number of times each stage has been computed.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageCounts {
    pub filter: usize,
    pub cover: usize,
    pub cluster: usize,
    pub nerve: usize,
}

type Slot<T> = Arc<OnceLock<Result<Arc<T>>>>;

struct StageCache<T> {
    entries: Mutex<HashMap<u64, Slot<T>>>,
    computed: AtomicUsize,
}

impl<T> StageCache<T> {
    fn new() -> Self {
        Self { entries: Mutex::new(HashMap::new()), computed: AtomicUsize::new(0) }
    }

    /// Returns the cached value, computing it at most once per key even under
    /// concurrent callers. `fresh` is set when this call did the computation.
    fn get_or_compute(&self, key: u64, fresh: &mut bool, f: impl FnOnce() -> Result<T>) -> Result<Arc<T>> {
        let slot = self.entries.lock().entry(key).or_default().clone();
        slot.get_or_init(|| {
            *fresh = true;
            self.computed.fetch_add(1, Ordering::SeqCst);
            f().map(Arc::new)
        })
        .clone()
    }

    fn count(&self) -> usize {
        self.computed.load(Ordering::SeqCst)
    }

    fn clear(&self) {
        self.entries.lock().clear();
    }
}

struct Pullback {
    values: Arc<FilterValues>,
    fibers: Vec<Vec<usize>>,
}

struct Clusters {
    values: Arc<FilterValues>,
    clusters: Vec<Vec<Vec<usize>>>,
}

/// Thread-safe memo of every Mapper stage, shared across datasets.
pub struct MapperCache {
    filter: StageCache<FilterValues>,
    cover: StageCache<Pullback>,
    cluster: StageCache<Clusters>,
    nerve: StageCache<MapperGraph>,
    exec: Execution,
}

impl Default for MapperCache {
    fn default() -> Self {
        Self::new(Execution::Parallel)
    }
}

impl MapperCache {
    pub fn new(exec: Execution) -> Self {
        Self {
            filter: StageCache::new(),
            cover: StageCache::new(),
            cluster: StageCache::new(),
            nerve: StageCache::new(),
            exec,
        }
    }

    pub fn counts(&self) -> StageCounts {
        StageCounts {
            filter: self.filter.count(),
            cover: self.cover.count(),
            cluster: self.cluster.count(),
            nerve: self.nerve.count(),
        }
    }

    /// Drops cached values; counters keep running.
    pub fn clear(&self) {
        self.filter.clear();
        self.cover.clear();
        self.cluster.clear();
        self.nerve.clear();
    }

    /// Stage keys in pipeline order for a dataset fingerprint.
    pub fn keys(dataset: u64, params: &MapperParams) -> [u64; 4] {
        let filter = memo_key(Stage::Filter, dataset, &params.filter);
        let cover = memo_key(Stage::Cover, filter, &params.cover);
        let cluster = memo_key(Stage::Cluster, cover, &params.clusterer);
        let nerve = memo_key(Stage::Nerve, cluster, &params.min_intersection);
        [filter, cover, cluster, nerve]
    }

    /// Runs Mapper reusing every stage whose key is already cached. The status
    /// is `Hit` when this call computed nothing.
    pub fn memoized_run(&self, pc: &PointCloud, params: &MapperParams) -> Result<(Arc<MapperGraph>, CacheStatus)> {
        self.memoized_run_keyed(pc, point_cloud_fingerprint(pc), params)
    }

    /// As [`Self::memoized_run`] with a precomputed dataset fingerprint.
    pub fn memoized_run_keyed(
        &self,
        pc: &PointCloud,
        dataset: u64,
        params: &MapperParams,
    ) -> Result<(Arc<MapperGraph>, CacheStatus)> {
        params.validate(pc.dim())?;
        let [kf, kc, kl, kn] = Self::keys(dataset, params);
        let mut fresh = false;
        let graph = self.nerve.get_or_compute(kn, &mut fresh, || {
            let clusters = self.cluster.get_or_compute(kl, &mut false, || {
                let pullback = self.cover.get_or_compute(kc, &mut false, || {
                    let values = self.filter.get_or_compute(kf, &mut false, || eval_filter(pc, &params.filter))?;
                    let cover = Cover::build(&values, &params.cover)?;
                    let fibers = assign_pullback(&values, &cover);
                    Ok(Pullback { values, fibers })
                })?;
                let clusters = cluster_fibers(pc, &pullback.fibers, &params.clusterer, self.exec);
                Ok(Clusters { values: pullback.values.clone(), clusters })
            })?;
            build_nerve(&clusters.clusters, &clusters.values, params.min_intersection)
        })?;
        let status = if fresh { CacheStatus::Miss } else { CacheStatus::Hit };
        Ok((graph, status))
    }
}
