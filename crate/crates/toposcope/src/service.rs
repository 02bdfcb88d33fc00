//! JSON-over-HTTP access to uploaded point clouds, their diagrams and Mapper graphs.

use std::collections::HashMap;
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{DefaultBodyLimit, Path, Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use parking_lot::RwLock;
use serde::Serialize;
use serde_json::{json, Value as JsonValue};

use toposcope_core::distance::Metric;
use toposcope_core::homology::vr_persistence_cloud;
use toposcope_core::io::{parse_point_cloud, point_cloud_fingerprint};
use toposcope_core::mapper::{Clusterer, CoverSpec, FilterSpec, MapperCache, MapperParams};
use toposcope_core::types::PointCloud;

pub const MAX_BODY_BYTES: usize = 64 * 1024 * 1024;
pub const MAX_INTERVALS: usize = 100;
pub const MAX_DIAGRAM_DIM: usize = 3;

pub const DEFAULT_INTERVALS: usize = 10;
pub const DEFAULT_OVERLAP: f64 = 0.3;

#[derive(Debug)]
pub struct Dataset {
    pub cloud: PointCloud,
    pub fingerprint: u64,
}

#[derive(Default)]
pub struct AppState {
    datasets: RwLock<HashMap<String, Arc<Dataset>>>,
    cache: MapperCache,
}

impl AppState {
    /// Stores a dataset under its fingerprint and returns the id.
    pub fn insert(&self, cloud: PointCloud) -> String {
        let fingerprint = point_cloud_fingerprint(&cloud);
        let id = format!("{fingerprint:016x}");
        self.datasets.write().entry(id.clone()).or_insert_with(|| Arc::new(Dataset { cloud, fingerprint }));
        id
    }

    pub fn dataset(&self, id: &str) -> Option<Arc<Dataset>> {
        self.datasets.read().get(id).cloned()
    }

    pub fn cache(&self) -> &MapperCache {
        &self.cache
    }
}

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/api/datasets", post(upload))
        .route("/api/datasets/{id}/schema", get(schema))
        .route("/api/mapper", get(mapper))
        .route("/api/diagram", get(diagram))
        .layer(DefaultBodyLimit::max(MAX_BODY_BYTES))
        .with_state(state)
}

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    message: String,
    param: Option<String>,
}

impl ApiError {
    fn bad(param: &str, message: impl Into<String>) -> Self {
        Self { status: StatusCode::BAD_REQUEST, message: message.into(), param: Some(param.to_string()) }
    }

    fn not_found(id: &str) -> Self {
        Self {
            status: StatusCode::NOT_FOUND,
            message: format!("unknown dataset '{id}'"),
            param: Some("dataset".into()),
        }
    }

    fn internal(message: impl Into<String>) -> Self {
        Self { status: StatusCode::INTERNAL_SERVER_ERROR, message: message.into(), param: None }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let mut error = json!({ "message": self.message });
        if let Some(p) = self.param {
            error["param"] = JsonValue::String(p);
        }
        (self.status, Json(json!({ "error": error }))).into_response()
    }
}

type ApiResult<T> = Result<T, ApiError>;

#[derive(Serialize)]
struct Uploaded {
    id: String,
    n: usize,
    d: usize,
}

async fn upload(State(state): State<Arc<AppState>>, body: Bytes) -> ApiResult<(StatusCode, Json<Uploaded>)> {
    let text = std::str::from_utf8(&body).map_err(|_| ApiError::bad("body", "body must be UTF-8 CSV"))?;
    let cloud = parse_point_cloud(text).map_err(|e| ApiError::bad("body", e.to_string()))?;
    let (n, d) = (cloud.len(), cloud.dim());
    let id = state.insert(cloud);
    Ok((StatusCode::CREATED, Json(Uploaded { id, n, d })))
}

/// Single-linkage cutoff offered by default: a tenth of the bounding-box diagonal.
pub fn default_epsilon(pc: &PointCloud) -> f64 {
    let diag = (0..pc.dim())
        .map(|a| {
            let (lo, hi) =
                pc.points().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| (lo.min(p[a]), hi.max(p[a])));
            (hi - lo) * (hi - lo)
        })
        .sum::<f64>()
        .sqrt();
    if diag > 0.0 {
        diag / 10.0
    } else {
        1.0
    }
}

fn default_clusterer(pc: &PointCloud) -> String {
    Clusterer::SingleLinkage { epsilon: default_epsilon(pc) }.to_string()
}

async fn schema(State(state): State<Arc<AppState>>, Path(id): Path<String>) -> ApiResult<Json<JsonValue>> {
    let ds = state.dataset(&id).ok_or_else(|| ApiError::not_found(&id))?;
    let pc = &ds.cloud;
    let mut filters: Vec<String> = (0..pc.dim()).map(|a| format!("proj:{a}")).collect();
    filters.extend(["l2", "ecc:max", "ecc:mean"].map(String::from));
    let eps = default_epsilon(pc);
    Ok(Json(json!({
        "dataset": id,
        "n": pc.len(),
        "d": pc.dim(),
        "parameters": [
            { "name": "filter", "type": "choice", "choices": filters, "default": "proj:0" },
            { "name": "intervals", "type": "integer", "min": 1, "max": MAX_INTERVALS, "default": DEFAULT_INTERVALS },
            { "name": "overlap", "type": "number", "min": 0.0, "max": 1.0, "max_exclusive": true, "step": 0.05, "default": DEFAULT_OVERLAP },
            {
                "name": "clusterer", "type": "clusterer", "methods": ["sl", "dbscan"],
                "format": "sl:EPS | dbscan:EPS:MIN_SAMPLES",
                "epsilon": { "min": 0.0, "max": eps * 10.0, "default": eps },
                "min_samples": { "min": 1, "max": 50, "default": 3 },
                "default": default_clusterer(pc)
            },
            { "name": "min_intersection", "type": "integer", "min": 1, "max": 50, "default": 1 },
        ],
        "diagram": {
            "max_dim": { "min": 0, "max": MAX_DIAGRAM_DIM, "default": 1 },
            "max_edge": { "default": "auto" }
        }
    })))
}

fn reject_unknown(q: &HashMap<String, String>, known: &[&str]) -> ApiResult<()> {
    let mut unknown: Vec<&String> = q.keys().filter(|k| !known.contains(&k.as_str())).collect();
    unknown.sort();
    match unknown.first() {
        Some(k) => Err(ApiError::bad(k, format!("unknown parameter '{k}'"))),
        None => Ok(()),
    }
}

fn lookup(state: &AppState, q: &HashMap<String, String>) -> ApiResult<Arc<Dataset>> {
    let id = q.get("dataset").ok_or_else(|| ApiError::bad("dataset", "missing parameter 'dataset'"))?;
    state.dataset(id).ok_or_else(|| ApiError::not_found(id))
}

fn parse_param<T: std::str::FromStr>(q: &HashMap<String, String>, name: &str, default: T, what: &str) -> ApiResult<T> {
    match q.get(name) {
        None => Ok(default),
        Some(raw) => raw.trim().parse().map_err(|_| ApiError::bad(name, format!("{name} must be {what}, got '{raw}'"))),
    }
}

/// Reads Mapper parameters from a query string. `overlap_frac` is accepted as
/// a synonym of `overlap`.
pub fn mapper_params(q: &HashMap<String, String>, pc: &PointCloud) -> ApiResult<MapperParams> {
    let filter_raw = q.get("filter").map_or("proj:0", String::as_str);
    let filter: FilterSpec =
        filter_raw.parse().map_err(|e: toposcope_core::Error| ApiError::bad("filter", e.to_string()))?;
    filter.validate(pc.dim()).map_err(|e| ApiError::bad("filter", e.to_string()))?;

    let intervals: usize = parse_param(q, "intervals", DEFAULT_INTERVALS, "an integer")?;
    if !(1..=MAX_INTERVALS).contains(&intervals) {
        return Err(ApiError::bad("intervals", format!("intervals must lie in [1, {MAX_INTERVALS}], got {intervals}")));
    }

    let overlap_name =
        if q.contains_key("overlap") || !q.contains_key("overlap_frac") { "overlap" } else { "overlap_frac" };
    let overlap: f64 = parse_param(q, overlap_name, DEFAULT_OVERLAP, "a number")?;
    if !(0.0..1.0).contains(&overlap) {
        return Err(ApiError::bad(overlap_name, format!("{overlap_name} must lie in [0, 1), got {overlap}")));
    }

    let clusterer_raw = q.get("clusterer").cloned().unwrap_or_else(|| default_clusterer(pc));
    let clusterer: Clusterer =
        clusterer_raw.parse().map_err(|e: toposcope_core::Error| ApiError::bad("clusterer", e.to_string()))?;

    let min_intersection: usize = parse_param(q, "min_intersection", 1, "an integer")?;
    if min_intersection == 0 {
        return Err(ApiError::bad("min_intersection", "min_intersection must be at least 1"));
    }

    let cover = CoverSpec::uniform(intervals, overlap, filter.dim());
    Ok(MapperParams { filter, cover, clusterer, min_intersection })
}

async fn mapper(
    State(state): State<Arc<AppState>>,
    Query(q): Query<HashMap<String, String>>,
) -> ApiResult<Json<JsonValue>> {
    reject_unknown(
        &q,
        &["dataset", "filter", "intervals", "overlap", "overlap_frac", "clusterer", "min_intersection"],
    )?;
    let ds = lookup(&state, &q)?;
    let params = mapper_params(&q, &ds.cloud)?;
    let worker = state.clone();
    let (graph, status) =
        tokio::task::spawn_blocking(move || worker.cache.memoized_run_keyed(&ds.cloud, ds.fingerprint, &params))
            .await
            .map_err(|e| ApiError::internal(e.to_string()))?
            .map_err(|e| ApiError::bad("params", e.to_string()))?;
    let mut body = serde_json::to_value(&*graph).map_err(|e| ApiError::internal(e.to_string()))?;
    body["cache"] = serde_json::to_value(status).map_err(|e| ApiError::internal(e.to_string()))?;
    Ok(Json(body))
}

async fn diagram(
    State(state): State<Arc<AppState>>,
    Query(q): Query<HashMap<String, String>>,
) -> ApiResult<Json<JsonValue>> {
    reject_unknown(&q, &["dataset", "max_dim", "max_edge", "metric"])?;
    let ds = lookup(&state, &q)?;
    let max_dim: usize = parse_param(&q, "max_dim", 1, "an integer")?;
    if max_dim > MAX_DIAGRAM_DIM {
        return Err(ApiError::bad("max_dim", format!("max_dim must be at most {MAX_DIAGRAM_DIM}")));
    }
    let max_edge = match q.get("max_edge").map(|s| s.trim()) {
        None | Some("auto") => None,
        Some(raw) => match raw.parse::<f64>() {
            Ok(x) if x >= 0.0 && x.is_finite() => Some(x),
            _ => {
                return Err(ApiError::bad(
                    "max_edge",
                    format!("max_edge must be a non-negative number or 'auto', got '{raw}'"),
                ))
            }
        },
    };
    let metric: Metric = match q.get("metric") {
        None => Metric::Euclidean,
        Some(m) => m.parse().map_err(|e: toposcope_core::Error| ApiError::bad("metric", e.to_string()))?,
    };
    let dgm = tokio::task::spawn_blocking(move || vr_persistence_cloud(&ds.cloud, metric, max_dim, max_edge))
        .await
        .map_err(|e| ApiError::internal(e.to_string()))?
        .map_err(|e| ApiError::bad("params", e.to_string()))?;
    Ok(Json(serde_json::to_value(dgm.sorted()).map_err(|e| ApiError::internal(e.to_string()))?))
}

pub async fn serve(bind: &str, state: Arc<AppState>) -> anyhow::Result<()> {
    let listener = tokio::net::TcpListener::bind(bind).await?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(state)).await?;
    Ok(())
}
