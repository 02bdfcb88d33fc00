use serde::{Deserialize, Serialize};

use crate::diagram::{
    amplitude, betti_curve, complex_polynomial, count_points, curve_features, diagram_svg, heat_surface,
    persistence_entropy, persistence_image, persistence_landscape, silhouette, CurveFeatures, DiagramCurve,
    DiagramImage, Grid, ImageGrid,
};
use crate::distance::pairwise_distances;
use crate::error::{invalid, Result};
use crate::execution::Execution;
use crate::homology::{cubical_persistence, vr_persistence};
use crate::io::{parse_graph, parse_image, parse_point_cloud, parse_time_series, to_csv};
use crate::preprocess::{
    binarize_image, graph_geodesic, height_filtration, image_to_point_cloud, pearson_dissimilarity, sliding_window,
    takens_embedding, transition_graph, TimeSeries,
};
use crate::types::{DistanceMatrix, GrayImage, PersistenceDiagram, PointCloud, WeightedGraph};

use super::config::{GridRange, Kind, Op, PipelineConfig};

/// Data carried between stages.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "data", rename_all = "snake_case")]
pub enum Value {
    TimeSeries(TimeSeries),
    Image(GrayImage),
    Graph(WeightedGraph),
    PointCloud(PointCloud),
    DistanceMatrix(DistanceMatrix),
    Diagram(PersistenceDiagram),
    Curve(DiagramCurve),
    Raster(DiagramImage),
    CurveFeatures(Vec<CurveFeatures>),
    Scalar(f64),
    /// `[re, im]` pairs.
    Coefficients(Vec<[f64; 2]>),
    List(Vec<Value>),
}

impl Value {
    /// Kind of the value, or of the list elements (`None` for an empty list).
    pub fn kind(&self) -> Option<Kind> {
        Some(match self {
            Value::TimeSeries(_) => Kind::TimeSeries,
            Value::Image(_) => Kind::Image,
            Value::Graph(_) => Kind::Graph,
            Value::PointCloud(_) => Kind::PointCloud,
            Value::DistanceMatrix(_) => Kind::DistanceMatrix,
            Value::Diagram(_) => Kind::Diagram,
            Value::Curve(_) => Kind::Curve,
            Value::Raster(_) => Kind::Raster,
            Value::CurveFeatures(_) => Kind::CurveFeatures,
            Value::Scalar(_) => Kind::Scalar,
            Value::Coefficients(_) => Kind::Coefficients,
            Value::List(items) => return items.first().and_then(Value::kind),
        })
    }

    /// Tabular form, one row per value (per list element for lists).
    pub fn to_csv(&self) -> Option<String> {
        let rows = self.rows()?;
        Some(to_csv(rows.iter().map(Vec::as_slice)))
    }

    fn rows(&self) -> Option<Vec<Vec<f64>>> {
        Some(match self {
            Value::TimeSeries(ts) => (0..ts.len()).map(|t| ts.step(t).to_vec()).collect(),
            Value::Image(img) => img.to_rows(),
            Value::PointCloud(pc) => pc.points().map(<[f64]>::to_vec).collect(),
            Value::DistanceMatrix(dm) => dm.to_rows(),
            Value::Graph(g) => g.edges().iter().map(|e| vec![e.source as f64, e.target as f64, e.weight]).collect(),
            Value::Diagram(d) => d.pairs().iter().map(|p| vec![p.dim as f64, p.birth, p.death]).collect(),
            Value::Curve(c) => c
                .grid
                .points()
                .iter()
                .enumerate()
                .map(|(i, &t)| std::iter::once(t).chain(c.layers.iter().map(|l| l[i])).collect())
                .collect(),
            Value::Raster(r) => r.values.clone(),
            Value::CurveFeatures(f) => f.iter().map(|x| vec![x.max, x.argmax, x.area]).collect(),
            Value::Scalar(x) => vec![vec![*x]],
            Value::Coefficients(c) => vec![c.iter().flat_map(|z| *z).collect()],
            Value::List(items) => {
                let mut rows = Vec::new();
                for item in items {
                    match item.rows()?.as_slice() {
                        [row] => rows.push(row.clone()),
                        many => rows.push(many.iter().flatten().copied().collect()),
                    }
                }
                rows
            }
        })
    }

    /// SVG scatter plots for diagram values.
    pub fn to_svg(&self) -> Option<Vec<String>> {
        match self {
            Value::Diagram(d) => Some(vec![diagram_svg(d)]),
            Value::List(items) => items.iter().map(|v| v.to_svg().map(|mut s| s.remove(0))).collect(),
            _ => None,
        }
    }
}

/// Parses one input sample of the given kind from CSV text.
pub fn load_sample(kind: Kind, text: &str) -> Result<Value> {
    Ok(match kind {
        Kind::PointCloud => Value::PointCloud(parse_point_cloud(text)?),
        Kind::TimeSeries => Value::TimeSeries(parse_time_series(text)?),
        Kind::Image => Value::Image(parse_image(text)?),
        Kind::Graph => Value::Graph(parse_graph(text)?),
        other => return invalid(format!("{} is not an input kind", other.name())),
    })
}

/// Error record for a sample that failed in some stage.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleError {
    pub stage: Option<usize>,
    pub op: Option<String>,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SampleOutput {
    Ok(Value),
    Error(SampleError),
}

impl SampleOutput {
    pub fn value(&self) -> Option<&Value> {
        match self {
            SampleOutput::Ok(v) => Some(v),
            SampleOutput::Error(_) => None,
        }
    }
}

/// Runs every sample through the stages; order follows `batch` and a failing
/// sample yields an error record without affecting the others.
pub fn run_pipeline(cfg: &PipelineConfig, batch: &[Value], exec: Execution) -> Vec<SampleOutput> {
    exec.map(batch, |sample| run_sample(cfg, sample))
}

fn run_sample(cfg: &PipelineConfig, sample: &Value) -> SampleOutput {
    if sample.kind() != Some(cfg.input.kind) || matches!(sample, Value::List(_)) {
        return SampleOutput::Error(SampleError {
            stage: None,
            op: None,
            message: format!("sample is not a {}", cfg.input.kind.name()),
        });
    }
    let mut current = sample.clone();
    for (i, op) in cfg.stages.iter().enumerate() {
        let next = match current {
            Value::List(items) => items.iter().map(|v| apply(op, v)).collect::<Result<Vec<_>>>().map(Value::List),
            ref v => apply(op, v),
        };
        match next {
            Ok(v) => current = v,
            Err(e) => {
                return SampleOutput::Error(SampleError {
                    stage: Some(i),
                    op: Some(op.name().to_string()),
                    message: e.to_string(),
                })
            }
        }
    }
    SampleOutput::Ok(current)
}

fn grid_for(dgm: &PersistenceDiagram, k: usize, n_bins: usize, range: GridRange) -> Result<Grid> {
    match range {
        Some((lo, hi)) => Grid::linspace(lo, hi, n_bins),
        None => Grid::spanning(dgm, k, n_bins),
    }
}

fn mismatch<T>(op: &Op, v: &Value) -> Result<T> {
    let got = v.kind().map_or("empty list", Kind::name);
    invalid(format!("{} cannot take a {got}", op.name()))
}

/// Applies one stage to a single (non-list) value.
pub fn apply(op: &Op, v: &Value) -> Result<Value> {
    Ok(match (op, v) {
        (Op::SlidingWindow { size, stride }, Value::TimeSeries(ts)) => {
            Value::List(sliding_window(ts, *size, *stride)?.windows.into_iter().map(Value::TimeSeries).collect())
        }
        (Op::TakensEmbedding { dimension, delay, stride }, Value::TimeSeries(ts)) => {
            Value::PointCloud(takens_embedding(ts, *dimension, *delay, *stride)?)
        }
        (Op::PearsonDissimilarity, Value::TimeSeries(ts)) => Value::DistanceMatrix(pearson_dissimilarity(ts)?),
        (Op::TransitionGraph { n_states }, Value::TimeSeries(ts)) => {
            Value::Graph(transition_graph(ts, *n_states)?.graph)
        }
        (Op::Binarize { threshold }, Value::Image(img)) => Value::Image(binarize_image(img, *threshold)),
        (Op::HeightFiltration { direction }, Value::Image(img)) => Value::Image(height_filtration(img, *direction)?),
        (Op::ImageToPointCloud, Value::Image(img)) => Value::PointCloud(image_to_point_cloud(img)?),
        (Op::GraphGeodesic, Value::Graph(g)) => Value::DistanceMatrix(graph_geodesic(g)?),
        (Op::PairwiseDistances { metric }, Value::PointCloud(pc)) => {
            Value::DistanceMatrix(pairwise_distances(pc, *metric)?)
        }
        (Op::VrPersistence { max_dim, max_edge, metric }, Value::PointCloud(pc)) => {
            Value::Diagram(vr_persistence(&pairwise_distances(pc, *metric)?, *max_dim, *max_edge)?)
        }
        (Op::VrPersistence { max_dim, max_edge, .. }, Value::DistanceMatrix(dm)) => {
            Value::Diagram(vr_persistence(dm, *max_dim, *max_edge)?)
        }
        (Op::CubicalPersistence { max_dim }, Value::Image(img)) => Value::Diagram(cubical_persistence(img, *max_dim)),
        (Op::BettiCurve { k, n_bins, range }, Value::Diagram(d)) => {
            Value::Curve(betti_curve(d, *k, &grid_for(d, *k, *n_bins, *range)?))
        }
        (Op::PersistenceLandscape { k, n_layers, n_bins, range }, Value::Diagram(d)) => {
            Value::Curve(persistence_landscape(d, *k, *n_layers, &grid_for(d, *k, *n_bins, *range)?)?)
        }
        (Op::Silhouette { k, power, n_bins, range }, Value::Diagram(d)) => {
            Value::Curve(silhouette(d, *k, *power, &grid_for(d, *k, *n_bins, *range)?)?)
        }
        (Op::HeatSurface { k, sigma, n_bins }, Value::Diagram(d)) => {
            let grid = ImageGrid::heat_default(d, *k, *sigma, *n_bins, *n_bins)?;
            Value::Raster(heat_surface(d, *k, *sigma, &grid)?)
        }
        (Op::PersistenceImage { k, sigma, n_bins, weight }, Value::Diagram(d)) => {
            let grid = ImageGrid::persistence_default(d, *k, *sigma, *n_bins, *n_bins)?;
            Value::Raster(persistence_image(d, *k, *sigma, &grid, *weight)?)
        }
        (Op::CurveFeatures, Value::Curve(c)) => Value::CurveFeatures(curve_features(c)),
        (Op::PersistenceEntropy { k }, Value::Diagram(d)) => Value::Scalar(persistence_entropy(d, *k)),
        (Op::CountPoints { k }, Value::Diagram(d)) => Value::Scalar(count_points(d, *k) as f64),
        (Op::Amplitude { k, metric }, Value::Diagram(d)) => Value::Scalar(amplitude(d, *k, *metric)?),
        (Op::ComplexPolynomial { k, n_coefficients }, Value::Diagram(d)) => {
            Value::Coefficients(complex_polynomial(d, *k, *n_coefficients)?.into_iter().map(|z| [z.re, z.im]).collect())
        }
        (op, v) => return mismatch(op, v),
    })
}
