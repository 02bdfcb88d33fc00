use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value as Json};

use crate::diagram::{AmplitudeMetric, ImageWeight, DEFAULT_BINS};
use crate::distance::Metric;

/// Data kind flowing between stages.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    TimeSeries,
    Image,
    Graph,
    PointCloud,
    DistanceMatrix,
    Diagram,
    Curve,
    Raster,
    CurveFeatures,
    Scalar,
    Coefficients,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::TimeSeries => "time_series",
            Kind::Image => "image",
            Kind::Graph => "graph",
            Kind::PointCloud => "point_cloud",
            Kind::DistanceMatrix => "distance_matrix",
            Kind::Diagram => "diagram",
            Kind::Curve => "curve",
            Kind::Raster => "raster",
            Kind::CurveFeatures => "curve_features",
            Kind::Scalar => "scalar",
            Kind::Coefficients => "coefficients",
        }
    }

    fn is_input(self) -> bool {
        matches!(self, Kind::TimeSeries | Kind::Image | Kind::Graph | Kind::PointCloud)
    }
}

/// A kind, possibly as a list produced by windowing. Later stages map over the list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Shape {
    pub kind: Kind,
    pub list: bool,
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.list {
            write!(f, "list<{}>", self.kind.name())
        } else {
            f.write_str(self.kind.name())
        }
    }
}

/// Explicit `[start, end]` for curve grids; absent means spanning each diagram.
pub type GridRange = Option<(f64, f64)>;

#[derive(Debug, Clone, PartialEq)]
pub enum Op {
    SlidingWindow { size: usize, stride: usize },
    TakensEmbedding { dimension: usize, delay: usize, stride: usize },
    PearsonDissimilarity,
    TransitionGraph { n_states: usize },
    Binarize { threshold: f64 },
    HeightFiltration { direction: [f64; 2] },
    ImageToPointCloud,
    GraphGeodesic,
    PairwiseDistances { metric: Metric },
    VrPersistence { max_dim: usize, max_edge: Option<f64>, metric: Metric },
    CubicalPersistence { max_dim: usize },
    BettiCurve { k: usize, n_bins: usize, range: GridRange },
    PersistenceLandscape { k: usize, n_layers: usize, n_bins: usize, range: GridRange },
    Silhouette { k: usize, power: f64, n_bins: usize, range: GridRange },
    HeatSurface { k: usize, sigma: f64, n_bins: usize },
    PersistenceImage { k: usize, sigma: f64, n_bins: usize, weight: ImageWeight },
    CurveFeatures,
    PersistenceEntropy { k: usize },
    CountPoints { k: usize },
    Amplitude { k: usize, metric: AmplitudeMetric },
    ComplexPolynomial { k: usize, n_coefficients: usize },
}

pub const OP_NAMES: [&str; 21] = [
    "sliding_window",
    "takens_embedding",
    "pearson_dissimilarity",
    "transition_graph",
    "binarize",
    "height_filtration",
    "image_to_point_cloud",
    "graph_geodesic",
    "pairwise_distances",
    "vr_persistence",
    "cubical_persistence",
    "betti_curve",
    "persistence_landscape",
    "silhouette",
    "heat_surface",
    "persistence_image",
    "curve_features",
    "persistence_entropy",
    "count_points",
    "amplitude",
    "complex_polynomial",
];

impl Op {
    pub fn name(&self) -> &'static str {
        let i = match self {
            Op::SlidingWindow { .. } => 0,
            Op::TakensEmbedding { .. } => 1,
            Op::PearsonDissimilarity => 2,
            Op::TransitionGraph { .. } => 3,
            Op::Binarize { .. } => 4,
            Op::HeightFiltration { .. } => 5,
            Op::ImageToPointCloud => 6,
            Op::GraphGeodesic => 7,
            Op::PairwiseDistances { .. } => 8,
            Op::VrPersistence { .. } => 9,
            Op::CubicalPersistence { .. } => 10,
            Op::BettiCurve { .. } => 11,
            Op::PersistenceLandscape { .. } => 12,
            Op::Silhouette { .. } => 13,
            Op::HeatSurface { .. } => 14,
            Op::PersistenceImage { .. } => 15,
            Op::CurveFeatures => 16,
            Op::PersistenceEntropy { .. } => 17,
            Op::CountPoints { .. } => 18,
            Op::Amplitude { .. } => 19,
            Op::ComplexPolynomial { .. } => 20,
        };
        OP_NAMES[i]
    }

    /// Accepted input kinds and the produced kind.
    pub fn signature(&self) -> (&'static [Kind], Kind) {
        use Kind::*;
        match self {
            Op::SlidingWindow { .. } => (&[TimeSeries], TimeSeries),
            Op::TakensEmbedding { .. } => (&[TimeSeries], PointCloud),
            Op::PearsonDissimilarity => (&[TimeSeries], DistanceMatrix),
            Op::TransitionGraph { .. } => (&[TimeSeries], Graph),
            Op::Binarize { .. } => (&[Image], Image),
            Op::HeightFiltration { .. } => (&[Image], Image),
            Op::ImageToPointCloud => (&[Image], PointCloud),
            Op::GraphGeodesic => (&[Graph], DistanceMatrix),
            Op::PairwiseDistances { .. } => (&[PointCloud], DistanceMatrix),
            Op::VrPersistence { .. } => (&[PointCloud, DistanceMatrix], Diagram),
            Op::CubicalPersistence { .. } => (&[Image], Diagram),
            Op::BettiCurve { .. } | Op::PersistenceLandscape { .. } | Op::Silhouette { .. } => (&[Diagram], Curve),
            Op::HeatSurface { .. } | Op::PersistenceImage { .. } => (&[Diagram], Raster),
            Op::CurveFeatures => (&[Curve], CurveFeatures),
            Op::PersistenceEntropy { .. } | Op::CountPoints { .. } | Op::Amplitude { .. } => (&[Diagram], Scalar),
            Op::ComplexPolynomial { .. } => (&[Diagram], Coefficients),
        }
    }

    /// Output shape for `input`, or a description of the mismatch.
    pub fn output_shape(&self, input: Shape) -> Result<Shape, String> {
        let (accepts, out) = self.signature();
        if !accepts.contains(&input.kind) {
            let names: Vec<&str> = accepts.iter().map(|k| k.name()).collect();
            return Err(format!("{} expects {}, got {input}", self.name(), names.join(" or ")));
        }
        match self {
            Op::SlidingWindow { .. } if input.list => {
                Err("sliding_window cannot be applied to a list of windows".into())
            }
            Op::SlidingWindow { .. } => Ok(Shape { kind: out, list: true }),
            _ => Ok(Shape { kind: out, list: input.list }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Svg,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InputSpec {
    pub path: Option<String>,
    pub kind: Kind,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputSpec {
    pub path: Option<String>,
    pub formats: Vec<Format>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub input: InputSpec,
    pub stages: Vec<Op>,
    pub output: OutputSpec,
}

impl PipelineConfig {
    /// Shape after every stage, starting with the input shape.
    pub fn shapes(&self) -> Vec<Shape> {
        let mut shapes = vec![Shape { kind: self.input.kind, list: false }];
        for op in &self.stages {
            match op.output_shape(*shapes.last().unwrap()) {
                Ok(s) => shapes.push(s),
                Err(_) => break,
            }
        }
        shapes
    }

    pub fn output_shape(&self) -> Shape {
        *self.shapes().last().unwrap()
    }
}

/// A config problem located by its JSON path.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchemaError {
    pub path: String,
    pub message: String,
}

impl fmt::Display for SchemaError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemaErrors(pub Vec<SchemaError>);

impl fmt::Display for SchemaErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("\n")?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

impl std::error::Error for SchemaErrors {}

struct Errors(Vec<SchemaError>);

impl Errors {
    fn push(&mut self, path: impl Into<String>, message: impl Into<String>) {
        self.0.push(SchemaError { path: path.into(), message: message.into() });
    }
}

/// Reads typed parameters from one object, recording errors under `path`.
struct Params<'a> {
    map: &'a Map<String, Json>,
    path: String,
    used: Vec<&'static str>,
}

impl<'a> Params<'a> {
    fn at(&self, name: &str) -> String {
        format!("{}.{name}", self.path)
    }

    fn get(&mut self, name: &'static str) -> Option<&'a Json> {
        self.used.push(name);
        self.map.get(name).filter(|v| !v.is_null())
    }

    fn required<T>(
        &mut self,
        name: &'static str,
        errs: &mut Errors,
        read: impl Fn(&Json) -> Option<T>,
        what: &str,
    ) -> Option<T> {
        match self.get(name) {
            None => {
                errs.push(self.at(name), format!("missing required parameter '{name}'"));
                None
            }
            Some(v) => {
                let out = read(v);
                if out.is_none() {
                    errs.push(self.at(name), format!("expected {what}"));
                }
                out
            }
        }
    }

    fn optional<T>(
        &mut self,
        name: &'static str,
        errs: &mut Errors,
        read: impl Fn(&Json) -> Option<T>,
        what: &str,
    ) -> Option<T> {
        let v = self.get(name)?;
        let out = read(v);
        if out.is_none() {
            errs.push(self.at(name), format!("expected {what}"));
        }
        out
    }

    fn count(&mut self, name: &'static str, errs: &mut Errors) -> Option<usize> {
        self.required(name, errs, positive_int, "an integer >= 1")
    }

    fn count_or(&mut self, name: &'static str, default: usize, errs: &mut Errors) -> usize {
        self.optional(name, errs, positive_int, "an integer >= 1").unwrap_or(default)
    }

    fn index_or(&mut self, name: &'static str, default: usize, errs: &mut Errors) -> usize {
        self.optional(name, errs, |v| v.as_u64().map(|x| x as usize), "a non-negative integer").unwrap_or(default)
    }

    fn real(&mut self, name: &'static str, errs: &mut Errors) -> Option<f64> {
        self.required(name, errs, finite, "a finite number")
    }

    fn metric(&mut self, errs: &mut Errors) -> Metric {
        self.optional("metric", errs, |v| v.as_str()?.parse().ok(), "one of euclidean, manhattan, chebyshev")
            .unwrap_or_default()
    }

    fn range(&mut self, errs: &mut Errors) -> GridRange {
        self.optional(
            "range",
            errs,
            |v| match v.as_array()?.as_slice() {
                [a, b] => {
                    let (a, b) = (finite(a)?, finite(b)?);
                    (a < b).then_some((a, b))
                }
                _ => None,
            },
            "[start, end] with start < end",
        )
    }

    fn finish(self, errs: &mut Errors) {
        let mut unknown: Vec<&String> = self.map.keys().filter(|k| !self.used.contains(&k.as_str())).collect();
        unknown.sort();
        for k in unknown {
            errs.push(self.at(k), format!("unknown parameter '{k}'"));
        }
    }
}

fn positive_int(v: &Json) -> Option<usize> {
    v.as_u64().filter(|&x| x >= 1).map(|x| x as usize)
}

fn finite(v: &Json) -> Option<f64> {
    v.as_f64().filter(|x| x.is_finite())
}

fn at_least_one(v: &Json) -> Option<f64> {
    match v {
        Json::String(s) if s == "inf" => Some(f64::INFINITY),
        _ => finite(v).filter(|&p| p >= 1.0),
    }
}

fn parse_op(name: &str, p: &mut Params, errs: &mut Errors) -> Option<Op> {
    let before = errs.0.len();
    let op = match name {
        "sliding_window" => {
            let size = p.count("size", errs);
            let stride = p.count_or("stride", 1, errs);
            size.map(|size| Op::SlidingWindow { size, stride })
        }
        "takens_embedding" => {
            let dimension = p.count("dimension", errs);
            let delay = p.count("delay", errs);
            let stride = p.count_or("stride", 1, errs);
            Some(Op::TakensEmbedding { dimension: dimension?, delay: delay?, stride })
        }
        "pearson_dissimilarity" => Some(Op::PearsonDissimilarity),
        "transition_graph" => p.count("n_states", errs).map(|n_states| Op::TransitionGraph { n_states }),
        "binarize" => p.real("threshold", errs).map(|threshold| Op::Binarize { threshold }),
        "height_filtration" => p
            .required(
                "direction",
                errs,
                |v| match v.as_array()?.as_slice() {
                    [a, b] => Some([finite(a)?, finite(b)?]),
                    _ => None,
                },
                "a 2-element direction",
            )
            .map(|direction| Op::HeightFiltration { direction }),
        "image_to_point_cloud" => Some(Op::ImageToPointCloud),
        "graph_geodesic" => Some(Op::GraphGeodesic),
        "pairwise_distances" => Some(Op::PairwiseDistances { metric: p.metric(errs) }),
        "vr_persistence" => {
            let max_dim = p.index_or("max_dim", 1, errs);
            let max_edge = p.optional(
                "max_edge",
                errs,
                |v| match v {
                    Json::String(s) if s == "auto" => Some(None),
                    _ => finite(v).filter(|&x| x >= 0.0).map(Some),
                },
                "a non-negative number or \"auto\"",
            );
            let metric = p.metric(errs);
            Some(Op::VrPersistence { max_dim, max_edge: max_edge.flatten(), metric })
        }
        "cubical_persistence" => Some(Op::CubicalPersistence { max_dim: p.index_or("max_dim", 1, errs) }),
        "betti_curve" => Some(Op::BettiCurve {
            k: p.index_or("k", 0, errs),
            n_bins: p.count_or("n_bins", DEFAULT_BINS, errs),
            range: p.range(errs),
        }),
        "persistence_landscape" => Some(Op::PersistenceLandscape {
            k: p.index_or("k", 0, errs),
            n_layers: p.count_or("n_layers", 1, errs),
            n_bins: p.count_or("n_bins", DEFAULT_BINS, errs),
            range: p.range(errs),
        }),
        "silhouette" => Some(Op::Silhouette {
            k: p.index_or("k", 0, errs),
            power: p
                .optional("power", errs, |v| finite(v).filter(|&x| x >= 0.0), "a non-negative number")
                .unwrap_or(1.0),
            n_bins: p.count_or("n_bins", DEFAULT_BINS, errs),
            range: p.range(errs),
        }),
        "heat_surface" => {
            let k = p.index_or("k", 0, errs);
            let sigma = p.required("sigma", errs, |v| finite(v).filter(|&x| x > 0.0), "a positive number");
            let n_bins = p.count_or("n_bins", DEFAULT_BINS, errs);
            sigma.map(|sigma| Op::HeatSurface { k, sigma, n_bins })
        }
        "persistence_image" => {
            let k = p.index_or("k", 0, errs);
            let sigma = p.required("sigma", errs, |v| finite(v).filter(|&x| x > 0.0), "a positive number");
            let n_bins = p.count_or("n_bins", DEFAULT_BINS, errs);
            let weight = p
                .optional(
                    "weight",
                    errs,
                    |v| serde_json::from_value(v.clone()).ok(),
                    "a weight such as {\"kind\":\"linear\"}",
                )
                .unwrap_or_default();
            sigma.map(|sigma| Op::PersistenceImage { k, sigma, n_bins, weight })
        }
        "curve_features" => Some(Op::CurveFeatures),
        "persistence_entropy" => Some(Op::PersistenceEntropy { k: p.index_or("k", 0, errs) }),
        "count_points" => Some(Op::CountPoints { k: p.index_or("k", 0, errs) }),
        "amplitude" => {
            let k = p.index_or("k", 0, errs);
            let metric = p.required(
                "metric",
                errs,
                amplitude_metric,
                "a metric such as \"bottleneck\" or {\"metric\":\"wasserstein\",\"q\":2}",
            );
            metric.map(|metric| Op::Amplitude { k, metric })
        }
        "complex_polynomial" => {
            let k = p.index_or("k", 0, errs);
            p.count("n_coefficients", errs).map(|n_coefficients| Op::ComplexPolynomial { k, n_coefficients })
        }
        _ => unreachable!("op names are checked by the caller"),
    };
    (errs.0.len() == before).then_some(op).flatten()
}

fn amplitude_metric(v: &Json) -> Option<AmplitudeMetric> {
    let metric = match v {
        Json::String(s) => match s.as_str() {
            "bottleneck" => AmplitudeMetric::Bottleneck,
            "wasserstein" => AmplitudeMetric::Wasserstein { q: 2.0 },
            "landscape" => AmplitudeMetric::landscape(2.0),
            "betti" => AmplitudeMetric::betti(2.0),
            _ => return None,
        },
        Json::Object(m) => {
            let num = |k: &str, d: f64| m.get(k).map_or(Some(d), at_least_one);
            let bins = |d: usize| m.get("n_bins").map_or(Some(d), positive_int);
            match m.get("metric")?.as_str()? {
                "bottleneck" => AmplitudeMetric::Bottleneck,
                "wasserstein" => AmplitudeMetric::Wasserstein { q: num("q", 2.0).filter(|q| q.is_finite())? },
                "landscape" => AmplitudeMetric::Landscape {
                    p: num("p", 2.0)?,
                    n_layers: m.get("n_layers").map_or(Some(1), positive_int)?,
                    n_bins: bins(DEFAULT_BINS)?,
                },
                "betti" => AmplitudeMetric::Betti { p: num("p", 2.0)?, n_bins: bins(DEFAULT_BINS)? },
                "heat" => AmplitudeMetric::Heat {
                    p: num("p", 2.0)?,
                    sigma: finite(m.get("sigma")?).filter(|&s| s > 0.0)?,
                    n_bins: bins(DEFAULT_BINS)?,
                },
                _ => return None,
            }
        }
        _ => return None,
    };
    Some(metric)
}

fn kind_from(v: &Json) -> Option<Kind> {
    serde_json::from_value::<Kind>(v.clone()).ok().filter(|k| k.is_input())
}

/// Parses and type-checks a pipeline config, collecting every problem found.
pub fn parse_config(text: &str) -> Result<PipelineConfig, SchemaErrors> {
    let root: Json = serde_json::from_str(text)
        .map_err(|e| SchemaErrors(vec![SchemaError { path: "$".into(), message: format!("invalid JSON: {e}") }]))?;
    let mut errs = Errors(Vec::new());
    let Some(root) = root.as_object() else {
        return Err(SchemaErrors(vec![SchemaError { path: "$".into(), message: "config must be an object".into() }]));
    };
    for key in root.keys().filter(|k| !["input", "stages", "output"].contains(&k.as_str())) {
        errs.push(key.clone(), format!("unknown field '{key}'"));
    }

    let input = match root.get("input").and_then(Json::as_object) {
        None => {
            errs.push("input", "missing or not an object");
            None
        }
        Some(map) => {
            let mut p = Params { map, path: "input".into(), used: Vec::new() };
            let path = p.optional("path", &mut errs, |v| v.as_str().map(String::from), "a string");
            let kind = p.required("kind", &mut errs, kind_from, "one of point_cloud, time_series, image, graph");
            p.finish(&mut errs);
            kind.map(|kind| InputSpec { path, kind })
        }
    };

    let mut stages = Vec::new();
    let mut shape = input.as_ref().map(|i| Shape { kind: i.kind, list: false });
    match root.get("stages").and_then(Json::as_array) {
        None => errs.push("stages", "missing or not an array"),
        Some(list) => {
            for (i, stage) in list.iter().enumerate() {
                let path = format!("stages[{i}]");
                let Some(obj) = stage.as_object() else {
                    errs.push(path, "stage must be an object");
                    shape = None;
                    continue;
                };
                for key in obj.keys().filter(|k| !["op", "params"].contains(&k.as_str())) {
                    errs.push(format!("{path}.{key}"), format!("unknown field '{key}'"));
                }
                let name = match obj.get("op").and_then(Json::as_str) {
                    Some(n) if OP_NAMES.contains(&n) => n,
                    Some(n) => {
                        errs.push(format!("{path}.op"), format!("unknown op '{n}'"));
                        shape = None;
                        continue;
                    }
                    None => {
                        errs.push(format!("{path}.op"), "missing op name");
                        shape = None;
                        continue;
                    }
                };
                let empty = Map::new();
                let params = match obj.get("params") {
                    None | Some(Json::Null) => &empty,
                    Some(Json::Object(m)) => m,
                    Some(_) => {
                        errs.push(format!("{path}.params"), "params must be an object");
                        &empty
                    }
                };
                let mut p = Params { map: params, path: format!("{path}.params"), used: Vec::new() };
                let op = parse_op(name, &mut p, &mut errs);
                p.finish(&mut errs);
                let Some(op) = op else {
                    shape = None;
                    continue;
                };
                if let Some(s) = shape {
                    match op.output_shape(s) {
                        Ok(next) => shape = Some(next),
                        Err(message) => {
                            errs.push(path, message);
                            shape = None;
                        }
                    }
                }
                stages.push(op);
            }
        }
    }

    let output = match root.get("output") {
        None | Some(Json::Null) => Some(OutputSpec { path: None, formats: vec![Format::Json] }),
        Some(Json::Object(map)) => {
            let mut p = Params { map, path: "output".into(), used: Vec::new() };
            let path = p.optional("path", &mut errs, |v| v.as_str().map(String::from), "a string");
            let formats = p
                .optional(
                    "formats",
                    &mut errs,
                    |v| serde_json::from_value::<Vec<Format>>(v.clone()).ok(),
                    "a list of json, csv, svg",
                )
                .unwrap_or_else(|| vec![Format::Json]);
            p.finish(&mut errs);
            Some(OutputSpec { path, formats })
        }
        Some(_) => {
            errs.push("output", "output must be an object");
            None
        }
    };

    match (errs.0.is_empty(), input, output) {
        (true, Some(input), Some(output)) => Ok(PipelineConfig { input, stages, output }),
        _ => Err(SchemaErrors(errs.0)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn paths(text: &str) -> Vec<String> {
        parse_config(text).unwrap_err().0.into_iter().map(|e| e.path).collect()
    }

    #[test]
    fn minimal_config() {
        let cfg = parse_config(r#"{"input":{"kind":"point_cloud"},"stages":[{"op":"vr_persistence"}]}"#).unwrap();
        assert_eq!(cfg.stages, vec![Op::VrPersistence { max_dim: 1, max_edge: None, metric: Metric::Euclidean }]);
        assert_eq!(cfg.output_shape(), Shape { kind: Kind::Diagram, list: false });
        assert_eq!(cfg.output.formats, vec![Format::Json]);
    }

    #[test]
    fn kind_mismatch_is_located() {
        let errs = parse_config(
            r#"{"input":{"kind":"image"},"stages":[{"op":"takens_embedding","params":{"dimension":2,"delay":1}}]}"#,
        )
        .unwrap_err();
        assert_eq!(errs.0.len(), 1);
        assert_eq!(errs.0[0].path, "stages[0]");
        assert!(errs.0[0].message.contains("time_series"));
    }

    #[test]
    fn unknown_op_is_named() {
        let errs = parse_config(r#"{"input":{"kind":"image"},"stages":[{"op":"fourier"}]}"#).unwrap_err();
        assert_eq!(errs.0[0].path, "stages[0].op");
        assert!(errs.0[0].message.contains("fourier"));
    }

    #[test]
    fn all_errors_are_collected() {
        let p = paths(
            r#"{"input":{"kind":"time_series"},"stages":[
                {"op":"takens_embedding","params":{"delay":0,"color":1}},
                {"op":"nope"},
                {"op":"persistence_image","params":{"k":1}}
            ],"extra":true}"#,
        );
        assert_eq!(
            p,
            vec![
                "extra",
                "stages[0].params.dimension",
                "stages[0].params.delay",
                "stages[0].params.color",
                "stages[1].op",
                "stages[2].params.sigma",
            ]
        );
    }

    #[test]
    fn windows_map_over_later_stages() {
        let cfg = parse_config(
            r#"{"input":{"kind":"time_series"},"stages":[
                {"op":"sliding_window","params":{"size":10,"stride":5}},
                {"op":"pearson_dissimilarity"},
                {"op":"vr_persistence","params":{"max_dim":0}},
                {"op":"persistence_entropy"}
            ]}"#,
        )
        .unwrap();
        assert_eq!(cfg.output_shape(), Shape { kind: Kind::Scalar, list: true });
        assert!(parse_config(
            r#"{"input":{"kind":"time_series"},"stages":[
                {"op":"sliding_window","params":{"size":10}},
                {"op":"sliding_window","params":{"size":2}}
            ]}"#
        )
        .is_err());
    }

    #[test]
    fn amplitude_metrics() {
        let cfg = parse_config(
            r#"{"input":{"kind":"point_cloud"},"stages":[
                {"op":"vr_persistence"},
                {"op":"amplitude","params":{"k":1,"metric":{"metric":"landscape","p":"inf"}}}
            ]}"#,
        )
        .unwrap();
        assert_eq!(
            cfg.stages[1],
            Op::Amplitude {
                k: 1,
                metric: AmplitudeMetric::Landscape { p: f64::INFINITY, n_layers: 1, n_bins: DEFAULT_BINS }
            }
        );
        assert_eq!(
            paths(r#"{"input":{"kind":"point_cloud"},"stages":[{"op":"amplitude","params":{"metric":"x"}}]}"#),
            vec!["stages[0].params.metric"]
        );
    }

    #[test]
    fn bad_input_and_json() {
        assert_eq!(paths(r#"{"input":{"kind":"diagram"},"stages":[]}"#), vec!["input.kind"]);
        assert_eq!(paths("{"), vec!["$"]);
        assert_eq!(paths(r#"{"stages":[]}"#), vec!["input"]);
    }
}
