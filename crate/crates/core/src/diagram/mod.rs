//! Metrics, vectorizations and features of persistence diagrams.

mod curves;
mod features;
mod grid;
mod images;
mod matching;
mod svg;

pub use curves::{
    betti_curve, curve_features, lp_curve_distance, persistence_landscape, silhouette, CurveFeatures, CurveMetadata,
    DiagramCurve,
};
pub use features::{amplitude, complex_polynomial, count_points, persistence_entropy, AmplitudeMetric};
pub use grid::{finite_points, span, Grid, DEFAULT_BINS};
pub use images::{
    heat_surface, heat_value, persistence_image, DiagramImage, ImageGrid, ImageMetadata, ImageWeight, MARGIN_SIGMAS,
};
pub use matching::{bottleneck_distance, diagonal_cost, point_cost, wasserstein_distance};
pub use svg::diagram_svg;
