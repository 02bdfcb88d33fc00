//! Transformers from raw time series, images and graphs into point clouds,
//! distance matrices and filtered images.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::types::{DistanceMatrix, Edge, GrayImage, PointCloud, WeightedGraph};

/// Uniformly sampled series of `channels`-dimensional observations, stored row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeSeries {
    channels: usize,
    samples: Vec<f64>,
}

impl TimeSeries {
    pub fn univariate(values: Vec<f64>) -> Result<Self> {
        Self::from_flat(values, 1)
    }

    /// One row per time step, one column per channel.
    pub fn multivariate(rows: Vec<Vec<f64>>) -> Result<Self> {
        let channels = rows.first().map_or(0, Vec::len);
        if let Some(t) = rows.iter().position(|r| r.len() != channels) {
            return invalid(format!("time step {t} has {} channels (expected {channels})", rows[t].len()));
        }
        Self::from_flat(rows.into_iter().flatten().collect(), channels)
    }

    fn from_flat(samples: Vec<f64>, channels: usize) -> Result<Self> {
        if channels == 0 || samples.is_empty() {
            return invalid("time series must contain at least one sample");
        }
        if samples.iter().any(|v| !v.is_finite()) {
            return invalid("time series contains non-finite values");
        }
        Ok(Self { channels, samples })
    }

    pub fn len(&self) -> usize {
        self.samples.len() / self.channels
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn step(&self, t: usize) -> &[f64] {
        &self.samples[t * self.channels..(t + 1) * self.channels]
    }

    pub fn channel(&self, c: usize) -> Vec<f64> {
        self.samples.iter().skip(c).step_by(self.channels).copied().collect()
    }

    /// Sample values of a single-channel series.
    pub fn values(&self) -> Result<&[f64]> {
        if self.channels != 1 {
            return invalid(format!("expected a univariate series, got {} channels", self.channels));
        }
        Ok(&self.samples)
    }

    fn slice(&self, start: usize, len: usize) -> TimeSeries {
        TimeSeries {
            channels: self.channels,
            samples: self.samples[start * self.channels..(start + len) * self.channels].to_vec(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindowBatch {
    pub windows: Vec<TimeSeries>,
    pub size: usize,
    pub stride: usize,
}

/// Windows `ts[i..i+size)` for `i = 0, stride, 2*stride, ...`; the trailing remainder is dropped.
pub fn sliding_window(ts: &TimeSeries, size: usize, stride: usize) -> Result<WindowBatch> {
    if size == 0 || stride == 0 {
        return invalid("window size and stride must be at least 1");
    }
    if size > ts.len() {
        return invalid(format!("window size {size} exceeds series length {}", ts.len()));
    }
    let windows = (0..=ts.len() - size).step_by(stride).map(|i| ts.slice(i, size)).collect();
    Ok(WindowBatch { windows, size, stride })
}

/// Delay-coordinate embedding of a univariate series.
pub fn takens_embedding(ts: &TimeSeries, dimension: usize, delay: usize, stride: usize) -> Result<PointCloud> {
    if dimension == 0 || delay == 0 || stride == 0 {
        return invalid("embedding dimension, delay and stride must be at least 1");
    }
    let x = ts.values()?;
    let span = (dimension - 1) * delay;
    if x.len() < span + 1 {
        return invalid(format!(
            "series of length {} is too short for dimension {dimension} and delay {delay}",
            x.len()
        ));
    }
    let mut coords = Vec::new();
    for start in (0..x.len() - span).step_by(stride) {
        coords.extend((0..dimension).map(|k| x[start + k * delay]));
    }
    PointCloud::from_flat(coords, dimension)
}

/// `1 - r` between every pair of channels, `r` the Pearson correlation.
pub fn pearson_dissimilarity(window: &TimeSeries) -> Result<DistanceMatrix> {
    let c = window.channels();
    if c < 2 {
        return invalid("Pearson dissimilarity needs at least two channels");
    }
    let centered: Vec<Vec<f64>> = (0..c)
        .map(|ch| {
            let xs = window.channel(ch);
            let mean = xs.iter().sum::<f64>() / xs.len() as f64;
            xs.into_iter().map(|x| x - mean).collect()
        })
        .collect();
    let norms: Vec<f64> = centered.iter().map(|xs| xs.iter().map(|x| x * x).sum::<f64>().sqrt()).collect();
    if let Some(ch) = norms.iter().position(|&s| s == 0.0) {
        return Err(Error::DegenerateChannel(ch));
    }
    let mut entries = vec![0.0; c * c];
    for i in 0..c {
        for j in (i + 1)..c {
            let dot: f64 = centered[i].iter().zip(&centered[j]).map(|(a, b)| a * b).sum();
            let r = (dot / (norms[i] * norms[j])).clamp(-1.0, 1.0);
            let d = 1.0 - r;
            entries[i * c + j] = d;
            entries[j * c + i] = d;
        }
    }
    DistanceMatrix::new(c, entries)
}

/// Result of [`transition_graph`]: the graph over occupied bins and the bin index of each vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionGraph {
    pub graph: WeightedGraph,
    pub bins: Vec<usize>,
}

/// Directed graph of transitions between equal-width value bins.
pub fn transition_graph(ts: &TimeSeries, n_states: usize) -> Result<TransitionGraph> {
    if n_states == 0 {
        return invalid("n_states must be at least 1");
    }
    let x = ts.values()?;
    let (lo, hi) = x.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    let width = (hi - lo) / n_states as f64;
    let bin_of = |v: f64| -> usize {
        if width == 0.0 {
            0
        } else {
            (((v - lo) / width) as usize).min(n_states - 1)
        }
    };
    let states: Vec<usize> = x.iter().map(|&v| bin_of(v)).collect();

    let mut occupied: Vec<usize> = states.clone();
    occupied.sort_unstable();
    occupied.dedup();
    let vertex_of = |bin: usize| occupied.binary_search(&bin).expect("occupied bin");

    let m = occupied.len();
    let mut counts = vec![0usize; m * m];
    for w in states.windows(2) {
        if w[0] != w[1] {
            counts[vertex_of(w[0]) * m + vertex_of(w[1])] += 1;
        }
    }
    let edges = (0..m * m)
        .filter(|&i| counts[i] > 0)
        .map(|i| Edge { source: i / m, target: i % m, weight: counts[i] as f64 })
        .collect();
    Ok(TransitionGraph { graph: WeightedGraph::new(m, edges, true)?, bins: occupied })
}

/// 1 where `intensity >= threshold`, else 0.
pub fn binarize_image(img: &GrayImage, threshold: f64) -> GrayImage {
    img.map(|p| if p >= threshold { 1.0 } else { 0.0 })
}

fn check_binary(img: &GrayImage) -> Result<()> {
    if img.pixels().iter().any(|&p| p != 0.0 && p != 1.0) {
        return invalid("expected a binary image with entries in {0, 1}");
    }
    if !img.pixels().contains(&1.0) {
        return invalid("binary image has no active pixels");
    }
    Ok(())
}

/// Height of each active pixel along `direction` (shifted so the lowest is 0).
/// Inactive pixels get the highest active value plus one.
pub fn height_filtration(img: &GrayImage, direction: [f64; 2]) -> Result<GrayImage> {
    check_binary(img)?;
    let norm = direction.iter().map(|d| d * d).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-9 {
        return invalid(format!("direction must be a unit vector (norm is {norm})"));
    }
    let (rows, cols) = (img.rows(), img.cols());
    let heights: Vec<Option<f64>> = (0..rows * cols)
        .map(|i| {
            let (r, c) = (i / cols, i % cols);
            (img.get(r, c) == 1.0).then(|| r as f64 * direction[0] + c as f64 * direction[1])
        })
        .collect();
    let lo = heights.iter().flatten().copied().fold(f64::INFINITY, f64::min);
    let hi = heights.iter().flatten().copied().fold(f64::NEG_INFINITY, f64::max);
    let fill = hi - lo + 1.0;
    let pixels = heights.into_iter().map(|h| h.map_or(fill, |h| h - lo)).collect();
    GrayImage::new(rows, cols, pixels)
}

/// One (row, col) point per active pixel, row-major.
pub fn image_to_point_cloud(img: &GrayImage) -> Result<PointCloud> {
    check_binary(img)?;
    let mut coords = Vec::new();
    for r in 0..img.rows() {
        for c in 0..img.cols() {
            if img.get(r, c) == 1.0 {
                coords.extend([r as f64, c as f64]);
            }
        }
    }
    PointCloud::from_flat(coords, 2)
}

/// All-pairs shortest paths on the symmetrized graph. Directed edges collapse
/// to the lighter of the two directions; unreachable pairs get
/// `(total edge weight) + 1`.
pub fn graph_geodesic(g: &WeightedGraph) -> Result<DistanceMatrix> {
    let n = g.vertex_count();
    let mut adj = vec![f64::INFINITY; n * n];
    for e in g.edges() {
        let (i, j) = (e.source, e.target);
        let w = adj[i * n + j].min(e.weight);
        adj[i * n + j] = w;
        adj[j * n + i] = w;
    }
    let total: f64 = (0..n)
        .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
        .map(|(i, j)| adj[i * n + j])
        .filter(|w| w.is_finite())
        .sum();
    for i in 0..n {
        adj[i * n + i] = 0.0;
    }
    for k in 0..n {
        for i in 0..n {
            let ik = adj[i * n + k];
            if !ik.is_finite() {
                continue;
            }
            for j in 0..n {
                let through = ik + adj[k * n + j];
                if through < adj[i * n + j] {
                    adj[i * n + j] = through;
                }
            }
        }
    }
    let cap = total + 1.0;
    for d in adj.iter_mut() {
        if !d.is_finite() {
            *d = cap;
        }
    }
    DistanceMatrix::new(n, adj)
}
