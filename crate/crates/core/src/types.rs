//! Domain carriers shared by every stage: point clouds, distance matrices,
//! images, graphs and persistence diagrams.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{invalid, Result};

/// Symmetry tolerance accepted by [`DistanceMatrix::new`].
pub const SYMMETRY_TOLERANCE: f64 = 1e-12;

/// A finite set of points in R^d, stored row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointCloud {
    coords: Vec<f64>,
    dim: usize,
}

impl PointCloud {
    pub fn new(points: Vec<Vec<f64>>) -> Result<Self> {
        let dim = match points.first() {
            Some(p) => p.len(),
            None => return invalid("point cloud needs at least one point to infer its dimension"),
        };
        let mut coords = Vec::with_capacity(points.len() * dim);
        for (i, p) in points.iter().enumerate() {
            if p.len() != dim {
                return invalid(format!("point {i} has dimension {} (expected {dim})", p.len()));
            }
            coords.extend_from_slice(p);
        }
        Self::from_flat(coords, dim)
    }

    /// Builds a cloud from row-major coordinates. An empty buffer is allowed.
    pub fn from_flat(coords: Vec<f64>, dim: usize) -> Result<Self> {
        if dim == 0 {
            return invalid("point dimension must be at least 1");
        }
        if !coords.len().is_multiple_of(dim) {
            return invalid(format!("{} coordinates do not split into points of dimension {dim}", coords.len()));
        }
        if let Some(pos) = coords.iter().position(|c| !c.is_finite()) {
            return invalid(format!("non-finite coordinate in point {}", pos / dim));
        }
        Ok(Self { coords, dim })
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.coords.chunks_exact(self.dim)
    }

    pub fn as_flat(&self) -> &[f64] {
        &self.coords
    }

    /// Restriction to the given indices, in the given order.
    pub fn select(&self, indices: &[usize]) -> PointCloud {
        let mut coords = Vec::with_capacity(indices.len() * self.dim);
        for &i in indices {
            coords.extend_from_slice(self.point(i));
        }
        PointCloud { coords, dim: self.dim }
    }
}

/// Dense symmetric matrix of non-negative finite dissimilarities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl DistanceMatrix {
    pub fn new(n: usize, entries: Vec<f64>) -> Result<Self> {
        if entries.len() != n * n {
            return invalid(format!("expected {} entries for a {n}x{n} matrix, got {}", n * n, entries.len()));
        }
        for i in 0..n {
            if entries[i * n + i] != 0.0 {
                return invalid(format!("diagonal entry ({i},{i}) is not zero"));
            }
            for j in 0..n {
                let v = entries[i * n + j];
                if !v.is_finite() || v < 0.0 {
                    return invalid(format!("entry ({i},{j}) = {v} is not a finite non-negative number"));
                }
                if (v - entries[j * n + i]).abs() > SYMMETRY_TOLERANCE {
                    return invalid(format!("matrix is not symmetric at ({i},{j})"));
                }
            }
        }
        Ok(Self { n, entries })
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        if let Some(i) = rows.iter().position(|r| r.len() != n) {
            return invalid(format!("row {i} does not have {n} entries"));
        }
        Self::new(n, rows.into_iter().flatten().collect())
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn max_entry(&self) -> f64 {
        self.entries.iter().copied().fold(0.0, f64::max)
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.entries.chunks(self.n.max(1)).map(<[f64]>::to_vec).take(self.n).collect()
    }
}

/// Grayscale raster indexed by (row, col).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrayImage {
    rows: usize,
    cols: usize,
    pixels: Vec<f64>,
}

impl GrayImage {
    pub fn new(rows: usize, cols: usize, pixels: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return invalid("image must have at least one row and one column");
        }
        if pixels.len() != rows * cols {
            return invalid(format!("expected {} pixels, got {}", rows * cols, pixels.len()));
        }
        if pixels.iter().any(|p| !p.is_finite()) {
            return invalid("image contains non-finite intensities");
        }
        Ok(Self { rows, cols, pixels })
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let h = rows.len();
        let w = rows.first().map_or(0, Vec::len);
        if let Some(i) = rows.iter().position(|r| r.len() != w) {
            return invalid(format!("image row {i} has {} values (expected {w})", rows[i].len()));
        }
        Self::new(h, w, rows.into_iter().flatten().collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.pixels[row * self.cols + col]
    }

    pub fn pixels(&self) -> &[f64] {
        &self.pixels
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.pixels.chunks(self.cols).map(<[f64]>::to_vec).collect()
    }

    pub(crate) fn map(&self, f: impl Fn(f64) -> f64) -> GrayImage {
        GrayImage { rows: self.rows, cols: self.cols, pixels: self.pixels.iter().map(|&p| f(p)).collect() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub source: usize,
    pub target: usize,
    pub weight: f64,
}

/// Edge-weighted graph on vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedGraph {
    n: usize,
    edges: Vec<Edge>,
    directed: bool,
}

impl WeightedGraph {
    pub fn new(n: usize, edges: Vec<Edge>, directed: bool) -> Result<Self> {
        for e in &edges {
            if e.source >= n || e.target >= n {
                return invalid(format!("edge ({}, {}) references a vertex outside 0..{n}", e.source, e.target));
            }
            if e.source == e.target {
                return invalid(format!("self-loop on vertex {}", e.source));
            }
            if !e.weight.is_finite() || e.weight < 0.0 {
                return invalid(format!("edge ({}, {}) has invalid weight {}", e.source, e.target, e.weight));
            }
        }
        Ok(Self { n, edges, directed })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    /// Weight of the edge `source -> target`, if present.
    pub fn weight(&self, source: usize, target: usize) -> Option<f64> {
        self.edges.iter().find(|e| e.source == source && e.target == target).map(|e| e.weight)
    }
}

/// One point of a persistence diagram. Essential classes carry `death == f64::INFINITY`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PersistencePair {
    pub dim: usize,
    pub birth: f64,
    #[serde(serialize_with = "ser_death", deserialize_with = "de_death")]
    pub death: f64,
}

impl PersistencePair {
    pub fn new(dim: usize, birth: f64, death: f64) -> Self {
        Self { dim, birth, death }
    }

    pub fn essential(dim: usize, birth: f64) -> Self {
        Self { dim, birth, death: f64::INFINITY }
    }

    pub fn is_essential(&self) -> bool {
        self.death == f64::INFINITY
    }

    pub fn persistence(&self) -> f64 {
        self.death - self.birth
    }
}

fn ser_death<S: Serializer>(death: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if death.is_infinite() && *death > 0.0 {
        s.serialize_none()
    } else {
        s.serialize_f64(*death)
    }
}

fn de_death<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
    Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::INFINITY))
}

/// Multiset of (dim, birth, death) points across homology dimensions.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct PersistenceDiagram {
    pairs: Vec<PersistencePair>,
}

impl PersistenceDiagram {
    /// Builds a diagram, dropping zero-persistence pairs.
    pub fn new(pairs: impl IntoIterator<Item = PersistencePair>) -> Self {
        Self { pairs: pairs.into_iter().filter(|p| p.death != p.birth).collect() }
    }

    /// Keeps the pairs exactly as given; see [`validate_diagram`].
    pub fn from_raw(pairs: Vec<PersistencePair>) -> Self {
        Self { pairs }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn pairs(&self) -> &[PersistencePair] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn in_dim(&self, k: usize) -> impl Iterator<Item = &PersistencePair> + '_ {
        self.pairs.iter().filter(move |p| p.dim == k)
    }

    /// (birth, death) points of dimension `k`.
    pub fn points(&self, k: usize) -> Vec<(f64, f64)> {
        self.in_dim(k).map(|p| (p.birth, p.death)).collect()
    }

    pub fn max_dim(&self) -> Option<usize> {
        self.pairs.iter().map(|p| p.dim).max()
    }

    /// Restriction to dimensions `<= max_dim`.
    pub fn truncated(&self, max_dim: usize) -> Self {
        Self { pairs: self.pairs.iter().filter(|p| p.dim <= max_dim).copied().collect() }
    }

    /// Pairs sorted by (dim, birth, death); the canonical form for comparisons.
    pub fn sorted(&self) -> Self {
        let mut pairs = self.pairs.clone();
        pairs.sort_by(|a, b| a.dim.cmp(&b.dim).then(a.birth.total_cmp(&b.birth)).then(a.death.total_cmp(&b.death)));
        Self { pairs }
    }

    /// Disjoint union of two diagrams.
    pub fn union(&self, other: &Self) -> Self {
        let mut pairs = self.pairs.clone();
        pairs.extend_from_slice(&other.pairs);
        Self { pairs }
    }
}

impl FromIterator<PersistencePair> for PersistenceDiagram {
    fn from_iter<T: IntoIterator<Item = PersistencePair>>(iter: T) -> Self {
        Self::new(iter)
    }
}

/// First invariant a diagram breaks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DiagramViolation {
    NonFiniteBirth { index: usize },
    NotANumber { index: usize },
    DeathBeforeBirth { index: usize },
    ZeroPersistence { index: usize },
}

impl fmt::Display for DiagramViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NonFiniteBirth { index } => write!(f, "pair {index}: birth is not finite"),
            Self::NotANumber { index } => write!(f, "pair {index}: death is NaN"),
            Self::DeathBeforeBirth { index } => write!(f, "pair {index}: death < birth"),
            Self::ZeroPersistence { index } => write!(f, "pair {index}: zero persistence pair stored"),
        }
    }
}

impl std::error::Error for DiagramViolation {}

pub fn validate_diagram(dgm: &PersistenceDiagram) -> std::result::Result<(), DiagramViolation> {
    for (index, p) in dgm.pairs.iter().enumerate() {
        if !p.birth.is_finite() {
            return Err(DiagramViolation::NonFiniteBirth { index });
        }
        if p.death.is_nan() {
            return Err(DiagramViolation::NotANumber { index });
        }
        if p.death < p.birth {
            return Err(DiagramViolation::DeathBeforeBirth { index });
        }
        if p.death == p.birth {
            return Err(DiagramViolation::ZeroPersistence { index });
        }
    }
    Ok(())
}
