//! Comma-separated numeric text: one row per line. Blank lines and lines
//! starting with `#` are skipped.

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::preprocess::TimeSeries;
use crate::types::{Edge, GrayImage, PointCloud, WeightedGraph};

pub fn parse_rows(text: &str) -> Result<Vec<Vec<f64>>> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (line, row) in numbered_rows(text) {
        let row = row?;
        if let Some(first) = rows.first().map(Vec::len) {
            if first != row.len() {
                return Err(Error::Parse { line, message: format!("expected {first} columns, found {}", row.len()) });
            }
        }
        rows.push(row);
    }
    Ok(rows)
}

/// Non-blank, non-comment rows with their 1-based line numbers; column counts may differ.
fn numbered_rows(text: &str) -> impl Iterator<Item = (usize, Result<Vec<f64>>)> + '_ {
    text.lines().enumerate().filter_map(|(lineno, line)| {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            return None;
        }
        let row = line
            .split(',')
            .map(|field| {
                let field = field.trim();
                field
                    .parse::<f64>()
                    .map_err(|_| Error::Parse { line: lineno + 1, message: format!("'{field}' is not a number") })
            })
            .collect();
        Some((lineno + 1, row))
    })
}

pub fn parse_point_cloud(text: &str) -> Result<PointCloud> {
    PointCloud::new(parse_rows(text)?)
}

/// One sample per line; several columns make a multivariate series.
pub fn parse_time_series(text: &str) -> Result<TimeSeries> {
    TimeSeries::multivariate(parse_rows(text)?)
}

pub fn parse_image(text: &str) -> Result<GrayImage> {
    GrayImage::from_rows(parse_rows(text)?)
}

/// Edge list `source,target[,weight]`; weight defaults to 1. The vertex count
/// is one more than the largest id seen.
pub fn parse_graph(text: &str) -> Result<WeightedGraph> {
    let mut edges = Vec::new();
    let mut n = 0;
    for (line, row) in numbered_rows(text) {
        let row = row?;
        if row.len() < 2 || row.len() > 3 {
            return Err(Error::Parse { line, message: "edge rows are source,target[,weight]".into() });
        }
        let id = |x: f64| -> Result<usize> {
            if x < 0.0 || x.fract() != 0.0 {
                return Err(Error::Parse { line, message: format!("{x} is not a vertex id") });
            }
            Ok(x as usize)
        };
        let (source, target) = (id(row[0])?, id(row[1])?);
        n = n.max(source + 1).max(target + 1);
        edges.push(Edge { source, target, weight: row.get(2).copied().unwrap_or(1.0) });
    }
    WeightedGraph::new(n, edges, true)
}

/// Canonical CSV form: shortest round-trip decimal for every value, `\n` line ends.
pub fn to_csv<'a>(rows: impl IntoIterator<Item = &'a [f64]>) -> String {
    let mut out = String::new();
    for row in rows {
        let line: Vec<String> = row.iter().map(|v| format!("{v:?}")).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

/// Stable 64-bit content hash (leading bytes of SHA-256).
pub fn fingerprint(bytes: &[u8]) -> u64 {
    let digest = Sha256::digest(bytes);
    let mut head = [0u8; 8];
    head.copy_from_slice(&digest[..8]);
    u64::from_be_bytes(head)
}

pub fn point_cloud_fingerprint(pc: &PointCloud) -> u64 {
    fingerprint(to_csv(pc.points()).as_bytes())
}
