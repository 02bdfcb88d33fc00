use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::types::PersistenceDiagram;

pub const DEFAULT_BINS: usize = 100;

/// Strictly increasing sample locations in filtration units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid(Vec<f64>);

impl Grid {
    pub fn new(points: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return invalid("grid must have at least one point");
        }
        if points.iter().any(|t| !t.is_finite()) {
            return invalid("grid points must be finite");
        }
        if points.windows(2).any(|w| w[0] >= w[1]) {
            return invalid("grid must be strictly increasing");
        }
        Ok(Self(points))
    }

    /// `n` evenly spaced points from `start` to `end` inclusive.
    pub fn linspace(start: f64, end: f64, n: usize) -> Result<Self> {
        if n == 0 {
            return invalid("grid needs at least one point");
        }
        if n == 1 {
            return Self::new(vec![start]);
        }
        let step = (end - start) / (n - 1) as f64;
        Self::new((0..n).map(|i| if i == n - 1 { end } else { start + step * i as f64 }).collect())
    }

    /// `n` points spanning `[min birth, max finite death]` of dimension `k`.
    pub fn spanning(dgm: &PersistenceDiagram, k: usize, n: usize) -> Result<Self> {
        let (lo, hi) = span(dgm, k).unwrap_or((0.0, 1.0));
        let hi = if hi > lo { hi } else { lo + 1.0 };
        Self::linspace(lo, hi, n)
    }

    pub fn points(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Mean spacing; 1 for a single-point grid.
    pub fn spacing(&self) -> f64 {
        match self.0.len() {
            0 | 1 => 1.0,
            n => (self.0[n - 1] - self.0[0]) / (n - 1) as f64,
        }
    }
}

/// `[min birth, max finite value]` over the pairs of dimension `k`. Essential
/// pairs contribute their birth only.
pub fn span(dgm: &PersistenceDiagram, k: usize) -> Option<(f64, f64)> {
    let mut pairs = dgm.in_dim(k).peekable();
    pairs.peek()?;
    let (lo, hi) = pairs.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
        let top = if p.is_essential() { p.birth } else { p.death };
        (lo.min(p.birth), hi.max(top))
    });
    Some((lo, hi))
}

/// Finite (birth, death) points of dimension `k`, with infinite deaths
/// replaced by the largest finite value in that dimension. The flag reports
/// whether any replacement happened.
pub fn finite_points(dgm: &PersistenceDiagram, k: usize) -> (Vec<(f64, f64)>, bool) {
    let Some((_, cap)) = span(dgm, k) else {
        return (Vec::new(), false);
    };
    let mut substituted = false;
    let points = dgm
        .in_dim(k)
        .map(|p| {
            if p.is_essential() {
                substituted = true;
                (p.birth, cap)
            } else {
                (p.birth, p.death)
            }
        })
        .collect();
    (points, substituted)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::PersistencePair;

    #[test]
    fn linspace_endpoints_are_exact() {
        let g = Grid::linspace(0.1, 0.7, 7).unwrap();
        assert_eq!(g.points()[0], 0.1);
        assert_eq!(g.points()[6], 0.7);
        assert!((g.spacing() - 0.1).abs() < 1e-15);
    }

    #[test]
    fn rejects_non_increasing() {
        assert!(Grid::new(vec![0.0, 0.0]).is_err());
        assert!(Grid::new(vec![]).is_err());
    }

    #[test]
    fn spanning_grid_and_substitution() {
        let dgm = PersistenceDiagram::new([
            PersistencePair::new(1, 0.5, 2.0),
            PersistencePair::essential(1, 1.0),
            PersistencePair::new(0, -3.0, 9.0),
        ]);
        let g = Grid::spanning(&dgm, 1, 4).unwrap();
        assert_eq!(g.points(), &[0.5, 1.0, 1.5, 2.0]);
        let (pts, substituted) = finite_points(&dgm, 1);
        assert!(substituted);
        assert_eq!(pts, vec![(0.5, 2.0), (1.0, 2.0)]);
        let empty = Grid::spanning(&PersistenceDiagram::empty(), 1, 3).unwrap();
        assert_eq!(empty.points(), &[0.0, 0.5, 1.0]);
    }
}
