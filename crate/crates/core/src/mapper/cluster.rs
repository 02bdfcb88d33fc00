use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::distance::Metric;
use crate::error::{invalid, Error, Result};
use crate::types::PointCloud;
use crate::union_find::UnionFind;

/// Clustering applied inside each fiber, on Euclidean distances in the ambient space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum Clusterer {
    SingleLinkage {
        epsilon: f64,
    },
    /// Noise points become singleton clusters. Border points join the
    /// cluster of their nearest core point.
    Dbscan {
        eps: f64,
        min_samples: usize,
    },
}

impl Clusterer {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Clusterer::SingleLinkage { epsilon } if !(epsilon >= 0.0) || !epsilon.is_finite() => {
                invalid(format!("linkage cutoff must be finite and non-negative, got {epsilon}"))
            }
            Clusterer::Dbscan { eps, .. } if !(eps >= 0.0) || !eps.is_finite() => {
                invalid(format!("eps must be finite and non-negative, got {eps}"))
            }
            Clusterer::Dbscan { min_samples: 0, .. } => invalid("min_samples must be at least 1"),
            _ => Ok(()),
        }
    }
}

/// Parses `sl:EPS` and `dbscan:EPS:MIN_SAMPLES`.
impl FromStr for Clusterer {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        let num = |x: &str| x.trim().parse::<f64>().map_err(|_| Error::InvalidInput(format!("'{x}' is not a number")));
        let c = match parts.as_slice() {
            ["sl", eps] => Clusterer::SingleLinkage { epsilon: num(eps)? },
            ["dbscan", eps, min] => Clusterer::Dbscan {
                eps: num(eps)?,
                min_samples: min
                    .trim()
                    .parse()
                    .map_err(|_| Error::InvalidInput(format!("'{min}' is not a sample count")))?,
            },
            _ => return invalid(format!("unknown clusterer '{s}' (expected sl:EPS or dbscan:EPS:MIN)")),
        };
        c.validate()?;
        Ok(c)
    }
}

impl fmt::Display for Clusterer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Clusterer::SingleLinkage { epsilon } => write!(f, "sl:{epsilon:?}"),
            Clusterer::Dbscan { eps, min_samples } => write!(f, "dbscan:{eps:?}:{min_samples}"),
        }
    }
}

/// Clusters of the points `fiber` (global indices, ascending). Each cluster is
/// ascending and clusters are ordered by their smallest member.
pub fn cluster_fiber(pc: &PointCloud, fiber: &[usize], clusterer: &Clusterer) -> Vec<Vec<usize>> {
    let k = fiber.len();
    let dist = |a: usize, b: usize| Metric::Euclidean.distance(pc.point(fiber[a]), pc.point(fiber[b]));
    let local = match *clusterer {
        Clusterer::SingleLinkage { epsilon } => {
            let mut uf = UnionFind::new(k);
            for a in 0..k {
                for b in (a + 1)..k {
                    if dist(a, b) <= epsilon {
                        uf.union(a, b);
                    }
                }
            }
            uf.groups()
        }
        Clusterer::Dbscan { eps, min_samples } => {
            let neighbors: Vec<Vec<usize>> = (0..k).map(|a| (0..k).filter(|&b| dist(a, b) <= eps).collect()).collect();
            let core: Vec<bool> = neighbors.iter().map(|n| n.len() >= min_samples).collect();
            let mut uf = UnionFind::new(k);
            for a in (0..k).filter(|&a| core[a]) {
                for &b in neighbors[a].iter().filter(|&&b| core[b]) {
                    uf.union(a, b);
                }
            }
            for a in (0..k).filter(|&a| !core[a]) {
                let nearest =
                    neighbors[a].iter().filter(|&&b| core[b]).min_by(|&&x, &&y| dist(a, x).total_cmp(&dist(a, y)));
                if let Some(&b) = nearest {
                    uf.union(a, b);
                }
            }
            uf.groups()
        }
    };
    local.into_iter().map(|g| g.into_iter().map(|i| fiber[i]).collect()).collect()
}
