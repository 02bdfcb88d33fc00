use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::distance::{pairwise_distances, Metric};
use crate::error::{invalid, Error, Result};
use crate::types::PointCloud;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Aggregate {
    #[default]
    Max,
    Mean,
}

/// One scalar filter function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FilterKind {
    Projection {
        axis: usize,
    },
    /// Signed height along `direction`; the direction is normalized on use.
    Height {
        direction: Vec<f64>,
    },
    L2Norm,
    /// Max or mean distance to all points of the cloud (the point itself included).
    Eccentricity {
        #[serde(default)]
        aggregate: Aggregate,
        #[serde(default)]
        metric: Metric,
    },
}

/// One or two filter functions; two give a planar filter with a product cover.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FilterSpec {
    pub components: Vec<FilterKind>,
}

impl FilterSpec {
    pub fn new(components: Vec<FilterKind>) -> Result<Self> {
        if components.is_empty() || components.len() > 2 {
            return invalid(format!("filter must have 1 or 2 components, got {}", components.len()));
        }
        Ok(Self { components })
    }

    pub fn single(kind: FilterKind) -> Self {
        Self { components: vec![kind] }
    }

    pub fn projection(axis: usize) -> Self {
        Self::single(FilterKind::Projection { axis })
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn validate(&self, ambient_dim: usize) -> Result<()> {
        if self.components.is_empty() || self.components.len() > 2 {
            return invalid(format!("filter must have 1 or 2 components, got {}", self.components.len()));
        }
        for kind in &self.components {
            match kind {
                FilterKind::Projection { axis } if *axis >= ambient_dim => {
                    return invalid(format!("projection axis {axis} out of range for dimension {ambient_dim}"));
                }
                FilterKind::Height { direction } => {
                    if direction.len() != ambient_dim {
                        return invalid(format!(
                            "height direction has {} entries, points have {ambient_dim}",
                            direction.len()
                        ));
                    }
                    let norm = direction.iter().map(|x| x * x).sum::<f64>().sqrt();
                    if !(norm > 0.0) || !norm.is_finite() {
                        return invalid("height direction must be a finite nonzero vector");
                    }
                }
                _ => {}
            }
        }
        Ok(())
    }
}

impl fmt::Display for FilterKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FilterKind::Projection { axis } => write!(f, "proj:{axis}"),
            FilterKind::Height { direction } => {
                let parts: Vec<String> = direction.iter().map(|x| format!("{x:?}")).collect();
                write!(f, "height:{}", parts.join(","))
            }
            FilterKind::L2Norm => write!(f, "l2"),
            FilterKind::Eccentricity { aggregate, metric } => {
                let agg = match aggregate {
                    Aggregate::Max => "max",
                    Aggregate::Mean => "mean",
                };
                write!(f, "ecc:{agg}:{}", metric.name())
            }
        }
    }
}

/// Parses `proj:AXIS`, `height:X,Y,...`, `l2`, `ecc[:max|mean[:METRIC]]`.
impl FromStr for FilterKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut parts = s.trim().splitn(2, ':');
        let head = parts.next().unwrap_or_default();
        let rest = parts.next();
        match (head, rest) {
            ("proj", Some(axis)) => match axis.trim().parse() {
                Ok(axis) => Ok(FilterKind::Projection { axis }),
                Err(_) => invalid(format!("'{axis}' is not an axis index")),
            },
            ("height", Some(dir)) => {
                let direction = dir
                    .split(',')
                    .map(|x| x.trim().parse::<f64>().map_err(|_| Error::InvalidInput(format!("'{x}' is not a number"))))
                    .collect::<Result<Vec<_>>>()?;
                Ok(FilterKind::Height { direction })
            }
            ("l2", None) => Ok(FilterKind::L2Norm),
            ("ecc", rest) => {
                let mut opts = rest.unwrap_or("max").splitn(2, ':');
                let aggregate = match opts.next().unwrap_or("max") {
                    "max" => Aggregate::Max,
                    "mean" => Aggregate::Mean,
                    other => return invalid(format!("unknown eccentricity aggregate '{other}'")),
                };
                let metric = opts.next().map(str::parse).transpose()?.unwrap_or_default();
                Ok(FilterKind::Eccentricity { aggregate, metric })
            }
            _ => invalid(format!("unknown filter '{s}'")),
        }
    }
}

/// Components joined with `+`, e.g. `proj:0+l2`.
impl FromStr for FilterSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FilterSpec::new(s.split('+').map(str::parse).collect::<Result<Vec<_>>>()?)
    }
}

impl fmt::Display for FilterSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                f.write_str("+")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Filter values stored per component: `columns[axis][point]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FilterValues {
    pub columns: Vec<Vec<f64>>,
}

impl FilterValues {
    pub fn len(&self) -> usize {
        self.columns.first().map_or(0, Vec::len)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dim(&self) -> usize {
        self.columns.len()
    }

    pub fn column(&self, axis: usize) -> &[f64] {
        &self.columns[axis]
    }

    pub fn value(&self, point: usize) -> Vec<f64> {
        self.columns.iter().map(|c| c[point]).collect()
    }
}

pub fn eval_filter(pc: &PointCloud, spec: &FilterSpec) -> Result<FilterValues> {
    spec.validate(pc.dim())?;
    let columns = spec.components.iter().map(|kind| eval_component(pc, kind)).collect::<Result<Vec<_>>>()?;
    Ok(FilterValues { columns })
}

fn eval_component(pc: &PointCloud, kind: &FilterKind) -> Result<Vec<f64>> {
    Ok(match kind {
        FilterKind::Projection { axis } => pc.points().map(|p| p[*axis]).collect(),
        FilterKind::Height { direction } => {
            let norm = direction.iter().map(|x| x * x).sum::<f64>().sqrt();
            pc.points().map(|p| p.iter().zip(direction).map(|(x, d)| x * d).sum::<f64>() / norm).collect()
        }
        FilterKind::L2Norm => pc.points().map(|p| p.iter().map(|x| x * x).sum::<f64>().sqrt()).collect(),
        FilterKind::Eccentricity { aggregate, metric } => {
            if pc.is_empty() {
                return Ok(Vec::new());
            }
            let dm = pairwise_distances(pc, *metric)?;
            (0..dm.len())
                .map(|i| match aggregate {
                    Aggregate::Max => dm.row(i).iter().copied().fold(0.0, f64::max),
                    Aggregate::Mean => dm.row(i).iter().sum::<f64>() / dm.len() as f64,
                })
                .collect()
        }
    })
}
