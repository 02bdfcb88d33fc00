use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

use super::filter::FilterValues;

/// Closed interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxisCover {
    pub n_intervals: usize,
    pub overlap: f64,
}

impl AxisCover {
    pub fn validate(&self) -> Result<()> {
        if self.n_intervals == 0 {
            return invalid("n_intervals must be at least 1");
        }
        if !(0.0..1.0).contains(&self.overlap) {
            return invalid(format!("overlap must lie in [0, 1), got {}", self.overlap));
        }
        Ok(())
    }
}

/// One [`AxisCover`] per filter component.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CoverSpec {
    pub axes: Vec<AxisCover>,
}

impl CoverSpec {
    pub fn uniform(n_intervals: usize, overlap: f64, dim: usize) -> Self {
        Self { axes: vec![AxisCover { n_intervals, overlap }; dim] }
    }

    pub fn validate(&self, filter_dim: usize) -> Result<()> {
        if self.axes.len() != filter_dim {
            return invalid(format!("cover has {} axes, filter has {filter_dim}", self.axes.len()));
        }
        self.axes.iter().try_for_each(AxisCover::validate)
    }
}

/// `n` intervals of length `l = R / (n - (n-1) g)` starting every `l (1 - g)`.
pub fn build_cover_1d(values: &[f64], n: usize, g: f64) -> Result<Vec<Interval>> {
    AxisCover { n_intervals: n, overlap: g }.validate()?;
    let Some((min, max)) = values
        .iter()
        .fold(None, |acc: Option<(f64, f64)>, &v| Some(acc.map_or((v, v), |(lo, hi)| (lo.min(v), hi.max(v)))))
    else {
        return invalid("cannot cover an empty set of values");
    };
    if !min.is_finite() || !max.is_finite() {
        return invalid("filter values must be finite");
    }
    if min == max {
        return Ok(vec![Interval { lo: min, hi: max }]);
    }
    let len = (max - min) / (n as f64 - (n as f64 - 1.0) * g);
    let step = len * (1.0 - g);
    let start = |i: usize| min + i as f64 * step;
    Ok((0..n)
        .map(|i| {
            let hi = if i + 1 == n { max } else { (start(i) + len).max(start(i + 1)) };
            Interval { lo: start(i), hi }
        })
        .collect())
}

/// Product of per-axis interval lists; element ids are row-major over the axes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cover {
    pub axes: Vec<Vec<Interval>>,
}

impl Cover {
    pub fn build(values: &FilterValues, spec: &CoverSpec) -> Result<Self> {
        spec.validate(values.dim())?;
        let axes = spec
            .axes
            .iter()
            .enumerate()
            .map(|(a, ax)| build_cover_1d(values.column(a), ax.n_intervals, ax.overlap))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { axes })
    }

    pub fn len(&self) -> usize {
        self.axes.iter().map(Vec::len).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Per-axis interval indices of element `id`.
    pub fn element(&self, mut id: usize) -> Vec<usize> {
        let mut idx = vec![0; self.axes.len()];
        for (a, axis) in self.axes.iter().enumerate().rev() {
            idx[a] = id % axis.len();
            id /= axis.len();
        }
        idx
    }

    pub fn element_id(&self, idx: &[usize]) -> usize {
        idx.iter().zip(&self.axes).fold(0, |acc, (&i, axis)| acc * axis.len() + i)
    }
}

/// Point indices (ascending) of every cover element, indexed by element id.
pub fn assign_pullback(values: &FilterValues, cover: &Cover) -> Vec<Vec<usize>> {
    let mut fibers = vec![Vec::new(); cover.len()];
    for p in 0..values.len() {
        let hits: Vec<Vec<usize>> = cover
            .axes
            .iter()
            .enumerate()
            .map(|(a, intervals)| {
                let v = values.column(a)[p];
                intervals.iter().enumerate().filter(|(_, iv)| iv.contains(v)).map(|(i, _)| i).collect()
            })
            .collect();
        let mut idx = vec![0; hits.len()];
        product_for_each(&hits, 0, &mut idx, &mut |idx| fibers[cover.element_id(idx)].push(p));
    }
    fibers
}

fn product_for_each(choices: &[Vec<usize>], depth: usize, idx: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
    if depth == choices.len() {
        f(idx);
        return;
    }
    for &c in &choices[depth] {
        idx[depth] = c;
        product_for_each(choices, depth + 1, idx, f);
    }
}
