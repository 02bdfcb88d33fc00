//! Z/2 boundary-matrix reduction with clearing.
//!
//! Columns are sorted row-index sets; adding two columns is their symmetric
//! difference. Dimensions are processed from the top down so that every pivot
//! found in dimension `d` clears the column of its (d-1)-dimensional row,
//! which is known to reduce to zero.

use crate::types::{PersistenceDiagram, PersistencePair};
use crate::union_find::UnionFind;

/// Filtered cells in filtration order with their boundary columns.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct BoundaryMatrix {
    dims: Vec<usize>,
    values: Vec<f64>,
    columns: Vec<Vec<usize>>,
}

impl BoundaryMatrix {
    pub fn with_capacity(n: usize) -> Self {
        Self { dims: Vec::with_capacity(n), values: Vec::with_capacity(n), columns: Vec::with_capacity(n) }
    }

    /// Appends a cell; `boundary` holds sorted indices of earlier cells.
    pub fn push(&mut self, dim: usize, value: f64, boundary: Vec<usize>) {
        debug_assert!(boundary.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(boundary.last().is_none_or(|&i| i < self.columns.len()));
        self.dims.push(dim);
        self.values.push(value);
        self.columns.push(boundary);
    }

    pub fn len(&self) -> usize {
        self.columns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn column(&self, j: usize) -> &[usize] {
        &self.columns[j]
    }

    /// Dimension of the cycle space one below the top dimension, when it is
    /// cheap to get (top dimension 1 or 2). The rank of the top boundary map
    /// never exceeds it; once that many top pivots exist, the remaining top
    /// columns are all zero after reduction.
    fn top_rank_bound(&self) -> Option<usize> {
        let top = self.dims.iter().copied().max()?;
        let count = |d: usize| self.dims.iter().filter(|&&x| x == d).count();
        let vertices = count(0);
        let edge_rank = || {
            let mut uf = UnionFind::new(self.columns.len());
            for (j, col) in self.columns.iter().enumerate() {
                if self.dims[j] == 1 {
                    uf.union(col[0], col[1]);
                }
            }
            vertices - (uf.components() - (self.columns.len() - vertices))
        };
        match top {
            1 => Some(edge_rank()),
            2 => Some(count(1) - edge_rank()),
            _ => None,
        }
    }
}

/// Reduced columns plus the pivot map `row -> column`.
#[derive(Debug, Clone)]
pub struct ReductionState {
    dims: Vec<usize>,
    values: Vec<f64>,
    columns: Vec<Vec<usize>>,
    pivot_column: Vec<Option<usize>>,
    cleared: usize,
    skipped: usize,
    additions: usize,
}

impl ReductionState {
    pub fn reduce(matrix: BoundaryMatrix) -> Self {
        let target = matrix.top_rank_bound();
        Self::reduce_with_target(matrix, target)
    }

    fn reduce_with_target(matrix: BoundaryMatrix, top_rank: Option<usize>) -> Self {
        let BoundaryMatrix { dims, values, columns } = matrix;
        let n = columns.len();
        let mut state =
            Self { dims, values, columns, pivot_column: vec![None; n], cleared: 0, skipped: 0, additions: 0 };

        let top = state.dims.iter().copied().max().unwrap_or(0);
        let mut by_dim: Vec<Vec<usize>> = vec![Vec::new(); top + 1];
        // position of each cell among the cells of its dimension
        let mut local = vec![0u32; n];
        for (j, &d) in state.dims.iter().enumerate() {
            local[j] = by_dim[d].len() as u32;
            by_dim[d].push(j);
        }
        let mut clear = vec![false; n];
        let mut scratch = Vec::new();

        for d in (1..=top).rev() {
            let rows = &by_dim[d - 1];
            let mut pivots = PivotColumns::new(rows.len());
            let mut work = WorkColumn::new(rows.len());
            let mut found = 0;
            for &j in &by_dim[d] {
                if d == top && top_rank == Some(found) {
                    // every remaining top column reduces to zero
                    state.skipped += 1;
                    continue;
                }
                if clear[j] {
                    state.columns[j].clear();
                    state.cleared += 1;
                    continue;
                }
                for &g in &state.columns[j] {
                    work.toggle(local[g]);
                }
                let mut low = work.max();
                while let Some(row) = low {
                    let Some(reduced) = pivots.get(row) else { break };
                    for &r in reduced {
                        work.toggle(r);
                    }
                    state.additions += 1;
                    low = work.max();
                }
                let column = &mut state.columns[j];
                column.clear();
                if let Some(row) = low {
                    scratch.clear();
                    while let Some(r) = work.max() {
                        work.toggle(r);
                        scratch.push(r);
                    }
                    scratch.reverse();
                    column.extend(scratch.iter().map(|&r| rows[r as usize]));
                    pivots.insert(row, &scratch);
                    found += 1;
                    let pivot = rows[row as usize];
                    state.pivot_column[pivot] = Some(j);
                    clear[pivot] = true;
                }
            }
        }
        state
    }

    /// Column whose pivot is `row`, if any.
    pub fn pivot_of(&self, row: usize) -> Option<usize> {
        self.pivot_column[row]
    }

    pub fn reduced_column(&self, j: usize) -> &[usize] {
        &self.columns[j]
    }

    pub fn cleared_columns(&self) -> usize {
        self.cleared
    }

    pub fn skipped_columns(&self) -> usize {
        self.skipped
    }

    pub fn column_additions(&self) -> usize {
        self.additions
    }

    /// Pivot pairs give finite points; unpaired cells give essential classes.
    pub fn diagram(&self) -> PersistenceDiagram {
        let n = self.columns.len();
        let mut pairs = Vec::new();
        let mut is_death = vec![false; n];
        for (row, col) in self.pivot_column.iter().enumerate() {
            if let Some(j) = *col {
                is_death[j] = true;
                pairs.push(PersistencePair::new(self.dims[row], self.values[row], self.values[j]));
            }
        }
        for (i, &death) in is_death.iter().enumerate() {
            if !death && self.pivot_column[i].is_none() {
                pairs.push(PersistencePair::essential(self.dims[i], self.values[i]));
            }
        }
        PersistenceDiagram::new(pairs)
    }
}

/// Working column as a bit set with a summary tree on top, so that toggling
/// an entry and finding the largest entry both take a few word operations.
struct WorkColumn {
    // levels[0] holds the entries; bit i of levels[l + 1] marks levels[l][i] != 0
    levels: Vec<Vec<u64>>,
}

impl WorkColumn {
    fn new(len: usize) -> Self {
        let mut levels = Vec::new();
        let mut words = len.div_ceil(64).max(1);
        loop {
            levels.push(vec![0u64; words]);
            if words == 1 {
                break;
            }
            words = words.div_ceil(64);
        }
        Self { levels }
    }

    fn toggle(&mut self, i: u32) {
        let mut i = i as usize;
        for level in &mut self.levels {
            let word = &mut level[i / 64];
            let before = *word;
            *word ^= 1 << (i % 64);
            if (before == 0) == (*word == 0) {
                break;
            }
            i /= 64;
        }
    }

    fn max(&self) -> Option<u32> {
        let top = self.levels.last()?[0];
        if top == 0 {
            return None;
        }
        let mut i = 63 - top.leading_zeros() as usize;
        for level in self.levels.iter().rev().skip(1) {
            i = i * 64 + 63 - level[i].leading_zeros() as usize;
        }
        Some(i as u32)
    }
}

/// Reduced pivot columns of one dimension, keyed by their pivot row, packed
/// into a single buffer. Rows are positions within the row dimension.
struct PivotColumns {
    spans: Vec<(u32, u32)>,
    entries: Vec<u32>,
}

impl PivotColumns {
    const NONE: (u32, u32) = (u32::MAX, 0);

    fn new(rows: usize) -> Self {
        Self { spans: vec![Self::NONE; rows], entries: Vec::new() }
    }

    fn get(&self, row: u32) -> Option<&[u32]> {
        let (start, len) = self.spans[row as usize];
        (start != u32::MAX).then(|| &self.entries[start as usize..(start + len) as usize])
    }

    fn insert(&mut self, row: u32, column: &[u32]) {
        self.spans[row as usize] = (self.entries.len() as u32, column.len() as u32);
        self.entries.extend_from_slice(column);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn work_column_tracks_largest_entry() {
        let mut w = WorkColumn::new(5000);
        assert_eq!(w.max(), None);
        for i in [3, 4097, 64, 4097] {
            w.toggle(i);
        }
        assert_eq!(w.max(), Some(64));
        w.toggle(64);
        assert_eq!(w.max(), Some(3));
        w.toggle(3);
        assert_eq!(w.max(), None);
    }

    #[test]
    fn edge_kills_vertex() {
        let mut m = BoundaryMatrix::default();
        m.push(0, 0.0, vec![]);
        m.push(0, 0.0, vec![]);
        m.push(1, 1.0, vec![0, 1]);
        let state = ReductionState::reduce(m);
        assert_eq!(state.pivot_of(1), Some(2));
        assert_eq!(
            state.diagram().sorted().pairs(),
            &[PersistencePair::new(0, 0.0, 1.0), PersistencePair::essential(0, 0.0)]
        );
    }

    #[test]
    fn hollow_then_filled_triangle_clears_an_edge() {
        let mut m = BoundaryMatrix::default();
        for _ in 0..3 {
            m.push(0, 0.0, vec![]);
        }
        m.push(1, 1.0, vec![0, 1]);
        m.push(1, 1.0, vec![1, 2]);
        m.push(1, 2.0, vec![0, 2]);
        m.push(2, 3.0, vec![3, 4, 5]);
        let state = ReductionState::reduce(m);
        assert_eq!(state.cleared_columns(), 1);
        assert_eq!(state.pivot_of(5), Some(6));
        let dgm = state.diagram().sorted();
        assert_eq!(
            dgm.pairs(),
            &[
                PersistencePair::new(0, 0.0, 1.0),
                PersistencePair::new(0, 0.0, 1.0),
                PersistencePair::essential(0, 0.0),
                PersistencePair::new(1, 2.0, 3.0),
            ]
        );
    }

    #[test]
    fn empty_matrix() {
        assert!(ReductionState::reduce(BoundaryMatrix::default()).diagram().is_empty());
    }
}
