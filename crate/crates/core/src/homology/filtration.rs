use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::types::DistanceMatrix;

use super::reduction::BoundaryMatrix;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Simplex {
    /// Sorted ascending.
    pub vertices: Vec<usize>,
    pub value: f64,
}

impl Simplex {
    pub fn new(vertices: Vec<usize>, value: f64) -> Self {
        Self { vertices, value }
    }

    pub fn dim(&self) -> usize {
        self.vertices.len().saturating_sub(1)
    }
}

/// Filtration order: value, then dimension, then lexicographic vertex tuple.
pub fn filtration_order(a: &Simplex, b: &Simplex) -> Ordering {
    a.value.total_cmp(&b.value).then(a.vertices.len().cmp(&b.vertices.len())).then_with(|| a.vertices.cmp(&b.vertices))
}

/// Simplices listed in filtration order; every face precedes its cofaces.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct FilteredComplex {
    pub simplices: Vec<Simplex>,
}

impl FilteredComplex {
    pub fn new(simplices: Vec<Simplex>) -> Self {
        Self { simplices }
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn count_by_dim(&self) -> Vec<usize> {
        let mut counts = Vec::new();
        for s in &self.simplices {
            let d = s.dim();
            if counts.len() <= d {
                counts.resize(d + 1, 0);
            }
            counts[d] += 1;
        }
        counts
    }

    /// Checks the filtration invariants and builds the Z/2 boundary matrix.
    pub fn boundary_matrix(&self) -> Result<BoundaryMatrix> {
        let bad = |msg: String| Err(Error::InvalidFiltration(msg));
        let max_vertex = self.simplices.iter().flat_map(|s| s.vertices.iter().copied()).max().unwrap_or(0);
        let max_len = self.simplices.iter().map(|s| s.vertices.len()).max().unwrap_or(0);
        let codes = SimplexCoder::new(max_vertex + 1, max_len);

        let mut prev_value = f64::NEG_INFINITY;
        for (j, s) in self.simplices.iter().enumerate() {
            if s.vertices.is_empty() {
                return bad(format!("simplex {j} has no vertices"));
            }
            if s.vertices.windows(2).any(|w| w[0] >= w[1]) {
                return bad(format!("simplex {j} vertices {:?} are not strictly ascending", s.vertices));
            }
            if !s.value.is_finite() {
                return bad(format!("simplex {j} has a non-finite filtration value"));
            }
            if s.value < prev_value {
                return bad(format!("filtration value decreases at simplex {j}"));
            }
            prev_value = s.value;
        }

        // per vertex count, (code, position) sorted by code
        let mut index: Vec<Vec<(u64, usize)>> = vec![Vec::new(); max_len + 1];
        for (j, s) in self.simplices.iter().enumerate() {
            index[s.vertices.len()].push((codes.encode(&s.vertices), j));
        }
        for table in &mut index {
            table.sort_unstable();
            if let Some(w) = table.windows(2).find(|w| w[0].0 == w[1].0) {
                return bad(format!("simplex {:?} is listed twice", self.simplices[w[1].1].vertices));
            }
        }

        let mut matrix = BoundaryMatrix::with_capacity(self.simplices.len());
        let mut face = Vec::with_capacity(max_len);
        for (j, s) in self.simplices.iter().enumerate() {
            let mut column = Vec::with_capacity(s.vertices.len());
            if s.vertices.len() > 1 {
                let table = &index[s.vertices.len() - 1];
                for skip in 0..s.vertices.len() {
                    face.clear();
                    face.extend(s.vertices.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &v)| v));
                    let code = codes.encode(&face);
                    match table.binary_search_by_key(&code, |e| e.0) {
                        // values never decrease, so an earlier face is never valued higher
                        Ok(k) if table[k].1 < j => column.push(table[k].1),
                        _ => return bad(format!("face {face:?} of simplex {j} is missing or listed later")),
                    }
                }
                column.sort_unstable();
            }
            matrix.push(s.dim(), s.value, column);
        }
        Ok(matrix)
    }
}

/// Combinatorial number system: a sorted vertex tuple maps to a unique integer per length.
struct SimplexCoder {
    binomials: Vec<Vec<u64>>,
}

impl SimplexCoder {
    fn new(n: usize, max_len: usize) -> Self {
        let mut binomials = vec![vec![0u64; max_len + 1]; n + 1];
        for row in binomials.iter_mut() {
            row[0] = 1;
        }
        for v in 1..=n {
            for k in 1..=max_len {
                binomials[v][k] = binomials[v - 1][k - 1].saturating_add(binomials[v - 1][k]);
            }
        }
        Self { binomials }
    }

    fn encode(&self, vertices: &[usize]) -> u64 {
        vertices.iter().enumerate().map(|(i, &v)| self.binomials[v][i + 1]).fold(0u64, u64::saturating_add)
    }
}

/// Vietoris-Rips filtration: every simplex on at most `max_dim + 1` vertices
/// whose diameter is at most `max_edge`, valued by its diameter.
pub fn build_vr_filtration(dm: &DistanceMatrix, max_dim: usize, max_edge: f64) -> Result<FilteredComplex> {
    if max_edge.is_nan() || max_edge < 0.0 {
        return invalid(format!("max_edge must be non-negative, got {max_edge}"));
    }
    let n = dm.len();
    let neighbors: Vec<Vec<usize>> =
        (0..n).map(|i| ((i + 1)..n).filter(|&j| dm.get(i, j) <= max_edge).collect()).collect();

    let mut simplices = Vec::new();
    let mut stack = Vec::with_capacity(max_dim + 1);
    for v in 0..n {
        stack.push(v);
        expand(dm, &neighbors, max_dim + 1, &mut stack, &neighbors[v], 0.0, &mut simplices);
        stack.pop();
    }
    simplices.sort_unstable_by(filtration_order);
    Ok(FilteredComplex { simplices })
}

fn expand(
    dm: &DistanceMatrix,
    neighbors: &[Vec<usize>],
    max_len: usize,
    stack: &mut Vec<usize>,
    candidates: &[usize],
    value: f64,
    out: &mut Vec<Simplex>,
) {
    out.push(Simplex { vertices: stack.clone(), value });
    if stack.len() == max_len {
        return;
    }
    for (pos, &w) in candidates.iter().enumerate() {
        let value = stack.iter().map(|&u| dm.get(u, w)).fold(value, f64::max);
        if stack.len() + 1 == max_len {
            stack.push(w);
            out.push(Simplex { vertices: stack.clone(), value });
            stack.pop();
            continue;
        }
        // Later candidates adjacent to w (all candidates are adjacent to the whole stack).
        let next: Vec<usize> =
            candidates[pos + 1..].iter().copied().filter(|x| neighbors[w].binary_search(x).is_ok()).collect();
        stack.push(w);
        expand(dm, neighbors, max_len, stack, &next, value, out);
        stack.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dm(rows: Vec<Vec<f64>>) -> DistanceMatrix {
        DistanceMatrix::from_rows(rows).unwrap()
    }

    fn unit_triangle() -> DistanceMatrix {
        dm(vec![vec![0.0, 1.0, 1.0], vec![1.0, 0.0, 1.0], vec![1.0, 1.0, 0.0]])
    }

    #[test]
    fn full_triangle() {
        let fc = build_vr_filtration(&unit_triangle(), 2, 1.0).unwrap();
        assert_eq!(fc.len(), 7);
        assert_eq!(fc.count_by_dim(), vec![3, 3, 1]);
        assert_eq!(fc.simplices.last().unwrap().vertices, vec![0, 1, 2]);
    }

    #[test]
    fn threshold_excludes_edges() {
        let fc = build_vr_filtration(&unit_triangle(), 2, 0.5).unwrap();
        assert_eq!(fc.count_by_dim(), vec![3]);
    }

    #[test]
    fn two_points() {
        let fc = build_vr_filtration(&dm(vec![vec![0.0, 2.0], vec![2.0, 0.0]]), 1, 3.0).unwrap();
        assert_eq!(
            fc.simplices,
            vec![Simplex::new(vec![0], 0.0), Simplex::new(vec![1], 0.0), Simplex::new(vec![0, 1], 2.0)]
        );
    }

    #[test]
    fn order_is_value_dim_lex() {
        let d = dm(vec![
            vec![0.0, 3.0, 1.0, 2.0],
            vec![3.0, 0.0, 2.0, 1.0],
            vec![1.0, 2.0, 0.0, 3.0],
            vec![2.0, 1.0, 3.0, 0.0],
        ]);
        let fc = build_vr_filtration(&d, 2, 3.0).unwrap();
        for w in fc.simplices.windows(2) {
            assert_eq!(filtration_order(&w[0], &w[1]), Ordering::Less);
        }
        assert_eq!(fc.count_by_dim(), vec![4, 6, 4]);
        fc.boundary_matrix().unwrap();
    }

    #[test]
    fn rejects_missing_face() {
        let fc = FilteredComplex::new(vec![Simplex::new(vec![0], 0.0), Simplex::new(vec![0, 1], 1.0)]);
        assert!(matches!(fc.boundary_matrix(), Err(Error::InvalidFiltration(_))));
    }

    #[test]
    fn rejects_face_after_coface() {
        let fc = FilteredComplex::new(vec![
            Simplex::new(vec![0], 0.0),
            Simplex::new(vec![0, 1], 1.0),
            Simplex::new(vec![1], 1.0),
        ]);
        assert!(matches!(fc.boundary_matrix(), Err(Error::InvalidFiltration(_))));
    }

    #[test]
    fn rejects_duplicates_and_unsorted_tuples() {
        let dup = FilteredComplex::new(vec![Simplex::new(vec![0], 0.0), Simplex::new(vec![0], 0.0)]);
        assert!(dup.boundary_matrix().is_err());
        let unsorted = FilteredComplex::new(vec![
            Simplex::new(vec![0], 0.0),
            Simplex::new(vec![1], 0.0),
            Simplex::new(vec![1, 0], 1.0),
        ]);
        assert!(unsorted.boundary_matrix().is_err());
        let decreasing = FilteredComplex::new(vec![Simplex::new(vec![0], 1.0), Simplex::new(vec![1], 0.0)]);
        assert!(decreasing.boundary_matrix().is_err());
    }
}
