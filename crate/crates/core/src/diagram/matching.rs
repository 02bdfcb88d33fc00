//! Bottleneck and Wasserstein distances between persistence diagrams.
//!
//! Both use the L-infinity ground metric. A point left unmatched pays the
//! distance to its diagonal projection, `(death - birth) / 2`. Essential
//! points can only match essential points; differing counts give infinity.

use std::collections::VecDeque;

use crate::error::{invalid, Result};
use crate::types::PersistenceDiagram;

#[inline]
pub fn point_cost(a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - b.0).abs().max((a.1 - b.1).abs())
}

#[inline]
pub fn diagonal_cost(a: (f64, f64)) -> f64 {
    (a.1 - a.0) / 2.0
}

struct Split {
    finite: Vec<(f64, f64)>,
    essential_births: Vec<f64>,
}

fn split(dgm: &PersistenceDiagram, k: usize) -> Split {
    let mut finite = Vec::new();
    let mut essential_births = Vec::new();
    for p in dgm.in_dim(k) {
        if p.is_essential() {
            essential_births.push(p.birth);
        } else {
            finite.push((p.birth, p.death));
        }
    }
    essential_births.sort_unstable_by(f64::total_cmp);
    Split { finite, essential_births }
}

/// Costs of matching essential points in birth order, or `None` if the counts differ.
fn essential_costs(a: &[f64], b: &[f64]) -> Option<Vec<f64>> {
    (a.len() == b.len()).then(|| a.iter().zip(b).map(|(x, y)| (x - y).abs()).collect())
}

pub fn bottleneck_distance(d1: &PersistenceDiagram, d2: &PersistenceDiagram, k: usize) -> f64 {
    let (a, b) = (split(d1, k), split(d2, k));
    let Some(essential) = essential_costs(&a.essential_births, &b.essential_births) else {
        return f64::INFINITY;
    };
    let essential = essential.into_iter().fold(0.0, f64::max);
    essential.max(finite_bottleneck(&a.finite, &b.finite))
}

fn finite_bottleneck(a: &[(f64, f64)], b: &[(f64, f64)]) -> f64 {
    if a.is_empty() && b.is_empty() {
        return 0.0;
    }
    let mut candidates: Vec<f64> = a.iter().chain(b).map(|&p| diagonal_cost(p)).collect();
    for &p in a {
        candidates.extend(b.iter().map(|&q| point_cost(p, q)));
    }
    candidates.sort_unstable_by(f64::total_cmp);
    candidates.dedup();

    // The largest candidate is always feasible (everything to the diagonal).
    let (mut lo, mut hi) = (0usize, candidates.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if perfect_matching_within(a, b, candidates[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    candidates[lo]
}

/// Whether the augmented bipartite graph with all edges of cost `<= r` has a perfect matching.
///
/// Left side: points of `a`, then diagonal copies of `b`. Right side: points
/// of `b`, then diagonal copies of `a`.
fn perfect_matching_within(a: &[(f64, f64)], b: &[(f64, f64)], r: f64) -> bool {
    let (n, m) = (a.len(), b.len());
    let mut adj: Vec<Vec<usize>> = Vec::with_capacity(n + m);
    for (i, &p) in a.iter().enumerate() {
        let mut row: Vec<usize> = (0..m).filter(|&j| point_cost(p, b[j]) <= r).collect();
        if diagonal_cost(p) <= r {
            row.push(m + i);
        }
        adj.push(row);
    }
    for (j, &q) in b.iter().enumerate() {
        let mut row = Vec::with_capacity(n + 1);
        if diagonal_cost(q) <= r {
            row.push(j);
        }
        row.extend(m..m + n);
        adj.push(row);
    }
    hopcroft_karp(&adj, n + m) == n + m
}

/// Size of a maximum matching; `adj[u]` lists right vertices adjacent to left vertex `u`.
pub(crate) fn hopcroft_karp(adj: &[Vec<usize>], n_right: usize) -> usize {
    const FREE: usize = usize::MAX;
    let n_left = adj.len();
    let mut match_left = vec![FREE; n_left];
    let mut match_right = vec![FREE; n_right];
    let mut layer = vec![0usize; n_left];
    let mut size = 0;

    loop {
        // BFS from free left vertices builds the layered graph.
        let mut queue = VecDeque::new();
        for u in 0..n_left {
            if match_left[u] == FREE {
                layer[u] = 0;
                queue.push_back(u);
            } else {
                layer[u] = usize::MAX;
            }
        }
        let mut found = false;
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                let w = match_right[v];
                if w == FREE {
                    found = true;
                } else if layer[w] == usize::MAX {
                    layer[w] = layer[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        if !found {
            return size;
        }

        let mut next_edge = vec![0usize; n_left];
        for u in 0..n_left {
            if match_left[u] == FREE && augment(u, adj, &mut match_left, &mut match_right, &mut layer, &mut next_edge) {
                size += 1;
            }
        }
    }
}

fn augment(
    u: usize,
    adj: &[Vec<usize>],
    match_left: &mut [usize],
    match_right: &mut [usize],
    layer: &mut [usize],
    next_edge: &mut [usize],
) -> bool {
    while next_edge[u] < adj[u].len() {
        let v = adj[u][next_edge[u]];
        next_edge[u] += 1;
        let w = match_right[v];
        let ok =
            w == usize::MAX || (layer[w] == layer[u] + 1 && augment(w, adj, match_left, match_right, layer, next_edge));
        if ok {
            match_left[u] = v;
            match_right[v] = u;
            return true;
        }
    }
    layer[u] = usize::MAX;
    false
}

/// `q`-Wasserstein distance: the `q`-th root of the minimum total `cost^q`
/// over matchings of the diagonal-augmented diagrams.
pub fn wasserstein_distance(d1: &PersistenceDiagram, d2: &PersistenceDiagram, k: usize, q: f64) -> Result<f64> {
    if !(q >= 1.0) || !q.is_finite() {
        return invalid(format!("Wasserstein order must be a finite number >= 1, got {q}"));
    }
    let (a, b) = (split(d1, k), split(d2, k));
    let Some(essential) = essential_costs(&a.essential_births, &b.essential_births) else {
        return Ok(f64::INFINITY);
    };
    let essential: f64 = essential.into_iter().map(|c| c.powf(q)).sum();
    let total = essential + finite_wasserstein_power(&a.finite, &b.finite, q);
    Ok(total.powf(1.0 / q))
}

fn finite_wasserstein_power(a: &[(f64, f64)], b: &[(f64, f64)], q: f64) -> f64 {
    let (n, m) = (a.len(), b.len());
    let size = n + m;
    if size == 0 {
        return 0.0;
    }
    // Rows: a, then diagonal slots for b. Columns: b, then diagonal slots for a.
    let mut cost = vec![0.0; size * size];
    for i in 0..n {
        let to_diag = diagonal_cost(a[i]).powf(q);
        for j in 0..m {
            cost[i * size + j] = point_cost(a[i], b[j]).powf(q);
        }
        for j in m..size {
            cost[i * size + j] = to_diag;
        }
    }
    for j in 0..m {
        let to_diag = diagonal_cost(b[j]).powf(q);
        for i in n..size {
            cost[i * size + j] = to_diag;
        }
    }
    let assignment = hungarian(&cost, size);
    assignment.iter().enumerate().map(|(i, &j)| cost[i * size + j]).sum()
}

/// Minimum-cost perfect assignment on a dense `n x n` matrix; returns the column of each row.
pub(crate) fn hungarian(cost: &[f64], n: usize) -> Vec<usize> {
    // Shortest augmenting paths with row/column potentials, 1-based internally.
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut row_of = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        row_of[0] = i;
        let mut j0 = 0;
        let mut min_to = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = row_of[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let reduced = cost[(i0 - 1) * n + (j - 1)] - u[i0] - v[j];
                if reduced < min_to[j] {
                    min_to[j] = reduced;
                    way[j] = j0;
                }
                if min_to[j] < delta {
                    delta = min_to[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[row_of[j]] += delta;
                    v[j] -= delta;
                } else {
                    min_to[j] -= delta;
                }
            }
            j0 = j1;
            if row_of[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            row_of[j0] = row_of[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut col_of = vec![0usize; n];
    for j in 1..=n {
        col_of[row_of[j] - 1] = j - 1;
    }
    col_of
}
