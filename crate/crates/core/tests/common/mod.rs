//! Brute-force reference implementations shared by the integration tests.
//! None of these reuse library internals.

#![allow(dead_code)]

use std::collections::{HashMap, VecDeque};
use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn circle(n: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|i| {
            let t = 2.0 * PI * i as f64 / n as f64;
            vec![t.cos(), t.sin()]
        })
        .collect()
}

pub fn random_cloud(rng: &mut impl Rng, n: usize, dim: usize) -> Vec<Vec<f64>> {
    (0..n).map(|_| (0..dim).map(|_| rng.gen_range(0.0..1.0)).collect()).collect()
}

pub fn random_diagram(rng: &mut impl Rng, max_points: usize) -> Vec<(f64, f64)> {
    let n = rng.gen_range(0..=max_points);
    (0..n)
        .map(|_| {
            let b: f64 = rng.gen_range(0.0..1.0);
            (b, b + rng.gen_range(0.01..1.0))
        })
        .collect()
}

fn euclid(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// A cell of a filtered complex with boundary given as indices of earlier cells.
#[derive(Debug, Clone)]
pub struct Cell {
    pub dim: usize,
    pub value: f64,
    pub boundary: Vec<usize>,
}

/// Standard left-to-right column reduction over Z/2, no clearing, no shortcuts.
/// Returns sorted `(dim, birth, death)` triples with zero-persistence pairs dropped.
pub fn naive_persistence(cells: &[Cell]) -> Vec<(usize, f64, f64)> {
    let n = cells.len();
    let mut columns: Vec<Vec<usize>> = cells
        .iter()
        .map(|c| {
            let mut b = c.boundary.clone();
            b.sort_unstable();
            b
        })
        .collect();
    let mut owner: HashMap<usize, usize> = HashMap::new();
    let mut killed = vec![false; n];
    let mut out = Vec::new();
    for j in 0..n {
        while let Some(&low) = columns[j].last() {
            match owner.get(&low) {
                Some(&other) => {
                    let merged = xor(&columns[j], &columns[other]);
                    columns[j] = merged;
                }
                None => break,
            }
        }
        if let Some(&low) = columns[j].last() {
            owner.insert(low, j);
            killed[low] = true;
            out.push((cells[low].dim, cells[low].value, cells[j].value));
        }
    }
    for j in 0..n {
        if columns[j].is_empty() && !killed[j] {
            out.push((cells[j].dim, cells[j].value, f64::INFINITY));
        }
    }
    out.retain(|&(_, b, d)| d > b);
    sort_triples(&mut out);
    out
}

fn xor(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

pub fn sort_triples(v: &mut [(usize, f64, f64)]) {
    v.sort_by(|x, y| x.0.cmp(&y.0).then(x.1.total_cmp(&y.1)).then(x.2.total_cmp(&y.2)));
}

fn combinations(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if cur.len() == k {
        out.push(cur.clone());
        return;
    }
    for v in start..n {
        cur.push(v);
        combinations(n, k, v + 1, cur, out);
        cur.pop();
    }
}

/// Full Rips complex on `points` with simplices up to dimension `max_dim + 1`.
pub fn rips_cells(points: &[Vec<f64>], max_dim: usize) -> Vec<Cell> {
    let n = points.len();
    let mut simplices: Vec<(f64, Vec<usize>)> = Vec::new();
    for k in 1..=(max_dim + 2).min(n) {
        let mut subsets = Vec::new();
        combinations(n, k, 0, &mut Vec::new(), &mut subsets);
        for s in subsets {
            let mut value: f64 = 0.0;
            for (i, &a) in s.iter().enumerate() {
                for &b in &s[i + 1..] {
                    value = value.max(euclid(&points[a], &points[b]));
                }
            }
            simplices.push((value, s));
        }
    }
    simplices.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.len().cmp(&y.1.len())).then(x.1.cmp(&y.1)));
    let index: HashMap<Vec<usize>, usize> = simplices.iter().enumerate().map(|(i, s)| (s.1.clone(), i)).collect();
    simplices
        .iter()
        .map(|(value, s)| {
            let boundary = if s.len() == 1 {
                Vec::new()
            } else {
                (0..s.len())
                    .map(|drop| {
                        let face: Vec<usize> =
                            s.iter().enumerate().filter(|&(i, _)| i != drop).map(|(_, &v)| v).collect();
                        index[&face]
                    })
                    .collect()
            };
            Cell { dim: s.len() - 1, value: *value, boundary }
        })
        .collect()
}

/// Rips persistence in dimensions `0..=max_dim` by naive reduction.
pub fn rips_oracle(points: &[Vec<f64>], max_dim: usize) -> Vec<(usize, f64, f64)> {
    let mut out = naive_persistence(&rips_cells(points, max_dim));
    out.retain(|t| t.0 <= max_dim);
    out
}

/// Cubical complex of a pixel image: pixels are squares, lower cells take the
/// smallest value of the pixels they bound.
pub fn cubical_cells(image: &[Vec<f64>]) -> Vec<Cell> {
    let rows = image.len();
    let cols = image[0].len();
    // a cell is [r0, r0 + dr] x [c0, c0 + dc] in vertex coordinates
    let mut cells: Vec<(f64, usize, (usize, usize, usize, usize))> = Vec::new();
    for r0 in 0..=rows {
        for c0 in 0..=cols {
            for dr in 0..=1 {
                for dc in 0..=1 {
                    if r0 + dr > rows || c0 + dc > cols {
                        continue;
                    }
                    let mut value = f64::INFINITY;
                    for (i, row) in image.iter().enumerate() {
                        for (j, &px) in row.iter().enumerate() {
                            if r0 >= i && r0 + dr <= i + 1 && c0 >= j && c0 + dc <= j + 1 {
                                value = value.min(px);
                            }
                        }
                    }
                    cells.push((value, dr + dc, (r0, dr, c0, dc)));
                }
            }
        }
    }
    cells.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)).then(x.2.cmp(&y.2)));
    let index: HashMap<(usize, usize, usize, usize), usize> = cells.iter().enumerate().map(|(i, c)| (c.2, i)).collect();
    cells
        .iter()
        .map(|&(value, dim, (r0, dr, c0, dc))| {
            let mut boundary = Vec::new();
            if dr == 1 {
                boundary.push(index[&(r0, 0, c0, dc)]);
                boundary.push(index[&(r0 + 1, 0, c0, dc)]);
            }
            if dc == 1 {
                boundary.push(index[&(r0, dr, c0, 0)]);
                boundary.push(index[&(r0, dr, c0 + 1, 0)]);
            }
            Cell { dim, value, boundary }
        })
        .collect()
}

pub fn cubical_oracle(image: &[Vec<f64>]) -> Vec<(usize, f64, f64)> {
    naive_persistence(&cubical_cells(image))
}

fn linf(a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - b.0).abs().max((a.1 - b.1).abs())
}

fn to_diag(a: (f64, f64)) -> f64 {
    (a.1 - a.0) / 2.0
}

/// Calls `visit` with the cost list of every partial matching between `a` and
/// `b`; unmatched points go to the diagonal.
pub fn for_each_matching(a: &[(f64, f64)], b: &[(f64, f64)], visit: &mut impl FnMut(&[f64])) {
    fn go(
        i: usize,
        a: &[(f64, f64)],
        b: &[(f64, f64)],
        used: &mut Vec<bool>,
        costs: &mut Vec<f64>,
        visit: &mut impl FnMut(&[f64]),
    ) {
        if i == a.len() {
            let base = costs.len();
            for (j, &q) in b.iter().enumerate() {
                if !used[j] {
                    costs.push(to_diag(q));
                }
            }
            visit(costs);
            costs.truncate(base);
            return;
        }
        costs.push(to_diag(a[i]));
        go(i + 1, a, b, used, costs, visit);
        costs.pop();
        for j in 0..b.len() {
            if !used[j] {
                used[j] = true;
                costs.push(linf(a[i], b[j]));
                go(i + 1, a, b, used, costs, visit);
                costs.pop();
                used[j] = false;
            }
        }
    }
    go(0, a, b, &mut vec![false; b.len()], &mut Vec::new(), visit);
}

pub fn brute_bottleneck(a: &[(f64, f64)], b: &[(f64, f64)]) -> f64 {
    let mut best = f64::INFINITY;
    for_each_matching(a, b, &mut |costs| best = best.min(costs.iter().copied().fold(0.0, f64::max)));
    best
}

pub fn brute_wasserstein(a: &[(f64, f64)], b: &[(f64, f64)], q: f64) -> f64 {
    let mut best = f64::INFINITY;
    for_each_matching(a, b, &mut |costs| best = best.min(costs.iter().map(|c| c.powf(q)).sum::<f64>()));
    best.powf(1.0 / q)
}

/// Number of pairs alive at `t` (`birth <= t < death`).
pub fn betti_recount(pairs: &[(f64, f64)], t: f64) -> usize {
    pairs.iter().filter(|&&(b, d)| b <= t && t < d).count()
}

/// Reference Mapper over a coordinate projection with single-linkage
/// clustering. Returns node member sets (sorted) and edges as index pairs
/// into that list.
pub fn mapper_oracle(
    points: &[Vec<f64>],
    axis: usize,
    n: usize,
    g: f64,
    eps: f64,
) -> (Vec<Vec<usize>>, Vec<(usize, usize)>) {
    let f: Vec<f64> = points.iter().map(|p| p[axis]).collect();
    let lo = f.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = f.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let intervals: Vec<(f64, f64)> = if lo == hi {
        vec![(lo, hi)]
    } else {
        let len = (hi - lo) / (n as f64 - (n as f64 - 1.0) * g);
        let step = len * (1.0 - g);
        (0..n)
            .map(|i| {
                let a = lo + i as f64 * step;
                let b = if i + 1 == n { hi } else { (a + len).max(lo + (i + 1) as f64 * step) };
                (a, b)
            })
            .collect()
    };
    let mut nodes: Vec<Vec<usize>> = Vec::new();
    for &(a, b) in &intervals {
        let fiber: Vec<usize> = (0..points.len()).filter(|&p| a <= f[p] && f[p] <= b).collect();
        let mut seen = vec![false; fiber.len()];
        for s in 0..fiber.len() {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![fiber[s]];
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for v in 0..fiber.len() {
                    if !seen[v] && euclid(&points[fiber[u]], &points[fiber[v]]) <= eps {
                        seen[v] = true;
                        comp.push(fiber[v]);
                        queue.push_back(v);
                    }
                }
            }
            comp.sort_unstable();
            nodes.push(comp);
        }
    }
    let mut edges = Vec::new();
    for i in 0..nodes.len() {
        for j in (i + 1)..nodes.len() {
            if nodes[i].iter().any(|p| nodes[j].contains(p)) {
                edges.push((i, j));
            }
        }
    }
    (nodes, edges)
}

/// `V - E + cycles` bookkeeping for an undirected graph: (components, cycle rank).
pub fn graph_topology(n_nodes: usize, edges: &[(usize, usize)]) -> (usize, usize) {
    let mut parent: Vec<usize> = (0..n_nodes).collect();
    fn root(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            x = p[x];
        }
        x
    }
    let mut components = n_nodes;
    for &(a, b) in edges {
        let (ra, rb) = (root(&mut parent, a), root(&mut parent, b));
        if ra != rb {
            parent[ra] = rb;
            components -= 1;
        }
    }
    (components, edges.len() + components - n_nodes)
}

/// Sine wave samples `sin(2 pi i / period)`.
pub fn sine(n: usize, period: f64) -> Vec<f64> {
    (0..n).map(|i| (2.0 * PI * i as f64 / period).sin()).collect()
}

/// Single-linkage dendrogram merge heights, by Kruskal over all point pairs.
pub fn single_linkage_heights(points: &[Vec<f64>]) -> Vec<f64> {
    let n = points.len();
    let mut pairs: Vec<(f64, usize, usize)> = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            pairs.push((euclid(&points[i], &points[j]), i, j));
        }
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut label: Vec<usize> = (0..n).collect();
    let mut heights = Vec::new();
    for (d, i, j) in pairs {
        let (a, b) = (label[i], label[j]);
        if a != b {
            for l in label.iter_mut() {
                if *l == b {
                    *l = a;
                }
            }
            heights.push(d);
        }
    }
    heights
}

/// Components of the graph joining points at distance at most `r`.
pub fn components_within(points: &[Vec<f64>], r: f64) -> usize {
    let mut edges = Vec::new();
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            if euclid(&points[i], &points[j]) <= r {
                edges.push((i, j));
            }
        }
    }
    graph_topology(points.len(), &edges).0
}
