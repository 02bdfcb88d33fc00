use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::union_find::UnionFind;

use super::filter::FilterValues;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MapperNode {
    pub id: usize,
    pub cover_id: usize,
    pub members: Vec<usize>,
    pub size: usize,
    /// Mean of the first filter component over the members.
    pub mean_filter: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapperEdge {
    pub source: usize,
    pub target: usize,
    pub weight: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct MapperGraph {
    pub nodes: Vec<MapperNode>,
    pub edges: Vec<MapperEdge>,
}

impl MapperGraph {
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn components(&self) -> usize {
        let mut uf = UnionFind::new(self.nodes.len());
        for e in &self.edges {
            uf.union(e.source, e.target);
        }
        uf.components()
    }

    /// Number of independent cycles: `E - V + C`.
    pub fn cycle_rank(&self) -> usize {
        self.edges.len() + self.components() - self.nodes.len()
    }

    /// Sorted member sets with edges expressed between those sets; equal for
    /// isomorphic graphs that differ only in node labels.
    pub fn canonical_form(&self) -> (Vec<Vec<usize>>, Vec<(Vec<usize>, Vec<usize>, usize)>) {
        let mut nodes: Vec<Vec<usize>> = self.nodes.iter().map(|n| n.members.clone()).collect();
        nodes.sort();
        let mut edges: Vec<_> = self
            .edges
            .iter()
            .map(|e| {
                let (a, b) = (&self.nodes[e.source].members, &self.nodes[e.target].members);
                let (a, b) = if a <= b { (a, b) } else { (b, a) };
                (a.clone(), b.clone(), e.weight)
            })
            .collect();
        edges.sort();
        (nodes, edges)
    }
}

/// One node per cluster in (cover element, smallest member) order; an edge
/// wherever two clusters share at least `min_intersection` points.
pub fn build_nerve(
    clusters: &[Vec<Vec<usize>>],
    values: &FilterValues,
    min_intersection: usize,
) -> Result<MapperGraph> {
    if min_intersection == 0 {
        return invalid("min_intersection must be at least 1");
    }
    let mut nodes = Vec::new();
    for (cover_id, element) in clusters.iter().enumerate() {
        for members in element {
            if members.is_empty() {
                continue;
            }
            let mean_filter = match values.columns.first() {
                Some(col) => members.iter().map(|&p| col[p]).sum::<f64>() / members.len() as f64,
                None => 0.0,
            };
            nodes.push(MapperNode {
                id: nodes.len(),
                cover_id,
                size: members.len(),
                members: members.clone(),
                mean_filter,
            });
        }
    }
    let mut containing: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for node in &nodes {
        for &p in &node.members {
            containing.entry(p).or_default().push(node.id);
        }
    }
    let mut shared: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for ids in containing.values() {
        for (i, &a) in ids.iter().enumerate() {
            for &b in &ids[i + 1..] {
                *shared.entry((a.min(b), a.max(b))).or_default() += 1;
            }
        }
    }
    let edges = shared
        .into_iter()
        .filter(|&(_, w)| w >= min_intersection)
        .map(|((source, target), weight)| MapperEdge { source, target, weight })
        .collect();
    Ok(MapperGraph { nodes, edges })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn values(n: usize) -> FilterValues {
        FilterValues { columns: vec![(0..n).map(|i| i as f64).collect()] }
    }

    #[test]
    fn nerve_examples() {
        let g = build_nerve(&[vec![vec![1, 2]], vec![vec![2, 3]]], &values(4), 1).unwrap();
        assert_eq!(g.edges, vec![MapperEdge { source: 0, target: 1, weight: 1 }]);
        assert_eq!(g.nodes[1].mean_filter, 2.5);
        assert_eq!(g.nodes[1].cover_id, 1);
        let g = build_nerve(&[vec![vec![0, 1]], vec![vec![2, 3]]], &values(4), 1).unwrap();
        assert!(g.edges.is_empty());
        let g = build_nerve(&[vec![vec![1, 2]], vec![vec![2, 3]]], &values(4), 2).unwrap();
        assert!(g.edges.is_empty());
        assert!(build_nerve(&[], &values(0), 0).is_err());
    }

    #[test]
    fn empty_cover_elements_make_no_nodes() {
        let g = build_nerve(&[vec![vec![0]], vec![], vec![vec![0, 1]]], &values(2), 1).unwrap();
        assert_eq!(g.node_count(), 2);
        assert_eq!(g.nodes[1].cover_id, 2);
        assert_eq!(g.edges, vec![MapperEdge { source: 0, target: 1, weight: 1 }]);
    }

    #[test]
    fn cycle_rank_of_triangle() {
        let g = build_nerve(&[vec![vec![0, 1]], vec![vec![1, 2]], vec![vec![2, 0]]], &values(3), 1).unwrap();
        assert_eq!((g.node_count(), g.edge_count(), g.components(), g.cycle_rank()), (3, 3, 1, 1));
    }
}
