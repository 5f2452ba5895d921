use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::PlumbingError;
use crate::arith::ContinuedFraction;

/// A weighted tree; vertex `v` carries the Euler number `m(v)` of its disk bundle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlumbedTree {
    ids: Vec<i64>,
    weights: Vec<i64>,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexJson {
    pub id: i64,
    pub weight: i64,
}

/// `{"vertices":[{"id":0,"weight":-2},...],"edges":[[0,1],...]}`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeJson {
    pub vertices: Vec<VertexJson>,
    pub edges: Vec<[i64; 2]>,
}

impl PlumbedTree {
    pub fn new(vertices: &[(i64, i64)], edges: &[(i64, i64)]) -> Result<Self, PlumbingError> {
        let invalid = |msg: String| Err(PlumbingError::InvalidTree(msg));
        if vertices.is_empty() {
            return invalid("tree has no vertices".into());
        }
        let mut index = BTreeMap::new();
        for (k, &(id, _)) in vertices.iter().enumerate() {
            if index.insert(id, k).is_some() {
                return invalid(format!("duplicate vertex id {id}"));
            }
        }
        let n = vertices.len();
        if edges.len() != n - 1 {
            return invalid(format!(
                "a tree on {n} vertices has {} edges, got {}",
                n - 1,
                edges.len()
            ));
        }
        let mut seen = BTreeSet::new();
        let mut adjacency = vec![Vec::new(); n];
        let mut idx_edges = Vec::with_capacity(edges.len());
        for &(a, b) in edges {
            let (Some(&i), Some(&j)) = (index.get(&a), index.get(&b)) else {
                return invalid(format!("edge [{a},{b}] names an unknown vertex"));
            };
            if i == j {
                return invalid(format!("self-loop at vertex {a}"));
            }
            if !seen.insert((i.min(j), i.max(j))) {
                return invalid(format!("duplicate edge [{a},{b}]"));
            }
            adjacency[i].push(j);
            adjacency[j].push(i);
            idx_edges.push((i, j));
        }
        // n - 1 distinct edges and connected <=> tree
        let mut visited = vec![false; n];
        let mut stack = vec![0];
        visited[0] = true;
        while let Some(v) = stack.pop() {
            for &w in &adjacency[v] {
                if !visited[w] {
                    visited[w] = true;
                    stack.push(w);
                }
            }
        }
        if visited.iter().any(|&b| !b) {
            return invalid("graph is not connected".into());
        }
        Ok(Self {
            ids: vertices.iter().map(|v| v.0).collect(),
            weights: vertices.iter().map(|v| v.1).collect(),
            edges: idx_edges,
            adjacency,
        })
    }

    /// The chain with weights `a1, ..., an` and ids `0..n`.
    pub fn linear(cf: &ContinuedFraction) -> Self {
        let n = cf.len() as i64;
        let vertices: Vec<(i64, i64)> = cf
            .entries()
            .iter()
            .enumerate()
            .map(|(i, &a)| (i as i64, a))
            .collect();
        let edges: Vec<(i64, i64)> = (1..n).map(|i| (i - 1, i)).collect();
        Self::new(&vertices, &edges).expect("a chain is a tree")
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn ids(&self) -> &[i64] {
        &self.ids
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    /// Edges as pairs of vertex positions.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    /// Ids of vertices with `|m(v)| < deg(v)`.
    pub fn bad_vertices(&self) -> Vec<i64> {
        (0..self.len())
            .filter(|&v| (self.weights[v].unsigned_abs() as usize) < self.degree(v))
            .map(|v| self.ids[v])
            .collect()
    }

    pub fn from_json(json: &TreeJson) -> Result<Self, PlumbingError> {
        let vertices: Vec<(i64, i64)> = json.vertices.iter().map(|v| (v.id, v.weight)).collect();
        let edges: Vec<(i64, i64)> = json.edges.iter().map(|e| (e[0], e[1])).collect();
        Self::new(&vertices, &edges)
    }

    pub fn to_json(&self) -> TreeJson {
        TreeJson {
            vertices: self
                .ids
                .iter()
                .zip(&self.weights)
                .map(|(&id, &weight)| VertexJson { id, weight })
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|&(i, j)| [self.ids[i], self.ids[j]])
                .collect(),
        }
    }
}
