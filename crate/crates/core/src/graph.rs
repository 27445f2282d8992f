//! Simple undirected graphs and directed multigraphs on `[n]` (0-based).

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Simple undirected graph. Edges are stored as `(i, j)` with `i < j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Graph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl Graph {
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Graph> {
        let mut set = BTreeSet::new();
        for &(i, j) in edges {
            if i == j {
                return Err(Error::InvalidInput(format!("self-loop at vertex {i}")));
            }
            if i >= n || j >= n {
                return Err(Error::InvalidInput(format!("edge ({i}, {j}) outside [0, {n})")));
            }
            if !set.insert((i.min(j), i.max(j))) {
                return Err(Error::InvalidInput(format!("repeated edge ({i}, {j})")));
            }
        }
        Ok(Graph { n, edges: set })
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }
    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.edges.contains(&(i.min(j), i.max(j)))
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n];
        for &(i, j) in &self.edges {
            d[i] += 1;
            d[j] += 1;
        }
        d
    }

    /// Image under the vertex relabelling `v ↦ sigma[v]`.
    pub fn relabel(&self, sigma: &[usize]) -> Graph {
        let edges = self
            .edges
            .iter()
            .map(|&(i, j)| {
                let (a, b) = (sigma[i], sigma[j]);
                (a.min(b), a.max(b))
            })
            .collect();
        Graph { n: self.n, edges }
    }

    /// Every simple graph on `n` vertices, in order of the edge bitmask.
    pub fn all(n: usize) -> Vec<Graph> {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .collect();
        (0u64..1 << pairs.len())
            .map(|mask| {
                let edges: Vec<_> = pairs
                    .iter()
                    .enumerate()
                    .filter(|(b, _)| mask >> b & 1 == 1)
                    .map(|(_, &e)| e)
                    .collect();
                Graph::new(n, &edges).expect("valid edges")
            })
            .collect()
    }
}

/// Directed multigraph; loops allowed. `weights[i][j]` counts arcs `i → j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Digraph {
    weights: Vec<Vec<usize>>,
}

impl Digraph {
    pub fn new(n: usize, arcs: &[(usize, usize)]) -> Result<Digraph> {
        let mut weights = vec![vec![0; n]; n];
        for &(i, j) in arcs {
            if i >= n || j >= n {
                return Err(Error::InvalidInput(format!("arc ({i}, {j}) outside [0, {n})")));
            }
            weights[i][j] += 1;
        }
        Ok(Digraph { weights })
    }

    pub fn from_weights(weights: Vec<Vec<usize>>) -> Result<Digraph> {
        let n = weights.len();
        if weights.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidInput("weight matrix is not square".into()));
        }
        Ok(Digraph { weights })
    }

    pub fn n(&self) -> usize {
        self.weights.len()
    }
    pub fn weight(&self, i: usize, j: usize) -> usize {
        self.weights[i][j]
    }
    pub fn weights(&self) -> &[Vec<usize>] {
        &self.weights
    }

    /// Arcs in order of (source, target), parallel arcs repeated.
    pub fn arcs(&self) -> Vec<(usize, usize)> {
        let n = self.n();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for _ in 0..self.weights[i][j] {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn arc_count(&self) -> usize {
        self.weights.iter().flatten().sum()
    }

    pub fn relabel(&self, sigma: &[usize]) -> Digraph {
        let n = self.n();
        let mut w = vec![vec![0; n]; n];
        for i in 0..n {
            for j in 0..n {
                w[sigma[i]][sigma[j]] = self.weights[i][j];
            }
        }
        Digraph { weights: w }
    }

    /// All digraphs on `n` vertices whose arc multiplicities are at most
    /// `max_weight`, loops included.
    pub fn all(n: usize, max_weight: usize) -> Vec<Digraph> {
        let cells = n * n;
        let base = max_weight + 1;
        let total = base.pow(cells as u32);
        (0..total)
            .map(|mut code| {
                let mut w = vec![vec![0; n]; n];
                for c in 0..cells {
                    w[c / n][c % n] = code % base;
                    code /= base;
                }
                Digraph { weights: w }
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_loops_and_repeats() {
        assert!(Graph::new(3, &[(1, 1)]).is_err());
        assert!(Graph::new(3, &[(0, 1), (1, 0)]).is_err());
        assert!(Graph::new(2, &[(0, 2)]).is_err());
    }

    #[test]
    fn counts() {
        assert_eq!(Graph::all(4).len(), 64);
        assert_eq!(Digraph::all(2, 1).len(), 16);
        let k3 = Graph::new(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(k3.degrees(), vec![2, 2, 2]);
        assert_eq!(k3.relabel(&[2, 0, 1]), k3);
    }

    #[test]
    fn digraph_relabel() {
        let g = Digraph::new(3, &[(0, 1), (0, 1), (2, 2)]).unwrap();
        let h = g.relabel(&[1, 2, 0]);
        assert_eq!(h.weight(1, 2), 2);
        assert_eq!(h.weight(0, 0), 1);
        assert_eq!(h.arc_count(), 3);
    }
}
