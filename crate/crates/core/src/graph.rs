use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::Vertex;

/// An undirected simple graph on `0..n` with edges stored as sorted `(u, v)`, `u < v`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SimpleGraph {
    n: usize,
    edges: Vec<(Vertex, Vertex)>,
    adjacency: Vec<Vec<Vertex>>,
}

impl SimpleGraph {
    pub fn new<I: IntoIterator<Item = (Vertex, Vertex)>>(n: usize, edges: I) -> Result<Self> {
        let mut out = Vec::new();
        for (a, b) in edges {
            if a == b {
                return Err(Error::InvalidGraph(format!("self-loop at {a}")));
            }
            let (u, v) = (a.min(b), a.max(b));
            if v as usize >= n {
                return Err(Error::InvalidGraph(format!(
                    "vertex {v} out of range for n = {n}"
                )));
            }
            out.push((u, v));
        }
        out.sort_unstable();
        if let Some(w) = out.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidGraph(format!("duplicate edge {:?}", w[0])));
        }
        Ok(Self::from_sorted_pairs(n, out))
    }

    pub(crate) fn from_sorted_pairs(n: usize, edges: Vec<(Vertex, Vertex)>) -> Self {
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adjacency[u as usize].push(v);
            adjacency[v as usize].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Self {
            n,
            edges,
            adjacency,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Sorted neighbours of `v`.
    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adjacency[v as usize]
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        if u == v || u as usize >= self.n || v as usize >= self.n {
            return false;
        }
        self.adjacency[u as usize].binary_search(&v).is_ok()
    }

    /// True when every pair of `vertices` is an edge.
    pub fn is_clique(&self, vertices: &[Vertex]) -> bool {
        vertices
            .iter()
            .enumerate()
            .all(|(i, &u)| vertices[i + 1..].iter().all(|&v| self.has_edge(u, v)))
    }
}

/// A graph whose edges carry positive integer multiplicities; absent pairs have weight 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WeightedGraph {
    n: usize,
    weights: Vec<((Vertex, Vertex), u32)>,
}

impl WeightedGraph {
    pub fn new<I: IntoIterator<Item = (Vertex, Vertex, u32)>>(
        n: usize,
        entries: I,
    ) -> Result<Self> {
        let mut out = Vec::new();
        for (a, b, w) in entries {
            if a == b {
                return Err(Error::InvalidGraph(format!("self-loop at {a}")));
            }
            if w == 0 {
                return Err(Error::InvalidGraph(format!("zero weight on {{{a}, {b}}}")));
            }
            let (u, v) = (a.min(b), a.max(b));
            if v as usize >= n {
                return Err(Error::InvalidGraph(format!(
                    "vertex {v} out of range for n = {n}"
                )));
            }
            out.push(((u, v), w));
        }
        out.sort_unstable();
        if let Some(w) = out.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidGraph(format!("duplicate edge {:?}", w[0].0)));
        }
        Ok(Self { n, weights: out })
    }

    pub(crate) fn from_sorted(n: usize, weights: Vec<((Vertex, Vertex), u32)>) -> Self {
        Self { n, weights }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[((Vertex, Vertex), u32)] {
        &self.weights
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weight(&self, u: Vertex, v: Vertex) -> u32 {
        let key = (u.min(v), u.max(v));
        self.weights
            .binary_search_by(|(p, _)| p.cmp(&key))
            .map(|i| self.weights[i].1)
            .unwrap_or(0)
    }

    pub fn total_weight(&self) -> u64 {
        self.weights.iter().map(|&(_, w)| w as u64).sum()
    }

    /// The underlying simple graph, forgetting multiplicities.
    pub fn support(&self) -> SimpleGraph {
        SimpleGraph::from_sorted_pairs(self.n, self.weights.iter().map(|&(p, _)| p).collect())
    }
}

/// An observed projection, with or without multiplicities.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Observed {
    Plain(SimpleGraph),
    Weighted(WeightedGraph),
}

impl Observed {
    pub fn n(&self) -> usize {
        match self {
            Observed::Plain(g) => g.n(),
            Observed::Weighted(w) => w.n(),
        }
    }

    pub fn is_weighted(&self) -> bool {
        matches!(self, Observed::Weighted(_))
    }

    pub fn support(&self) -> SimpleGraph {
        match self {
            Observed::Plain(g) => g.clone(),
            Observed::Weighted(w) => w.support(),
        }
    }
}

impl From<SimpleGraph> for Observed {
    fn from(g: SimpleGraph) -> Self {
        Observed::Plain(g)
    }
}

impl From<WeightedGraph> for Observed {
    fn from(w: WeightedGraph) -> Self {
        Observed::Weighted(w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simple_graph_validation() {
        assert!(SimpleGraph::new(3, [(0, 0)]).is_err());
        assert!(SimpleGraph::new(3, [(0, 3)]).is_err());
        assert!(SimpleGraph::new(3, [(0, 1), (1, 0)]).is_err());
        let g = SimpleGraph::new(3, [(2, 0), (1, 0)]).unwrap();
        assert_eq!(g.edges(), &[(0, 1), (0, 2)]);
        assert_eq!(g.neighbors(0), &[1, 2]);
        assert!(g.has_edge(2, 0));
        assert!(!g.has_edge(1, 2));
        assert!(!g.is_clique(&[0, 1, 2]));
    }

    #[test]
    fn weighted_graph_validation() {
        assert!(WeightedGraph::new(3, [(0, 1, 0)]).is_err());
        assert!(WeightedGraph::new(3, [(0, 1, 1), (1, 0, 2)]).is_err());
        let w = WeightedGraph::new(3, [(1, 0, 2), (1, 2, 1)]).unwrap();
        assert_eq!(w.weight(0, 1), 2);
        assert_eq!(w.weight(0, 2), 0);
        assert_eq!(w.total_weight(), 3);
        assert_eq!(w.support().edges(), &[(0, 1), (1, 2)]);
    }
}
