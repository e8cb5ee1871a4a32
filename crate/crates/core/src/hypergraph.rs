use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{SimpleGraph, WeightedGraph};

pub type Vertex = u32;

/// A d-uniform hypergraph on the labeled vertex set `0..n`.
///
/// Hyperedges are strictly ascending vertex lists and the edge list is kept
/// sorted and free of duplicates, so two hypergraphs are equal exactly when
/// they have the same labeled edge set.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Hypergraph {
    n: usize,
    d: usize,
    edges: Vec<Vec<Vertex>>,
}

impl Hypergraph {
    /// Builds a hypergraph, canonicalizing each edge and the edge order.
    ///
    /// Edges may be given in any vertex order; duplicate edges, repeated
    /// vertices, wrong arity and out-of-range ids are rejected.
    pub fn new<I, E>(n: usize, d: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = E>,
        E: AsRef<[Vertex]>,
    {
        if d < 2 {
            return Err(Error::InvalidHypergraph(format!("uniformity {d} < 2")));
        }
        let mut out = Vec::new();
        for e in edges {
            let mut e = e.as_ref().to_vec();
            if e.len() != d {
                return Err(Error::InvalidHypergraph(format!(
                    "hyperedge {e:?} has {} vertices, expected {d}",
                    e.len()
                )));
            }
            e.sort_unstable();
            if e.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidHypergraph(format!(
                    "hyperedge {e:?} repeats a vertex"
                )));
            }
            if let Some(&v) = e.last().filter(|&&v| v as usize >= n) {
                return Err(Error::InvalidHypergraph(format!(
                    "vertex {v} out of range for n = {n}"
                )));
            }
            out.push(e);
        }
        out.sort_unstable();
        if let Some(w) = out.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidHypergraph(format!(
                "duplicate hyperedge {:?}",
                w[0]
            )));
        }
        Ok(Self { n, d, edges: out })
    }

    /// Trusted constructor for edges that are already canonical.
    pub(crate) fn from_sorted(n: usize, d: usize, edges: Vec<Vec<Vertex>>) -> Self {
        debug_assert!(edges.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(edges
            .iter()
            .all(|e| e.len() == d && e.windows(2).all(|w| w[0] < w[1])));
        Self { n, d, edges }
    }

    /// Builds from arbitrary canonical edges, sorting and deduplicating.
    pub(crate) fn from_unsorted(n: usize, d: usize, mut edges: Vec<Vec<Vertex>>) -> Self {
        edges.sort_unstable();
        edges.dedup();
        Self::from_sorted(n, d, edges)
    }

    pub fn empty(n: usize, d: usize) -> Self {
        Self {
            n,
            d,
            edges: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn edges(&self) -> &[Vec<Vertex>] {
        &self.edges
    }

    /// Number of hyperedges, e(H).
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn contains(&self, edge: &[Vertex]) -> bool {
        self.edges
            .binary_search_by(|e| e.as_slice().cmp(edge))
            .is_ok()
    }

    /// Vertices covered by at least one hyperedge, ascending.
    pub fn support(&self) -> Vec<Vertex> {
        let mut seen = vec![false; self.n];
        for e in &self.edges {
            for &v in e {
                seen[v as usize] = true;
            }
        }
        (0..self.n as Vertex)
            .filter(|&v| seen[v as usize])
            .collect()
    }

    /// Number of non-isolated vertices, v(H).
    pub fn vertex_count(&self) -> usize {
        self.support().len()
    }

    /// Returns (missing, spurious) of `predicted` against `self` as truth.
    pub fn symmetric_difference_counts(&self, predicted: &Hypergraph) -> (usize, usize) {
        let (mut i, mut j) = (0, 0);
        let (mut missing, mut spurious) = (0, 0);
        let (a, b) = (&self.edges, &predicted.edges);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => {
                    missing += 1;
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    spurious += 1;
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    i += 1;
                    j += 1;
                }
            }
        }
        (missing + a.len() - i, spurious + b.len() - j)
    }

    pub fn is_subset_of(&self, other: &Hypergraph) -> bool {
        self.symmetric_difference_counts(other).0 == 0
    }

    /// Proj(H): the graph joining every pair that shares a hyperedge.
    pub fn project(&self) -> SimpleGraph {
        let mut pairs = Vec::with_capacity(self.edges.len() * self.d * (self.d - 1) / 2);
        for e in &self.edges {
            for (i, &u) in e.iter().enumerate() {
                for &v in &e[i + 1..] {
                    pairs.push((u, v));
                }
            }
        }
        pairs.sort_unstable();
        pairs.dedup();
        SimpleGraph::from_sorted_pairs(self.n, pairs)
    }

    /// Proj_W(H): each pair weighted by the number of hyperedges containing it.
    pub fn project_weighted(&self) -> WeightedGraph {
        let mut pairs = Vec::with_capacity(self.edges.len() * self.d * (self.d - 1) / 2);
        for e in &self.edges {
            for (i, &u) in e.iter().enumerate() {
                for &v in &e[i + 1..] {
                    pairs.push((u, v));
                }
            }
        }
        pairs.sort_unstable();
        let mut weights: Vec<((Vertex, Vertex), u32)> = Vec::new();
        for p in pairs {
            match weights.last_mut() {
                Some((q, w)) if *q == p => *w += 1,
                _ => weights.push((p, 1)),
            }
        }
        WeightedGraph::from_sorted(self.n, weights)
    }

    /// Restriction to the given edge indices.
    pub fn sub_hypergraph(&self, indices: &[usize]) -> Hypergraph {
        let edges = indices.iter().map(|&i| self.edges[i].clone()).collect();
        Self::from_unsorted(self.n, self.d, edges)
    }
}

impl fmt::Debug for Hypergraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Hypergraph(n={}, d={}, {:?})",
            self.n, self.d, self.edges
        )
    }
}

/// Calls `f` on every ascending `k`-subset of `0..n`, in lexicographic order.
pub fn for_each_subset<F: FnMut(&[Vertex])>(n: usize, k: usize, mut f: F) {
    if k > n {
        return;
    }
    let mut idx: Vec<Vertex> = (0..k as Vertex).collect();
    loop {
        f(&idx);
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if (idx[i] as usize) < n - k + i {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// All ascending `k`-subsets of `0..n` in lexicographic order.
pub fn all_subsets(n: usize, k: usize) -> Vec<Vec<Vertex>> {
    let mut out = Vec::new();
    for_each_subset(n, k, |s| out.push(s.to_vec()));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_malformed_edges() {
        assert!(Hypergraph::new(3, 3, [[0, 1, 3]]).is_err());
        assert!(Hypergraph::new(4, 3, [[0, 1, 1]]).is_err());
        assert!(Hypergraph::new(4, 3, [vec![0, 1]]).is_err());
        assert!(Hypergraph::new(4, 3, [[0, 1, 2], [2, 1, 0]]).is_err());
        assert!(Hypergraph::new(4, 1, [[0]]).is_err());
    }

    #[test]
    fn canonicalizes_order() {
        let h = Hypergraph::new(5, 3, [[4, 2, 3], [2, 1, 0]]).unwrap();
        assert_eq!(h.edges(), &[vec![0, 1, 2], vec![2, 3, 4]]);
        assert!(h.contains(&[2, 3, 4]));
        assert!(!h.contains(&[1, 2, 3]));
    }

    #[test]
    fn projection_examples() {
        let h = Hypergraph::new(3, 3, [[0, 1, 2]]).unwrap();
        assert_eq!(h.project().edges(), &[(0, 1), (0, 2), (1, 2)]);

        let empty = Hypergraph::empty(5, 3);
        let g = empty.project();
        assert_eq!(g.n(), 5);
        assert!(g.edges().is_empty());
        assert!(empty.project_weighted().is_empty());

        // Every pair of {0,1,2,3} except {0,3}.
        let h = Hypergraph::new(4, 3, [[0, 1, 2], [1, 2, 3]]).unwrap();
        let brute: Vec<(u32, u32)> = (0..4u32)
            .flat_map(|u| (u + 1..4).map(move |v| (u, v)))
            .filter(|&(u, v)| h.edges().iter().any(|e| e.contains(&u) && e.contains(&v)))
            .collect();
        assert_eq!(brute.len(), 5);
        assert_eq!(h.project().edges(), brute.as_slice());
        assert!(!h.project().has_edge(0, 3));
    }

    #[test]
    fn weighted_projection_counts_multiplicity() {
        let h = Hypergraph::new(4, 3, [[0, 1, 2], [1, 2, 3]]).unwrap();
        let w = h.project_weighted();
        assert_eq!(w.weight(1, 2), 2);
        for &((u, v), wt) in w.entries() {
            if (u, v) != (1, 2) {
                assert_eq!(wt, 1);
            }
        }
        assert_eq!(w.total_weight(), 2 * 3);
    }

    #[test]
    fn symmetric_difference() {
        let t = Hypergraph::new(6, 3, [[0, 1, 2], [1, 2, 3], [3, 4, 5]]).unwrap();
        let p = Hypergraph::new(6, 3, [[0, 1, 2], [2, 3, 4]]).unwrap();
        assert_eq!(t.symmetric_difference_counts(&p), (2, 1));
        assert_eq!(t.symmetric_difference_counts(&t), (0, 0));
    }

    #[test]
    fn subset_enumeration() {
        assert_eq!(all_subsets(4, 2).len(), 6);
        assert_eq!(all_subsets(5, 3)[0], vec![0, 1, 2]);
        assert_eq!(all_subsets(5, 3).last().unwrap(), &vec![2, 3, 4]);
        assert_eq!(all_subsets(3, 0), vec![Vec::<u32>::new()]);
        assert!(all_subsets(2, 3).is_empty());
    }
}
