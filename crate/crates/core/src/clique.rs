//! d-clique listing and two-connected components.

use crate::graph::SimpleGraph;
use crate::hypergraph::{Hypergraph, Vertex};

/// All vertex `d`-subsets of `g` whose pairs are all edges, in lexicographic order.
///
/// Cliques are grown by ordered extension: each step keeps only the common
/// higher-numbered neighbours of the vertices chosen so far.
pub fn enumerate_d_cliques(g: &SimpleGraph, d: usize) -> Vec<Vec<Vertex>> {
    assert!(d >= 2, "clique size must be at least 2");
    let higher: Vec<&[Vertex]> = (0..g.n() as Vertex)
        .map(|v| {
            let nb = g.neighbors(v);
            let start = nb.partition_point(|&w| w <= v);
            &nb[start..]
        })
        .collect();
    let mut out = Vec::new();
    let mut stack = Vec::with_capacity(d);
    for v in 0..g.n() as Vertex {
        if higher[v as usize].len() + 1 < d {
            continue;
        }
        stack.push(v);
        extend(&higher, higher[v as usize], d, &mut stack, &mut out);
        stack.pop();
    }
    out
}

fn extend(
    higher: &[&[Vertex]],
    candidates: &[Vertex],
    d: usize,
    stack: &mut Vec<Vertex>,
    out: &mut Vec<Vec<Vertex>>,
) {
    if stack.len() == d {
        out.push(stack.clone());
        return;
    }
    let need = d - stack.len();
    for (i, &w) in candidates.iter().enumerate() {
        if candidates.len() - i < need {
            break;
        }
        stack.push(w);
        if need == 1 {
            out.push(stack.clone());
        } else {
            let next = intersect_sorted(&candidates[i + 1..], higher[w as usize]);
            if next.len() + 1 >= need {
                extend(higher, &next, d, stack, out);
            }
        }
        stack.pop();
    }
}

fn intersect_sorted(a: &[Vertex], b: &[Vertex]) -> Vec<Vertex> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// The clique hypergraph of `g`: every `d`-clique becomes a hyperedge.
pub fn clique_hypergraph(g: &SimpleGraph, d: usize) -> Hypergraph {
    Hypergraph::from_sorted(g.n(), d, enumerate_d_cliques(g, d))
}

/// Partitions the hyperedges (by index) into blocks linked by chains of
/// pairwise intersections of size at least two.
///
/// Blocks are ordered by their smallest edge index and each block is sorted.
pub fn two_connected_components(h: &Hypergraph) -> Vec<Vec<usize>> {
    edge_sets_two_connected(h.edges())
}

pub(crate) fn edge_sets_two_connected(edges: &[Vec<Vertex>]) -> Vec<Vec<usize>> {
    use std::collections::HashMap;

    // Two edges meet in >= 2 vertices iff they share a pair, so union through pairs.
    let mut parent: Vec<usize> = (0..edges.len()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut owner: HashMap<(Vertex, Vertex), usize> = HashMap::new();
    for (idx, e) in edges.iter().enumerate() {
        for (i, &u) in e.iter().enumerate() {
            for &v in &e[i + 1..] {
                match owner.get(&(u, v)) {
                    Some(&other) => {
                        let (a, b) = (find(&mut parent, idx), find(&mut parent, other));
                        if a != b {
                            parent[a.max(b)] = a.min(b);
                        }
                    }
                    None => {
                        owner.insert((u, v), idx);
                    }
                }
            }
        }
    }
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut slot: HashMap<usize, usize> = HashMap::new();
    for idx in 0..edges.len() {
        let root = find(&mut parent, idx);
        let s = *slot.entry(root).or_insert_with(|| {
            blocks.push(Vec::new());
            blocks.len() - 1
        });
        blocks[s].push(idx);
    }
    blocks
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::all_subsets;

    fn complete(n: usize) -> SimpleGraph {
        let pairs = (0..n as u32).flat_map(|u| (u + 1..n as u32).map(move |v| (u, v)));
        SimpleGraph::new(n, pairs).unwrap()
    }

    #[test]
    fn k4_has_four_triangles() {
        let t = enumerate_d_cliques(&complete(4), 3);
        assert_eq!(t, all_subsets(4, 3));
    }

    #[test]
    fn bipartite_has_no_triangles() {
        let g =
            SimpleGraph::new(6, (0..3u32).flat_map(|u| (3..6u32).map(move |v| (u, v)))).unwrap();
        assert!(enumerate_d_cliques(&g, 3).is_empty());
        assert_eq!(enumerate_d_cliques(&g, 2).len(), 9);
    }

    #[test]
    fn matches_brute_force_on_small_graphs() {
        // Deterministic pseudo-random graphs; brute force over all d-subsets.
        let mut state = 0x2545F4914F6CDD1Du64;
        for trial in 0..60 {
            let n = 5 + trial % 6;
            let mut pairs = Vec::new();
            for u in 0..n as u32 {
                for v in u + 1..n as u32 {
                    state ^= state << 13;
                    state ^= state >> 7;
                    state ^= state << 17;
                    if state % 100 < 55 {
                        pairs.push((u, v));
                    }
                }
            }
            let g = SimpleGraph::new(n, pairs).unwrap();
            for d in 2..=5 {
                let brute: Vec<_> = all_subsets(n, d)
                    .into_iter()
                    .filter(|s| g.is_clique(s))
                    .collect();
                assert_eq!(enumerate_d_cliques(&g, d), brute);
            }
        }
    }

    #[test]
    fn two_connected_examples() {
        let h = Hypergraph::new(4, 3, [[0, 1, 2], [1, 2, 3]]).unwrap();
        assert_eq!(two_connected_components(&h), vec![vec![0, 1]]);
        let h = Hypergraph::new(5, 3, [[0, 1, 2], [2, 3, 4]]).unwrap();
        assert_eq!(two_connected_components(&h), vec![vec![0], vec![1]]);
        // Chain: a-b share a pair, b-c share a pair, a-c share one vertex.
        let h = Hypergraph::new(6, 3, [[0, 1, 2], [1, 2, 3], [2, 3, 4], [4, 5, 0]]).unwrap();
        // Canonical order puts {0,4,5} at index 1.
        assert_eq!(two_connected_components(&h), vec![vec![0, 2, 3], vec![1]]);
    }
}
