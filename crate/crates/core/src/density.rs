//! Maximum sub-hypergraph density m(H) by parametric min-cut.

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::flow::{FlowNetwork, INF};
use crate::hypergraph::{Hypergraph, Vertex};

/// m(H) together with the vertex set attaining it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensityResult {
    /// Hyperedges per vertex of the densest vertex subset.
    pub m: Ratio<i64>,
    /// Lexicographically smallest vertex subset attaining `m`.
    pub witness_vertices: Vec<Vertex>,
    /// d - 1 - 1/m.
    pub exponent: Ratio<i64>,
}

/// Computes m(H) = max over vertex subsets S of e(H[S]) / |S|.
///
/// Uses Dinkelbach iteration: for a density guess a/b, the subset maximizing
/// b·e(S) − a·|S| is a minimum cut in the edge/vertex incidence network, and
/// its density is the next guess. Values are exact integers throughout.
pub fn max_subgraph_density(h: &Hypergraph) -> Result<DensityResult> {
    if h.is_empty() {
        return Err(Error::EmptyHypergraph);
    }
    let inst = Instance::new(h);
    let mut guess = Ratio::new(inst.edges.len() as i64, inst.vertices.len() as i64);
    loop {
        let (value, best) = inst.solve(guess, &[], &[]);
        if value == 0 {
            break;
        }
        let inside = inst.edges_inside(&best);
        guess = Ratio::new(inside as i64, best.iter().filter(|&&x| x).count() as i64);
    }
    let witness = inst.lex_smallest_optimum(guess);
    let d = h.d() as i64;
    Ok(DensityResult {
        m: guess,
        witness_vertices: witness,
        exponent: Ratio::from_integer(d - 1) - guess.recip(),
    })
}

/// Exhaustive m(H) over all subsets of the non-isolated vertices. Exponential; for tests.
pub fn max_subgraph_density_brute_force(h: &Hypergraph) -> Result<Ratio<i64>> {
    if h.is_empty() {
        return Err(Error::EmptyHypergraph);
    }
    let support = h.support();
    assert!(support.len() <= 24, "brute force limited to 24 vertices");
    let pos = |v: Vertex| support.binary_search(&v).unwrap();
    let masks: Vec<u32> = h
        .edges()
        .iter()
        .map(|e| e.iter().fold(0u32, |m, &v| m | 1 << pos(v)))
        .collect();
    let mut best = Ratio::new(0, 1);
    for s in 1u32..1 << support.len() {
        let inside = masks.iter().filter(|&&m| m & s == m).count() as i64;
        let r = Ratio::new(inside, s.count_ones() as i64);
        if r > best {
            best = r;
        }
    }
    Ok(best)
}

struct Instance {
    vertices: Vec<Vertex>,
    /// Edges as indices into `vertices`.
    edges: Vec<Vec<usize>>,
}

impl Instance {
    fn new(h: &Hypergraph) -> Self {
        let vertices = h.support();
        let edges = h
            .edges()
            .iter()
            .map(|e| {
                e.iter()
                    .map(|v| vertices.binary_search(v).unwrap())
                    .collect()
            })
            .collect();
        Self { vertices, edges }
    }

    fn edges_inside(&self, chosen: &[bool]) -> usize {
        self.edges
            .iter()
            .filter(|e| e.iter().all(|&i| chosen[i]))
            .count()
    }

    /// Maximizes b·e(S) − a·|S| for g = a/b subject to `forced` ⊆ S and
    /// `forbidden` ∩ S = ∅. Returns the value and the largest maximizer.
    fn solve(&self, g: Ratio<i64>, forced: &[usize], forbidden: &[usize]) -> (i64, Vec<bool>) {
        let (a, b) = (*g.numer(), *g.denom());
        let ne = self.edges.len();
        let nv = self.vertices.len();
        let (s, t) = (ne + nv, ne + nv + 1);
        let mut net = FlowNetwork::new(ne + nv + 2);
        for (i, e) in self.edges.iter().enumerate() {
            net.add_arc(s, i, b);
            for &v in e {
                net.add_arc(i, ne + v, INF);
            }
        }
        for v in 0..nv {
            net.add_arc(ne + v, t, a);
        }
        for &v in forced {
            net.add_arc(s, ne + v, INF);
        }
        for &v in forbidden {
            net.add_arc(ne + v, t, INF);
        }
        let cut = net.max_flow(s, t);
        let value = b * ne as i64 - cut;
        let reach = net.reaches_sink(t);
        let chosen = (0..nv).map(|v| !reach[ne + v]).collect();
        (value, chosen)
    }

    /// Smallest optimal set in the lexicographic order on ascending vertex lists.
    ///
    /// Optimal sets are closed under union and intersection, so they all lie
    /// inside the largest one; a vertex is appended to the prefix only when
    /// some optimal set extends the prefix with it and skips every smaller
    /// vertex not already chosen.
    fn lex_smallest_optimum(&self, g: Ratio<i64>) -> Vec<Vertex> {
        let (_, largest) = self.solve(g, &[], &[]);
        let candidates: Vec<usize> = (0..largest.len()).filter(|&v| largest[v]).collect();
        let outside: Vec<usize> = (0..largest.len()).filter(|&v| !largest[v]).collect();
        let (a, b) = (*g.numer(), *g.denom());
        let is_optimal = |set: &[usize]| {
            let mut mask = vec![false; self.vertices.len()];
            set.iter().for_each(|&v| mask[v] = true);
            b * self.edges_inside(&mask) as i64 == a * set.len() as i64
        };
        let mut prefix: Vec<usize> = Vec::new();
        let mut forbidden = outside.clone();
        let mut next = 0;
        while prefix.is_empty() || !is_optimal(&prefix) {
            let mut extended = false;
            while next < candidates.len() {
                let v = candidates[next];
                next += 1;
                let mut forced = prefix.clone();
                forced.push(v);
                if self.solve(g, &forced, &forbidden).0 == 0 {
                    prefix.push(v);
                    extended = true;
                    break;
                }
                forbidden.push(v);
            }
            assert!(extended, "an optimal set must extend every feasible prefix");
        }
        prefix.iter().map(|&v| self.vertices[v]).collect()
    }
}
