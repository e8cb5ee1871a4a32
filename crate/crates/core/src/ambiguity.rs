//! Ambiguous projections: gadgets, minimal-preimage census, and hard instances.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use rayon::prelude::*;

use crate::cover::{decompose, local_weights, Budget};
use crate::density::{max_subgraph_density, DensityResult};
use crate::error::{Error, Result};
use crate::graph::Observed;
use crate::hypergraph::{Hypergraph, Vertex};
use crate::model::pairs;

/// Default cap on the number of minimal preimages listed.
pub const DEFAULT_CAP: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GadgetVariant {
    /// G_{a,d}: ambiguous under the plain projection.
    Unweighted,
    /// G^w_{a,d}: ambiguous under the weighted projection.
    Weighted,
}

impl GadgetVariant {
    pub fn name(self) -> &'static str {
        match self {
            GadgetVariant::Unweighted => "gad",
            GadgetVariant::Weighted => "gadw",
        }
    }
}

impl fmt::Display for GadgetVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GadgetVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gad" => Ok(GadgetVariant::Unweighted),
            "gadw" => Ok(GadgetVariant::Weighted),
            _ => Err(Error::Param(format!(
                "unknown gadget {s:?} (expected gad or gadw)"
            ))),
        }
    }
}

/// Which gadget to build.
///
/// Unweighted labeling: u = 0, w = 1, v_i = 1 + i for i in 1..d, then the
/// blocks S_1^u..S_{d-1}^u and S_1^w..S_{d-1}^w of d − 2 vertices each.
/// The preimage H has hyperedges {u, v_1..v_{d-1}}, {u, v_i} ∪ S_i^u and
/// {w, v_i} ∪ S_i^w; H′ replaces u by w in the first one.
///
/// Weighted labeling: S_1 and S_2 of d − 2 vertices each, then w_1..w_4.
/// H = {S_1+w_1w_2, S_1+w_3w_4, S_2+w_2w_3, S_2+w_4w_1}; H′ swaps S_1 and S_2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GadgetSpec {
    pub d: usize,
    pub variant: GadgetVariant,
}

impl GadgetSpec {
    pub fn new(d: usize, variant: GadgetVariant) -> Result<Self> {
        if d < 3 {
            return Err(Error::Param(format!("gadgets need d >= 3, got {d}")));
        }
        Ok(Self { d, variant })
    }

    /// v(H): 2d² − 5d + 5 unweighted, 2d weighted.
    pub fn vertex_count(&self) -> usize {
        let d = self.d;
        match self.variant {
            GadgetVariant::Unweighted => 2 * d * d - 5 * d + 5,
            GadgetVariant::Weighted => 2 * d,
        }
    }

    /// e(H): 2d − 1 unweighted, 4 weighted.
    pub fn edge_count(&self) -> usize {
        match self.variant {
            GadgetVariant::Unweighted => 2 * self.d - 1,
            GadgetVariant::Weighted => 4,
        }
    }
}

/// A gadget graph with two distinct minimal preimages of it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gadget {
    pub spec: GadgetSpec,
    /// Plain projection for `gad`, weighted for `gadw`.
    pub projection: Observed,
    pub h: Hypergraph,
    pub h_prime: Hypergraph,
}

pub fn build_gadget(spec: GadgetSpec) -> Result<Gadget> {
    let GadgetSpec { d, variant } = GadgetSpec::new(spec.d, spec.variant)?;
    let n = spec.vertex_count();
    let (h, h_prime) = match variant {
        GadgetVariant::Unweighted => {
            let h = Hypergraph::from_unsorted(n, d, unweighted_edges(d, 0, false));
            let hp = Hypergraph::from_unsorted(n, d, unweighted_edges(d, 0, true));
            (h, hp)
        }
        GadgetVariant::Weighted => {
            let s1: Vec<Vertex> = (0..d as Vertex - 2).collect();
            let s2: Vec<Vertex> = (d as Vertex - 2..2 * d as Vertex - 4).collect();
            let w: Vec<Vertex> = (2 * d as Vertex - 4..2 * d as Vertex).collect();
            let edges = |a: &[Vertex], b: &[Vertex]| {
                [
                    (a, w[0], w[1]),
                    (a, w[2], w[3]),
                    (b, w[1], w[2]),
                    (b, w[3], w[0]),
                ]
                .into_iter()
                .map(|(s, x, y)| {
                    let mut e = s.to_vec();
                    e.extend([x, y]);
                    e.sort_unstable();
                    e
                })
                .collect::<Vec<_>>()
            };
            (
                Hypergraph::from_unsorted(n, d, edges(&s1, &s2)),
                Hypergraph::from_unsorted(n, d, edges(&s2, &s1)),
            )
        }
    };
    let projection = match variant {
        GadgetVariant::Unweighted => Observed::Plain(h.project()),
        GadgetVariant::Weighted => Observed::Weighted(h.project_weighted()),
    };
    Ok(Gadget {
        spec,
        projection,
        h,
        h_prime,
    })
}

/// Hyperedges of one G_{a,d} preimage with labels shifted by `offset`.
fn unweighted_edges(d: usize, offset: Vertex, swapped: bool) -> Vec<Vec<Vertex>> {
    let dv = d as Vertex;
    let (u, w) = (offset, offset + 1);
    let v = |i: Vertex| offset + 1 + i;
    let s_u = |i: Vertex| (0..dv - 2).map(move |j| offset + dv + 1 + (i - 1) * (dv - 2) + j);
    let s_w =
        |i: Vertex| (0..dv - 2).map(move |j| offset + dv + 1 + (dv - 1 + i - 1) * (dv - 2) + j);
    let mut edges = Vec::with_capacity(2 * d - 1);
    let mut top: Vec<Vertex> = (1..dv).map(v).collect();
    top.push(if swapped { w } else { u });
    edges.push(top);
    for i in 1..dv {
        let mut a: Vec<Vertex> = vec![u, v(i)];
        a.extend(s_u(i));
        let mut b: Vec<Vertex> = vec![w, v(i)];
        b.extend(s_w(i));
        edges.push(a);
        edges.push(b);
    }
    for e in &mut edges {
        e.sort_unstable();
    }
    edges
}

/// m disjoint copies of the G_{a,d} minimal preimage on `0..n`; copy i uses
/// the gadget labeling shifted by i·(2d² − 5d + 5). Each copy can be swapped
/// independently, so the projection has at least 2^m minimal preimages.
pub fn make_hard_instance(d: usize, m: usize, n: usize) -> Result<Hypergraph> {
    let spec = GadgetSpec::new(d, GadgetVariant::Unweighted)?;
    let block = spec.vertex_count();
    if n < m * block {
        return Err(Error::Param(format!(
            "{m} copies need n >= {}, got {n}",
            m * block
        )));
    }
    let edges = (0..m)
        .flat_map(|i| unweighted_edges(d, (i * block) as Vertex, false))
        .collect();
    Ok(Hypergraph::from_unsorted(n, d, edges))
}

/// Minimal preimages of an observed graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AmbiguityReport {
    pub weighted: bool,
    /// Number of minimal preimages, saturating at the cap.
    pub minimal_preimage_count: usize,
    /// True when the count was cut off at the cap.
    pub saturated: bool,
    /// e(H) of every minimal preimage.
    pub min_edges: usize,
    /// Up to `cap` minimal preimages, lexicographically smallest first.
    pub preimages: Vec<Hypergraph>,
    /// Density of the first listed preimage; `None` when it has no edges.
    pub density: Option<DensityResult>,
}

/// Enumerates minimal preimages of `g` (exact multiplicities when weighted).
pub fn find_minimal_preimages(
    g: &Observed,
    d: usize,
    cap: usize,
    budget: u64,
) -> Result<AmbiguityReport> {
    if cap == 0 {
        return Err(Error::Param("cap must be at least 1".into()));
    }
    let support = g.support();
    if let Observed::Weighted(w) = g {
        if w.total_weight() % pairs(d) as u64 != 0 {
            return Err(Error::NotAWeightedProjection { d });
        }
    }
    let dec = decompose(&support, d).map_err(|e| match (e, g) {
        (Error::NotAProjection { .. }, Observed::Weighted(_)) => {
            Error::NotAWeightedProjection { d }
        }
        (e, _) => e,
    })?;
    // Minimal covers per block, as global clique indices.
    let mut per_block: Vec<Vec<Vec<usize>>> = Vec::with_capacity(dec.blocks.len());
    let mut min_edges = 0;
    for block in &dec.blocks {
        let mut b = Budget::new(budget);
        let covers = match g {
            Observed::Plain(_) => {
                let k = block.min_cover_size(&mut b)?;
                block.covers_of_size(k, cap, &mut b)?
            }
            Observed::Weighted(w) => {
                block.exact_weighted_covers(&local_weights(block, w), cap, &mut b)?
            }
        };
        let first = covers.first().ok_or(Error::NotAWeightedProjection { d })?;
        min_edges += first.len();
        per_block.push(covers.iter().map(|c| block.globalize(c)).collect());
    }
    // A block listing `cap` covers may have been cut short.
    let product = per_block
        .iter()
        .fold(1usize, |acc, c| acc.saturating_mul(c.len()));
    let saturated = product > cap || per_block.iter().any(|c| c.len() >= cap);
    let count = product.min(cap);
    let preimages: Vec<Hypergraph> = product_prefix(&per_block, cap)
        .into_iter()
        .map(|choice| {
            let edges = choice.into_iter().map(|c| dec.cliques[c].clone()).collect();
            Hypergraph::from_unsorted(dec.n, d, edges)
        })
        .collect();
    let density = match preimages.first() {
        Some(h) if !h.is_empty() => Some(max_subgraph_density(h)?),
        _ => None,
    };
    Ok(AmbiguityReport {
        weighted: g.is_weighted(),
        minimal_preimage_count: count,
        saturated,
        min_edges,
        preimages,
        density,
    })
}

/// The first `limit` elements of the product of per-block choices, each
/// flattened and sorted; the last block varies fastest.
fn product_prefix(per_block: &[Vec<Vec<usize>>], limit: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut idx = vec![0usize; per_block.len()];
    loop {
        let mut choice: Vec<usize> = per_block
            .iter()
            .zip(&idx)
            .flat_map(|(b, &i)| b[i].iter().copied())
            .collect();
        choice.sort_unstable();
        out.push(choice);
        if out.len() >= limit {
            return out;
        }
        let mut k = per_block.len();
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < per_block[k].len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

/// d − 1 − 1/m(h), the appearance threshold exponent of h.
pub fn threshold_of_preimage(h: &Hypergraph) -> Result<Ratio<i64>> {
    Ok(max_subgraph_density(h)?.exponent)
}

/// ((d−1)·e_h − u + p) / (e_h + p).
pub fn ratio_quantity(e_h: usize, u_size: usize, p_size: usize, d: usize) -> Result<Ratio<i64>> {
    if e_h + p_size == 0 {
        return Err(Error::Param("e_h + p must be positive".into()));
    }
    let (e, u, p, d) = (e_h as i64, u_size as i64, p_size as i64, d as i64);
    Ok(Ratio::new((d - 1) * e - u + p, e + p))
}

/// Outcome of the exhaustive search over small connected 3-uniform hypergraphs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmallSearchSummary {
    /// Isomorphism classes examined, indexed by edge count (index 0 unused).
    pub classes_per_size: Vec<usize>,
    /// Classes that are a minimal preimage of an ambiguous projection.
    pub ambiguous: usize,
    /// Smallest threshold exponent among those, with a witness.
    pub min_exponent: Option<Ratio<i64>>,
    pub witness: Option<Hypergraph>,
}

/// Examines every connected 3-uniform hypergraph with at most `max_edges`
/// edges, up to isomorphism, and records those that are minimal preimages of
/// a projection with two or more minimal preimages.
///
/// Disconnected hypergraphs need no separate treatment: their projections
/// split into vertex-disjoint parts, an ambiguous one contains an ambiguous
/// connected part, and adding parts never lowers m(h).
pub fn search_small_ambiguous(max_edges: usize, budget: u64) -> Result<SmallSearchSummary> {
    const D: usize = 3;
    let mut level: Vec<Hypergraph> = vec![Hypergraph::from_sorted(D, D, vec![vec![0, 1, 2]])];
    let mut summary = SmallSearchSummary {
        classes_per_size: vec![0; max_edges + 1],
        ambiguous: 0,
        min_exponent: None,
        witness: None,
    };
    for size in 1..=max_edges {
        summary.classes_per_size[size] = level.len();
        let checked: Vec<Option<Ratio<i64>>> = level
            .par_iter()
            .map(|h| {
                let report = find_minimal_preimages(&Observed::Plain(h.project()), D, 2, budget)?;
                if report.min_edges == h.edge_count() && report.minimal_preimage_count >= 2 {
                    Ok(Some(threshold_of_preimage(h)?))
                } else {
                    Ok(None)
                }
            })
            .collect::<Result<_>>()?;
        for (h, t) in level.iter().zip(checked) {
            if let Some(t) = t {
                summary.ambiguous += 1;
                if summary.min_exponent.is_none_or(|m| t < m) {
                    summary.min_exponent = Some(t);
                    summary.witness = Some(h.clone());
                }
            }
        }
        if size == max_edges {
            break;
        }
        let mut children: Vec<(Vec<Vec<u8>>, Hypergraph)> = level
            .par_iter()
            .flat_map_iter(|h| {
                extensions(h)
                    .into_iter()
                    .map(|c| (canonical_code(c.edges()), c))
            })
            .collect();
        children.sort_by(|a, b| a.0.cmp(&b.0));
        let mut seen = HashSet::new();
        level = children
            .into_iter()
            .filter(|(code, _)| seen.insert(code.clone()))
            .map(|(_, h)| h)
            .collect();
    }
    Ok(summary)
}

/// One-edge extensions of a connected hypergraph on `0..v` that stay connected.
fn extensions(h: &Hypergraph) -> Vec<Hypergraph> {
    let d = h.d();
    let v = h.n() as Vertex;
    let mut out = Vec::new();
    for old in 1..=d {
        let fresh: Vec<Vertex> = (v..v + (d - old) as Vertex).collect();
        crate::hypergraph::for_each_subset(v as usize, old, |s| {
            let mut e = s.to_vec();
            e.extend(&fresh);
            if old == d && h.contains(&e) {
                return;
            }
            let mut edges = h.edges().to_vec();
            edges.push(e);
            out.push(Hypergraph::from_unsorted(v as usize + d - old, d, edges));
        });
    }
    out
}

/// An isomorphism-invariant code: the lexicographically smallest sequence of
/// relabeled edges over all edge orders, where vertices are numbered by first
/// appearance. Two hypergraphs get equal codes exactly when they are isomorphic.
pub fn canonical_code(edges: &[Vec<Vertex>]) -> Vec<Vec<u8>> {
    let n = edges
        .iter()
        .flatten()
        .map(|&v| v as usize + 1)
        .max()
        .unwrap_or(0);
    let mut st = CanonState {
        edges,
        label: vec![None; n],
        next: 0,
        used: vec![false; edges.len()],
        code: Vec::with_capacity(edges.len()),
        best: None,
    };
    st.search();
    st.best.unwrap_or_default()
}

struct CanonState<'a> {
    edges: &'a [Vec<Vertex>],
    label: Vec<Option<u8>>,
    next: u8,
    used: Vec<bool>,
    code: Vec<Vec<u8>>,
    best: Option<Vec<Vec<u8>>>,
}

impl CanonState<'_> {
    /// Sorted labels the edge would get; unlabeled vertices take the next free labels.
    fn preview(&self, e: &[Vertex]) -> Vec<u8> {
        let mut fresh = self.next;
        let mut out: Vec<u8> = e
            .iter()
            .map(|&v| {
                self.label[v as usize].unwrap_or_else(|| {
                    fresh += 1;
                    fresh - 1
                })
            })
            .collect();
        out.sort_unstable();
        out
    }

    fn search(&mut self) {
        let t = self.code.len();
        if t == self.edges.len() {
            if self.best.as_ref().is_none_or(|b| self.code < *b) {
                self.best = Some(self.code.clone());
            }
            return;
        }
        let options: Vec<(Vec<u8>, usize)> = (0..self.edges.len())
            .filter(|&i| !self.used[i])
            .map(|i| (self.preview(&self.edges[i]), i))
            .collect();
        let min = options.iter().map(|o| &o.0).min().unwrap().clone();
        if let Some(best) = &self.best {
            if best[..t] == self.code[..] && min > best[t] {
                return;
            }
        }
        for (_, i) in options.into_iter().filter(|o| o.0 == min) {
            let fresh: Vec<Vertex> = self.edges[i]
                .iter()
                .copied()
                .filter(|&v| self.label[v as usize].is_none())
                .collect();
            self.used[i] = true;
            self.code.push(min.clone());
            for perm in permutations(&fresh) {
                for (k, &v) in perm.iter().enumerate() {
                    self.label[v as usize] = Some(self.next + k as u8);
                }
                self.next += perm.len() as u8;
                self.search();
                self.next -= perm.len() as u8;
                for &v in &perm {
                    self.label[v as usize] = None;
                }
            }
            self.code.pop();
            self.used[i] = false;
        }
    }
}

fn permutations(items: &[Vertex]) -> Vec<Vec<Vertex>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let first = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, first);
            out.push(p);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::DEFAULT_BUDGET;

    fn gad(d: usize) -> Gadget {
        build_gadget(GadgetSpec::new(d, GadgetVariant::Unweighted).unwrap()).unwrap()
    }

    fn gadw(d: usize) -> Gadget {
        build_gadget(GadgetSpec::new(d, GadgetVariant::Weighted).unwrap()).unwrap()
    }

    #[test]
    fn gadget_sizes() {
        for d in 3..=8 {
            for g in [gad(d), gadw(d)] {
                assert_eq!(g.h.vertex_count(), g.spec.vertex_count());
                assert_eq!(g.h.edge_count(), g.spec.edge_count());
                assert_eq!(g.h_prime.edge_count(), g.spec.edge_count());
                assert_ne!(g.h, g.h_prime);
            }
            let g = gad(d);
            assert_eq!(g.h.project(), g.h_prime.project());
            assert_eq!(g.h.symmetric_difference_counts(&g.h_prime), (1, 1));
            let g = gadw(d);
            assert_eq!(g.h.project_weighted(), g.h_prime.project_weighted());
        }
    }

    #[test]
    fn gad3_edges() {
        // u=0, w=1, v1=2, v2=3, S1u=4, S2u=5, S1w=6, S2w=7.
        let g = gad(3);
        assert_eq!(
            g.h.edges(),
            &[
                vec![0, 2, 3],
                vec![0, 2, 4],
                vec![0, 3, 5],
                vec![1, 2, 6],
                vec![1, 3, 7]
            ]
        );
        assert!(g.h_prime.contains(&[1, 2, 3]));
    }

    #[test]
    fn thresholds_of_gadgets() {
        for d in 3..=5i64 {
            let t = threshold_of_preimage(&gad(d as usize).h).unwrap();
            assert_eq!(t, Ratio::new(2 * d - 4, 2 * d - 1));
        }
        for d in 3..=6i64 {
            let t = threshold_of_preimage(&gadw(d as usize).h).unwrap();
            assert_eq!(t, Ratio::new(d - 2, 2));
            assert!(t >= Ratio::new(d - 1, d + 1));
        }
        let single = Hypergraph::new(3, 3, [[0, 1, 2]]).unwrap();
        assert_eq!(
            threshold_of_preimage(&single).unwrap(),
            Ratio::from_integer(-1)
        );
        assert!(threshold_of_preimage(&Hypergraph::empty(3, 3)).is_err());
    }

    #[test]
    fn ratio_examples() {
        for d in 3..10i64 {
            let r = ratio_quantity(1, d as usize + 1, 2 * (d as usize - 1), d as usize).unwrap();
            assert_eq!(r, Ratio::new(2 * d - 4, 2 * d - 1));
            assert_eq!(
                ratio_quantity(1, d as usize, 0, d as usize).unwrap(),
                Ratio::from_integer(-1)
            );
        }
        assert_eq!(ratio_quantity(1, 5, 6, 4).unwrap(), Ratio::new(4, 7));
        assert!(ratio_quantity(0, 3, 0, 3).is_err());
    }

    #[test]
    fn census_examples() {
        let tri = Hypergraph::new(3, 3, [[0, 1, 2]]).unwrap();
        let r =
            find_minimal_preimages(&tri.project().into(), 3, DEFAULT_CAP, DEFAULT_BUDGET).unwrap();
        assert_eq!((r.minimal_preimage_count, r.min_edges), (1, 1));

        let g = gad(3);
        let r = find_minimal_preimages(&g.projection, 3, DEFAULT_CAP, DEFAULT_BUDGET).unwrap();
        assert_eq!(
            (r.minimal_preimage_count, r.min_edges, r.saturated),
            (2, 5, false)
        );
        assert!(r.preimages.contains(&g.h) && r.preimages.contains(&g.h_prime));

        let w = Observed::Weighted(g.h.project_weighted());
        let r = find_minimal_preimages(&w, 3, DEFAULT_CAP, DEFAULT_BUDGET).unwrap();
        assert_eq!(r.minimal_preimage_count, 1);
        assert_eq!(r.preimages, vec![g.h.clone()]);

        let g = gadw(3);
        let r = find_minimal_preimages(&g.projection, 3, DEFAULT_CAP, DEFAULT_BUDGET).unwrap();
        assert_eq!((r.minimal_preimage_count, r.min_edges), (2, 4));
    }

    #[test]
    fn hard_instance_blocks() {
        assert_eq!(make_hard_instance(3, 1, 8).unwrap(), gad(3).h);
        assert!(make_hard_instance(3, 2, 15).is_err());
        for m in 1..=3 {
            let h = make_hard_instance(3, m, 8 * m + 2).unwrap();
            assert_eq!(h.edge_count(), 5 * m);
            let r = find_minimal_preimages(&h.project().into(), 3, DEFAULT_CAP, DEFAULT_BUDGET)
                .unwrap();
            assert_eq!(r.minimal_preimage_count, 1 << m);
            assert_eq!(r.preimages.len(), 1 << m);
        }
        let h = make_hard_instance(3, 3, 24).unwrap();
        let r = find_minimal_preimages(&h.project().into(), 3, 5, DEFAULT_BUDGET).unwrap();
        assert_eq!((r.minimal_preimage_count, r.saturated), (5, true));
    }

    #[test]
    fn canonical_code_detects_isomorphism() {
        let a = Hypergraph::new(5, 3, [[0, 1, 2], [2, 3, 4]]).unwrap();
        let b = Hypergraph::new(5, 3, [[4, 1, 0], [0, 2, 3]]).unwrap();
        let c = Hypergraph::new(4, 3, [[0, 1, 2], [1, 2, 3]]).unwrap();
        assert_eq!(canonical_code(a.edges()), canonical_code(b.edges()));
        assert_ne!(canonical_code(a.edges()), canonical_code(c.edges()));
    }

    #[test]
    fn small_class_counts() {
        // Connected 3-graphs: 1 with one edge, 2 with two (sharing 1 or 2 vertices).
        let s = search_small_ambiguous(3, DEFAULT_BUDGET).unwrap();
        assert_eq!(&s.classes_per_size[1..3], &[1, 2]);
        // Three triangles of K4 project onto K4, as does any other three.
        assert_eq!(s.ambiguous, 1);
        assert_eq!(s.min_exponent, Some(Ratio::new(2, 3)));
        assert_eq!(s.witness.unwrap().edge_count(), 3);
    }
}
