//! Exact clique covers of a graph's edge set, split by two-connected blocks.
//!
//! A preimage of G is a set of d-cliques of G whose pairs cover every edge
//! (with exact multiplicities in the weighted case). Cliques from different
//! two-connected blocks of the clique hypergraph share no pair, so each block
//! is solved on its own and the answers combine freely.

use std::collections::HashMap;

use crate::clique::{edge_sets_two_connected, enumerate_d_cliques};
use crate::error::{Error, Result};
use crate::graph::{SimpleGraph, WeightedGraph};
use crate::hypergraph::Vertex;
use crate::model::pairs;

/// Default search-node budget per block.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// Memo entries kept per block before the table stops growing.
const MEMO_LIMIT: usize = 1 << 20;

pub(crate) struct Decomposition {
    pub n: usize,
    /// All d-cliques of the graph, lexicographic.
    pub cliques: Vec<Vec<Vertex>>,
    pub blocks: Vec<Block>,
}

pub(crate) struct Block {
    /// Global clique indices, ascending.
    pub cliques: Vec<usize>,
    /// Local pair ids covered by each clique.
    clique_pairs: Vec<Vec<usize>>,
    /// Global graph edge for each local pair id.
    pub pairs: Vec<(Vertex, Vertex)>,
    /// Local cliques containing each local pair, ascending.
    covering: Vec<Vec<usize>>,
    pair_count_per_clique: usize,
}

/// Splits `g` into blocks; fails if some edge lies in no d-clique.
pub(crate) fn decompose(g: &SimpleGraph, d: usize) -> Result<Decomposition> {
    let cliques = enumerate_d_cliques(g, d);
    let edge_id = |u: Vertex, v: Vertex| {
        g.edges()
            .binary_search(&(u, v))
            .expect("clique pairs are edges")
    };
    let mut covered = vec![false; g.edge_count()];
    let clique_edges: Vec<Vec<usize>> = cliques
        .iter()
        .map(|c| {
            let mut ids = Vec::with_capacity(pairs(d));
            for (i, &u) in c.iter().enumerate() {
                for &v in &c[i + 1..] {
                    let id = edge_id(u, v);
                    covered[id] = true;
                    ids.push(id);
                }
            }
            ids
        })
        .collect();
    if let Some(id) = covered.iter().position(|&c| !c) {
        let (u, v) = g.edges()[id];
        return Err(Error::NotAProjection { d, u, v });
    }
    let blocks = edge_sets_two_connected(&cliques)
        .into_iter()
        .map(|members| {
            let mut local: HashMap<usize, usize> = HashMap::new();
            let mut block_pairs = Vec::new();
            let clique_pairs: Vec<Vec<usize>> = members
                .iter()
                .map(|&c| {
                    clique_edges[c]
                        .iter()
                        .map(|&e| {
                            *local.entry(e).or_insert_with(|| {
                                block_pairs.push(g.edges()[e]);
                                block_pairs.len() - 1
                            })
                        })
                        .collect()
                })
                .collect();
            let mut covering = vec![Vec::new(); block_pairs.len()];
            for (c, ps) in clique_pairs.iter().enumerate() {
                for &p in ps {
                    covering[p].push(c);
                }
            }
            Block {
                cliques: members,
                clique_pairs,
                pairs: block_pairs,
                covering,
                pair_count_per_clique: pairs(d),
            }
        })
        .collect();
    Ok(Decomposition {
        n: g.n(),
        cliques,
        blocks,
    })
}

/// Node counter shared by one block's searches.
pub(crate) struct Budget {
    limit: u64,
    used: u64,
}

impl Budget {
    pub(crate) fn new(limit: u64) -> Self {
        Self { limit, used: 0 }
    }

    fn tick(&mut self, block: &Block) -> Result<()> {
        self.used += 1;
        if self.used > self.limit {
            return Err(Error::Budget {
                budget: self.limit,
                cliques: block.cliques.len(),
                pairs: block.pairs.len(),
            });
        }
        Ok(())
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
struct Bits(Vec<u64>);

impl Bits {
    fn full(len: usize) -> Self {
        let mut words = vec![u64::MAX; len.div_ceil(64)];
        if !len.is_multiple_of(64) {
            *words.last_mut().unwrap() = (1u64 << (len % 64)) - 1;
        }
        Bits(words)
    }

    fn get(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    fn clear(&mut self, i: usize) {
        self.0[i / 64] &= !(1u64 << (i % 64));
    }

    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + b)
            })
        })
    }
}

impl Block {
    /// Cliques that are the only cover of some pair, and the pairs left after taking them.
    fn forced(&self) -> (Vec<usize>, Bits) {
        let mut forced: Vec<usize> = self
            .covering
            .iter()
            .filter(|c| c.len() == 1)
            .map(|c| c[0])
            .collect();
        forced.sort_unstable();
        forced.dedup();
        let mut uncovered = Bits::full(self.pairs.len());
        for &c in &forced {
            for &p in &self.clique_pairs[c] {
                uncovered.clear(p);
            }
        }
        (forced, uncovered)
    }

    fn new_pairs(&self, c: usize, uncovered: &Bits) -> usize {
        self.clique_pairs[c]
            .iter()
            .filter(|&&p| uncovered.get(p))
            .count()
    }

    fn take(&self, c: usize, uncovered: &Bits) -> Bits {
        let mut next = uncovered.clone();
        for &p in &self.clique_pairs[c] {
            next.clear(p);
        }
        next
    }

    /// Lower bound on cliques still needed: pair volume, or a set of
    /// uncovered pairs no two of which share a clique.
    fn lower_bound(&self, uncovered: &Bits, used: &mut [bool]) -> usize {
        let volume = uncovered.count().div_ceil(self.pair_count_per_clique);
        used.iter_mut().for_each(|u| *u = false);
        let mut packing = 0;
        for p in uncovered.iter() {
            if self.covering[p].iter().all(|&c| !used[c]) {
                packing += 1;
                self.covering[p].iter().for_each(|&c| used[c] = true);
            }
        }
        volume.max(packing)
    }

    fn greedy_size(&self, mut uncovered: Bits) -> usize {
        let mut size = 0;
        while !uncovered.is_empty() {
            let best = (0..self.cliques.len())
                .max_by_key(|&c| (self.new_pairs(c, &uncovered), std::cmp::Reverse(c)))
                .unwrap();
            uncovered = self.take(best, &uncovered);
            size += 1;
        }
        size
    }

    /// Minimum number of cliques covering every pair of the block.
    pub(crate) fn min_cover_size(&self, budget: &mut Budget) -> Result<usize> {
        let (forced, uncovered) = self.forced();
        let mut search = MinSearch {
            block: self,
            best: self.greedy_size(uncovered.clone()),
            memo: HashMap::new(),
            scratch: vec![false; self.cliques.len()],
        };
        search.run(uncovered, 0, budget)?;
        Ok(forced.len() + search.best)
    }

    /// Covers of exactly `k` cliques, as ascending local indices, in
    /// lexicographic order; at most `limit` are returned.
    pub(crate) fn covers_of_size(
        &self,
        k: usize,
        limit: usize,
        budget: &mut Budget,
    ) -> Result<Vec<Vec<usize>>> {
        let (forced, uncovered) = self.forced();
        if forced.len() > k {
            return Ok(Vec::new());
        }
        let is_forced = {
            let mut f = vec![false; self.cliques.len()];
            forced.iter().for_each(|&c| f[c] = true);
            f
        };
        // Last free clique able to cover each pair; a pair whose last chance
        // is behind the scan position can no longer be covered.
        let last_free: Vec<Option<usize>> = self
            .covering
            .iter()
            .map(|cs| cs.iter().rev().copied().find(|&c| !is_forced[c]))
            .collect();
        let mut search = LexSearch {
            block: self,
            is_forced: &is_forced,
            last_free: &last_free,
            chosen: Vec::new(),
            found: Vec::new(),
            limit,
        };
        search.run(0, uncovered, k - forced.len(), budget)?;
        Ok(search
            .found
            .into_iter()
            .map(|mut s| {
                s.extend_from_slice(&forced);
                s.sort_unstable();
                s
            })
            .collect())
    }

    /// Sets of cliques whose pair multiplicities equal `weights` exactly
    /// (indexed by local pair id), lexicographic, at most `limit`.
    pub(crate) fn exact_weighted_covers(
        &self,
        weights: &[u32],
        limit: usize,
        budget: &mut Budget,
    ) -> Result<Vec<Vec<usize>>> {
        let mut search = WeightedSearch {
            block: self,
            state: vec![Choice::Open; self.cliques.len()],
            residual: weights.iter().map(|&w| w as i64).collect(),
            available: self.covering.iter().map(|c| c.len() as i64).collect(),
            trail: Vec::new(),
            found: Vec::new(),
            limit,
        };
        if search
            .residual
            .iter()
            .zip(&search.available)
            .any(|(r, a)| r > a)
        {
            return Ok(Vec::new());
        }
        let all_pairs: Vec<usize> = (0..self.pairs.len()).collect();
        if search.propagate(all_pairs) {
            search.run(0, budget)?;
        }
        Ok(search.found)
    }

    /// Global clique indices for local ones.
    pub(crate) fn globalize(&self, local: &[usize]) -> Vec<usize> {
        local.iter().map(|&c| self.cliques[c]).collect()
    }
}

struct MinSearch<'a> {
    block: &'a Block,
    best: usize,
    memo: HashMap<Bits, usize>,
    scratch: Vec<bool>,
}

impl MinSearch<'_> {
    fn run(&mut self, uncovered: Bits, depth: usize, budget: &mut Budget) -> Result<()> {
        budget.tick(self.block)?;
        if uncovered.is_empty() {
            self.best = self.best.min(depth);
            return Ok(());
        }
        if depth + self.block.lower_bound(&uncovered, &mut self.scratch) >= self.best {
            return Ok(());
        }
        match self.memo.get(&uncovered) {
            Some(&seen) if seen <= depth => return Ok(()),
            _ => {
                if self.memo.len() < MEMO_LIMIT || self.memo.contains_key(&uncovered) {
                    self.memo.insert(uncovered.clone(), depth);
                }
            }
        }
        // Branch on the uncovered pair with the fewest cliques through it.
        let pair = uncovered
            .iter()
            .min_by_key(|&p| self.block.covering[p].len())
            .unwrap();
        let mut options: Vec<(usize, usize)> = self.block.covering[pair]
            .iter()
            .map(|&c| (self.block.new_pairs(c, &uncovered), c))
            .collect();
        options.sort_unstable_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        for (_, c) in options {
            let next = self.block.take(c, &uncovered);
            self.run(next, depth + 1, budget)?;
        }
        Ok(())
    }
}

struct LexSearch<'a> {
    block: &'a Block,
    is_forced: &'a [bool],
    last_free: &'a [Option<usize>],
    chosen: Vec<usize>,
    found: Vec<Vec<usize>>,
    limit: usize,
}

impl LexSearch<'_> {
    fn run(
        &mut self,
        pos: usize,
        uncovered: Bits,
        slots: usize,
        budget: &mut Budget,
    ) -> Result<()> {
        budget.tick(self.block)?;
        if uncovered.is_empty() {
            if slots == 0 {
                self.found.push(self.chosen.clone());
            }
            return Ok(());
        }
        if slots == 0 || slots * self.block.pair_count_per_clique < uncovered.count() {
            return Ok(());
        }
        if uncovered
            .iter()
            .any(|p| self.last_free[p].is_none_or(|c| c < pos))
        {
            return Ok(());
        }
        let mut c = pos;
        while c < self.block.cliques.len()
            && (self.is_forced[c] || self.block.new_pairs(c, &uncovered) == 0)
        {
            c += 1;
        }
        if c == self.block.cliques.len() {
            return Ok(());
        }
        // Include first, so solutions come out in lexicographic order.
        let next = self.block.take(c, &uncovered);
        self.chosen.push(c);
        self.run(c + 1, next, slots - 1, budget)?;
        self.chosen.pop();
        if self.found.len() >= self.limit {
            return Ok(());
        }
        self.run(c + 1, uncovered, slots, budget)
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Choice {
    Open,
    In,
    Out,
}

struct WeightedSearch<'a> {
    block: &'a Block,
    state: Vec<Choice>,
    /// Weight still owed by each pair.
    residual: Vec<i64>,
    /// Open cliques through each pair.
    available: Vec<i64>,
    /// Decided cliques, in decision order.
    trail: Vec<usize>,
    found: Vec<Vec<usize>>,
    limit: usize,
}

impl WeightedSearch<'_> {
    /// Decides cliques in index order, including before excluding, so
    /// solutions appear lexicographically.
    fn run(&mut self, pos: usize, budget: &mut Budget) -> Result<()> {
        budget.tick(self.block)?;
        let Some(c) = (pos..self.state.len()).find(|&c| self.state[c] == Choice::Open) else {
            // Every pair has residual <= available = 0.
            let chosen = (0..self.state.len())
                .filter(|&c| self.state[c] == Choice::In)
                .collect();
            self.found.push(chosen);
            return Ok(());
        };
        for choice in [Choice::In, Choice::Out] {
            if self.found.len() >= self.limit {
                break;
            }
            let mark = self.trail.len();
            if self
                .assign(c, choice)
                .is_some_and(|touched| self.propagate(touched))
            {
                self.run(c + 1, budget)?;
            }
            self.undo(mark);
        }
        Ok(())
    }

    /// Records a decision; `None` if it overdraws or strands a pair.
    fn assign(&mut self, c: usize, choice: Choice) -> Option<Vec<usize>> {
        self.state[c] = choice;
        self.trail.push(c);
        let ps = &self.block.clique_pairs[c];
        let mut ok = true;
        for &p in ps {
            self.available[p] -= 1;
            if choice == Choice::In {
                self.residual[p] -= 1;
            }
            ok &= self.residual[p] >= 0 && self.residual[p] <= self.available[p];
        }
        ok.then(|| ps.clone())
    }

    /// Forces open cliques through saturated or tight pairs until nothing changes.
    fn propagate(&mut self, mut queue: Vec<usize>) -> bool {
        while let Some(p) = queue.pop() {
            if self.available[p] == 0 {
                continue;
            }
            let forced = if self.residual[p] == 0 {
                Choice::Out
            } else if self.residual[p] == self.available[p] {
                Choice::In
            } else {
                continue;
            };
            for i in 0..self.block.covering[p].len() {
                let c = self.block.covering[p][i];
                if self.state[c] != Choice::Open {
                    continue;
                }
                match self.assign(c, forced) {
                    Some(touched) => queue.extend(touched),
                    None => return false,
                }
            }
        }
        true
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let c = self.trail.pop().expect("trail above mark");
            let choice = std::mem::replace(&mut self.state[c], Choice::Open);
            for &p in &self.block.clique_pairs[c] {
                self.available[p] += 1;
                if choice == Choice::In {
                    self.residual[p] += 1;
                }
            }
        }
    }
}

/// Pair weights of `w` in the block's local pair order.
pub(crate) fn local_weights(block: &Block, w: &WeightedGraph) -> Vec<u32> {
    block.pairs.iter().map(|&(u, v)| w.weight(u, v)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::Hypergraph;

    fn budget() -> Budget {
        Budget::new(DEFAULT_BUDGET)
    }

    #[test]
    fn single_clique_is_forced() {
        let g = Hypergraph::new(3, 3, [[0, 1, 2]]).unwrap().project();
        let dec = decompose(&g, 3).unwrap();
        assert_eq!(dec.blocks.len(), 1);
        let b = &dec.blocks[0];
        assert_eq!(b.min_cover_size(&mut budget()).unwrap(), 1);
        assert_eq!(
            b.covers_of_size(1, 10, &mut budget()).unwrap(),
            vec![vec![0]]
        );
    }

    #[test]
    fn k4_cover_uses_three_triangles() {
        // K4 has 6 edges and 4 triangles of 3 edges each. Two triangles share an
        // edge, so they cover only 5 edges; any three triangles cover all 6.
        let g = SimpleGraph::new(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        let dec = decompose(&g, 3).unwrap();
        let b = &dec.blocks[0];
        assert_eq!(b.min_cover_size(&mut budget()).unwrap(), 3);
        let covers = b.covers_of_size(3, 100, &mut budget()).unwrap();
        assert_eq!(
            covers,
            vec![vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]]
        );
    }

    #[test]
    fn uncovered_edge_is_reported() {
        let g = SimpleGraph::new(4, [(0, 1), (0, 2), (1, 2), (2, 3)]).unwrap();
        assert_eq!(
            decompose(&g, 3).err(),
            Some(Error::NotAProjection { d: 3, u: 2, v: 3 })
        );
    }

    #[test]
    fn budget_is_enforced() {
        let g = SimpleGraph::new(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        let dec = decompose(&g, 3).unwrap();
        let err = dec.blocks[0]
            .min_cover_size(&mut Budget::new(1))
            .unwrap_err();
        assert_eq!(
            err,
            Error::Budget {
                budget: 1,
                cliques: 4,
                pairs: 6
            }
        );
    }

    #[test]
    fn weighted_k4() {
        // Every edge of K4 with weight 2 is covered exactly by all four triangles.
        let h = Hypergraph::new(4, 3, [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]]).unwrap();
        let w = h.project_weighted();
        let dec = decompose(&w.support(), 3).unwrap();
        let b = &dec.blocks[0];
        let covers = b
            .exact_weighted_covers(&local_weights(b, &w), 10, &mut budget())
            .unwrap();
        assert_eq!(covers, vec![vec![0, 1, 2, 3]]);
        // Weight 1 everywhere has no exact cover.
        let ones: Vec<u32> = vec![1; b.pairs.len()];
        assert!(b
            .exact_weighted_covers(&ones, 10, &mut budget())
            .unwrap()
            .is_empty());
    }
}
