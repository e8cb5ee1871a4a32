//! Exhaustive Bayes-optimal quantities on tiny instances.
//!
//! All 2^C(n,d) hypergraphs are enumerated and grouped by their (weighted)
//! projection. With a rational p = a/b each hypergraph with e edges gets the
//! integer weight a^e (b−a)^(N−e) out of b^N, so every quantity is an exact
//! rational as long as b^N fits in 128 bits. Otherwise sums are taken in f64
//! with compensated summation.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigUint;
use num_rational::{BigRational, Ratio};
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph::Observed;
use crate::hypergraph::{all_subsets, Hypergraph, Vertex};
use crate::model::binomial_u64;
use crate::rng::mix64;

/// Largest candidate count C(n,d) accepted.
pub const MAX_CANDIDATES: usize = 24;

/// Top state bits fixed per worker chunk.
const PREFIX_BITS: usize = 3;

/// Log2 of the number of states sorted in one pass.
const STATES_PER_PASS_LOG2: usize = 21;

/// Edge probability of a tiny model.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TinyProb {
    Exact(Ratio<u64>),
    Float(f64),
}

impl TinyProb {
    pub fn to_f64(self) -> f64 {
        match self {
            TinyProb::Exact(r) => *r.numer() as f64 / *r.denom() as f64,
            TinyProb::Float(x) => x,
        }
    }
}

/// A model small enough to enumerate: C(n,d) ≤ [`MAX_CANDIDATES`].
#[derive(Clone, Debug, PartialEq)]
pub struct TinyModel {
    n: usize,
    d: usize,
    p: TinyProb,
    candidates: Vec<Vec<Vertex>>,
}

impl TinyModel {
    pub fn new(n: usize, d: usize, p: TinyProb) -> Result<Self> {
        if d < 2 || n < d {
            return Err(Error::Param(format!(
                "need 2 <= d <= n, got n = {n}, d = {d}"
            )));
        }
        let count = binomial_u64(n as u64, d as u64).unwrap_or(u64::MAX);
        if count > MAX_CANDIDATES as u64 {
            return Err(Error::TooLarge(format!(
                "C({n}, {d}) = {count} candidate hyperedges exceeds {MAX_CANDIDATES}"
            )));
        }
        let x = p.to_f64();
        if !(x > 0.0 && x < 1.0) {
            return Err(Error::Param(format!("p = {x} is not in (0, 1)")));
        }
        Ok(Self {
            n,
            d,
            p,
            candidates: all_subsets(n, d),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn p(&self) -> TinyProb {
        self.p
    }

    /// Candidate hyperedges in lexicographic order; bit i of a state is candidate i.
    pub fn candidates(&self) -> &[Vec<Vertex>] {
        &self.candidates
    }

    /// The hypergraph encoded by a state bitmask.
    pub fn state_hypergraph(&self, state: u32) -> Hypergraph {
        let edges = (0..self.candidates.len())
            .filter(|&i| state >> i & 1 == 1)
            .map(|i| self.candidates[i].clone())
            .collect();
        Hypergraph::from_sorted(self.n, self.d, edges)
    }

    fn weights(&self) -> Weights {
        let big_n = self.candidates.len() as u32;
        if let TinyProb::Exact(r) = self.p {
            let (a, b) = (*r.numer() as u128, *r.denom() as u128);
            if let Some(total) = b.checked_pow(big_n) {
                let table = (0..=big_n)
                    .map(|e| a.pow(e) * (b - a).pow(big_n - e))
                    .collect();
                return Weights::Exact { table, total, a, b };
            }
        }
        let p = self.p.to_f64();
        let table = (0..=big_n)
            .map(|e| p.powi(e as i32) * (1.0 - p).powi((big_n - e) as i32))
            .collect();
        Weights::Float { table, p }
    }
}

enum Weights {
    Exact {
        table: Vec<u128>,
        total: u128,
        a: u128,
        b: u128,
    },
    Float {
        table: Vec<f64>,
        p: f64,
    },
}

/// A rational in exact mode, a double otherwise.
#[derive(Clone, Debug, PartialEq)]
pub enum Number {
    Exact(BigRational),
    Float(f64),
}

impl Number {
    pub fn to_f64(&self) -> f64 {
        match self {
            Number::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
            Number::Float(x) => *x,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Number::Exact(_))
    }

    pub fn as_exact(&self) -> Option<&BigRational> {
        match self {
            Number::Exact(r) => Some(r),
            Number::Float(_) => None,
        }
    }
}

impl fmt::Display for Number {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Number::Exact(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Number::Float(x) => write!(f, "{x:e}"),
        }
    }
}

impl Serialize for Number {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Number::Exact(_) => s.serialize_str(&self.to_string()),
            Number::Float(x) => s.serialize_f64(*x),
        }
    }
}

fn big(x: u128) -> BigUint {
    BigUint::from(x)
}

fn ratio(num: BigUint, den: BigUint) -> BigRational {
    BigRational::new(num.into(), den.into())
}

/// Neumaier-compensated sum.
#[derive(Clone, Copy, Default)]
struct Sum {
    s: f64,
    c: f64,
}

impl Sum {
    fn add(&mut self, x: f64) {
        let t = self.s + x;
        if self.s.abs() >= x.abs() {
            self.c += (self.s - t) + x;
        } else {
            self.c += (x - t) + self.s;
        }
        self.s = t;
    }

    fn value(self) -> f64 {
        self.s + self.c
    }
}

/// How projections are packed into fixed-width keys: one field per vertex
/// pair, never straddling a 64-bit word.
struct Layout {
    word: Vec<usize>,
    shift: Vec<u32>,
    /// Largest value a field can hold.
    max_field: u64,
    weighted: bool,
}

struct Space {
    n: usize,
    /// 64-bit words per key.
    words: usize,
    cand_pairs: Vec<Vec<usize>>,
    layout: Layout,
}

fn pair_index(n: usize, u: Vertex, v: Vertex) -> usize {
    let (u, v) = (u as usize, v as usize);
    u * (2 * n - u - 1) / 2 + (v - u - 1)
}

impl Space {
    fn new(model: &TinyModel, weighted: bool) -> Result<Self> {
        let n = model.n;
        let num_pairs = n * (n - 1) / 2;
        let cand_pairs: Vec<Vec<usize>> = model
            .candidates
            .iter()
            .map(|c| {
                let mut ps = Vec::new();
                for (i, &u) in c.iter().enumerate() {
                    for &v in &c[i + 1..] {
                        ps.push(pair_index(n, u, v));
                    }
                }
                ps
            })
            .collect();
        let max_count = binomial_u64(n as u64 - 2, model.d as u64 - 2).unwrap_or(u64::MAX);
        let bits = if weighted {
            64 - max_count.leading_zeros()
        } else {
            1
        };
        let per_word = (64 / bits) as usize;
        let words = num_pairs.div_ceil(per_word).max(1);
        if words > 8 {
            return Err(Error::TooLarge(format!(
                "projection key needs {words} words, at most 8 supported"
            )));
        }
        let layout = Layout {
            word: (0..num_pairs).map(|i| i / per_word).collect(),
            shift: (0..num_pairs)
                .map(|i| ((i % per_word) as u32) * bits)
                .collect(),
            max_field: if weighted { (1u64 << bits) - 1 } else { 1 },
            weighted,
        };
        Ok(Self {
            n,
            words,
            cand_pairs,
            layout,
        })
    }

    /// Key of an observed graph, or `None` if no hypergraph can project onto it.
    fn key_of<const W: usize>(&self, g: &Observed) -> Result<Option<[u64; W]>> {
        if g.n() != self.n {
            return Err(Error::Param(format!(
                "graph has {} vertices, model has {}",
                g.n(),
                self.n
            )));
        }
        let mut key = [0u64; W];
        match (g, self.layout.weighted) {
            (Observed::Plain(s), false) => {
                for &(u, v) in s.edges() {
                    let i = pair_index(self.n, u, v);
                    key[self.layout.word[i]] |= 1 << self.layout.shift[i];
                }
            }
            (Observed::Weighted(w), true) => {
                for &((u, v), wt) in w.entries() {
                    if wt as u64 > self.layout.max_field {
                        return Ok(None);
                    }
                    let i = pair_index(self.n, u, v);
                    key[self.layout.word[i]] |= (wt as u64) << self.layout.shift[i];
                }
            }
            _ => unreachable!("layout built for the graph's kind"),
        }
        Ok(Some(key))
    }

    /// Calls `f(state, key)` for every state whose top bits equal `prefix`,
    /// walking the low bits in Gray-code order with incremental key updates.
    fn walk_chunk<const W: usize>(
        &self,
        big_n: usize,
        low_bits: usize,
        prefix: u32,
        mut f: impl FnMut(u32, &[u64; W]),
    ) {
        let mut counts = vec![0u32; self.layout.word.len()];
        let mut key = [0u64; W];
        let mut state = prefix << low_bits;
        for h in 0..big_n {
            if state >> h & 1 == 1 {
                self.toggle(h, true, &mut counts, &mut key);
            }
        }
        f(state, &key);
        for i in 1u64..1u64 << low_bits {
            let h = i.trailing_zeros() as usize;
            let adding = state >> h & 1 == 0;
            state ^= 1 << h;
            self.toggle(h, adding, &mut counts, &mut key);
            f(state, &key);
        }
    }

    fn toggle<const W: usize>(
        &self,
        h: usize,
        adding: bool,
        counts: &mut [u32],
        key: &mut [u64; W],
    ) {
        let l = &self.layout;
        for &p in &self.cand_pairs[h] {
            let (w, s) = (l.word[p], l.shift[p]);
            if adding {
                counts[p] += 1;
                if l.weighted {
                    key[w] += 1 << s;
                } else if counts[p] == 1 {
                    key[w] |= 1 << s;
                }
            } else {
                counts[p] -= 1;
                if l.weighted {
                    key[w] -= 1 << s;
                } else if counts[p] == 0 {
                    key[w] &= !(1 << s);
                }
            }
        }
    }

    /// Runs `f` over all states in parallel chunks; results come back in chunk order.
    fn par_chunks<T: Send>(&self, big_n: usize, f: impl Fn(u32, usize) -> T + Sync) -> Vec<T> {
        let prefix_bits = PREFIX_BITS.min(big_n);
        let low_bits = big_n - prefix_bits;
        (0..1u32 << prefix_bits)
            .into_par_iter()
            .map(|c| f(c, low_bits))
            .collect()
    }
}

/// Posterior of each candidate hyperedge given one observed projection.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PosteriorSummary {
    #[serde(skip)]
    pub graph: Observed,
    /// Pr[Ψ = G].
    pub evidence: Number,
    /// (candidate, Pr[candidate ∈ 𝓗 | Ψ = G]) for every candidate, lexicographic.
    pub per_hyperedge: Vec<(Vec<Vertex>, Number)>,
}

/// Conditions on the observed projection `g` by full enumeration.
pub fn exhaustive_posterior(model: &TinyModel, g: &Observed) -> Result<PosteriorSummary> {
    let space = Space::new(model, g.is_weighted())?;
    let big_n = model.candidates.len();
    let states = match space.words {
        1 => matching_states::<1>(&space, big_n, g)?,
        2 => matching_states::<2>(&space, big_n, g)?,
        3 | 4 => matching_states::<4>(&space, big_n, g)?,
        _ => matching_states::<8>(&space, big_n, g)?,
    };
    if states.is_empty() {
        return Err(Error::ZeroEvidence);
    }
    let (evidence, per) = match model.weights() {
        Weights::Exact { table, total, .. } => {
            let mut ev: u128 = 0;
            let mut a = vec![0u128; big_n];
            for &s in &states {
                let w = table[s.count_ones() as usize];
                ev += w;
                for (h, slot) in a.iter_mut().enumerate() {
                    if s >> h & 1 == 1 {
                        *slot += w;
                    }
                }
            }
            let per = a
                .into_iter()
                .map(|x| Number::Exact(ratio(big(x), big(ev))))
                .collect::<Vec<_>>();
            (Number::Exact(ratio(big(ev), big(total))), per)
        }
        Weights::Float { table, .. } => {
            let mut ev = Sum::default();
            let mut a = vec![Sum::default(); big_n];
            for &s in &states {
                let w = table[s.count_ones() as usize];
                ev.add(w);
                for (h, slot) in a.iter_mut().enumerate() {
                    if s >> h & 1 == 1 {
                        slot.add(w);
                    }
                }
            }
            let ev = ev.value();
            let per = a
                .into_iter()
                .map(|x| Number::Float(x.value() / ev))
                .collect();
            (Number::Float(ev), per)
        }
    };
    Ok(PosteriorSummary {
        graph: g.clone(),
        evidence,
        per_hyperedge: model.candidates.iter().cloned().zip(per).collect(),
    })
}

/// States whose projection is `g`, in chunk order.
fn matching_states<const W: usize>(space: &Space, big_n: usize, g: &Observed) -> Result<Vec<u32>> {
    let Some(target) = space.key_of::<W>(g)? else {
        return Ok(Vec::new());
    };
    let matches: Vec<Vec<u32>> = space.par_chunks(big_n, |c, low| {
        let mut out = Vec::new();
        space.walk_chunk::<W>(big_n, low, c, |s, k| {
            if *k == target {
                out.push(s);
            }
        });
        out
    });
    Ok(matches.into_iter().flatten().collect())
}

/// Sums over projection classes.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleTotals {
    /// Number of distinct projections with positive probability.
    pub classes: usize,
    /// Σ_G Pr[Ψ = G]; exactly 1 in exact mode.
    pub evidence_total: Number,
    /// ℓ(B*): Σ_G Pr[G] Σ_h min(post, 1 − post) / (p·C(n,d)).
    pub loss: Number,
    /// E|E(𝓗) ∩ E(𝓗′)| with 𝓗′ drawn from the posterior: Σ_G Pr[G] Σ_h post².
    pub overlap: Number,
    /// Σ_G Pr[targets ⊆ 𝓗 | G]² Pr[G] when targets were given.
    pub correlation: Option<Number>,
}

/// One class of the exact class table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassStats {
    /// Some state in the class.
    pub representative: u32,
    /// Σ of integer weights over the class.
    pub evidence: u128,
    /// Σ of weights of class states containing each candidate.
    pub containing: Vec<u128>,
}

/// Exact per-class weights; weights are out of `denominator`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassTable {
    pub denominator: u128,
    pub classes: Vec<ClassStats>,
}

/// Calls `f` on the states of every projection class.
fn for_each_class(model: &TinyModel, space: &Space, f: impl FnMut(&[u32])) {
    match space.words {
        1 => classes_with::<1>(model, space, f),
        2 => classes_with::<2>(model, space, f),
        3 | 4 => classes_with::<4>(model, space, f),
        _ => classes_with::<8>(model, space, f),
    }
}

/// Sorts (key, state) pairs and hands each run of equal keys to `f`.
///
/// Large state spaces are split into passes by a hash of the key so that
/// at most about 2^[`STATES_PER_PASS_LOG2`] states are held at once.
fn classes_with<const W: usize>(model: &TinyModel, space: &Space, mut f: impl FnMut(&[u32])) {
    let big_n = model.candidates.len();
    let passes = 1u64 << big_n.saturating_sub(STATES_PER_PASS_LOG2);
    let mut group = Vec::new();
    for pass in 0..passes {
        let chunks: Vec<Vec<([u64; W], u32)>> = space.par_chunks(big_n, |c, low| {
            let mut out = Vec::new();
            space.walk_chunk::<W>(big_n, low, c, |s, k| {
                if passes == 1 || key_bucket(k, passes) == pass {
                    out.push((*k, s));
                }
            });
            out
        });
        let mut all: Vec<([u64; W], u32)> = chunks.into_iter().flatten().collect();
        all.par_sort_unstable();
        for run in all.chunk_by(|a, b| a.0 == b.0) {
            group.clear();
            group.extend(run.iter().map(|&(_, s)| s));
            f(&group);
        }
    }
}

fn key_bucket(key: &[u64], passes: u64) -> u64 {
    key.iter().fold(0u64, |h, &w| mix64(h ^ w)) % passes
}

fn target_mask(model: &TinyModel, targets: &[Vec<Vertex>]) -> Result<u32> {
    let mut mask = 0u32;
    for t in targets {
        let mut t = t.clone();
        t.sort_unstable();
        let i = model
            .candidates
            .binary_search(&t)
            .map_err(|_| Error::Param(format!("{t:?} is not a candidate hyperedge")))?;
        if mask >> i & 1 == 1 {
            return Err(Error::Param(format!("hyperedge {t:?} listed twice")));
        }
        mask |= 1 << i;
    }
    Ok(mask)
}

/// Loss, overlap, evidence total and optionally the correlation of `targets`.
pub fn oracle_totals(
    model: &TinyModel,
    weighted: bool,
    targets: Option<&[Vec<Vertex>]>,
) -> Result<OracleTotals> {
    let space = Space::new(model, weighted)?;
    let mask = targets.map(|t| target_mask(model, t)).transpose()?;
    let big_n = model.candidates.len();
    match model.weights() {
        Weights::Exact {
            table,
            total,
            a: pa,
            b: pb,
        } => {
            let mut classes = 0;
            let mut evidence_sum = BigUint::zero();
            let mut loss_num = BigUint::zero();
            // Grouped by class evidence: Σ over classes with that evidence of Σ_h a², and of b².
            let mut overlap_by_ev: HashMap<u128, BigUint> = HashMap::new();
            let mut corr_by_ev: HashMap<u128, BigUint> = HashMap::new();
            let mut a = vec![0u128; big_n];
            for_each_class(model, &space, |group| {
                classes += 1;
                a.iter_mut().for_each(|x| *x = 0);
                let (mut ev, mut inside) = (0u128, 0u128);
                for &s in group {
                    let w = table[s.count_ones() as usize];
                    ev += w;
                    for (h, slot) in a.iter_mut().enumerate() {
                        if s >> h & 1 == 1 {
                            *slot += w;
                        }
                    }
                    if mask.is_some_and(|m| s & m == m) {
                        inside += w;
                    }
                }
                evidence_sum += big(ev);
                let mut sq = BigUint::zero();
                for &x in &a {
                    loss_num += big(x.min(ev - x));
                    sq += big(x) * big(x);
                }
                *overlap_by_ev.entry(ev).or_default() += sq;
                if mask.is_some() {
                    *corr_by_ev.entry(ev).or_default() += big(inside) * big(inside);
                }
            });
            let collapse = |m: HashMap<u128, BigUint>| {
                let mut entries: Vec<(u128, BigUint)> = m.into_iter().collect();
                entries.sort_unstable_by_key(|e| e.0);
                let mut acc = BigRational::zero();
                for (ev, s) in entries {
                    acc += ratio(s, big(ev));
                }
                acc / BigRational::from_integer(big(total).into())
            };
            // ℓ = loss_num / (D · p · N) with p = a/b.
            let loss = ratio(
                loss_num * big(pb),
                big(total) * big(pa) * big(big_n as u128),
            );
            Ok(OracleTotals {
                classes,
                evidence_total: Number::Exact(ratio(evidence_sum, big(total))),
                loss: Number::Exact(loss),
                overlap: Number::Exact(collapse(overlap_by_ev)),
                correlation: mask.map(|_| Number::Exact(collapse(corr_by_ev))),
            })
        }
        Weights::Float { table, p } => {
            let mut classes = 0;
            let (mut evidence_sum, mut loss, mut overlap, mut corr) = (
                Sum::default(),
                Sum::default(),
                Sum::default(),
                Sum::default(),
            );
            let mut a = vec![0f64; big_n];
            for_each_class(model, &space, |group| {
                classes += 1;
                a.iter_mut().for_each(|x| *x = 0.0);
                let (mut ev, mut inside) = (Sum::default(), Sum::default());
                for &s in group {
                    let w = table[s.count_ones() as usize];
                    ev.add(w);
                    for (h, slot) in a.iter_mut().enumerate() {
                        if s >> h & 1 == 1 {
                            *slot += w;
                        }
                    }
                    if mask.is_some_and(|m| s & m == m) {
                        inside.add(w);
                    }
                }
                let ev = ev.value();
                evidence_sum.add(ev);
                for &x in &a {
                    loss.add(x.min(ev - x));
                    overlap.add(x * x / ev);
                }
                let inside = inside.value();
                corr.add(inside * inside / ev);
            });
            Ok(OracleTotals {
                classes,
                evidence_total: Number::Float(evidence_sum.value()),
                loss: Number::Float(loss.value() / (p * big_n as f64)),
                overlap: Number::Float(overlap.value()),
                correlation: mask.map(|_| Number::Float(corr.value())),
            })
        }
    }
}

/// ℓ(B*) for the plain projection, or ℓ_W(B*_W) when `weighted`.
pub fn optimal_partial_loss(model: &TinyModel, weighted: bool) -> Result<Number> {
    Ok(oracle_totals(model, weighted, None)?.loss)
}

/// E|E(𝓗) ∩ E(𝓗′)| where 𝓗′ is a posterior sample given Proj(𝓗).
pub fn expected_overlap(model: &TinyModel) -> Result<Number> {
    Ok(oracle_totals(model, false, None)?.overlap)
}

/// Σ_G Pr[h_1..h_k ∈ 𝓗 | Ψ = G]² · Pr[Ψ = G] under the plain projection.
pub fn correlation_quantity(model: &TinyModel, hyperedges: &[Vec<Vertex>]) -> Result<Number> {
    if hyperedges.is_empty() {
        return Err(Error::Param("need at least one hyperedge".into()));
    }
    Ok(oracle_totals(model, false, Some(hyperedges))?
        .correlation
        .expect("targets were given"))
}

/// Per-class integer weights; only available when p is an exact rational that fits.
pub fn class_table(model: &TinyModel, weighted: bool) -> Result<ClassTable> {
    let Weights::Exact { table, total, .. } = model.weights() else {
        return Err(Error::Param("class table needs an exact rational p".into()));
    };
    let space = Space::new(model, weighted)?;
    let big_n = model.candidates.len();
    let mut classes = Vec::new();
    for_each_class(model, &space, |group| {
        let mut ev = 0u128;
        let mut containing = vec![0u128; big_n];
        for &s in group {
            let w = table[s.count_ones() as usize];
            ev += w;
            for (h, slot) in containing.iter_mut().enumerate() {
                if s >> h & 1 == 1 {
                    *slot += w;
                }
            }
        }
        classes.push(ClassStats {
            representative: group[0],
            evidence: ev,
            containing,
        });
    });
    Ok(ClassTable {
        denominator: total,
        classes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::SimpleGraph;

    fn exact(n: usize, d: usize, a: u64, b: u64) -> TinyModel {
        TinyModel::new(n, d, TinyProb::Exact(Ratio::new(a, b))).unwrap()
    }

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn size_guard() {
        assert!(matches!(
            TinyModel::new(7, 3, TinyProb::Float(0.1)),
            Err(Error::TooLarge(_))
        ));
        assert!(TinyModel::new(6, 3, TinyProb::Float(1.0)).is_err());
        assert!(TinyModel::new(6, 3, TinyProb::Float(0.1)).is_ok());
    }

    #[test]
    fn pair_index_is_dense() {
        let n = 6;
        let mut seen = [false; 15];
        for u in 0..n as u32 {
            for v in u + 1..n as u32 {
                seen[pair_index(n, u, v)] = true;
            }
        }
        assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn empty_graph_posterior() {
        let m = exact(5, 3, 1, 10);
        let g = Observed::Plain(SimpleGraph::new(5, []).unwrap());
        let post = exhaustive_posterior(&m, &g).unwrap();
        assert_eq!(post.evidence, Number::Exact(q(9, 10).pow(10)));
        assert!(post.per_hyperedge.iter().all(|(_, p)| p.to_f64() == 0.0));
    }

    #[test]
    fn single_candidate() {
        let m = exact(3, 3, 1, 3);
        let g = Observed::Plain(SimpleGraph::new(3, [(0, 1), (0, 2), (1, 2)]).unwrap());
        let post = exhaustive_posterior(&m, &g).unwrap();
        assert_eq!(post.evidence, Number::Exact(q(1, 3)));
        assert_eq!(
            post.per_hyperedge,
            vec![(vec![0, 1, 2], Number::Exact(q(1, 1)))]
        );
        // A triangle is always the hyperedge here.
        assert_eq!(
            optimal_partial_loss(&m, false).unwrap(),
            Number::Exact(q(0, 1))
        );
    }

    #[test]
    fn unreachable_graph_has_zero_evidence() {
        let m = exact(5, 3, 1, 10);
        let path = Observed::Plain(SimpleGraph::new(5, [(0, 1), (1, 2)]).unwrap());
        assert_eq!(exhaustive_posterior(&m, &path), Err(Error::ZeroEvidence));
    }

    #[test]
    fn evidence_sums_to_one() {
        let m = exact(5, 3, 1, 10);
        for weighted in [false, true] {
            let t = oracle_totals(&m, weighted, None).unwrap();
            assert_eq!(t.evidence_total, Number::Exact(q(1, 1)));
        }
        let f = TinyModel::new(5, 3, TinyProb::Float(0.13)).unwrap();
        let t = oracle_totals(&f, false, None).unwrap();
        assert!((t.evidence_total.to_f64() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn multi_pass_grouping() {
        // 21-subsets of 22 vertices: the projection identifies which subsets
        // are present when at most two are, and is complete otherwise.
        let m = exact(22, 21, 1, 2);
        let t = oracle_totals(&m, false, None).unwrap();
        assert_eq!(t.classes, 1 + 22 + 231 + 1);
        assert_eq!(t.evidence_total, Number::Exact(q(1, 1)));
    }

    #[test]
    fn float_mode_agrees_with_exact() {
        let e = exact(5, 3, 1, 5);
        let f = TinyModel::new(5, 3, TinyProb::Float(0.2)).unwrap();
        for weighted in [false, true] {
            let a = oracle_totals(&e, weighted, Some(&[vec![0, 1, 2]])).unwrap();
            let b = oracle_totals(&f, weighted, Some(&[vec![0, 1, 2]])).unwrap();
            assert_eq!(a.classes, b.classes);
            assert!((a.loss.to_f64() - b.loss.to_f64()).abs() < 1e-12);
            assert!((a.overlap.to_f64() - b.overlap.to_f64()).abs() < 1e-12);
            let (ca, cb) = (
                a.correlation.unwrap().to_f64(),
                b.correlation.unwrap().to_f64(),
            );
            assert!((ca - cb).abs() < 1e-12);
        }
    }

    #[test]
    fn correlation_argument_checks() {
        let m = exact(5, 3, 1, 10);
        assert!(correlation_quantity(&m, &[]).is_err());
        assert!(correlation_quantity(&m, &[vec![0, 1, 2], vec![2, 1, 0]]).is_err());
        assert!(correlation_quantity(&m, &[vec![0, 1, 5]]).is_err());
    }

    #[test]
    fn number_rendering() {
        assert_eq!(Number::Exact(q(2, 4)).to_string(), "1/2");
        assert_eq!(Number::Exact(q(3, 1)).to_string(), "3/1");
    }
}
