//! Reconstruction from a projection and Monte-Carlo loss estimates.

use std::fmt;
use std::str::FromStr;

use rand::seq::IndexedRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::clique::clique_hypergraph;
use crate::cover::{decompose, local_weights, Budget};
use crate::error::{Error, Result};
use crate::graph::{SimpleGraph, WeightedGraph};
use crate::hypergraph::{Hypergraph, Vertex};
use crate::model::{binomial_f64, pairs, sample_with, ModelParams};
use crate::rng;

pub use crate::cover::DEFAULT_BUDGET;

/// Minimal covers enumerated per block when ties are broken at random.
pub const RANDOM_TIE_CAP: usize = 64;

/// How MAP picks among several minimal preimages.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TieBreak {
    /// Lexicographically smallest edge list.
    Lexicographic,
    /// Uniform per block among its minimal covers (up to [`RANDOM_TIE_CAP`]), seeded.
    Random(u64),
}

/// Maximum clique cover: every d-clique of `g` becomes a hyperedge.
pub fn clique_cover_recover(g: &SimpleGraph, d: usize) -> Hypergraph {
    clique_hypergraph(g, d)
}

/// A preimage of `g` with the fewest hyperedges, lexicographically smallest among those.
pub fn map_recover(g: &SimpleGraph, d: usize, budget: u64) -> Result<Hypergraph> {
    map_recover_with(g, d, budget, TieBreak::Lexicographic)
}

pub fn map_recover_with(
    g: &SimpleGraph,
    d: usize,
    budget: u64,
    tie: TieBreak,
) -> Result<Hypergraph> {
    let dec = decompose(g, d)?;
    let mut rng = match tie {
        TieBreak::Random(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        TieBreak::Lexicographic => None,
    };
    let mut edges: Vec<Vec<Vertex>> = Vec::new();
    for block in &dec.blocks {
        let mut b = Budget::new(budget);
        let k = block.min_cover_size(&mut b)?;
        let local = match rng.as_mut() {
            None => block.covers_of_size(k, 1, &mut b)?.swap_remove(0),
            Some(r) => block
                .covers_of_size(k, RANDOM_TIE_CAP, &mut b)?
                .choose(r)
                .expect("a minimum cover exists")
                .clone(),
        };
        edges.extend(
            block
                .globalize(&local)
                .into_iter()
                .map(|c| dec.cliques[c].clone()),
        );
    }
    Ok(Hypergraph::from_unsorted(dec.n, d, edges))
}

/// A hypergraph whose weighted projection is exactly `w`.
///
/// Every preimage has total_weight / C(d,2) hyperedges, so any one of them is
/// a MAP estimate; the lexicographically smallest is returned.
pub fn map_recover_weighted(w: &WeightedGraph, d: usize, budget: u64) -> Result<Hypergraph> {
    let per_edge = pairs(d) as u64;
    if !w.total_weight().is_multiple_of(per_edge) {
        return Err(Error::NotAWeightedProjection { d });
    }
    let dec = decompose(&w.support(), d).map_err(|e| match e {
        Error::NotAProjection { .. } => Error::NotAWeightedProjection { d },
        other => other,
    })?;
    let mut edges = Vec::new();
    for block in &dec.blocks {
        let mut b = Budget::new(budget);
        let covers = block.exact_weighted_covers(&local_weights(block, w), 1, &mut b)?;
        let first = covers.first().ok_or(Error::NotAWeightedProjection { d })?;
        edges.extend(
            block
                .globalize(first)
                .into_iter()
                .map(|c| dec.cliques[c].clone()),
        );
    }
    Ok(Hypergraph::from_unsorted(dec.n, d, edges))
}

/// Recovery algorithms selectable by name.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Algorithm {
    CliqueCover,
    Map,
    MapWeighted,
    Empty,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [
        Algorithm::CliqueCover,
        Algorithm::Map,
        Algorithm::MapWeighted,
        Algorithm::Empty,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::CliqueCover => "clique-cover",
            Algorithm::Map => "map",
            Algorithm::MapWeighted => "map-weighted",
            Algorithm::Empty => "empty",
        }
    }

    /// Whether exact-recovery rates are reported for this algorithm.
    pub fn is_map(self) -> bool {
        matches!(self, Algorithm::Map | Algorithm::MapWeighted)
    }

    /// Runs the algorithm on the projection of `truth` that it observes.
    pub fn recover(self, truth: &Hypergraph, budget: u64) -> Result<Hypergraph> {
        let d = truth.d();
        match self {
            Algorithm::CliqueCover => Ok(clique_cover_recover(&truth.project(), d)),
            Algorithm::Map => map_recover(&truth.project(), d, budget),
            Algorithm::MapWeighted => map_recover_weighted(&truth.project_weighted(), d, budget),
            Algorithm::Empty => Ok(Hypergraph::empty(truth.n(), d)),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.as_str() == s)
            .ok_or_else(|| {
                Error::Param(format!(
                    "unknown algorithm {s:?} (expected clique-cover, map, map-weighted or empty)"
                ))
            })
    }
}

/// A prediction scored against the truth.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RecoveryReport {
    #[serde(skip)]
    pub predicted: Hypergraph,
    /// True hyperedges not predicted.
    pub missing: usize,
    /// Predicted hyperedges that are not true.
    pub spurious: usize,
    /// Size of the symmetric difference.
    pub loss_contribution: usize,
}

impl RecoveryReport {
    pub fn new(truth: &Hypergraph, predicted: Hypergraph) -> Self {
        let (missing, spurious) = truth.symmetric_difference_counts(&predicted);
        Self {
            predicted,
            missing,
            spurious,
            loss_contribution: missing + spurious,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.loss_contribution == 0
    }
}

/// Mean normalized loss over the trials that completed.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LossEstimate {
    pub mean: f64,
    /// Sample standard deviation over √(completed trials).
    pub stderr: f64,
    pub trials: usize,
    /// p·C(n,d).
    pub normalizer: f64,
    /// Trials that hit a resource limit and were left out of the mean.
    pub failures: usize,
}

/// Fraction of trials recovered exactly, with a 95% Wilson interval.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RateEstimate {
    pub rate: f64,
    pub successes: usize,
    pub trials: usize,
    pub failures: usize,
    pub ci_low: f64,
    pub ci_high: f64,
}

/// Both estimates from one batch of trials.
#[derive(Clone, Debug, PartialEq)]
pub struct TrialSummary {
    pub loss: LossEstimate,
    pub exact: RateEstimate,
}

/// JSON report of a loss estimate.
#[derive(Clone, Debug, Serialize)]
pub struct LossReport<'a> {
    pub algorithm: &'static str,
    pub params: &'a ModelParams,
    pub trials: usize,
    pub mean: f64,
    pub stderr: f64,
    pub failures: usize,
}

impl<'a> LossReport<'a> {
    pub fn new(algorithm: Algorithm, params: &'a ModelParams, loss: &LossEstimate) -> Self {
        Self {
            algorithm: algorithm.as_str(),
            params,
            trials: loss.trials,
            mean: loss.mean,
            stderr: loss.stderr,
            failures: loss.failures,
        }
    }
}

/// Runs `trials` independent samples; trial t draws from stream (seed, t).
///
/// Trials run in parallel but are reduced in trial order, so the result does
/// not depend on the number of worker threads.
pub fn run_trials(
    params: &ModelParams,
    algo: Algorithm,
    trials: usize,
    budget: u64,
) -> Result<TrialSummary> {
    if trials == 0 {
        return Err(Error::Param("trials must be at least 1".into()));
    }
    let outcomes: Vec<Result<Option<usize>>> = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let truth = sample_with(params, &mut rng::stream(params.seed(), &[t]))?;
            match algo.recover(&truth, budget) {
                Ok(pred) => Ok(Some(RecoveryReport::new(&truth, pred).loss_contribution)),
                Err(e) if e.is_resource() => Ok(None),
                Err(e) => Err(e),
            }
        })
        .collect();
    let normalizer = params.p() * binomial_f64(params.n(), params.d());
    let (mut sum, mut sum_sq, mut done, mut successes) = (0.0, 0.0, 0usize, 0usize);
    for o in outcomes {
        if let Some(diff) = o? {
            let x = diff as f64 / normalizer;
            sum += x;
            sum_sq += x * x;
            done += 1;
            successes += usize::from(diff == 0);
        }
    }
    let failures = trials - done;
    let mean = if done > 0 {
        sum / done as f64
    } else {
        f64::NAN
    };
    let stderr = if done > 1 {
        let var = ((sum_sq - done as f64 * mean * mean) / (done as f64 - 1.0)).max(0.0);
        (var / done as f64).sqrt()
    } else {
        0.0
    };
    let (ci_low, ci_high) = wilson_interval(successes, trials);
    Ok(TrialSummary {
        loss: LossEstimate {
            mean,
            stderr,
            trials,
            normalizer,
            failures,
        },
        exact: RateEstimate {
            rate: successes as f64 / trials as f64,
            successes,
            trials,
            failures,
            ci_low,
            ci_high,
        },
    })
}

/// Monte-Carlo estimate of the normalized partial-recovery loss.
pub fn estimate_partial_loss(
    params: &ModelParams,
    algo: Algorithm,
    trials: usize,
) -> Result<LossEstimate> {
    Ok(run_trials(params, algo, trials, DEFAULT_BUDGET)?.loss)
}

/// Fraction of trials where `algo` returns the hidden hypergraph exactly.
/// Trials that exhaust the budget count as failures to recover.
pub fn exact_recovery_rate(
    params: &ModelParams,
    algo: Algorithm,
    trials: usize,
) -> Result<RateEstimate> {
    if !algo.is_map() {
        return Err(Error::Param(format!(
            "exact recovery rate is defined for map and map-weighted, not {algo}"
        )));
    }
    Ok(run_trials(params, algo, trials, DEFAULT_BUDGET)?.exact)
}

/// 95% Wilson score interval for a binomial proportion.
pub fn wilson_interval(successes: usize, trials: usize) -> (f64, f64) {
    let z = 1.959_963_984_540_054_f64;
    let n = trials as f64;
    let phat = successes as f64 / n;
    let denom = 1.0 + z * z / n;
    let centre = (phat + z * z / (2.0 * n)) / denom;
    let half = z * (phat * (1.0 - phat) / n + z * z / (4.0 * n * n)).sqrt() / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}
