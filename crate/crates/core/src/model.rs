//! The random hypergraph model and its closed-form quantities.
//!
//! Every candidate d-subset of `0..n` is a hyperedge independently with
//! probability p = c·n^(δ−d+1). The formulas below are leading-order values;
//! the ones that carry a regime restriction return [`Error::Regime`] outside it.

use std::cmp::Ordering;
use std::fmt;

use num_rational::Ratio;
use rand::Rng;
use rand_distr::{Distribution, Geometric};
use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, Vertex};
use crate::rng;

/// Denominator bound applied when δ is given as a float.
pub const DELTA_DENOMINATOR: i64 = 1_000_000;

#[derive(Clone, Debug, PartialEq)]
pub struct ModelParams {
    n: usize,
    d: usize,
    c: f64,
    delta: Ratio<i64>,
    seed: u64,
}

impl ModelParams {
    /// Validates d ≥ 3, c > 0, δ < d − 1 and 0 < p < 1.
    pub fn new(n: usize, d: usize, c: f64, delta: Ratio<i64>, seed: u64) -> Result<Self> {
        if d < 3 {
            return Err(Error::Param(format!(
                "uniformity d = {d} must be at least 3"
            )));
        }
        if n < d {
            return Err(Error::Param(format!("n = {n} is smaller than d = {d}")));
        }
        if !(c.is_finite() && c > 0.0) {
            return Err(Error::Param(format!(
                "rate constant c = {c} must be positive"
            )));
        }
        if delta >= Ratio::from_integer(d as i64 - 1) {
            return Err(Error::Param(format!(
                "delta = {delta} must be below d - 1 = {}",
                d - 1
            )));
        }
        let params = Self {
            n,
            d,
            c,
            delta,
            seed,
        };
        let p = params.p();
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::Param(format!(
                "edge probability p = {p} is not in (0, 1)"
            )));
        }
        Ok(params)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn delta(&self) -> Ratio<i64> {
        self.delta
    }

    pub fn delta_f64(&self) -> f64 {
        ratio_to_f64(self.delta)
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        Self {
            seed,
            ..self.clone()
        }
    }

    pub fn with_n(&self, n: usize) -> Result<Self> {
        Self::new(n, self.d, self.c, self.delta, self.seed)
    }

    pub fn with_delta(&self, delta: Ratio<i64>) -> Result<Self> {
        Self::new(self.n, self.d, self.c, delta, self.seed)
    }

    /// p = c·n^(δ−d+1).
    pub fn p(&self) -> f64 {
        self.c * (self.n as f64).powf(self.delta_f64() - self.d as f64 + 1.0)
    }

    /// c·n^(δ−1)/(d−2)!, the per-pair coverage scale.
    fn pair_scale(&self) -> f64 {
        self.c * (self.n as f64).powf(self.delta_f64() - 1.0) / factorial(self.d - 2)
    }
}

impl Serialize for ModelParams {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("ModelParams", 6)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("d", &self.d)?;
        st.serialize_field("c", &self.c)?;
        st.serialize_field("delta", &format_ratio(self.delta))?;
        st.serialize_field("seed", &self.seed)?;
        st.serialize_field("p", &self.p())?;
        st.end()
    }
}

/// Renders a rational as `num/den` (denominator always shown).
pub fn format_ratio(r: Ratio<i64>) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn ratio_to_f64(r: Ratio<i64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Rounds a float to the nearest multiple of 1/[`DELTA_DENOMINATOR`].
pub fn delta_from_f64(x: f64) -> Result<Ratio<i64>> {
    let scaled = (x * DELTA_DENOMINATOR as f64).round();
    if !scaled.is_finite() || scaled.abs() > 1e15 {
        return Err(Error::Param(format!("delta {x} out of range")));
    }
    Ok(Ratio::new(scaled as i64, DELTA_DENOMINATOR))
}

/// Parses δ as `num/den`, an integer, or a decimal (rounded to 1e-6).
pub fn parse_delta(s: &str) -> Result<Ratio<i64>> {
    let s = s.trim();
    if s.contains('/') {
        let r: Ratio<i64> = s
            .parse()
            .map_err(|_| Error::Param(format!("invalid rational delta {s:?}")))?;
        return Ok(r);
    }
    if let Ok(i) = s.parse::<i64>() {
        return Ok(Ratio::from_integer(i));
    }
    let x: f64 = s
        .parse()
        .map_err(|_| Error::Param(format!("invalid delta {s:?}")))?;
    delta_from_f64(x)
}

/// Parameter values read from a `key=value` config file; unset keys stay `None`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ParamOverrides {
    pub n: Option<usize>,
    pub d: Option<usize>,
    pub c: Option<f64>,
    pub delta: Option<Ratio<i64>>,
    pub seed: Option<u64>,
}

impl ParamOverrides {
    /// Parses `n=`, `d=`, `c=`, `delta=`, `seed=` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut out = Self::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |m: String| Error::Parse {
                line: i + 1,
                message: m,
            };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(format!("expected key=value, got {line:?}")))?;
            let (key, value) = (key.trim(), value.trim());
            let bad = || err(format!("invalid value for {key}: {value:?}"));
            match key {
                "n" => out.n = Some(value.parse().map_err(|_| bad())?),
                "d" => out.d = Some(value.parse().map_err(|_| bad())?),
                "c" => out.c = Some(value.parse().map_err(|_| bad())?),
                "seed" => out.seed = Some(value.parse().map_err(|_| bad())?),
                "delta" => out.delta = Some(parse_delta(value).map_err(|e| err(e.to_string()))?),
                _ => return Err(err(format!("unknown key {key:?}"))),
            }
        }
        Ok(out)
    }

    /// Values set in `other` win.
    pub fn overlay(&self, other: &ParamOverrides) -> ParamOverrides {
        ParamOverrides {
            n: other.n.or(self.n),
            d: other.d.or(self.d),
            c: other.c.or(self.c),
            delta: other.delta.or(self.delta),
            seed: other.seed.or(self.seed),
        }
    }
}

/// Samples 𝓗 by jumping between included candidates with geometric gaps.
///
/// Candidates are ranked in colexicographic order; the RNG is the stream of
/// `params.seed()` with an empty path, so equal seeds give equal samples.
pub fn sample_hypergraph(params: &ModelParams) -> Result<Hypergraph> {
    sample_with(params, &mut rng::stream(params.seed(), &[]))
}

/// Samples with a caller-supplied generator.
pub fn sample_with<R: Rng + ?Sized>(params: &ModelParams, rng: &mut R) -> Result<Hypergraph> {
    let p = params.p();
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::Param(format!(
            "edge probability p = {p} is not in (0, 1)"
        )));
    }
    let (n, d) = (params.n(), params.d());
    let total = binomial_u64(n as u64, d as u64)
        .ok_or_else(|| Error::TooLarge(format!("C({n}, {d}) does not fit in 64 bits")))?;
    let gap = Geometric::new(p).map_err(|e| Error::Param(e.to_string()))?;
    let mut edges = Vec::new();
    let mut rank = gap.sample(rng);
    while rank < total {
        edges.push(unrank_colex(rank, n, d));
        rank = match rank
            .checked_add(1)
            .and_then(|r| r.checked_add(gap.sample(rng)))
        {
            Some(r) => r,
            None => break,
        };
    }
    Ok(Hypergraph::from_unsorted(n, d, edges))
}

/// The `rank`-th d-subset of `0..n` in colexicographic order.
fn unrank_colex(mut rank: u64, n: usize, d: usize) -> Vec<Vertex> {
    let mut out = vec![0; d];
    let mut hi = n as u64;
    for i in (1..=d as u64).rev() {
        // Largest c < hi with C(c, i) <= rank.
        let (mut lo, mut top) = (i - 1, hi - 1);
        while lo < top {
            let mid = lo + (top - lo).div_ceil(2);
            if binomial_u64(mid, i).is_some_and(|b| b <= rank) {
                lo = mid;
            } else {
                top = mid - 1;
            }
        }
        rank -= binomial_u64(lo, i).unwrap();
        out[i as usize - 1] = lo as Vertex;
        hi = lo;
    }
    out
}

/// p = c·n^(δ−d+1).
pub fn edge_probability(params: &ModelParams) -> f64 {
    params.p()
}

/// q = p + (c·n^(δ−1)/(d−2)!)^C(d,2), the leading-order density of the clique hypergraph.
pub fn fake_edge_density(params: &ModelParams) -> f64 {
    params.p() + params.pair_scale().powi(pairs(params.d()) as i32)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Below,
    At,
    Above,
}

impl Side {
    fn of(delta: Ratio<i64>, threshold: Ratio<i64>) -> Self {
        match delta.cmp(&threshold) {
            Ordering::Less => Side::Below,
            Ordering::Equal => Side::At,
            Ordering::Greater => Side::Above,
        }
    }
}

/// Critical values of δ for each recovery objective and where `delta` sits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegimeReport {
    pub d: usize,
    pub delta: Ratio<i64>,
    /// (d−1)/(d+1).
    pub partial_threshold: Ratio<i64>,
    /// min((d−1)/(d+1), (2d−4)/(2d−1)).
    pub exact_threshold_unweighted: Ratio<i64>,
    /// (d−1)/(d+1).
    pub exact_threshold_weighted: Ratio<i64>,
    pub partial: Side,
    pub exact_unweighted: Side,
    pub exact_weighted: Side,
}

pub fn classify_regime(d: usize, delta: Ratio<i64>) -> Result<RegimeReport> {
    if d < 3 {
        return Err(Error::Param(format!(
            "uniformity d = {d} must be at least 3"
        )));
    }
    let di = d as i64;
    let partial = Ratio::new(di - 1, di + 1);
    let exact = partial.min(Ratio::new(2 * di - 4, 2 * di - 1));
    Ok(RegimeReport {
        d,
        delta,
        partial_threshold: partial,
        exact_threshold_unweighted: exact,
        exact_threshold_weighted: partial,
        partial: Side::of(delta, partial),
        exact_unweighted: Side::of(delta, exact),
        exact_weighted: Side::of(delta, partial),
    })
}

/// Probability that every set `u` in `family` equals h ∩ [k] for some hyperedge h:
/// ∏_u (1 − (1−p)^C(n−k, d−|u|)).
pub fn cover_probability_exact(
    params: &ModelParams,
    k: usize,
    family: &[Vec<Vertex>],
) -> Result<f64> {
    let (n, d) = (params.n(), params.d());
    if k > n {
        return Err(Error::Param(format!("k = {k} exceeds n = {n}")));
    }
    let log_miss = (-params.p()).ln_1p();
    let mut prob = 1.0;
    for u in family {
        if u.len() > d {
            return Err(Error::Param(format!("subset {u:?} is larger than d = {d}")));
        }
        if let Some(&v) = u.iter().find(|&&v| v as usize >= k) {
            return Err(Error::Param(format!(
                "vertex {v} of {u:?} is outside [k] with k = {k}"
            )));
        }
        let count = binomial_f64(n - k, d - u.len());
        prob *= -(count * log_miss).exp_m1();
    }
    Ok(prob)
}

/// g(M) = M(δ−1) + 2 − (1 + √(8(C(d,2) − M + 1) + 1))/2 for 1 ≤ M ≤ C(d,2).
///
/// Satisfies g(1) = δ − d + 1 and g(C(d,2)) = C(d,2)(δ − 1).
pub fn relaxation_exponent_g(d: usize, delta: f64, m: usize) -> Result<f64> {
    let total = pairs(d);
    if m < 1 || m > total {
        return Err(Error::Param(format!("M = {m} outside [1, {total}]")));
    }
    let root = (8.0 * (total - m + 1) as f64 + 1.0).sqrt();
    Ok(m as f64 * (delta - 1.0) + 2.0 - (1.0 + root) / 2.0)
}

/// Leading-order E|X| = C(n, d−m)·(c·n^(δ−1)/(d−2)!)^(C(d,2)−C(m,2)), where X is
/// the set of d-subsets h with h ∩ [l] = [m] whose pairs outside [m] are all
/// edges of the projection. Only valid for δ > (d−1)/(d+1).
pub fn expected_extension_count(params: &ModelParams, l: usize, m: usize) -> Result<f64> {
    let d = params.d();
    if m > d - 1 || l < m {
        return Err(Error::Param(format!(
            "need 0 <= m <= d-1 and l >= m, got l = {l}, m = {m}"
        )));
    }
    if l > params.n() {
        return Err(Error::Param(format!("l = {l} exceeds n = {}", params.n())));
    }
    let threshold = Ratio::new(d as i64 - 1, d as i64 + 1);
    if params.delta() <= threshold {
        return Err(Error::Regime(format!(
            "extension count needs delta > {}, got {}",
            format_ratio(threshold),
            format_ratio(params.delta())
        )));
    }
    let exponent = pairs(d) - pairs(m);
    Ok(binomial_f64(params.n(), d - m) * params.pair_scale().powi(exponent as i32))
}

/// Binary entropy in nats.
pub fn binary_entropy(p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        return 0.0;
    }
    -p * p.ln() - (1.0 - p) * (-p).ln_1p()
}

/// H(𝓗) = C(n,d)·H_B(p) nats.
pub fn hypergraph_entropy(params: &ModelParams) -> f64 {
    binomial_f64(params.n(), params.d()) * binary_entropy(params.p())
}

/// Lower bound on the entropy of the projection, valid while C(n,d−2)·p < 1:
/// (1 − C(n,d−2)p/(1 − C(n,d−2)p))·Σ_{i=2}^{n−d+2} (i−1)·H_B(1 − (1−p)^C(n−i,d−2)).
pub fn projection_entropy_lower_bound(params: &ModelParams) -> Result<f64> {
    let (n, d, p) = (params.n(), params.d(), params.p());
    let load = binomial_f64(n, d - 2) * p;
    if load >= 1.0 {
        return Err(Error::Regime(format!(
            "C(n, d-2)·p = {load} must be below 1"
        )));
    }
    let log_miss = (-p).ln_1p();
    let mut sum = 0.0;
    for i in 2..=n - d + 2 {
        let cover = -(binomial_f64(n - i, d - 2) * log_miss).exp_m1();
        sum += (i - 1) as f64 * binary_entropy(cover);
    }
    Ok((1.0 - load / (1.0 - load)) * sum)
}

/// C(d,2).
pub fn pairs(d: usize) -> usize {
    d * d.saturating_sub(1) / 2
}

pub fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

pub fn binomial_f64(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Exact C(n,k), or `None` on overflow.
pub fn binomial_u64(n: u64, k: u64) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k as u128 {
        acc = acc * (n as u128 - i) / (i + 1);
        if acc > u64::MAX as u128 {
            return None;
        }
    }
    Some(acc as u64)
}

impl fmt::Display for ModelParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "n={} d={} c={} delta={} seed={}",
            self.n,
            self.d,
            self.c,
            format_ratio(self.delta),
            self.seed
        )
    }
}
