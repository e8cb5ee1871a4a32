use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::PathBuf;

use hyperec::ambiguity::{
    build_gadget, find_minimal_preimages, search_small_ambiguous, GadgetSpec, GadgetVariant,
};
use hyperec::io::{
    parse_hypergraph, parse_observed, write_graph, write_hypergraph, write_weighted_graph,
};
use hyperec::model::{fake_edge_density, format_ratio, parse_delta, sample_hypergraph};
use hyperec::oracle::{exhaustive_posterior, oracle_totals, Number, TinyModel, TinyProb};
use hyperec::recovery::{
    clique_cover_recover, map_recover_weighted, map_recover_with, run_trials, Algorithm,
    RecoveryReport, TieBreak,
};
use hyperec::{max_subgraph_density, rng, DensityResult, Hypergraph, Observed, Vertex};
use num_rational::Ratio;
use serde::Serialize;

use crate::params::{build, read, ParamArgs};
use crate::{CliError, Quantity};

/// Largest number of δ points a sweep accepts.
const MAX_SWEEP_POINTS: usize = 100_000;

pub const SWEEP_HEADER: &str = "delta,n,trials,loss_mean,loss_stderr,q_theory,exact_rate,failures";

fn emit(out: Option<&PathBuf>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|()| stdout.flush())
                .map_err(|e| CliError::Usage(format!("cannot write to stdout: {e}")))
        }
    }
}

fn emit_json<T: Serialize>(out: Option<&PathBuf>, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).expect("reports serialize");
    text.push('\n');
    emit(out, &text)
}

pub fn sample(params: &ParamArgs, out: Option<&PathBuf>) -> Result<(), CliError> {
    let p = params.resolve()?;
    emit(out, &write_hypergraph(&sample_hypergraph(&p)?))
}

pub fn project(input: &PathBuf, weighted: bool, out: Option<&PathBuf>) -> Result<(), CliError> {
    let h = parse_hypergraph(&read(input)?)?;
    let text = if weighted {
        write_weighted_graph(&h.project_weighted())
    } else {
        write_graph(&h.project())
    };
    emit(out, &text)
}

#[derive(Serialize)]
struct RecoverOutput<'a> {
    algorithm: &'static str,
    n: usize,
    d: usize,
    edge_count: usize,
    hyperedges: &'a [Vec<Vertex>],
    #[serde(skip_serializing_if = "Option::is_none")]
    truth: Option<RecoveryReport>,
}

pub fn recover(
    algo: &str,
    input: &PathBuf,
    d: usize,
    truth: Option<&PathBuf>,
    budget: u64,
    tie_seed: Option<u64>,
    out: Option<&PathBuf>,
) -> Result<(), CliError> {
    let algo: Algorithm = algo.parse()?;
    if d < 2 {
        return Err(CliError::Usage(format!("--d must be at least 2, got {d}")));
    }
    let g = parse_observed(&read(input)?)?;
    let tie = tie_seed.map_or(TieBreak::Lexicographic, TieBreak::Random);
    let pred = match algo {
        Algorithm::CliqueCover => clique_cover_recover(&g.support(), d),
        Algorithm::Map => map_recover_with(&g.support(), d, budget, tie)?,
        Algorithm::MapWeighted => match &g {
            Observed::Weighted(w) => map_recover_weighted(w, d, budget)?,
            Observed::Plain(_) => {
                return Err(CliError::Usage(
                    "map-weighted needs a weighted (WG) input".into(),
                ))
            }
        },
        Algorithm::Empty => Hypergraph::empty(g.n(), d),
    };
    let truth = match truth {
        Some(path) => {
            let t = parse_hypergraph(&read(path)?)?;
            if t.n() != pred.n() || t.d() != d {
                return Err(CliError::Usage(format!(
                    "truth has n = {}, d = {}; input has n = {}, d = {d}",
                    t.n(),
                    t.d(),
                    pred.n()
                )));
            }
            Some(RecoveryReport::new(&t, pred.clone()))
        }
        None => None,
    };
    emit_json(
        out,
        &RecoverOutput {
            algorithm: algo.as_str(),
            n: pred.n(),
            d,
            edge_count: pred.edge_count(),
            hyperedges: pred.edges(),
            truth,
        },
    )
}

pub struct SweepRange<'a> {
    pub from: &'a str,
    pub to: &'a str,
    pub step: &'a str,
}

/// Exact decimal when the denominator divides 10^6, shortest float otherwise.
fn format_delta(r: Ratio<i64>) -> String {
    let den = *r.denom();
    if 1_000_000 % den != 0 {
        return format!("{}", *r.numer() as f64 / den as f64);
    }
    let scaled = r.numer() * (1_000_000 / den);
    let (sign, abs) = if scaled < 0 {
        ("-", -scaled)
    } else {
        ("", scaled)
    };
    let (int, frac) = (abs / 1_000_000, abs % 1_000_000);
    if frac == 0 {
        return format!("{sign}{int}");
    }
    let frac = format!("{frac:06}");
    format!("{sign}{int}.{}", frac.trim_end_matches('0'))
}

pub fn sweep(
    params: &ParamArgs,
    range: SweepRange<'_>,
    trials: usize,
    algo: &str,
    budget: u64,
    out: Option<&PathBuf>,
    gnuplot_hint: bool,
) -> Result<(), CliError> {
    if trials == 0 {
        return Err(CliError::Usage("--trials must be at least 1".into()));
    }
    let algo: Algorithm = algo.parse()?;
    let o = params.overrides()?;
    let (from, to, step) = (
        parse_delta(range.from)?,
        parse_delta(range.to)?,
        parse_delta(range.step)?,
    );
    if step <= Ratio::from_integer(0) {
        return Err(CliError::Usage("--delta-step must be positive".into()));
    }
    if to < from {
        return Err(CliError::Usage("--delta-to is below --delta-from".into()));
    }
    let count = ((to - from) / step).floor().to_integer() as usize + 1;
    if count > MAX_SWEEP_POINTS {
        return Err(CliError::Usage(format!(
            "{count} sweep points exceeds {MAX_SWEEP_POINTS}"
        )));
    }
    let seed = o.seed.unwrap_or(0);
    // Validate every point before spending time on any of them.
    let points = (0..count)
        .map(|i| {
            let delta = from + step * Ratio::from_integer(i as i64);
            Ok(build(&o, delta)?.with_seed(rng::derive_seed(seed, i as u64)))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let mut csv = format!("# schema=1\n{SWEEP_HEADER}\n");
    for p in &points {
        let summary = run_trials(p, algo, trials, budget)?;
        let exact = if algo.is_map() {
            summary.exact.rate.to_string()
        } else {
            String::new()
        };
        writeln!(
            csv,
            "{},{},{},{},{},{},{},{}",
            format_delta(p.delta()),
            p.n(),
            trials,
            summary.loss.mean,
            summary.loss.stderr,
            fake_edge_density(p),
            exact,
            summary.loss.failures
        )
        .expect("writing to a String");
    }
    emit(out, &csv)?;
    if gnuplot_hint {
        let file = out.map_or_else(|| "sweep.csv".to_string(), |p| p.display().to_string());
        eprintln!(
            "set datafile separator ','\n\
             set key autotitle columnhead\n\
             set xlabel 'delta'\n\
             set ylabel 'normalized loss'\n\
             set logscale y\n\
             plot '{file}' using 1:4:5 with yerrorlines"
        );
    }
    Ok(())
}

#[derive(Serialize)]
struct GadgetOutput {
    variant: &'static str,
    d: usize,
    vertices: usize,
    hyperedges: usize,
    m: String,
    exponent: String,
    minimal_preimage_count: usize,
    saturated: bool,
    preimage: Vec<Vec<Vertex>>,
}

#[derive(Serialize)]
struct GraphAmbiguityOutput {
    weighted: bool,
    d: usize,
    vertices: usize,
    minimal_preimage_count: usize,
    saturated: bool,
    min_edges: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    m: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    exponent: Option<String>,
    preimages: Vec<Vec<Vec<Vertex>>>,
}

#[derive(Serialize)]
struct SearchOutput {
    max_edges: usize,
    classes_per_size: Vec<usize>,
    ambiguous: usize,
    min_exponent: Option<String>,
    witness: Option<Vec<Vec<Vertex>>>,
}

fn density_fields(density: &DensityResult) -> (String, String) {
    (format_ratio(density.m), format_ratio(density.exponent))
}

pub fn ambiguity(
    gadget: Option<&str>,
    input: Option<&PathBuf>,
    d: Option<usize>,
    cap: usize,
    budget: u64,
    search_max_edges: Option<usize>,
    out: Option<&PathBuf>,
) -> Result<(), CliError> {
    let need_d = || d.ok_or_else(|| CliError::Usage("--d is required".into()));
    match (gadget, input, search_max_edges) {
        (Some(name), None, None) => {
            let variant: GadgetVariant = name.parse()?;
            let g = build_gadget(GadgetSpec::new(need_d()?, variant)?)?;
            let report = find_minimal_preimages(&g.projection, g.spec.d, cap, budget)?;
            let (m, exponent) = density_fields(&max_subgraph_density(&g.h)?);
            emit_json(
                out,
                &GadgetOutput {
                    variant: variant.name(),
                    d: g.spec.d,
                    vertices: g.spec.vertex_count(),
                    hyperedges: g.h.edge_count(),
                    m,
                    exponent,
                    minimal_preimage_count: report.minimal_preimage_count,
                    saturated: report.saturated,
                    preimage: g.h.edges().to_vec(),
                },
            )
        }
        (None, Some(path), None) => {
            let d = need_d()?;
            let g = parse_observed(&read(path)?)?;
            let report = find_minimal_preimages(&g, d, cap, budget)?;
            let (m, exponent) = report.density.as_ref().map(density_fields).unzip();
            emit_json(
                out,
                &GraphAmbiguityOutput {
                    weighted: report.weighted,
                    d,
                    vertices: g.n(),
                    minimal_preimage_count: report.minimal_preimage_count,
                    saturated: report.saturated,
                    min_edges: report.min_edges,
                    m,
                    exponent,
                    preimages: report
                        .preimages
                        .iter()
                        .map(|h| h.edges().to_vec())
                        .collect(),
                },
            )
        }
        (None, None, Some(max_edges)) => {
            if d.is_some_and(|d| d != 3) {
                return Err(CliError::Usage(
                    "the exhaustive search covers d = 3 only".into(),
                ));
            }
            let s = search_small_ambiguous(max_edges, budget)?;
            emit_json(
                out,
                &SearchOutput {
                    max_edges,
                    classes_per_size: s.classes_per_size[1..].to_vec(),
                    ambiguous: s.ambiguous,
                    min_exponent: s.min_exponent.map(format_ratio),
                    witness: s.witness.map(|h| h.edges().to_vec()),
                },
            )
        }
        _ => Err(CliError::Usage(
            "give exactly one of --gadget, --in or --search-max-edges".into(),
        )),
    }
}

/// `a/b` and plain decimals are exact; anything else parses as a float.
fn parse_prob(s: &str) -> Result<TinyProb, CliError> {
    let s = s.trim();
    let bad = || CliError::Usage(format!("invalid probability {s:?}"));
    if s.contains('/') {
        let r: Ratio<u64> = s.parse().map_err(|_| bad())?;
        return Ok(TinyProb::Exact(r));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let digits = |t: &str| t.bytes().all(|b| b.is_ascii_digit());
        if digits(int) && digits(frac) && !frac.is_empty() && frac.len() <= 18 {
            let den = 10u64.pow(frac.len() as u32);
            let whole: u64 = if int.is_empty() {
                0
            } else {
                int.parse().map_err(|_| bad())?
            };
            let num = whole
                .checked_mul(den)
                .and_then(|x| x.checked_add(frac.parse().ok()?))
                .ok_or_else(bad)?;
            return Ok(TinyProb::Exact(Ratio::new(num, den)));
        }
    }
    s.parse::<f64>().map(TinyProb::Float).map_err(|_| bad())
}

fn render_prob(p: TinyProb) -> String {
    match p {
        TinyProb::Exact(r) => format!("{}/{}", r.numer(), r.denom()),
        TinyProb::Float(x) => x.to_string(),
    }
}

fn parse_edges(s: &str) -> Result<Vec<Vec<Vertex>>, CliError> {
    s.split(';')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            t.split(',')
                .map(|v| {
                    v.trim()
                        .parse::<Vertex>()
                        .map_err(|_| CliError::Usage(format!("invalid vertex {v:?}")))
                })
                .collect()
        })
        .collect()
}

#[derive(Serialize)]
struct PosteriorEntry<'a> {
    hyperedge: &'a [Vertex],
    posterior: &'a Number,
}

#[derive(Serialize)]
struct OracleOutput<'a> {
    quantity: &'static str,
    n: usize,
    d: usize,
    p: String,
    weighted: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    value: Option<Number>,
    #[serde(skip_serializing_if = "Option::is_none")]
    classes: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    hyperedges: Option<Vec<Vec<Vertex>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    evidence: Option<Number>,
    #[serde(skip_serializing_if = "Option::is_none")]
    per_hyperedge: Option<Vec<PosteriorEntry<'a>>>,
}

#[allow(clippy::too_many_arguments)]
pub fn oracle(
    quantity: Quantity,
    n: usize,
    d: usize,
    p: &str,
    weighted: bool,
    input: Option<&PathBuf>,
    edges: Option<&str>,
    out: Option<&PathBuf>,
) -> Result<(), CliError> {
    let prob = parse_prob(p)?;
    let model = TinyModel::new(n, d, prob)?;
    let mut report = OracleOutput {
        quantity: "",
        n,
        d,
        p: render_prob(prob),
        weighted,
        value: None,
        classes: None,
        hyperedges: None,
        evidence: None,
        per_hyperedge: None,
    };
    match quantity {
        Quantity::Posterior => {
            let path =
                input.ok_or_else(|| CliError::Usage("posterior needs --in <graph file>".into()))?;
            let g = parse_observed(&read(path)?)?;
            if g.is_weighted() != weighted {
                return Err(CliError::Usage(
                    "pass --weighted exactly when the input is a WG file".into(),
                ));
            }
            let post = exhaustive_posterior(&model, &g)?;
            let entries = post
                .per_hyperedge
                .iter()
                .map(|(h, p)| PosteriorEntry {
                    hyperedge: h,
                    posterior: p,
                })
                .collect();
            report.quantity = "posterior";
            report.evidence = Some(post.evidence.clone());
            report.per_hyperedge = Some(entries);
            emit_json(out, &report)
        }
        Quantity::Loss | Quantity::Overlap => {
            let totals = oracle_totals(&model, weighted, None)?;
            report.classes = Some(totals.classes);
            if quantity == Quantity::Loss {
                report.quantity = "loss";
                report.value = Some(totals.loss);
            } else {
                report.quantity = "overlap";
                report.value = Some(totals.overlap);
            }
            emit_json(out, &report)
        }
        Quantity::Corr => {
            let targets =
                parse_edges(edges.ok_or_else(|| CliError::Usage("corr needs --edges".into()))?)?;
            if targets.is_empty() {
                return Err(CliError::Usage("corr needs at least one hyperedge".into()));
            }
            let totals = oracle_totals(&model, weighted, Some(&targets))?;
            report.quantity = "corr";
            report.classes = Some(totals.classes);
            report.value = totals.correlation;
            report.hyperedges = Some(targets);
            emit_json(out, &report)
        }
    }
}
