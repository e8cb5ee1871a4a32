//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fail.
//!
//! Run with `cargo test -p hyperec-cli --test acceptance`.

use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use hyperec::ambiguity::{
    build_gadget, find_minimal_preimages, make_hard_instance, threshold_of_preimage, GadgetSpec,
    GadgetVariant, DEFAULT_CAP,
};
use hyperec::density::max_subgraph_density_brute_force;
use hyperec::hypergraph::all_subsets;
use hyperec::model::{
    binomial_f64, binomial_u64, delta_from_f64, expected_extension_count, fake_edge_density,
    hypergraph_entropy, projection_entropy_lower_bound, sample_with,
};
use hyperec::oracle::{oracle_totals, Number, TinyModel, TinyProb};
use hyperec::recovery::{map_recover_with, run_trials, Algorithm, TieBreak, DEFAULT_BUDGET};
use hyperec::{
    enumerate_d_cliques, max_subgraph_density, rng, Hypergraph, ModelParams, Observed, Vertex,
};
use num_rational::{BigRational, Ratio};
use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;
use rayon::prelude::*;

type Check = Result<String, String>;
type Criterion = (&'static str, Duration, fn() -> Check);

fn params(n: usize, d: usize, delta: f64, seed: u64) -> ModelParams {
    ModelParams::new(n, d, 1.0, delta_from_f64(delta).unwrap(), seed).unwrap()
}

fn ensure(ok: bool, msg: String) -> Check {
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn gadget_identities() -> Check {
    let mut seen = Vec::new();
    for (d, expect) in [
        (3, Ratio::new(2, 5)),
        (4, Ratio::new(4, 7)),
        (5, Ratio::new(2, 3)),
    ] {
        let g = build_gadget(GadgetSpec::new(d, GadgetVariant::Unweighted).unwrap()).unwrap();
        let got = threshold_of_preimage(&g.h).map_err(|e| e.to_string())?;
        seen.push(format!("gad{d}={got}"));
        if got != expect {
            return Err(format!("d = {d}: exponent {got}, expected {expect}"));
        }
    }
    for d in 3..=6usize {
        let g = build_gadget(GadgetSpec::new(d, GadgetVariant::Weighted).unwrap()).unwrap();
        let got = threshold_of_preimage(&g.h).map_err(|e| e.to_string())?;
        seen.push(format!("gadw{d}={got}"));
        if got != Ratio::new(d as i64 - 2, 2) {
            return Err(format!(
                "weighted d = {d}: exponent {got}, expected {}/2 - 1",
                d
            ));
        }
    }
    Ok(seen.join(" "))
}

fn ambiguity_census() -> Check {
    let mut seen = Vec::new();
    for d in [3, 4] {
        let g = build_gadget(GadgetSpec::new(d, GadgetVariant::Unweighted).unwrap()).unwrap();
        let plain = find_minimal_preimages(&g.projection, d, DEFAULT_CAP, DEFAULT_BUDGET)
            .map_err(|e| e.to_string())?;
        if plain.minimal_preimage_count < 2 || plain.min_edges != 2 * d - 1 {
            return Err(format!(
                "d = {d}: {} minimal preimages with e = {}",
                plain.minimal_preimage_count, plain.min_edges
            ));
        }
        let w = Observed::Weighted(g.h.project_weighted());
        let weighted = find_minimal_preimages(&w, d, DEFAULT_CAP, DEFAULT_BUDGET)
            .map_err(|e| e.to_string())?;
        if weighted.minimal_preimage_count != 1 {
            return Err(format!(
                "d = {d}: weighted projection has {} preimages",
                weighted.minimal_preimage_count
            ));
        }
        let gw = build_gadget(GadgetSpec::new(d, GadgetVariant::Weighted).unwrap()).unwrap();
        let wamb = find_minimal_preimages(&gw.projection, d, DEFAULT_CAP, DEFAULT_BUDGET)
            .map_err(|e| e.to_string())?;
        if wamb.minimal_preimage_count < 2 {
            return Err(format!(
                "d = {d}: weighted gadget has {} preimages",
                wamb.minimal_preimage_count
            ));
        }
        seen.push(format!(
            "d={d}: gad {} (e={}), Proj_W 1, gadw {}",
            plain.minimal_preimage_count, plain.min_edges, wamb.minimal_preimage_count
        ));
    }
    Ok(seen.join("; "))
}

fn covers_pair(h: &Hypergraph, a: Vertex, b: Vertex) -> bool {
    h.edges().iter().any(|e| e.contains(&a) && e.contains(&b))
}

fn fake_edge_frequency() -> Check {
    let p = params(200, 3, 0.5, 301);
    let trials = 100_000u64;
    let hits: u64 = (0..trials)
        .into_par_iter()
        .map(|t| {
            let h = sample_with(&p, &mut rng::stream(p.seed(), &[t])).unwrap();
            u64::from(covers_pair(&h, 0, 1) && covers_pair(&h, 0, 2) && covers_pair(&h, 1, 2))
        })
        .sum();
    let freq = hits as f64 / trials as f64;
    let q = fake_edge_density(&p);
    let sigma = (q * (1.0 - q) / trials as f64).sqrt();
    let z = (freq - q) / sigma;
    ensure(
        z.abs() <= 3.0,
        format!("frequency {freq:.6e}, q = {q:.6e}, z = {z:+.2}"),
    )
}

fn clique_cover_transition() -> Check {
    let loss = |delta: f64| -> Result<f64, String> {
        let s = run_trials(
            &params(200, 3, delta, 400),
            Algorithm::CliqueCover,
            100,
            DEFAULT_BUDGET,
        )
        .map_err(|e| e.to_string())?;
        Ok(s.loss.mean)
    };
    let (l3, l4, l6, l7) = (loss(0.3)?, loss(0.4)?, loss(0.6)?, loss(0.7)?);
    ensure(
        l3 <= 0.2 && l7 >= 5.0 && l4 < 1.0 && l6 > 1.0,
        format!(
            "loss(0.3) = {l3:.3}, loss(0.4) = {l4:.3}, loss(0.6) = {l6:.3}, loss(0.7) = {l7:.3}"
        ),
    )
}

fn exact_recovery_below_threshold() -> Check {
    let s = run_trials(
        &params(60, 3, 0.2, 500),
        Algorithm::Map,
        200,
        DEFAULT_BUDGET,
    )
    .map_err(|e| e.to_string())?;
    let rate = s.exact.rate;

    let (d, m) = (3, 4);
    let plant = make_hard_instance(d, m, 60).map_err(|e| e.to_string())?;
    let g = plant.project();
    let resamples = 500u64;
    let hits = (0..resamples)
        .into_par_iter()
        .map(|s| {
            map_recover_with(&g, d, DEFAULT_BUDGET, TieBreak::Random(s))
                .map(|h| usize::from(h == plant))
        })
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?
        .into_iter()
        .sum::<usize>();
    let frac = hits as f64 / resamples as f64;
    let cap = 1.0 / (m as f64 + 1.0) + 0.1;
    ensure(
        rate >= 0.9 && frac <= cap,
        format!("MAP exact rate {rate:.3} (≥ 0.9); plant returned {frac:.3} of tie resamples (≤ {cap:.3})"),
    )
}

fn exact(x: &Number) -> Result<&BigRational, String> {
    x.as_exact()
        .ok_or_else(|| "expected rational mode".to_string())
}

fn oracle_identities() -> Check {
    let mut shapes = Vec::new();
    for n in 2..=12usize {
        for d in 2..=n {
            if binomial_u64(n as u64, d as u64).unwrap() <= 20 {
                for b in [20u64, 10, 5] {
                    shapes.push((n, d, b));
                }
            }
        }
    }
    let mut rng = rng::stream(600, &[]);
    let configs: Vec<_> = shapes.choose_multiple(&mut rng, 60).copied().collect();
    let one = BigRational::from_integer(1.into());
    for &(n, d, b) in &configs {
        let model =
            TinyModel::new(n, d, TinyProb::Exact(Ratio::new(1, b))).map_err(|e| e.to_string())?;
        let plain = oracle_totals(&model, false, None).map_err(|e| e.to_string())?;
        let weighted = oracle_totals(&model, true, None).map_err(|e| e.to_string())?;
        let tag = format!("n={n} d={d} p=1/{b}");
        if *exact(&plain.evidence_total)? != one || *exact(&weighted.evidence_total)? != one {
            return Err(format!("{tag}: evidence does not sum to 1"));
        }
        let loss = exact(&plain.loss)?;
        let big_n = BigRational::from_integer(binomial_u64(n as u64, d as u64).unwrap().into());
        let p = BigRational::new(1.into(), b.into());
        let middle = &one - exact(&plain.overlap)? / (p * big_n);
        if !(*loss >= middle && middle >= loss / BigRational::from_integer(2.into())) {
            return Err(format!(
                "{tag}: sandwich fails (loss {loss}, middle {middle})"
            ));
        }
        if exact(&weighted.loss)? > loss {
            return Err(format!(
                "{tag}: weighted loss {} exceeds {loss}",
                exact(&weighted.loss)?
            ));
        }
    }
    Ok(format!(
        "{} random configs, sandwich and weighted inequality exact, evidence = 1",
        configs.len()
    ))
}

fn density_equivalence() -> Check {
    let mut rng = rng::stream(700, &[]);
    for i in 0..200 {
        let d = if rng.random_bool(0.5) { 3 } else { 4 };
        let n = rng.random_range(d..=14usize);
        let mut cands = all_subsets(n, d);
        cands.shuffle(&mut rng);
        let k = rng.random_range(1..=cands.len().min(16));
        let h = Hypergraph::new(n, d, &cands[..k]).unwrap();
        let flow = max_subgraph_density(&h).map_err(|e| e.to_string())?.m;
        let brute = max_subgraph_density_brute_force(&h).map_err(|e| e.to_string())?;
        if flow != brute {
            return Err(format!(
                "hypergraph {i} (n = {n}, d = {d}): flow {flow}, brute force {brute}"
            ));
        }
    }
    Ok("200 random hypergraphs agree".into())
}

fn extension_count_formula() -> Check {
    let p = params(300, 3, 0.8, 800);
    let samples = 1000u64;
    let counts: Vec<(f64, f64)> = (0..samples)
        .into_par_iter()
        .map(|t| {
            let h = sample_with(&p, &mut rng::stream(p.seed(), &[t])).unwrap();
            let tri = enumerate_d_cliques(&h.project(), 3);
            let through_zero = tri.iter().filter(|c| c[0] == 0).count();
            (tri.len() as f64, through_zero as f64)
        })
        .collect();
    let (n, pr) = (300.0f64, p.p());
    let finite = pr + (1.0 - pr) * (1.0 - (1.0 - pr).powf(n - 3.0)).powi(3);
    let mut ok = true;
    let mut parts = Vec::new();
    for m in 0..=1usize {
        let xs: Vec<f64> = counts
            .iter()
            .map(|c| if m == 0 { c.0 } else { c.1 })
            .collect();
        let mean = xs.iter().sum::<f64>() / samples as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (samples as f64 - 1.0);
        let se = (var / samples as f64).sqrt();
        let lead = expected_extension_count(&p, m, m).map_err(|e| e.to_string())?;
        let z = (mean - lead) / se;
        ok &= z.abs() <= 3.0;
        let exact_finite = binomial_f64(300 - m, 3 - m) * finite;
        parts.push(format!("m={m}: mean {mean:.1}, leading order {lead:.1}, z = {z:+.1}, exact finite-n {exact_finite:.1}"));
        if m == 0 {
            let rel = var / (mean * mean);
            ok &= rel <= 0.1;
            parts.push(format!("var/mean² = {rel:.2e}"));
        }
    }
    ensure(ok, parts.join("; "))
}

fn entropy_bounds() -> Check {
    let mut ratios = Vec::new();
    for n in [500usize, 1000, 2000] {
        let p = params(n, 3, 0.5, 0);
        let h = hypergraph_entropy(&p);
        let lower = projection_entropy_lower_bound(&p).map_err(|e| e.to_string())?;
        if lower > h {
            return Err(format!("n = {n}: lower bound {lower} exceeds H = {h}"));
        }
        let scale = (n as f64).powf(1.5) * (n as f64).ln();
        ratios.push((h / scale, lower / scale));
    }
    let spread = |f: fn(&(f64, f64)) -> f64| {
        let v: Vec<f64> = ratios.iter().map(f).collect();
        v.iter().cloned().fold(f64::MIN, f64::max) / v.iter().cloned().fold(f64::MAX, f64::min)
    };
    let (sh, sl) = (spread(|r| r.0), spread(|r| r.1));
    ensure(
        sh <= 2.0 && sl <= 2.0,
        format!("H/(n^1.5 ln n) spread {sh:.3}, bound/(n^1.5 ln n) spread {sl:.3}"),
    )
}

fn run_cli(args: &[&str], threads: &str) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_hyperec"))
        .args(args)
        .env("HYPEREC_THREADS", threads)
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!(
            "{args:?} exited {}: {}",
            out.status,
            String::from_utf8_lossy(&out.stderr)
        ));
    }
    Ok(out.stdout)
}

fn write_cli(args: &[&str], file: &Path) -> Result<String, String> {
    std::fs::write(file, run_cli(args, "1")?).map_err(|e| e.to_string())?;
    Ok(file.to_str().unwrap().to_owned())
}

fn determinism() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let sample = [
        "sample", "--n", "50", "--d", "3", "--delta", "0.4", "--seed", "10",
    ];
    let h = write_cli(&sample, &dir.path().join("h.hg"))?;
    let g = write_cli(&["project", "--in", &h], &dir.path().join("g.g"))?;
    let w = write_cli(
        &["project", "--in", &h, "--weighted"],
        &dir.path().join("w.wg"),
    )?;
    let tiny = write_cli(
        &[
            "sample", "--n", "5", "--d", "3", "--delta", "1.5", "--seed", "3",
        ],
        &dir.path().join("t.hg"),
    )?;
    let tg = write_cli(&["project", "--in", &tiny], &dir.path().join("t.g"))?;
    let sweep = |algo: &'static str, to: &'static str| {
        vec![
            "sweep",
            "--n",
            "40",
            "--d",
            "3",
            "--delta-from",
            "0.2",
            "--delta-to",
            to,
            "--delta-step",
            "0.3",
            "--trials",
            "20",
            "--seed",
            "4",
            "--algo",
            algo,
        ]
    };
    let commands: Vec<Vec<&str>> = vec![
        sample.to_vec(),
        vec!["project", "--in", &h],
        vec!["project", "--in", &h, "--weighted"],
        vec![
            "recover", "--algo", "map", "--in", &g, "--d", "3", "--truth", &h,
        ],
        vec![
            "recover",
            "--algo",
            "map",
            "--in",
            &g,
            "--d",
            "3",
            "--tie-seed",
            "5",
        ],
        vec![
            "recover",
            "--algo",
            "map-weighted",
            "--in",
            &w,
            "--d",
            "3",
            "--truth",
            &h,
        ],
        vec![
            "recover",
            "--algo",
            "clique-cover",
            "--in",
            &g,
            "--d",
            "3",
            "--truth",
            &h,
        ],
        vec![
            "recover", "--algo", "empty", "--in", &g, "--d", "3", "--truth", &h,
        ],
        sweep("clique-cover", "0.8"),
        sweep("map", "0.5"),
        sweep("map-weighted", "0.5"),
        vec!["ambiguity", "--gadget", "gad", "--d", "3"],
        vec!["ambiguity", "--gadget", "gadw", "--d", "4"],
        vec!["ambiguity", "--in", &g, "--d", "3"],
        vec!["ambiguity", "--search-max-edges", "4"],
        vec![
            "oracle",
            "--quantity",
            "posterior",
            "--n",
            "5",
            "--d",
            "3",
            "--p",
            "1/10",
            "--in",
            &tg,
        ],
        vec![
            "oracle",
            "--quantity",
            "loss",
            "--n",
            "6",
            "--d",
            "3",
            "--p",
            "1/10",
            "--weighted",
        ],
        vec![
            "oracle",
            "--quantity",
            "overlap",
            "--n",
            "6",
            "--d",
            "3",
            "--p",
            "0.2",
        ],
        vec![
            "oracle",
            "--quantity",
            "corr",
            "--n",
            "6",
            "--d",
            "3",
            "--p",
            "1/20",
            "--edges",
            "0,1,2;3,4,5",
        ],
    ];
    for args in &commands {
        let reference = run_cli(args, "1")?;
        for threads in ["1", "4", "4"] {
            if run_cli(args, threads)? != reference {
                return Err(format!("{args:?} differs under HYPEREC_THREADS={threads}"));
            }
        }
    }
    Ok(format!(
        "{} invocations byte-identical at 1 and 4 threads",
        commands.len()
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        (
            "gadget identities",
            Duration::from_secs(1),
            gadget_identities,
        ),
        (
            "ambiguity census",
            Duration::from_secs(10),
            ambiguity_census,
        ),
        (
            "fake-edge density",
            Duration::from_secs(300),
            fake_edge_frequency,
        ),
        (
            "clique-cover phase transition",
            Duration::from_secs(600),
            clique_cover_transition,
        ),
        (
            "exact recovery below threshold",
            Duration::from_secs(600),
            exact_recovery_below_threshold,
        ),
        (
            "oracle identities",
            Duration::from_secs(120),
            oracle_identities,
        ),
        (
            "density engine equivalence",
            Duration::from_secs(120),
            density_equivalence,
        ),
        (
            "extension-count formula",
            Duration::from_secs(300),
            extension_count_formula,
        ),
        ("entropy bounds", Duration::from_secs(1), entropy_bounds),
        ("CLI determinism", Duration::from_secs(600), determinism),
    ];
    let mut failed = 0;
    for (i, (name, limit, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let took = start.elapsed();
        let (pass, detail) = match result {
            Ok(msg) if took <= *limit => (true, msg),
            Ok(msg) => (false, format!("{msg}; took {took:.1?}, limit {limit:?}")),
            Err(msg) => (false, msg),
        };
        failed += usize::from(!pass);
        let tag = if pass { "PASS" } else { "FAIL" };
        println!("{tag} {:>2} {name} [{took:.2?}]: {detail}", i + 1);
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
