//! Plain-text formats.
//!
//! ```text
//! HG <n> <d>      G <n>       WG <n>
//! 0 1 2           0 1         0 1 2
//! 1 2 3           1 2         1 2 1
//! ```
//!
//! Hyperedges are written as ascending ids, graph edges as `u v` with `u < v`
//! and weighted edges as `u v w` with `w >= 1`. Blank lines are ignored.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::{Observed, SimpleGraph, WeightedGraph};
use crate::hypergraph::{Hypergraph, Vertex};

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn numbers(line: usize, text: &str) -> Result<Vec<u64>> {
    text.split_whitespace()
        .map(|t| {
            t.parse::<u64>()
                .map_err(|_| parse_err(line, format!("not a non-negative integer: {t:?}")))
        })
        .collect()
}

fn vertex(line: usize, x: u64, n: usize) -> Result<Vertex> {
    if x >= n as u64 {
        return Err(parse_err(
            line,
            format!("vertex {x} out of range for n = {n}"),
        ));
    }
    Ok(x as Vertex)
}

/// Splits into (line number, content) for non-blank lines.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty())
}

fn header<'a>(
    lines: &mut impl Iterator<Item = (usize, &'a str)>,
    tag: &str,
    args: usize,
) -> Result<Vec<usize>> {
    let (no, line) = lines.next().ok_or_else(|| parse_err(1, "missing header"))?;
    let mut parts = line.split_whitespace();
    if parts.next() != Some(tag) {
        return Err(parse_err(
            no,
            format!("expected header starting with {tag:?}"),
        ));
    }
    let rest: Vec<&str> = parts.collect();
    let vals = numbers(no, &rest.join(" "))?;
    if vals.len() != args {
        return Err(parse_err(
            no,
            format!("header {tag} takes {args} number(s)"),
        ));
    }
    Ok(vals.into_iter().map(|v| v as usize).collect())
}

pub fn parse_hypergraph(text: &str) -> Result<Hypergraph> {
    let mut lines = content_lines(text);
    let h = header(&mut lines, "HG", 2)?;
    let (n, d) = (h[0], h[1]);
    if d < 2 {
        return Err(parse_err(1, format!("uniformity {d} < 2")));
    }
    let mut edges: Vec<Vec<Vertex>> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for (no, line) in lines {
        let vals = numbers(no, line)?;
        if vals.len() != d {
            return Err(parse_err(
                no,
                format!("expected {d} vertices, found {}", vals.len()),
            ));
        }
        let e = vals
            .into_iter()
            .map(|x| vertex(no, x, n))
            .collect::<Result<Vec<_>>>()?;
        if e.windows(2).any(|w| w[0] >= w[1]) {
            return Err(parse_err(no, "hyperedge ids must be strictly ascending"));
        }
        if !seen.insert(e.clone()) {
            return Err(parse_err(no, "duplicate hyperedge"));
        }
        edges.push(e);
    }
    Hypergraph::new(n, d, edges)
}

pub fn parse_graph(text: &str) -> Result<SimpleGraph> {
    let mut lines = content_lines(text);
    let n = header(&mut lines, "G", 1)?[0];
    let mut pairs = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for (no, line) in lines {
        let vals = numbers(no, line)?;
        if vals.len() != 2 {
            return Err(parse_err(no, "expected `u v`"));
        }
        let (u, v) = (vertex(no, vals[0], n)?, vertex(no, vals[1], n)?);
        if u >= v {
            return Err(parse_err(no, "edge must satisfy u < v"));
        }
        if !seen.insert((u, v)) {
            return Err(parse_err(no, "duplicate edge"));
        }
        pairs.push((u, v));
    }
    SimpleGraph::new(n, pairs)
}

pub fn parse_weighted_graph(text: &str) -> Result<WeightedGraph> {
    let mut lines = content_lines(text);
    let n = header(&mut lines, "WG", 1)?[0];
    let mut entries = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for (no, line) in lines {
        let vals = numbers(no, line)?;
        if vals.len() != 3 {
            return Err(parse_err(no, "expected `u v w`"));
        }
        let (u, v) = (vertex(no, vals[0], n)?, vertex(no, vals[1], n)?);
        if u >= v {
            return Err(parse_err(no, "edge must satisfy u < v"));
        }
        if vals[2] == 0 || vals[2] > u32::MAX as u64 {
            return Err(parse_err(no, "weight must be a positive 32-bit integer"));
        }
        if !seen.insert((u, v)) {
            return Err(parse_err(no, "duplicate edge"));
        }
        entries.push((u, v, vals[2] as u32));
    }
    WeightedGraph::new(n, entries)
}

/// Parses either graph format, dispatching on the header tag.
pub fn parse_observed(text: &str) -> Result<Observed> {
    let first = content_lines(text).next().map(|(_, l)| l).unwrap_or("");
    match first.split_whitespace().next() {
        Some("G") => parse_graph(text).map(Observed::Plain),
        Some("WG") => parse_weighted_graph(text).map(Observed::Weighted),
        _ => Err(parse_err(1, "expected a `G` or `WG` header")),
    }
}

pub fn write_hypergraph(h: &Hypergraph) -> String {
    let mut out = format!("HG {} {}\n", h.n(), h.d());
    for e in h.edges() {
        let ids: Vec<String> = e.iter().map(|v| v.to_string()).collect();
        out.push_str(&ids.join(" "));
        out.push('\n');
    }
    out
}

pub fn write_graph(g: &SimpleGraph) -> String {
    let mut out = format!("G {}\n", g.n());
    for &(u, v) in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

pub fn write_weighted_graph(w: &WeightedGraph) -> String {
    let mut out = format!("WG {}\n", w.n());
    for &((u, v), wt) in w.entries() {
        let _ = writeln!(out, "{u} {v} {wt}");
    }
    out
}
