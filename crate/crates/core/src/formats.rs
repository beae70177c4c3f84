//! On-disk formats.
//!
//! Set cover (`.sc`), line-oriented:
//!
//! ```text
//! c comment
//! p sc <N> <M>
//! s <cost> <e1> <e2> ...      (M lines)
//! ```
//!
//! Directed Steiner tree (`.dst`), line-oriented:
//!
//! ```text
//! p dst <n> <m>
//! a <tail> <head> <cost>      (m lines)
//! r <root>
//! t <v>                       (one per terminal)
//! ```
//!
//! Costs are integers, decimals or `p/q`. Label Cover instances, labelings
//! and partition systems are JSON. Parsing canonicalizes (members, arcs and
//! terminals sorted) but does not validate; `emit(parse(x))` is canonical
//! and `parse(emit(x)) == x` for every parsed `x`.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::instances::{Arc, DstInstance, LabelCoverInstance, LcEdge, SetCoverInstance, WeightedSet};
use crate::rational::{common_scale, format_rational, parse_rational, Rational};

/// A malformed input; `line` is 1-based, 0 when no line applies.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError { line, message: message.into() }
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split_whitespace().collect::<Vec<_>>()))
        .filter(|(_, tokens)| !tokens.is_empty() && tokens[0] != "c")
}

fn number<T: FromStr>(line: usize, token: &str, what: &str) -> Result<T, ParseError> {
    token.parse().map_err(|_| err(line, format!("`{token}` is not a valid {what}")))
}

fn cost(line: usize, token: &str) -> Result<Rational, ParseError> {
    parse_rational(token).map_err(|e| err(line, e.to_string()))
}

fn rescale(costs: &[Rational]) -> Result<(Vec<i64>, i64), ParseError> {
    common_scale(costs).ok_or_else(|| err(0, "costs have no common denominator within 64 bits"))
}

fn header(line: usize, tokens: &[&str], kind: &str) -> Result<(usize, usize), ParseError> {
    if tokens.len() != 4 || tokens[1] != kind {
        return Err(err(line, format!("expected `p {kind} <count> <count>`")));
    }
    Ok((number(line, tokens[2], "count")?, number(line, tokens[3], "count")?))
}

pub fn parse_sc(text: &str) -> Result<SetCoverInstance, ParseError> {
    let mut dims = None;
    let mut costs = Vec::new();
    let mut members = Vec::new();
    let mut last = 0;
    for (line, tokens) in content_lines(text) {
        last = line;
        match (tokens[0], dims) {
            ("p", None) => dims = Some(header(line, &tokens, "sc")?),
            ("p", Some(_)) => return Err(err(line, "duplicate header")),
            ("s", Some((n, m))) => {
                if costs.len() == m {
                    return Err(err(line, format!("more than the {m} declared sets")));
                }
                let c = cost(line, tokens.get(1).ok_or_else(|| err(line, "set without a cost"))?)?;
                let mut set = tokens[2..]
                    .iter()
                    .map(|t| {
                        let e: usize = number(line, t, "element id")?;
                        if e >= n {
                            return Err(err(line, format!("element {e} is outside [0, {n})")));
                        }
                        Ok(e)
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                set.sort_unstable();
                costs.push(c);
                members.push(set);
            }
            (_, None) => return Err(err(line, "content before the `p sc` header")),
            (other, _) => return Err(err(line, format!("unknown line type `{other}`"))),
        }
    }
    let (n, m) = dims.ok_or_else(|| err(0, "missing `p sc` header"))?;
    if costs.len() != m {
        return Err(err(last, format!("header declares {m} sets, found {}", costs.len())));
    }
    let (nums, scale) = rescale(&costs)?;
    let sets = nums.into_iter().zip(members).map(|(cost, members)| WeightedSet { cost, members }).collect();
    Ok(SetCoverInstance::from_parts_unchecked(n, sets, scale))
}

pub fn emit_sc(sc: &SetCoverInstance) -> String {
    let mut out = format!("p sc {} {}\n", sc.universe_size(), sc.set_count());
    for s in sc.sets() {
        out.push_str("s ");
        out.push_str(&format_rational(&sc.cost_value(s.cost)));
        for e in &s.members {
            write!(out, " {e}").expect("writing to a String");
        }
        out.push('\n');
    }
    out
}

pub fn parse_dst(text: &str) -> Result<DstInstance, ParseError> {
    let mut dims = None;
    let mut arcs = Vec::new();
    let mut costs = Vec::new();
    let mut root = None;
    let mut terminals = Vec::new();
    let mut last = 0;
    let vertex = |line: usize, token: Option<&&str>, n: usize| -> Result<usize, ParseError> {
        let token = token.ok_or_else(|| err(line, "missing vertex id"))?;
        let v: usize = number(line, token, "vertex id")?;
        if v >= n {
            return Err(err(line, format!("vertex {v} is outside [0, {n})")));
        }
        Ok(v)
    };
    for (line, tokens) in content_lines(text) {
        last = line;
        let expect = |len: usize| {
            if tokens.len() == len {
                Ok(())
            } else {
                Err(err(line, format!("`{}` lines take {} fields", tokens[0], len - 1)))
            }
        };
        match (tokens[0], dims) {
            ("p", None) => dims = Some(header(line, &tokens, "dst")?),
            ("p", Some(_)) => return Err(err(line, "duplicate header")),
            ("a", Some((n, m))) => {
                expect(4)?;
                if arcs.len() == m {
                    return Err(err(line, format!("more than the {m} declared arcs")));
                }
                arcs.push((vertex(line, tokens.get(1), n)?, vertex(line, tokens.get(2), n)?));
                costs.push(cost(line, tokens[3])?);
            }
            ("r", Some((n, _))) => {
                expect(2)?;
                if root.is_some() {
                    return Err(err(line, "duplicate root"));
                }
                root = Some(vertex(line, tokens.get(1), n)?);
            }
            ("t", Some((n, _))) => {
                expect(2)?;
                terminals.push(vertex(line, tokens.get(1), n)?);
            }
            (_, None) => return Err(err(line, "content before the `p dst` header")),
            (other, _) => return Err(err(line, format!("unknown line type `{other}`"))),
        }
    }
    let (n, m) = dims.ok_or_else(|| err(0, "missing `p dst` header"))?;
    if arcs.len() != m {
        return Err(err(last, format!("header declares {m} arcs, found {}", arcs.len())));
    }
    let root = root.ok_or_else(|| err(0, "missing `r <root>` line"))?;
    let (nums, scale) = rescale(&costs)?;
    let mut arcs: Vec<Arc> = arcs.into_iter().zip(nums).map(|((t, h), c)| Arc::new(t, h, c)).collect();
    arcs.sort_unstable();
    terminals.sort_unstable();
    Ok(DstInstance::from_parts_unchecked(n, arcs, root, terminals, scale))
}

pub fn emit_dst(d: &DstInstance) -> String {
    let mut out = format!("p dst {} {}\n", d.vertex_count(), d.arcs().len());
    for a in d.arcs() {
        writeln!(out, "a {} {} {}", a.tail, a.head, format_rational(&d.cost_value(a.cost))).expect("writing to a String");
    }
    writeln!(out, "r {}", d.root()).expect("writing to a String");
    for t in d.terminals() {
        writeln!(out, "t {t}").expect("writing to a String");
    }
    out
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LcFile {
    a_count: usize,
    b_count: usize,
    sigma_a: usize,
    sigma_b: usize,
    edges: Vec<LcEdge>,
}

fn json_error(e: serde_json::Error) -> ParseError {
    err(e.line(), e.to_string())
}

/// Parses the JSON form; endpoints and projection symbols are range-checked.
pub fn parse_lc(text: &str) -> Result<LabelCoverInstance, ParseError> {
    let file: LcFile = serde_json::from_str(text).map_err(json_error)?;
    for (i, e) in file.edges.iter().enumerate() {
        if e.a >= file.a_count || e.b >= file.b_count {
            return Err(err(0, format!("edge {i}: endpoint ({}, {}) out of range", e.a, e.b)));
        }
        if let Some(&s) = e.projection.iter().find(|&&s| s >= file.sigma_b) {
            return Err(err(0, format!("edge {i}: projection symbol {s} is outside [0, {})", file.sigma_b)));
        }
    }
    let lc = LabelCoverInstance::from_parts_unchecked(
        file.a_count,
        file.b_count,
        file.sigma_a,
        file.sigma_b,
        file.edges,
        None,
    );
    let degrees = lc.biregular_degrees();
    Ok(LabelCoverInstance::from_parts_unchecked(
        lc.a_count(),
        lc.b_count(),
        lc.sigma_a(),
        lc.sigma_b(),
        lc.edges().to_vec(),
        degrees,
    ))
}

pub fn emit_lc(lc: &LabelCoverInstance) -> String {
    let file = LcFile {
        a_count: lc.a_count(),
        b_count: lc.b_count(),
        sigma_a: lc.sigma_a(),
        sigma_b: lc.sigma_b(),
        edges: lc.edges().to_vec(),
    };
    emit_json(&file)
}

/// Pretty JSON with a trailing newline.
pub fn emit_json<T: Serialize>(value: &T) -> String {
    let mut out = serde_json::to_string_pretty(value).expect("plain data serializes");
    out.push('\n');
    out
}

pub fn parse_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T, ParseError> {
    serde_json::from_str(text).map_err(json_error)
}
