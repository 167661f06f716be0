//! Line-oriented text format for hypergraphs and configurations.
//!
//! ```text
//! k n m            simple: m lines of k strictly increasing vertex ids
//! k n m multi      multi:  m lines of k non-decreasing ids, optional "xC"
//! ```
//!
//! Blank lines are ignored. Errors carry 1-based line numbers.

use std::collections::HashMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::hypercore::{HyperEdges, Hypergraph, HypergraphError, MultiHypergraph};
use crate::randmodels::Configuration;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    Invalid { line: usize, source: HypergraphError },
    #[error("expected {expected} edge lines, found {found}")]
    EdgeCount { expected: usize, found: usize },
    #[error("empty input")]
    Empty,
}

fn syntax(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax { line, message: message.into() }
}

/// Either flavour of parsed input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParsedHypergraph {
    Simple(Hypergraph),
    Multi(MultiHypergraph),
}

impl ParsedHypergraph {
    pub fn into_multi(self) -> MultiHypergraph {
        match self {
            Self::Simple(h) => h.to_multi(),
            Self::Multi(m) => m,
        }
    }

    pub fn into_simple(self) -> Result<Hypergraph, HypergraphError> {
        match self {
            Self::Simple(h) => Ok(h),
            Self::Multi(m) => m.to_simple(),
        }
    }
}

fn parse_usize(tok: &str, line: usize, what: &str) -> Result<usize, ParseError> {
    tok.parse::<usize>().map_err(|_| syntax(line, format!("invalid {what} `{tok}`")))
}

pub fn parse(text: &str) -> Result<ParsedHypergraph, ParseError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty());
    let (hline, header) = lines.next().ok_or(ParseError::Empty)?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    let multi = match fields.len() {
        3 => false,
        4 if fields[3] == "multi" => true,
        _ => return Err(syntax(hline, "header must be `k n m` or `k n m multi`")),
    };
    let k = parse_usize(fields[0], hline, "k")?;
    let n = parse_usize(fields[1], hline, "n")?;
    let m = parse_usize(fields[2], hline, "m")?;
    if k < 2 {
        return Err(ParseError::Invalid { line: hline, source: HypergraphError::UniformityTooSmall(k) });
    }
    if !multi && k > n {
        return Err(ParseError::Invalid { line: hline, source: HypergraphError::UniformityExceedsOrder { k, n } });
    }

    let mut tuples: Vec<(Vec<usize>, usize)> = Vec::with_capacity(m);
    let mut line_of: HashMap<Vec<usize>, usize> = HashMap::with_capacity(m);
    for (lno, l) in lines {
        if tuples.len() == m {
            return Err(syntax(lno, format!("unexpected line after {m} edges")));
        }
        let mut toks: Vec<&str> = l.split_whitespace().collect();
        let mut mult = 1;
        if multi {
            if let Some(last) = toks.last() {
                if let Some(c) = last.strip_prefix('x') {
                    mult = parse_usize(c, lno, "multiplicity")?;
                    if mult == 0 {
                        return Err(syntax(lno, "multiplicity must be positive"));
                    }
                    toks.pop();
                }
            }
        }
        if toks.len() != k {
            return Err(syntax(lno, format!("expected {k} vertex ids, found {}", toks.len())));
        }
        let ids = toks.iter().map(|t| parse_usize(t, lno, "vertex id")).collect::<Result<Vec<_>, _>>()?;
        if let Some(&v) = ids.iter().find(|&&v| v >= n) {
            return Err(syntax(lno, format!("vertex {v} outside 0..{n}")));
        }
        let ordered = if multi { ids.windows(2).all(|w| w[0] <= w[1]) } else { ids.windows(2).all(|w| w[0] < w[1]) };
        if !ordered {
            let need = if multi { "non-decreasing" } else { "strictly increasing" };
            return Err(syntax(lno, format!("vertex ids must be {need}")));
        }
        if let Some(prev) = line_of.insert(ids.clone(), lno) {
            return Err(syntax(lno, format!("duplicate of the edge on line {prev}")));
        }
        tuples.push((ids, mult));
    }
    if tuples.len() != m {
        return Err(ParseError::EdgeCount { expected: m, found: tuples.len() });
    }
    if multi {
        MultiHypergraph::from_tuples(k, n, tuples)
            .map(ParsedHypergraph::Multi)
            .map_err(|source| ParseError::Invalid { line: hline, source })
    } else {
        let edges: Vec<Vec<usize>> = tuples.into_iter().map(|(t, _)| t).collect();
        Hypergraph::new(k, n, &edges)
            .map(ParsedHypergraph::Simple)
            .map_err(|source| ParseError::Invalid { line: hline, source })
    }
}

pub fn parse_simple(text: &str) -> Result<Hypergraph, ParseError> {
    match parse(text)? {
        ParsedHypergraph::Simple(h) => Ok(h),
        ParsedHypergraph::Multi(m) => {
            m.to_simple().map_err(|source| ParseError::Invalid { line: 1, source })
        }
    }
}

pub fn write_hypergraph(h: &Hypergraph) -> String {
    let mut out = format!("{} {} {}\n", h.k(), h.n(), h.edge_count());
    for e in h.edges() {
        push_ids(&mut out, e);
        out.push('\n');
    }
    out
}

pub fn write_multi(h: &MultiHypergraph) -> String {
    let mut out = format!("{} {} {} multi\n", h.k(), h.n(), h.distinct_tuples());
    for (t, mult) in h.tuples() {
        push_ids(&mut out, t);
        if mult > 1 {
            let _ = write!(out, " x{mult}");
        }
        out.push('\n');
    }
    out
}

/// Block partition as `m` lines of `k` point ids followed by one line giving
/// the owning vertex of every point.
pub fn write_configuration(c: &Configuration) -> String {
    let mut out = String::new();
    for block in c.blocks() {
        push_ids(&mut out, block);
        out.push('\n');
    }
    push_ids(&mut out, &c.point_owners());
    out.push('\n');
    out
}

fn push_ids(out: &mut String, ids: &[usize]) {
    for (i, v) in ids.iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        let _ = write!(out, "{v}");
    }
}
