//! Plain-text hypergraph files.
//!
//! ```text
//! # optional comments
//! k m n
//! i_1 ... i_k      (m lines, 1-based vertex indices)
//! ```

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn parse_numbers(line_no: usize, line: &str) -> Result<Vec<usize>> {
    line.split_whitespace()
        .map(|tok| {
            tok.parse::<usize>()
                .map_err(|_| parse_err(line_no, format!("expected a non-negative integer, found {tok:?}")))
        })
        .collect()
}

/// Parses the text format. Comment (`#`) and blank lines are skipped.
pub fn parse_hypergraph(text: &str, allow_isolated: bool) -> Result<Hypergraph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (hline, header) = lines.next().ok_or_else(|| parse_err(1, "missing header `k m n`"))?;
    let header = parse_numbers(hline, header)?;
    let [k, m, n] = header[..] else {
        return Err(parse_err(hline, "header must be `k m n`"));
    };
    if k == 0 || m == 0 || n == 0 {
        return Err(parse_err(hline, "k, m and n must be positive"));
    }

    let mut edges = Vec::with_capacity(m);
    let mut last_line = hline;
    for (line_no, line) in lines {
        last_line = line_no;
        if edges.len() == m {
            return Err(parse_err(line_no, format!("more than the declared {m} edges")));
        }
        let row = parse_numbers(line_no, line)?;
        if row.len() != k {
            return Err(parse_err(line_no, format!("expected {k} indices, found {}", row.len())));
        }
        if let Some(&v) = row.iter().find(|&&v| v == 0 || v > n) {
            return Err(parse_err(line_no, format!("vertex index {v} outside 1..={n}")));
        }
        edges.push(row.into_iter().map(|v| v - 1).collect::<Vec<_>>());
    }
    if edges.len() != m {
        return Err(parse_err(
            last_line,
            format!("declared {m} edges, found {}", edges.len()),
        ));
    }
    Hypergraph::new(k, n, &edges, allow_isolated)
}

/// Renders `h` in canonical order with 1-based indices.
pub fn format_hypergraph(h: &Hypergraph) -> String {
    let mut out = String::with_capacity(h.m() * h.k() * 4 + 16);
    let _ = writeln!(out, "{} {} {}", h.k(), h.m(), h.n());
    for e in h.edges() {
        let mut first = true;
        for &v in e {
            if !first {
                out.push(' ');
            }
            first = false;
            let _ = write!(out, "{}", v + 1);
        }
        out.push('\n');
    }
    out
}

pub fn read_hypergraph(path: impl AsRef<Path>) -> Result<Hypergraph> {
    let text = fs::read_to_string(path)?;
    parse_hypergraph(&text, false)
}

pub fn write_hypergraph(h: &Hypergraph, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, format_hypergraph(h))?;
    Ok(())
}
