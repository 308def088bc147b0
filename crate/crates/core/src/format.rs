//! Line-oriented text formats for graphs and deletion sets.

use std::fmt::Write as _;

use thiserror::Error;

use crate::digraph::{ArcMultiset, GraphError, MultiDigraph};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("missing header line")]
    MissingHeader,
    #[error("declared {declared} arcs but found {found}")]
    ArcCountMismatch { declared: usize, found: usize },
    #[error("declared size {declared} but found {found}")]
    SizeMismatch { declared: usize, found: usize },
    #[error("line {line}: duplicate entry for ({u},{v})")]
    DuplicatePair { line: usize, u: usize, v: usize },
    #[error("line {line}: {source}")]
    Graph {
        line: usize,
        #[source]
        source: GraphError,
    },
}

pub(crate) fn syntax(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Syntax {
        line,
        msg: msg.into(),
    }
}

/// Splits text into `(line number, tokens)` pairs, skipping blanks and `c` comments.
pub(crate) fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let toks: Vec<&str> = raw.split_whitespace().collect();
        match toks.first() {
            None => None,
            Some(&"c") => None,
            Some(_) => Some((i + 1, toks)),
        }
    })
}

pub(crate) fn parse_num(line: usize, tok: &str) -> Result<usize, FormatError> {
    tok.parse::<usize>()
        .map_err(|_| syntax(line, format!("expected a non-negative integer, got {tok:?}")))
}

fn expect_len(line: usize, toks: &[&str], len: usize) -> Result<(), FormatError> {
    if toks.len() != len {
        return Err(syntax(
            line,
            format!("expected {len} fields, got {}", toks.len()),
        ));
    }
    Ok(())
}

/// Parses a `p escad n m` graph file.
pub fn parse_graph(text: &str) -> Result<MultiDigraph, FormatError> {
    let mut g: Option<MultiDigraph> = None;
    let mut declared = 0;
    for (line, toks) in content_lines(text) {
        match toks[0] {
            "p" => {
                if g.is_some() {
                    return Err(syntax(line, "second header line"));
                }
                expect_len(line, &toks, 4)?;
                if toks[1] != "escad" {
                    return Err(syntax(line, format!("unknown problem {:?}", toks[1])));
                }
                g = Some(MultiDigraph::new(parse_num(line, toks[2])?));
                declared = parse_num(line, toks[3])?;
            }
            "a" => {
                let g = g.as_mut().ok_or(FormatError::MissingHeader)?;
                expect_len(line, &toks, 4)?;
                let u = parse_num(line, toks[1])?;
                let v = parse_num(line, toks[2])?;
                let c = parse_num(line, toks[3])?;
                if g.multiplicity(u, v) > 0 {
                    return Err(FormatError::DuplicatePair { line, u, v });
                }
                g.add_arcs(u, v, c)
                    .map_err(|source| FormatError::Graph { line, source })?;
            }
            other => return Err(syntax(line, format!("unexpected line type {other:?}"))),
        }
    }
    let g = g.ok_or(FormatError::MissingHeader)?;
    if g.m() != declared {
        return Err(FormatError::ArcCountMismatch {
            declared,
            found: g.m(),
        });
    }
    Ok(g)
}

pub fn write_graph(g: &MultiDigraph) -> String {
    let mut out = String::new();
    writeln!(out, "p escad {} {}", g.n(), g.m()).unwrap();
    for ((u, v), c) in g.arcs() {
        writeln!(out, "a {u} {v} {c}").unwrap();
    }
    out
}

/// Parses a solution file (`s size` then `d u v c` lines).
pub fn parse_solution(text: &str) -> Result<ArcMultiset, FormatError> {
    let mut declared: Option<usize> = None;
    let mut s = ArcMultiset::new();
    for (line, toks) in content_lines(text) {
        match toks[0] {
            "s" => {
                if declared.is_some() {
                    return Err(syntax(line, "second header line"));
                }
                expect_len(line, &toks, 2)?;
                declared = Some(parse_num(line, toks[1])?);
            }
            "d" => {
                if declared.is_none() {
                    return Err(FormatError::MissingHeader);
                }
                expect_len(line, &toks, 4)?;
                let u = parse_num(line, toks[1])?;
                let v = parse_num(line, toks[2])?;
                let c = parse_num(line, toks[3])?;
                if c == 0 || u == v {
                    return Err(syntax(line, "invalid deletion entry"));
                }
                if s.count(u, v) > 0 {
                    return Err(FormatError::DuplicatePair { line, u, v });
                }
                s.insert(u, v, c);
            }
            other => return Err(syntax(line, format!("unexpected line type {other:?}"))),
        }
    }
    let declared = declared.ok_or(FormatError::MissingHeader)?;
    if s.size() != declared {
        return Err(FormatError::SizeMismatch {
            declared,
            found: s.size(),
        });
    }
    Ok(s)
}

pub fn write_solution(s: &ArcMultiset) -> String {
    let mut out = String::new();
    writeln!(out, "s {}", s.size()).unwrap();
    for ((u, v), c) in s.iter() {
        writeln!(out, "d {u} {v} {c}").unwrap();
    }
    out
}
