//! Instance generators from hardness reductions, with forward solution lifting.

mod binpack;
mod mcc;
mod subdivide;
mod vc3;

use std::fmt::Write as _;

use thiserror::Error;

pub use binpack::{
    gen_binpack, lift_binpack_solution, to_exact_binpacking, BinPackingInstance, ExactBinPacking,
};
pub use mcc::{gen_mcc, lift_mcc_solution, normalize_mcc, parse_mcc, write_mcc, MccInstance};
pub use subdivide::{subdivide, Subdivision};
pub use vc3::{gen_vc3, parse_edge_graph, write_edge_graph, UndirectedGraph};

use crate::digraph::{GraphError, MultiDigraph, Vertex};
use crate::format::{content_lines, parse_num, syntax, FormatError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GadgetError {
    #[error("invalid parameter: {0}")]
    BadParameter(String),
    #[error("invalid multicolored clique instance: {0}")]
    InvalidMcc(String),
    #[error("color class {class} is degenerate: {reason}")]
    DegenerateClass { class: usize, reason: String },
    #[error("not a multicolored clique: {0}")]
    NotAClique(String),
    #[error("bin packing instance is not exact: sizes sum to {sum}, bins hold {capacity}")]
    NotExact { sum: usize, capacity: usize },
    #[error("invalid packing: {0}")]
    InvalidPacking(String),
    #[error("graph is not simple and cubic: {0}")]
    NotCubic(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Adds a `(b, c)`-imbalance gadget from `u` to `v`: `b` fresh intermediate
/// vertices on a path, each of the `b + 1` segments carrying `b + 1 + c`
/// forward and `b + 1` backward copies. Returns the intermediates.
///
/// `c = 0` is accepted and yields a balanced gadget.
pub fn imbalance_gadget(
    g: &mut MultiDigraph,
    b: usize,
    c: usize,
    u: Vertex,
    v: Vertex,
) -> Result<Vec<Vertex>, GadgetError> {
    if b == 0 {
        return Err(GadgetError::BadParameter("imbalance gadget needs b >= 1".into()));
    }
    let path = fresh_path(g, b, u, v)?;
    for w in path.windows(2) {
        g.add_arcs(w[0], w[1], b + 1 + c)?;
        g.add_arcs(w[1], w[0], b + 1)?;
    }
    Ok(path[1..=b].to_vec())
}

/// Adds a `(b, c)`-path gadget: like the imbalance gadget but with `c` forward
/// copies per segment and no backward arcs.
pub fn path_gadget(
    g: &mut MultiDigraph,
    b: usize,
    c: usize,
    u: Vertex,
    v: Vertex,
) -> Result<Vec<Vertex>, GadgetError> {
    if b == 0 || c == 0 {
        return Err(GadgetError::BadParameter("path gadget needs b, c >= 1".into()));
    }
    let path = fresh_path(g, b, u, v)?;
    for w in path.windows(2) {
        g.add_arcs(w[0], w[1], c)?;
    }
    Ok(path[1..=b].to_vec())
}

fn fresh_path(g: &mut MultiDigraph, b: usize, u: Vertex, v: Vertex) -> Result<Vec<Vertex>, GadgetError> {
    g.check_vertex(u)?;
    g.check_vertex(v)?;
    if u == v {
        return Err(GadgetError::Graph(GraphError::SelfLoop(u)));
    }
    let mut path = vec![u];
    path.extend((0..b).map(|_| g.add_vertex()));
    path.push(v);
    Ok(path)
}

/// Describes a generated instance: who made it, with what budget, and the
/// role of every vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GadgetMetadata {
    pub generator: String,
    pub params: Vec<(String, String)>,
    pub k: usize,
    /// `roles[v - 1]` names vertex `v`.
    pub roles: Vec<String>,
}

impl GadgetMetadata {
    pub fn role(&self, v: Vertex) -> &str {
        &self.roles[v - 1]
    }

    /// Vertex carrying exactly this role, if any.
    pub fn vertex(&self, role: &str) -> Option<Vertex> {
        self.roles.iter().position(|r| r == role).map(|i| i + 1)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "meta generator={}", self.generator).unwrap();
        writeln!(out, "meta k={}", self.k).unwrap();
        for (key, value) in &self.params {
            writeln!(out, "meta {key}={value}").unwrap();
        }
        for (i, r) in self.roles.iter().enumerate() {
            writeln!(out, "role {} {r}", i + 1).unwrap();
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, FormatError> {
        let mut generator = None;
        let mut k = None;
        let mut params = Vec::new();
        let mut roles: Vec<(usize, String)> = Vec::new();
        for (line, toks) in content_lines(text) {
            match toks[0] {
                "meta" if toks.len() == 2 => {
                    let (key, value) = toks[1]
                        .split_once('=')
                        .ok_or_else(|| syntax(line, "expected key=value"))?;
                    match key {
                        "generator" => generator = Some(value.to_string()),
                        "k" => k = Some(parse_num(line, value)?),
                        _ => params.push((key.to_string(), value.to_string())),
                    }
                }
                "role" if toks.len() == 3 => {
                    let v = parse_num(line, toks[1])?;
                    if v != roles.len() + 1 {
                        return Err(syntax(line, "role lines must list vertices 1, 2, ... in order"));
                    }
                    roles.push((v, toks[2].to_string()));
                }
                _ => return Err(syntax(line, "expected a meta or role line")),
            }
        }
        Ok(Self {
            generator: generator.ok_or(FormatError::MissingHeader)?,
            params,
            k: k.ok_or(FormatError::MissingHeader)?,
            roles: roles.into_iter().map(|(_, r)| r).collect(),
        })
    }
}
