//! Vertex Cover on cubic graphs → ESCAD with degrees in {(1,6), (6,1)}.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use super::{GadgetError, GadgetMetadata};
use crate::digraph::{MultiDigraph, Vertex};
use crate::format::{content_lines, parse_num, syntax, FormatError};

/// Simple undirected graph on `1..=n`; edges stored as sorted `(u, v)`, `u < v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UndirectedGraph {
    n: usize,
    edges: Vec<(Vertex, Vertex)>,
}

impl UndirectedGraph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (Vertex, Vertex)>) -> Result<Self, GadgetError> {
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u == 0 || v == 0 || u > n || v > n {
                return Err(GadgetError::BadParameter(format!("edge {u}-{v} out of range")));
            }
            if u == v {
                return Err(GadgetError::BadParameter(format!("loop at {u}")));
            }
            if !set.insert((u.min(v), u.max(v))) {
                return Err(GadgetError::BadParameter(format!("duplicate edge {u}-{v}")));
            }
        }
        Ok(Self {
            n,
            edges: set.into_iter().collect(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    pub fn is_cubic(&self) -> bool {
        (1..=self.n).all(|v| self.degree(v) == 3)
    }
}

/// `(u, 0) = 2u − 1` and `(u, 1) = 2u`. One internal arc per vertex and two
/// copies of `((u,1),(v,0))` and of `((v,1),(u,0))` per edge `uv`.
pub fn gen_vc3(
    g: &UndirectedGraph,
    k: usize,
) -> Result<(MultiDigraph, usize, GadgetMetadata), GadgetError> {
    if let Some(v) = (1..=g.n).find(|&v| g.degree(v) != 3) {
        return Err(GadgetError::NotCubic(format!(
            "vertex {v} has degree {}",
            g.degree(v)
        )));
    }
    let lo = |u: Vertex| 2 * u - 1;
    let hi = |u: Vertex| 2 * u;
    let mut out = MultiDigraph::new(2 * g.n);
    for u in 1..=g.n {
        out.add_arc(lo(u), hi(u))?;
    }
    for &(u, v) in &g.edges {
        out.add_arcs(hi(u), lo(v), 2)?;
        out.add_arcs(hi(v), lo(u), 2)?;
    }
    let roles = (1..=g.n)
        .flat_map(|u| [format!("({u},0)"), format!("({u},1)")])
        .collect();
    let meta = GadgetMetadata {
        generator: "vc3".into(),
        params: vec![
            ("n".into(), g.n.to_string()),
            ("edges".into(), g.edges.len().to_string()),
        ],
        k,
        roles,
    };
    Ok((out, k, meta))
}

/// Parses `p edge n m` followed by `e u v` lines.
pub fn parse_edge_graph(text: &str) -> Result<UndirectedGraph, FormatError> {
    let mut header = None;
    let mut edges = Vec::new();
    for (line, toks) in content_lines(text) {
        match (toks[0], toks.len()) {
            ("p", 4) if toks[1] == "edge" => {
                if header.is_some() {
                    return Err(syntax(line, "second header line"));
                }
                header = Some((parse_num(line, toks[2])?, parse_num(line, toks[3])?));
            }
            ("e", 3) => edges.push((parse_num(line, toks[1])?, parse_num(line, toks[2])?)),
            _ => return Err(syntax(line, "expected a p or e line")),
        }
    }
    let (n, m) = header.ok_or(FormatError::MissingHeader)?;
    if edges.len() != m {
        return Err(FormatError::ArcCountMismatch {
            declared: m,
            found: edges.len(),
        });
    }
    UndirectedGraph::new(n, edges).map_err(|e| syntax(0, e.to_string()))
}

pub fn write_edge_graph(g: &UndirectedGraph) -> String {
    let mut out = String::new();
    writeln!(out, "p edge {} {}", g.n, g.edges.len()).unwrap();
    for &(u, v) in &g.edges {
        writeln!(out, "e {u} {v}").unwrap();
    }
    out
}
