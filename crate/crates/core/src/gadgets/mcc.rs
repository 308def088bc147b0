//! Multicolored Clique → ESCAD.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use super::{imbalance_gadget, path_gadget, GadgetError, GadgetMetadata};
use crate::digraph::{ArcMultiset, MultiDigraph, Vertex};
use crate::format::{content_lines, parse_num, syntax, FormatError};

/// Undirected simple graph on `1..=n` with a partition into `ℓ` color classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MccInstance {
    n: usize,
    edges: Vec<(Vertex, Vertex)>,
    classes: Vec<Vec<Vertex>>,
    color: Vec<usize>,
}

impl MccInstance {
    /// Checks ranges, simplicity and that the classes partition `1..=n`.
    /// The structural clique invariants are checked by [`MccInstance::validate`].
    pub fn new(
        n: usize,
        edges: impl IntoIterator<Item = (Vertex, Vertex)>,
        classes: Vec<Vec<Vertex>>,
    ) -> Result<Self, GadgetError> {
        let bad = |m: String| Err(GadgetError::InvalidMcc(m));
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u == 0 || v == 0 || u > n || v > n {
                return bad(format!("edge {u}-{v} out of range"));
            }
            if u == v {
                return bad(format!("loop at {u}"));
            }
            if !set.insert((u.min(v), u.max(v))) {
                return bad(format!("duplicate edge {u}-{v}"));
            }
        }
        let mut color = vec![usize::MAX; n + 1];
        let mut classes = classes;
        for (j, class) in classes.iter_mut().enumerate() {
            class.sort_unstable();
            for &v in class.iter() {
                if v == 0 || v > n {
                    return bad(format!("class {} holds unknown vertex {v}", j + 1));
                }
                if color[v] != usize::MAX {
                    return bad(format!("vertex {v} is in two classes"));
                }
                color[v] = j;
            }
        }
        if let Some(v) = (1..=n).find(|&v| color[v] == usize::MAX) {
            return bad(format!("vertex {v} has no class"));
        }
        Ok(Self {
            n,
            edges: set.into_iter().collect(),
            classes,
            color,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn colors(&self) -> usize {
        self.classes.len()
    }

    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    pub fn classes(&self) -> &[Vec<Vertex>] {
        &self.classes
    }

    /// 0-based class index of `v`.
    pub fn color_of(&self, v: Vertex) -> usize {
        self.color[v]
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.edges.binary_search(&(u.min(v), u.max(v))).is_ok()
    }

    fn neighbors(&self) -> Vec<Vec<Vertex>> {
        let mut nb = vec![Vec::new(); self.n + 1];
        for &(u, v) in &self.edges {
            nb[u].push(v);
            nb[v].push(u);
        }
        nb
    }

    /// Every class independent, every vertex adjacent to every other class.
    pub fn validate(&self) -> Result<(), GadgetError> {
        for &(u, v) in &self.edges {
            if self.color[u] == self.color[v] {
                return Err(GadgetError::InvalidMcc(format!(
                    "edge {u}-{v} inside class {}",
                    self.color[u] + 1
                )));
            }
        }
        let nb = self.neighbors();
        for v in 1..=self.n {
            for j in 0..self.colors() {
                if j != self.color[v] && !nb[v].iter().any(|&w| self.color[w] == j) {
                    return Err(GadgetError::InvalidMcc(format!(
                        "vertex {v} has no neighbor in class {}",
                        j + 1
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Drops intra-class edges, then repeatedly drops vertices lacking a neighbor
/// in some other class. Survivors are renumbered in increasing order; the
/// second value maps new ids (index `v - 1`) to old ones.
pub fn normalize_mcc(inst: &MccInstance) -> (MccInstance, Vec<Vertex>) {
    let mut alive = vec![true; inst.n + 1];
    let edges: Vec<(Vertex, Vertex)> = inst
        .edges
        .iter()
        .copied()
        .filter(|&(u, v)| inst.color[u] != inst.color[v])
        .collect();
    loop {
        let mut changed = false;
        for v in 1..=inst.n {
            if !alive[v] {
                continue;
            }
            let mut seen = vec![false; inst.colors()];
            for &(a, b) in &edges {
                if alive[a] && alive[b] {
                    if a == v {
                        seen[inst.color[b]] = true;
                    } else if b == v {
                        seen[inst.color[a]] = true;
                    }
                }
            }
            if (0..inst.colors()).any(|j| j != inst.color[v] && !seen[j]) {
                alive[v] = false;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let old: Vec<Vertex> = (1..=inst.n).filter(|&v| alive[v]).collect();
    let mut new_id = vec![0; inst.n + 1];
    for (i, &v) in old.iter().enumerate() {
        new_id[v] = i + 1;
    }
    let edges = edges
        .into_iter()
        .filter(|&(u, v)| alive[u] && alive[v])
        .map(|(u, v)| (new_id[u], new_id[v]));
    let classes = inst
        .classes
        .iter()
        .map(|c| c.iter().filter(|&&v| alive[v]).map(|&v| new_id[v]).collect())
        .collect();
    let out = MccInstance::new(old.len(), edges, classes).expect("renumbering keeps validity");
    (out, old)
}

struct Layout {
    ell: usize,
    k: usize,
}

impl Layout {
    fn s(&self) -> Vertex {
        1
    }
    fn s_j(&self, j: usize) -> Vertex {
        2 + j
    }
    fn d_j(&self, j: usize) -> Vertex {
        2 + self.ell + j
    }
    fn x(&self, u: Vertex) -> Vertex {
        1 + 2 * self.ell + u
    }
}

/// Builds the reduction graph with budget `k = 2ℓ(ℓ−1)`.
///
/// Vertex order: `s`, `s_1..s_ℓ`, `d_1..d_ℓ`, `x_u` by `u`, `z_uv` by sorted
/// edge, then gadget intermediates in creation order.
pub fn gen_mcc(inst: &MccInstance) -> Result<(MultiDigraph, usize, GadgetMetadata), GadgetError> {
    inst.validate()?;
    let ell = inst.colors();
    if ell < 2 {
        return Err(GadgetError::BadParameter("need at least two colors".into()));
    }
    let k = 2 * ell * (ell - 1);
    let lay = Layout { ell, k };
    let nb = inst.neighbors();
    let base = 1 + 2 * ell + inst.n + inst.edges.len();

    let mut r = Vec::with_capacity(ell);
    let mut c = Vec::with_capacity(ell);
    for (j, class) in inst.classes.iter().enumerate() {
        let rj = class.len() * (ell - 1);
        let incident = inst
            .edges
            .iter()
            .filter(|&&(u, v)| inst.color[u] == j || inst.color[v] == j)
            .count();
        if rj < ell {
            return Err(GadgetError::DegenerateClass {
                class: j + 1,
                reason: format!("r_j - l + 1 = {} < 1", rj as i64 - ell as i64 + 1),
            });
        }
        if incident <= rj {
            return Err(GadgetError::DegenerateClass {
                class: j + 1,
                reason: format!("c_j = {} < 1", incident as i64 - rj as i64),
            });
        }
        r.push(rj);
        c.push(incident - rj);
    }

    let mut g = MultiDigraph::new(base);
    let mut roles = vec![String::new(); base];
    roles[0] = "s".into();
    for j in 0..ell {
        roles[lay.s_j(j) - 1] = format!("s_{}", j + 1);
        roles[lay.d_j(j) - 1] = format!("d_{}", j + 1);
    }
    for u in 1..=inst.n {
        roles[lay.x(u) - 1] = format!("x_{u}");
    }
    let z0 = 1 + 2 * ell + inst.n;
    for (e, &(u, v)) in inst.edges.iter().enumerate() {
        roles[z0 + e] = format!("z_{u}_{v}");
    }

    let name_mids = |roles: &mut Vec<String>, name: String, mids: Vec<Vertex>| {
        for (i, w) in mids.into_iter().enumerate() {
            debug_assert_eq!(w, roles.len() + 1);
            roles.push(format!("mid:{name}:{}", i + 1));
        }
    };

    // E1
    for j in 0..ell {
        let mids = imbalance_gadget(&mut g, k, r[j] - ell + 1, lay.s(), lay.d_j(j))?;
        name_mids(&mut roles, format!("I(s,d_{})", j + 1), mids);
        let mids = imbalance_gadget(&mut g, k, c[j], lay.s(), lay.s_j(j))?;
        name_mids(&mut roles, format!("I(s,s_{})", j + 1), mids);
    }
    // E2
    for (j, class) in inst.classes.iter().enumerate() {
        for &u in class {
            let mids = imbalance_gadget(&mut g, k, nb[u].len() + 1 - ell, lay.s_j(j), lay.x(u))?;
            name_mids(&mut roles, format!("I(s_{},x_{u})", j + 1), mids);
            let mids = path_gadget(&mut g, k, ell - 1, lay.d_j(j), lay.x(u))?;
            name_mids(&mut roles, format!("P(d_{},x_{u})", j + 1), mids);
        }
    }
    // E3, E4
    for (e, &(u, v)) in inst.edges.iter().enumerate() {
        let z = z0 + e + 1;
        g.add_arc(lay.x(u), z)?;
        g.add_arc(lay.x(v), z)?;
        g.add_arcs(z, lay.s(), 2)?;
    }

    let meta = GadgetMetadata {
        generator: "mcc".into(),
        params: vec![
            ("l".into(), ell.to_string()),
            ("n".into(), inst.n.to_string()),
            ("edges".into(), inst.edges.len().to_string()),
        ],
        k: lay.k,
        roles,
    };
    Ok((g, k, meta))
}

/// The deletion set of size `2ℓ(ℓ−1)` induced by a multicolored clique.
/// `clique[j]` must be the chosen vertex of class `j + 1`.
pub fn lift_mcc_solution(inst: &MccInstance, clique: &[Vertex]) -> Result<ArcMultiset, GadgetError> {
    let ell = inst.colors();
    if clique.len() != ell {
        return Err(GadgetError::NotAClique(format!(
            "{} vertices given for {ell} classes",
            clique.len()
        )));
    }
    for (j, &v) in clique.iter().enumerate() {
        if v == 0 || v > inst.n || inst.color[v] != j {
            return Err(GadgetError::NotAClique(format!(
                "vertex {v} is not in class {}",
                j + 1
            )));
        }
    }
    for (a, &u) in clique.iter().enumerate() {
        for &v in &clique[a + 1..] {
            if !inst.has_edge(u, v) {
                return Err(GadgetError::NotAClique(format!("{u} and {v} are not adjacent")));
            }
        }
    }

    let (_, k, meta) = gen_mcc(inst)?;
    let lay = Layout { ell, k };
    let z0 = 1 + 2 * ell + inst.n;
    let mut s = ArcMultiset::new();
    for (a, &u) in clique.iter().enumerate() {
        for &v in &clique[a + 1..] {
            let e = inst
                .edges
                .binary_search(&(u.min(v), u.max(v)))
                .expect("adjacent");
            let z = z0 + e + 1;
            s.insert(lay.x(u), z, 1);
            s.insert(lay.x(v), z, 1);
        }
    }
    for (j, &u) in clique.iter().enumerate() {
        let last = meta
            .vertex(&format!("mid:P(d_{},x_{u}):{k}", j + 1))
            .expect("path gadget present");
        s.insert(last, lay.x(u), ell - 1);
    }
    Ok(s)
}

/// Parses `p mcc n m l`, `v <vertex> <color>` and `e <u> <v>` lines.
pub fn parse_mcc(text: &str) -> Result<MccInstance, FormatError> {
    let mut header = None;
    let mut colors: Vec<(usize, Vertex, usize)> = Vec::new();
    let mut edges = Vec::new();
    for (line, toks) in content_lines(text) {
        match (toks[0], toks.len()) {
            ("p", 5) if toks[1] == "mcc" => {
                if header.is_some() {
                    return Err(syntax(line, "second header line"));
                }
                header = Some((
                    parse_num(line, toks[2])?,
                    parse_num(line, toks[3])?,
                    parse_num(line, toks[4])?,
                ));
            }
            ("v", 3) => colors.push((line, parse_num(line, toks[1])?, parse_num(line, toks[2])?)),
            ("e", 3) => edges.push((parse_num(line, toks[1])?, parse_num(line, toks[2])?)),
            _ => return Err(syntax(line, "expected a p, v or e line")),
        }
    }
    let (n, m, ell) = header.ok_or(FormatError::MissingHeader)?;
    if edges.len() != m {
        return Err(FormatError::ArcCountMismatch {
            declared: m,
            found: edges.len(),
        });
    }
    let mut classes = vec![Vec::new(); ell];
    for (line, v, c) in colors {
        if c == 0 || c > ell {
            return Err(syntax(line, format!("color {c} out of range 1..={ell}")));
        }
        classes[c - 1].push(v);
    }
    MccInstance::new(n, edges, classes).map_err(|e| syntax(0, e.to_string()))
}

pub fn write_mcc(inst: &MccInstance) -> String {
    let mut out = String::new();
    writeln!(out, "p mcc {} {} {}", inst.n, inst.edges.len(), inst.colors()).unwrap();
    for v in 1..=inst.n {
        writeln!(out, "v {v} {}", inst.color[v] + 1).unwrap();
    }
    for &(u, v) in &inst.edges {
        writeln!(out, "e {u} {v}").unwrap();
    }
    out
}
