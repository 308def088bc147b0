//! Tree decompositions: validation, a min-degree heuristic, and conversion to
//! nice form with one introduce-arc node per arc copy.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use thiserror::Error;

use crate::digraph::{MultiDigraph, Vertex};
use crate::format::{content_lines, parse_num, syntax, FormatError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeDecError {
    #[error("invalid tree decomposition: {}", .0.join("; "))]
    Invalid(Vec<String>),
    #[error("malformed nice decomposition: {0}")]
    BadNice(String),
}

/// Bags over a tree whose nodes are bag indices `0..bags.len()`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct TreeDecomposition {
    pub bags: Vec<Vec<Vertex>>,
    pub edges: Vec<(usize, usize)>,
}

impl TreeDecomposition {
    pub fn new(bags: Vec<Vec<Vertex>>, edges: Vec<(usize, usize)>) -> Self {
        let bags = bags
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b.dedup();
                b
            })
            .collect();
        Self { bags, edges }
    }

    /// One bag holding every vertex.
    pub fn single_bag(g: &MultiDigraph) -> Self {
        Self::new(vec![g.vertices().collect()], Vec::new())
    }

    /// Largest bag size minus one; 0 when every bag is empty.
    pub fn width(&self) -> usize {
        self.bags.iter().map(Vec::len).max().unwrap_or(0).saturating_sub(1)
    }

    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.bags.len()];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }
}

/// Result of checking a decomposition; `problems` is empty iff valid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TdCheck {
    pub valid: bool,
    pub problems: Vec<String>,
}

/// Checks the tree shape and all three decomposition axioms against the
/// deoriented graph.
pub fn validate_td(g: &MultiDigraph, td: &TreeDecomposition) -> TdCheck {
    let mut problems = Vec::new();
    let nb = td.bags.len();

    for &(a, b) in &td.edges {
        if a >= nb || b >= nb {
            problems.push(format!("tree edge ({a},{b}) references a missing bag"));
        }
    }
    for (i, bag) in td.bags.iter().enumerate() {
        for &v in bag {
            if v == 0 || v > g.n() {
                problems.push(format!("bag {i} holds unknown vertex {v}"));
            }
        }
    }
    if !problems.is_empty() {
        return TdCheck {
            valid: false,
            problems,
        };
    }

    // Tree shape.
    if nb > 0 {
        if td.edges.len() != nb - 1 {
            problems.push(format!(
                "{} tree edges for {} bags; a tree needs {}",
                td.edges.len(),
                nb,
                nb - 1
            ));
        }
        let adj = td.adjacency();
        let mut seen = vec![false; nb];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(x) = stack.pop() {
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            problems.push("tree is disconnected".to_string());
        }
    }

    let contains: Vec<BTreeSet<Vertex>> = td
        .bags
        .iter()
        .map(|b| b.iter().copied().collect())
        .collect();

    for v in g.vertices() {
        if !contains.iter().any(|b| b.contains(&v)) {
            problems.push(format!("vertex {v} is in no bag"));
        }
    }
    for ((u, v), _) in g.arcs() {
        if !contains.iter().any(|b| b.contains(&u) && b.contains(&v)) {
            problems.push(format!("edge {u}-{v} is not covered by any bag"));
        }
    }

    // Connectivity of each vertex's bag set, over tree edges.
    if problems.is_empty() {
        let adj = td.adjacency();
        for v in g.vertices() {
            let holders: Vec<usize> = (0..nb).filter(|&i| contains[i].contains(&v)).collect();
            let mut seen = vec![false; nb];
            let mut stack = vec![holders[0]];
            seen[holders[0]] = true;
            let mut reached = 1;
            while let Some(x) = stack.pop() {
                for &y in &adj[x] {
                    if !seen[y] && contains[y].contains(&v) {
                        seen[y] = true;
                        reached += 1;
                        stack.push(y);
                    }
                }
            }
            if reached != holders.len() {
                problems.push(format!("bags containing vertex {v} are not connected"));
            }
        }
    }

    TdCheck {
        valid: problems.is_empty(),
        problems,
    }
}

/// Min-degree elimination on the deoriented graph, ties broken by smallest id.
pub fn heuristic_decompose(g: &MultiDigraph) -> TreeDecomposition {
    let n = g.n();
    if n == 0 {
        return TreeDecomposition::new(vec![Vec::new()], Vec::new());
    }
    let mut nb: Vec<BTreeSet<Vertex>> = g
        .deoriented_neighbors()
        .into_iter()
        .map(|l| l.into_iter().collect())
        .collect();
    let mut alive: BTreeSet<Vertex> = g.vertices().collect();
    let mut order = Vec::with_capacity(n);
    let mut bags = Vec::with_capacity(n);

    while let Some(&v) = alive.iter().min_by_key(|&&v| (nb[v].len(), v)) {
        let nbrs: Vec<Vertex> = nb[v].iter().copied().collect();
        for (i, &a) in nbrs.iter().enumerate() {
            for &b in &nbrs[i + 1..] {
                nb[a].insert(b);
                nb[b].insert(a);
            }
            nb[a].remove(&v);
        }
        let mut bag = nbrs;
        bag.push(v);
        bags.push(bag);
        order.push(v);
        alive.remove(&v);
    }

    let mut position = vec![0usize; n + 1];
    for (i, &v) in order.iter().enumerate() {
        position[v] = i;
    }
    let mut edges = Vec::new();
    for i in 0..n.saturating_sub(1) {
        let v = order[i];
        let parent = bags[i]
            .iter()
            .filter(|&&w| w != v)
            .map(|&w| position[w])
            .min()
            .unwrap_or(i + 1);
        edges.push((i, parent));
    }
    TreeDecomposition::new(bags, edges)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NodeKind {
    Leaf,
    IntroduceVertex(Vertex),
    /// One copy of arc `(u, v)`; `copy` runs over `1..=multiplicity`.
    IntroduceArc { u: Vertex, v: Vertex, copy: usize },
    Forget(Vertex),
    Join,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NiceNode {
    pub kind: NodeKind,
    pub bag: Vec<Vertex>,
    pub children: Vec<usize>,
}

/// Nodes are stored children-first, so index order is a valid bottom-up
/// schedule and the root is the last node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NiceDecomposition {
    pub nodes: Vec<NiceNode>,
}

impl NiceDecomposition {
    pub fn root(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn width(&self) -> usize {
        self.nodes
            .iter()
            .map(|x| x.bag.len())
            .max()
            .unwrap_or(0)
            .saturating_sub(1)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn count_arc_nodes(&self) -> usize {
        self.nodes
            .iter()
            .filter(|x| matches!(x.kind, NodeKind::IntroduceArc { .. }))
            .count()
    }
}

/// Growable node arena used while building.
struct Builder {
    kind: Vec<NodeKind>,
    bag: Vec<Vec<Vertex>>,
    children: Vec<Vec<usize>>,
}

impl Builder {
    fn push(&mut self, kind: NodeKind, bag: Vec<Vertex>, children: Vec<usize>) -> usize {
        self.kind.push(kind);
        self.bag.push(bag);
        self.children.push(children);
        self.kind.len() - 1
    }

    /// Turns a node with bag `from` into a chain ending at bag `to`:
    /// forgets first, then introduces, both in increasing vertex order.
    fn morph(&mut self, mut node: usize, to: &[Vertex]) -> usize {
        let mut cur = self.bag[node].clone();
        let drop: Vec<Vertex> = cur.iter().copied().filter(|v| !to.contains(v)).collect();
        for v in drop {
            cur.retain(|&w| w != v);
            node = self.push(NodeKind::Forget(v), cur.clone(), vec![node]);
        }
        for &v in to {
            if !cur.contains(&v) {
                cur.push(v);
                cur.sort_unstable();
                node = self.push(NodeKind::IntroduceVertex(v), cur.clone(), vec![node]);
            }
        }
        node
    }

    fn build(&mut self, td: &TreeDecomposition, adj: &[Vec<usize>], t: usize, from: usize) -> usize {
        let target = &td.bags[t];
        let mut subs = Vec::new();
        for &c in &adj[t] {
            if c != from {
                let sub = self.build(td, adj, c, t);
                subs.push(self.morph(sub, target));
            }
        }
        if subs.is_empty() {
            let leaf = self.push(NodeKind::Leaf, Vec::new(), Vec::new());
            return self.morph(leaf, target);
        }
        let mut acc = subs[0];
        for &s in &subs[1..] {
            acc = self.push(NodeKind::Join, target.clone(), vec![acc, s]);
        }
        acc
    }
}

/// Converts a valid decomposition into nice form of equal width, rooted at bag 0.
pub fn make_nice(g: &MultiDigraph, td: &TreeDecomposition) -> Result<NiceDecomposition, TreeDecError> {
    let check = validate_td(g, td);
    if !check.valid {
        return Err(TreeDecError::Invalid(check.problems));
    }
    let mut b = Builder {
        kind: Vec::new(),
        bag: Vec::new(),
        children: Vec::new(),
    };
    let root = if td.bags.is_empty() {
        b.push(NodeKind::Leaf, Vec::new(), Vec::new())
    } else {
        let adj = td.adjacency();
        let top = b.build(td, &adj, 0, usize::MAX);
        b.morph(top, &[])
    };

    // Parent links and depths for placing arc introductions.
    let total = b.kind.len();
    let mut parent = vec![usize::MAX; total];
    for x in 0..total {
        for &c in &b.children[x] {
            parent[c] = x;
        }
    }
    let mut depth = vec![0usize; total];
    let mut stack = vec![root];
    while let Some(x) = stack.pop() {
        for &c in &b.children[x] {
            depth[c] = depth[x] + 1;
            stack.push(c);
        }
    }
    let mut forget_of = vec![usize::MAX; g.n() + 1];
    for x in 0..total {
        if let NodeKind::Forget(v) = b.kind[x] {
            forget_of[v] = x;
        }
    }

    // Arcs sharing a forget node are inserted in (u, v, copy) order, lowest first.
    let mut pending: Vec<Vec<(Vertex, Vertex, usize)>> = vec![Vec::new(); total];
    for ((u, v), c) in g.arcs() {
        let (fu, fv) = (forget_of[u], forget_of[v]);
        let at = if depth[fu] >= depth[fv] { fu } else { fv };
        pending[at].push((u, v, c));
    }
    for f in 0..total {
        if pending[f].is_empty() {
            continue;
        }
        let mut below = b.children[f][0];
        let bag = b.bag[below].clone();
        for &(u, v, c) in &pending[f] {
            for copy in 1..=c {
                below = b.push(NodeKind::IntroduceArc { u, v, copy }, bag.clone(), vec![below]);
            }
        }
        b.children[f][0] = below;
    }

    // Renumber children-first.
    let total = b.kind.len();
    let mut index = vec![usize::MAX; total];
    let mut out_order = Vec::with_capacity(total);
    let mut stack = vec![(root, false)];
    while let Some((x, expanded)) = stack.pop() {
        if expanded {
            index[x] = out_order.len();
            out_order.push(x);
        } else {
            stack.push((x, true));
            for &c in b.children[x].iter().rev() {
                stack.push((c, false));
            }
        }
    }
    let nodes = out_order
        .iter()
        .map(|&x| NiceNode {
            kind: b.kind[x],
            bag: b.bag[x].clone(),
            children: b.children[x].iter().map(|&c| index[c]).collect(),
        })
        .collect();
    let nd = NiceDecomposition { nodes };
    check_nice(g, &nd)?;
    Ok(nd)
}

/// Structural check of a nice decomposition against `g`.
pub fn check_nice(g: &MultiDigraph, nd: &NiceDecomposition) -> Result<(), TreeDecError> {
    let bad = |msg: String| Err(TreeDecError::BadNice(msg));
    if nd.is_empty() {
        return bad("no nodes".into());
    }
    let root = nd.root();
    if !nd.nodes[root].bag.is_empty() {
        return bad("root bag is not empty".into());
    }
    let mut parents = vec![0usize; nd.len()];
    let mut forgets = vec![0usize; g.n() + 1];
    let mut arc_copies = std::collections::BTreeMap::new();
    for (i, node) in nd.nodes.iter().enumerate() {
        if node.bag.windows(2).any(|w| w[0] >= w[1]) {
            return bad(format!("node {i}: bag not strictly sorted"));
        }
        for &c in &node.children {
            if c >= i {
                return bad(format!("node {i}: child {c} not stored before parent"));
            }
            parents[c] += 1;
        }
        let child_bag = |j: usize| &nd.nodes[node.children[j]].bag;
        let arity = node.children.len();
        match node.kind {
            NodeKind::Leaf => {
                if arity != 0 || !node.bag.is_empty() {
                    return bad(format!("node {i}: leaf must be childless with empty bag"));
                }
            }
            NodeKind::IntroduceVertex(v) => {
                let mut expect = child_bag(0).clone();
                if arity != 1 || expect.contains(&v) {
                    return bad(format!("node {i}: bad introduce of {v}"));
                }
                expect.push(v);
                expect.sort_unstable();
                if expect != node.bag {
                    return bad(format!("node {i}: introduce bag mismatch"));
                }
            }
            NodeKind::Forget(v) => {
                let expect: Vec<Vertex> = child_bag(0).iter().copied().filter(|&w| w != v).collect();
                if arity != 1 || !child_bag(0).contains(&v) || expect != node.bag {
                    return bad(format!("node {i}: bad forget of {v}"));
                }
                forgets[v] += 1;
            }
            NodeKind::IntroduceArc { u, v, copy } => {
                if arity != 1 || child_bag(0) != &node.bag {
                    return bad(format!("node {i}: arc node must copy its child's bag"));
                }
                if !node.bag.contains(&u) || !node.bag.contains(&v) {
                    return bad(format!("node {i}: arc ({u},{v}) endpoints not in bag"));
                }
                if !arc_copies.entry((u, v)).or_insert_with(BTreeSet::new).insert(copy) {
                    return bad(format!("arc ({u},{v}) copy {copy} introduced twice"));
                }
            }
            NodeKind::Join => {
                if arity != 2 || child_bag(0) != &node.bag || child_bag(1) != &node.bag {
                    return bad(format!("node {i}: join children must share its bag"));
                }
            }
        }
    }
    if parents[..root].iter().any(|&p| p != 1) || parents[root] != 0 {
        return bad("nodes do not form a single rooted tree".into());
    }
    if forgets[1..].iter().any(|&f| f != 1) {
        return bad("every vertex must be forgotten exactly once".into());
    }
    for ((u, v), c) in g.arcs() {
        let expect: BTreeSet<usize> = (1..=c).collect();
        if arc_copies.get(&(u, v)) != Some(&expect) {
            return bad(format!("arc ({u},{v}) copies not introduced exactly once each"));
        }
    }
    if arc_copies.len() != g.pair_count() {
        return bad("introduce-arc node for an arc not in the graph".into());
    }
    Ok(())
}

/// Parses the PACE-style `.td` format.
pub fn parse_td(text: &str) -> Result<TreeDecomposition, FormatError> {
    let mut header: Option<(usize, usize)> = None;
    let mut bags: Vec<Option<Vec<Vertex>>> = Vec::new();
    let mut edges = Vec::new();
    for (line, toks) in content_lines(text) {
        match toks[0] {
            "s" => {
                if header.is_some() || toks.len() != 5 || toks[1] != "td" {
                    return Err(syntax(line, "expected \"s td <bags> <width+1> <n>\""));
                }
                let count = parse_num(line, toks[2])?;
                let size = parse_num(line, toks[3])?;
                parse_num(line, toks[4])?;
                header = Some((count, size));
                bags = vec![None; count];
            }
            "b" => {
                let (count, _) = header.ok_or(FormatError::MissingHeader)?;
                if toks.len() < 2 {
                    return Err(syntax(line, "bag line without id"));
                }
                let id = parse_num(line, toks[1])?;
                if id == 0 || id > count {
                    return Err(syntax(line, format!("bag id {id} out of range")));
                }
                if bags[id - 1].is_some() {
                    return Err(syntax(line, format!("bag {id} listed twice")));
                }
                let verts = toks[2..]
                    .iter()
                    .map(|t| parse_num(line, t))
                    .collect::<Result<Vec<_>, _>>()?;
                bags[id - 1] = Some(verts);
            }
            _ => {
                let (count, _) = header.ok_or(FormatError::MissingHeader)?;
                if toks.len() != 2 {
                    return Err(syntax(line, "expected a tree edge \"<i> <j>\""));
                }
                let a = parse_num(line, toks[0])?;
                let b = parse_num(line, toks[1])?;
                if a == 0 || b == 0 || a > count || b > count {
                    return Err(syntax(line, "tree edge references a missing bag"));
                }
                edges.push((a - 1, b - 1));
            }
        }
    }
    let (_, size) = header.ok_or(FormatError::MissingHeader)?;
    let bags: Vec<Vec<Vertex>> = bags
        .into_iter()
        .enumerate()
        .map(|(i, b)| b.ok_or_else(|| syntax(0, format!("bag {} missing", i + 1))))
        .collect::<Result<_, _>>()?;
    let td = TreeDecomposition::new(bags, edges);
    let actual = td.bags.iter().map(Vec::len).max().unwrap_or(0);
    if actual != size {
        return Err(syntax(0, format!("header claims bag size {size}, largest bag has {actual}")));
    }
    Ok(td)
}

pub fn write_td(td: &TreeDecomposition, n: usize) -> String {
    let mut out = String::new();
    let size = td.bags.iter().map(Vec::len).max().unwrap_or(0);
    writeln!(out, "s td {} {} {}", td.bags.len(), size, n).unwrap();
    for (i, bag) in td.bags.iter().enumerate() {
        write!(out, "b {}", i + 1).unwrap();
        for v in bag {
            write!(out, " {v}").unwrap();
        }
        out.push('\n');
    }
    for &(a, b) in &td.edges {
        writeln!(out, "{} {}", a + 1, b + 1).unwrap();
    }
    out
}
