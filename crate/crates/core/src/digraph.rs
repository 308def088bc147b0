//! Directed multigraphs, arc multisets and strong-component accounting.
//!
//! Vertices are the integers `1..=n`. Arcs are stored canonically as one entry
//! per ordered pair with a positive multiplicity; loops are rejected.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

/// A vertex identifier in `1..=n`.
pub type Vertex = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex {vertex} out of range 1..={n}")]
    VertexOutOfRange { vertex: Vertex, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(Vertex),
    #[error("arc ({0},{1}) has multiplicity zero")]
    ZeroMultiplicity(Vertex, Vertex),
    #[error("deletion of {requested} copies of ({u},{v}) but only {available} exist")]
    OverDeletion {
        u: Vertex,
        v: Vertex,
        requested: usize,
        available: usize,
    },
}

/// Directed multigraph on `1..=n`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct MultiDigraph {
    n: usize,
    arcs: BTreeMap<(Vertex, Vertex), usize>,
}

impl MultiDigraph {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            arcs: BTreeMap::new(),
        }
    }

    /// Builds a graph from `(tail, head, multiplicity)` triples. Repeated pairs add up.
    pub fn from_arcs<I>(n: usize, arcs: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (Vertex, Vertex, usize)>,
    {
        let mut g = Self::new(n);
        for (u, v, c) in arcs {
            g.add_arcs(u, v, c)?;
        }
        Ok(g)
    }

    pub fn add_arcs(&mut self, u: Vertex, v: Vertex, count: usize) -> Result<(), GraphError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        if count == 0 {
            return Err(GraphError::ZeroMultiplicity(u, v));
        }
        *self.arcs.entry((u, v)).or_insert(0) += count;
        Ok(())
    }

    pub fn add_arc(&mut self, u: Vertex, v: Vertex) -> Result<(), GraphError> {
        self.add_arcs(u, v, 1)
    }

    /// Appends a fresh isolated vertex and returns its id.
    pub fn add_vertex(&mut self) -> Vertex {
        self.n += 1;
        self.n
    }

    pub fn check_vertex(&self, v: Vertex) -> Result<(), GraphError> {
        if v == 0 || v > self.n {
            Err(GraphError::VertexOutOfRange { vertex: v, n: self.n })
        } else {
            Ok(())
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Total arc count including multiplicities.
    pub fn m(&self) -> usize {
        self.arcs.values().sum()
    }

    pub fn vertices(&self) -> std::ops::RangeInclusive<Vertex> {
        1..=self.n
    }

    pub fn multiplicity(&self, u: Vertex, v: Vertex) -> usize {
        self.arcs.get(&(u, v)).copied().unwrap_or(0)
    }

    /// Distinct ordered pairs with their multiplicities, sorted by `(u, v)`.
    pub fn arcs(&self) -> impl Iterator<Item = ((Vertex, Vertex), usize)> + '_ {
        self.arcs.iter().map(|(&p, &c)| (p, c))
    }

    pub fn pair_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn is_simple(&self) -> bool {
        self.arcs.values().all(|&c| c == 1)
    }

    pub fn out_degree(&self, v: Vertex) -> usize {
        self.arcs
            .range((v, 0)..=(v, usize::MAX))
            .map(|(_, &c)| c)
            .sum()
    }

    pub fn in_degree(&self, v: Vertex) -> usize {
        self.arcs
            .iter()
            .filter(|(&(_, h), _)| h == v)
            .map(|(_, &c)| c)
            .sum()
    }

    /// Maximum of `deg⁺(v) + deg⁻(v)` over all vertices (0 for the empty graph).
    pub fn max_degree(&self) -> usize {
        let mut deg = vec![0usize; self.n + 1];
        for (&(u, v), &c) in &self.arcs {
            deg[u] += c;
            deg[v] += c;
        }
        deg.into_iter().max().unwrap_or(0)
    }

    /// Out-degree minus in-degree, counting multiplicities.
    pub fn imbalance(&self, v: Vertex) -> Result<i64, GraphError> {
        self.check_vertex(v)?;
        let mut b = 0i64;
        for (&(x, y), &c) in &self.arcs {
            if x == v {
                b += c as i64;
            }
            if y == v {
                b -= c as i64;
            }
        }
        Ok(b)
    }

    /// Imbalance of every vertex, indexed by `v - 1`.
    pub fn imbalances(&self) -> Vec<i64> {
        let mut b = vec![0i64; self.n];
        for (&(u, v), &c) in &self.arcs {
            b[u - 1] += c as i64;
            b[v - 1] -= c as i64;
        }
        b
    }

    /// Out-neighbour lists over distinct pairs, 0-based.
    pub(crate) fn support_adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v) in self.arcs.keys() {
            adj[u - 1].push(v - 1);
        }
        adj
    }

    /// Neighbour sets of the deoriented simple graph, sorted, 1-based.
    pub fn deoriented_neighbors(&self) -> Vec<Vec<Vertex>> {
        let mut nb = vec![Vec::new(); self.n + 1];
        for &(u, v) in self.arcs.keys() {
            nb[u].push(v);
            nb[v].push(u);
        }
        for list in &mut nb {
            list.sort_unstable();
            list.dedup();
        }
        nb
    }

    /// `self − s`. Fails if `s` removes more copies of a pair than exist.
    pub fn remove(&self, s: &ArcMultiset) -> Result<MultiDigraph, GraphError> {
        s.check_against(self)?;
        let mut g = self.clone();
        for ((u, v), c) in s.iter() {
            let slot = g.arcs.get_mut(&(u, v)).expect("checked");
            *slot -= c;
            if *slot == 0 {
                g.arcs.remove(&(u, v));
            }
        }
        Ok(g)
    }

    /// Subgraph keeping only arcs for which `keep(u, v)` holds.
    pub fn filter_arcs(&self, mut keep: impl FnMut(Vertex, Vertex) -> bool) -> MultiDigraph {
        MultiDigraph {
            n: self.n,
            arcs: self
                .arcs
                .iter()
                .filter(|(&(u, v), _)| keep(u, v))
                .map(|(&p, &c)| (p, c))
                .collect(),
        }
    }

    /// All arc copies as an arc multiset.
    pub fn all_arcs(&self) -> ArcMultiset {
        ArcMultiset {
            counts: self.arcs.clone(),
        }
    }
}

/// A multiset of arcs, used for deletion sets and partial solutions.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ArcMultiset {
    counts: BTreeMap<(Vertex, Vertex), usize>,
}

impl ArcMultiset {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, u: Vertex, v: Vertex, count: usize) {
        if count > 0 {
            *self.counts.entry((u, v)).or_insert(0) += count;
        }
    }

    pub fn count(&self, u: Vertex, v: Vertex) -> usize {
        self.counts.get(&(u, v)).copied().unwrap_or(0)
    }

    /// Total number of arc copies.
    pub fn size(&self) -> usize {
        self.counts.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = ((Vertex, Vertex), usize)> + '_ {
        self.counts.iter().map(|(&p, &c)| (p, c))
    }

    pub fn extend(&mut self, other: &ArcMultiset) {
        for ((u, v), c) in other.iter() {
            self.insert(u, v, c);
        }
    }

    /// Keeps only the pairs accepted by `keep`.
    pub fn restricted(&self, mut keep: impl FnMut(Vertex, Vertex) -> bool) -> ArcMultiset {
        ArcMultiset {
            counts: self
                .counts
                .iter()
                .filter(|(&(u, v), _)| keep(u, v))
                .map(|(&p, &c)| (p, c))
                .collect(),
        }
    }

    pub fn check_against(&self, g: &MultiDigraph) -> Result<(), GraphError> {
        for ((u, v), c) in self.iter() {
            let available = g.multiplicity(u, v);
            if c > available {
                return Err(GraphError::OverDeletion {
                    u,
                    v,
                    requested: c,
                    available,
                });
            }
        }
        Ok(())
    }
}

impl FromIterator<(Vertex, Vertex, usize)> for ArcMultiset {
    fn from_iter<I: IntoIterator<Item = (Vertex, Vertex, usize)>>(iter: I) -> Self {
        let mut s = ArcMultiset::new();
        for (u, v, c) in iter {
            s.insert(u, v, c);
        }
        s
    }
}

impl fmt::Display for ArcMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, ((u, v), c)) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{u}->{v}")?;
            if c > 1 {
                write!(f, " x{c}")?;
            }
        }
        write!(f, "}}")
    }
}

/// Strongly connected components, numbered `0..count` in order of their smallest vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SccPartition {
    ids: Vec<usize>,
    count: usize,
}

impl SccPartition {
    pub fn component_of(&self, v: Vertex) -> usize {
        self.ids[v - 1]
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn same(&self, u: Vertex, v: Vertex) -> bool {
        self.ids[u - 1] == self.ids[v - 1]
    }

    /// Members of every component, each list sorted.
    pub fn components(&self) -> Vec<Vec<Vertex>> {
        let mut out = vec![Vec::new(); self.count];
        for (i, &c) in self.ids.iter().enumerate() {
            out[c].push(i + 1);
        }
        out
    }
}

/// Tarjan's algorithm over 0-based adjacency lists. Component ids are
/// renumbered so that they increase with the smallest member.
pub(crate) fn scc_ids(adj: &[Vec<usize>]) -> (Vec<usize>, usize) {
    let n = adj.len();
    const UNSEEN: usize = usize::MAX;
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut raw = vec![UNSEEN; n];
    let mut next_index = 0;
    let mut next_comp = 0;
    // (vertex, next edge position)
    let mut call: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        call.push((root, 0));
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            if *pos < adj[v].len() {
                let w = adj[v][*pos];
                *pos += 1;
                if index[w] == UNSEEN {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    loop {
                        let w = stack.pop().expect("tarjan stack");
                        on_stack[w] = false;
                        raw[w] = next_comp;
                        if w == v {
                            break;
                        }
                    }
                    next_comp += 1;
                }
            }
        }
    }

    let mut remap = vec![UNSEEN; next_comp];
    let mut count = 0;
    for v in 0..n {
        if remap[raw[v]] == UNSEEN {
            remap[raw[v]] = count;
            count += 1;
        }
    }
    (raw.into_iter().map(|c| remap[c]).collect(), count)
}

pub fn scc(g: &MultiDigraph) -> SccPartition {
    let (ids, count) = scc_ids(&g.support_adjacency());
    SccPartition { ids, count }
}

/// `strong(g)`: drops every arc whose endpoints lie in different strong components.
pub fn strong_subgraph(g: &MultiDigraph) -> MultiDigraph {
    let part = scc(g);
    g.filter_arcs(|u, v| part.same(u, v))
}

/// Whether `strong(g)` is balanced.
pub fn is_strongly_balanced(g: &MultiDigraph) -> bool {
    let part = scc(g);
    let mut b = vec![0i64; g.n()];
    for ((u, v), c) in g.arcs() {
        if part.same(u, v) {
            b[u - 1] += c as i64;
            b[v - 1] -= c as i64;
        }
    }
    b.iter().all(|&x| x == 0)
}

/// True iff `|s| ≤ k` and `strong(g − s)` is balanced.
pub fn verify_solution(g: &MultiDigraph, k: usize, s: &ArcMultiset) -> Result<bool, GraphError> {
    let rest = g.remove(s)?;
    Ok(s.size() <= k && is_strongly_balanced(&rest))
}
