//! Dynamic programming over a nice tree decomposition.
//!
//! A key at node `t` records, for the bag `X_t`, a labeled arrangement
//! `(R, ℓ)` whose transitive closure is the reachability among bag vertices in
//! `G − S`, the running active balance `β` of every bag vertex in
//! `G_t − S`, and the per-pair deletion counts `W` inside the bag.
//!
//! Arrangement labels say how an arc of `R` is realized: `direct` by a kept
//! introduced copy, `past` through forgotten vertices, `future` through arcs
//! and vertices not yet introduced. An arc copy counts toward `β` when its
//! endpoints share a strong component of `R`. Tables are built bottom-up by
//! generating, from every child entry, the parent keys it can lead to.

mod key;
mod trace;

use rustc_hash::FxHashMap;
use thiserror::Error;

pub use key::{DpKey, Label, ReachabilityArrangement, MAX_BAG};
pub use trace::{check_offset_bounds, OffsetViolation, TraceStep};

use crate::digraph::{ArcMultiset, MultiDigraph, Vertex};
use crate::treedec::{check_nice, NiceDecomposition, NodeKind, TreeDecError};
use key::{DIRECT, FUTURE, PAST};

pub const DEFAULT_MAX_TABLE_ENTRIES: usize = 4_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DpError {
    #[error("node {node} has a bag of {size} vertices; at most {MAX_BAG} are supported")]
    BagTooLarge { node: usize, size: usize },
    #[error("table at node {node} exceeded {limit} entries")]
    TableLimit { node: usize, limit: usize },
    #[error(transparent)]
    Decomposition(#[from] TreeDecError),
    #[error("vertex {0} is not in the arrangement")]
    NotInDomain(Vertex),
    #[error("graphs have different vertex counts ({0} vs {1})")]
    DomainMismatch(usize, usize),
}

#[derive(Clone, Debug)]
pub struct DpOptions {
    pub max_table_entries: usize,
}

impl Default for DpOptions {
    fn default() -> Self {
        Self {
            max_table_entries: DEFAULT_MAX_TABLE_ENTRIES,
        }
    }
}

/// How an entry was derived, for witness reconstruction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Origin {
    Leaf,
    /// Entry index in the only child's table; `deleted` marks an arc copy
    /// put into the solution at an introduce-arc node.
    Single { child: usize, deleted: bool },
    Join { left: usize, right: usize },
}

#[derive(Clone, Debug)]
pub struct Entry {
    pub key: DpKey,
    pub cost: usize,
    pub origin: Origin,
}

#[derive(Clone, Debug, Default)]
pub struct DpTable {
    entries: Vec<Entry>,
    index: FxHashMap<DpKey, usize>,
}

impl DpTable {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, key: &DpKey) -> Option<&Entry> {
        self.index.get(key).map(|&i| &self.entries[i])
    }

    pub fn cost(&self, key: &DpKey) -> Option<usize> {
        self.get(key).map(|e| e.cost)
    }

    pub fn entries(&self) -> &[Entry] {
        &self.entries
    }

    /// Keeps the cheaper of two candidates; on equal cost, `prefer_new`
    /// decides by comparing the child keys.
    fn offer(
        &mut self,
        key: DpKey,
        cost: usize,
        origin: Origin,
        prefer_new: impl FnOnce(&Origin, &Origin) -> bool,
    ) {
        match self.index.get(&key) {
            Some(&i) => {
                let old = &mut self.entries[i];
                if cost < old.cost || (cost == old.cost && prefer_new(&origin, &old.origin)) {
                    old.cost = cost;
                    old.origin = origin;
                }
            }
            None => {
                self.index.insert(key.clone(), self.entries.len());
                self.entries.push(Entry { key, cost, origin });
            }
        }
    }
}

/// The table of a leaf: only the empty key, at cost 0.
pub fn leaf_entry() -> DpTable {
    let mut t = DpTable::default();
    t.offer(DpKey::default(), 0, Origin::Leaf, |_, _| false);
    t
}

#[derive(Clone, Debug)]
struct NodeInfo {
    /// Row `i`, bit `j`: some path from bag position `i` to `j` uses only
    /// unintroduced arc copies and has its interior outside `V_t`.
    fp: [u8; MAX_BAG],
    fut_out: [i16; MAX_BAG],
    fut_in: [i16; MAX_BAG],
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DpStats {
    pub entries_per_node: Vec<usize>,
    pub max_entries: usize,
    pub total_entries: usize,
}

impl DpStats {
    /// Line-oriented dump: one `node` line per decomposition node and a summary.
    pub fn to_text(&self, nd: &NiceDecomposition) -> String {
        let mut out = String::new();
        for (i, (&c, node)) in self.entries_per_node.iter().zip(&nd.nodes).enumerate() {
            let kind = match node.kind {
                NodeKind::Leaf => "leaf".to_string(),
                NodeKind::IntroduceVertex(v) => format!("introduce-vertex:{v}"),
                NodeKind::IntroduceArc { u, v, copy } => format!("introduce-arc:{u},{v},{copy}"),
                NodeKind::Forget(v) => format!("forget:{v}"),
                NodeKind::Join => "join".to_string(),
            };
            out.push_str(&format!("node {i} {kind} bag={} entries={c}\n", node.bag.len()));
        }
        out.push_str(&format!(
            "tables max={} total={}\n",
            self.max_entries, self.total_entries
        ));
        out
    }
}

#[derive(Clone, Debug)]
pub struct DpResult {
    pub feasible: bool,
    pub optimum: Option<usize>,
    pub witness: Option<ArcMultiset>,
    pub stats: DpStats,
}

/// Table builder bound to one graph, decomposition and budget.
pub struct DpSolver<'a> {
    g: &'a MultiDigraph,
    nd: &'a NiceDecomposition,
    k: usize,
    options: DpOptions,
    info: Vec<NodeInfo>,
    tables: Vec<DpTable>,
}

impl<'a> DpSolver<'a> {
    pub fn new(
        g: &'a MultiDigraph,
        nd: &'a NiceDecomposition,
        k: usize,
        options: DpOptions,
    ) -> Result<Self, DpError> {
        check_nice(g, nd)?;
        for (node, x) in nd.nodes.iter().enumerate() {
            if x.bag.len() > MAX_BAG {
                return Err(DpError::BagTooLarge {
                    node,
                    size: x.bag.len(),
                });
            }
        }
        let info = node_infos(g, nd);
        Ok(Self {
            g,
            nd,
            k: k.min(g.m()),
            options,
            info,
            tables: Vec::new(),
        })
    }

    pub fn infeasible(&self) -> usize {
        self.g.m() + 1
    }

    pub fn budget(&self) -> usize {
        self.k
    }

    pub fn table(&self, t: usize) -> &DpTable {
        &self.tables[t]
    }

    fn bag(&self, t: usize) -> &[Vertex] {
        &self.nd.nodes[t].bag
    }

    fn pos(&self, t: usize, v: Vertex) -> usize {
        self.bag(t).binary_search(&v).expect("vertex in bag")
    }

    /// Builds every table bottom-up.
    pub fn run(&mut self) -> Result<(), DpError> {
        self.tables.clear();
        for t in 0..self.nd.len() {
            let table = self.build(t);
            if table.len() > self.options.max_table_entries {
                return Err(DpError::TableLimit {
                    node: t,
                    limit: self.options.max_table_entries,
                });
            }
            self.tables.push(table);
        }
        Ok(())
    }

    fn build(&self, t: usize) -> DpTable {
        let node = &self.nd.nodes[t];
        let mut out = DpTable::default();
        match node.kind {
            NodeKind::Leaf => return leaf_entry(),
            NodeKind::Join => {
                let (l, r) = (node.children[0], node.children[1]);
                let (lt, rt) = (&self.tables[l], &self.tables[r]);
                let mut by_mask: FxHashMap<u64, Vec<usize>> = FxHashMap::default();
                for (i, e) in rt.entries.iter().enumerate() {
                    by_mask.entry(e.key.arc_mask()).or_default().push(i);
                }
                for (li, le) in lt.entries.iter().enumerate() {
                    let Some(rights) = by_mask.get(&le.key.arc_mask()) else {
                        continue;
                    };
                    for &ri in rights {
                        let re = &rt.entries[ri];
                        let cost = le.cost + re.cost;
                        if cost > self.k {
                            continue;
                        }
                        if let Some(key) = self.join_key(t, &le.key, &re.key) {
                            let origin = Origin::Join { left: li, right: ri };
                            out.offer(key, cost, origin, |new, old| {
                                join_rank(lt, rt, new) < join_rank(lt, rt, old)
                            });
                        }
                    }
                }
            }
            _ => {
                let c = node.children[0];
                let ct = &self.tables[c];
                for (ci, ce) in ct.entries.iter().enumerate() {
                    self.successors(t, &ce.key, &mut |key, delta, deleted| {
                        let cost = ce.cost + delta;
                        if cost <= self.k {
                            let origin = Origin::Single { child: ci, deleted };
                            out.offer(key, cost, origin, |new, old| {
                                single_rank(ct, new) < single_rank(ct, old)
                            });
                        }
                    });
                }
            }
        }
        out
    }

    /// Whether `key` may be stored at node `t`.
    fn admissible(&self, t: usize, key: &DpKey) -> bool {
        let s = self.bag(t).len();
        let info = &self.info[t];
        for i in 0..s {
            let b = key.bal[i];
            if b < -info.fut_out[i] || b > info.fut_in[i] {
                return false;
            }
            for j in 0..s {
                if key.code(i, j) == FUTURE && info.fp[i] & (1 << j) == 0 {
                    return false;
                }
            }
        }
        true
    }

    /// Parent keys reachable from child key `ck` at the single-child node `t`,
    /// with the cost added and whether an arc copy was deleted.
    fn successors(&self, t: usize, ck: &DpKey, emit: &mut dyn FnMut(DpKey, usize, bool)) {
        match self.nd.nodes[t].kind {
            NodeKind::IntroduceVertex(v) => self.introduce_vertex_successors(t, v, ck, emit),
            NodeKind::IntroduceArc { u, v, .. } => {
                let (i, j) = (self.pos(t, u), self.pos(t, v));
                let mut del = ck.clone();
                del.add_deleted(i, j);
                if self.admissible(t, &del) {
                    emit(del, 1, true);
                }
                if ck.code(i, j) != 0 {
                    let mut keep = ck.clone();
                    keep.set_code(i, j, DIRECT);
                    let rows = ck.closure(self.bag(t).len());
                    if rows[i] & (1 << j) != 0 && rows[j] & (1 << i) != 0 {
                        keep.bal[i] += 1;
                        keep.bal[j] -= 1;
                    }
                    if self.admissible(t, &keep) {
                        emit(keep, 0, false);
                    }
                }
            }
            NodeKind::Forget(v) => {
                let c = self.nd.nodes[t].children[0];
                let s = self.bag(c).len();
                let p = self.pos(c, v);
                if ck.bal[p] != 0 {
                    return;
                }
                if (0..s).any(|x| ck.code(p, x) == FUTURE || ck.code(x, p) == FUTURE) {
                    return;
                }
                let mut key = ck.clone();
                for a in (0..s).filter(|&a| a != p && ck.code(a, p) != 0) {
                    for b in (0..s).filter(|&b| b != p && b != a && ck.code(p, b) != 0) {
                        if key.code(a, b) != DIRECT {
                            key.set_code(a, b, PAST);
                        }
                    }
                }
                let key = key.remove_position(p, s);
                if self.admissible(t, &key) {
                    emit(key, 0, false);
                }
            }
            NodeKind::Leaf | NodeKind::Join => unreachable!("not a single-child node"),
        }
    }

    fn introduce_vertex_successors(
        &self,
        t: usize,
        v: Vertex,
        ck: &DpKey,
        emit: &mut dyn FnMut(DpKey, usize, bool),
    ) {
        let s = self.bag(t).len();
        let p = self.pos(t, v);
        let fp = &self.info[t].fp;
        let base = ck.insert_position(p, s - 1);

        let in_mask: u8 = (0..s)
            .filter(|&a| a != p && fp[a] & (1 << p) != 0)
            .fold(0, |m, a| m | (1 << a));
        let out_mask: u8 = fp[p] & !(1 << p);

        let mut forced = Vec::new();
        let mut optional = Vec::new();
        for a in 0..s {
            for b in 0..s {
                if base.code(a, b) == FUTURE {
                    if fp[a] & (1 << b) != 0 {
                        optional.push((a, b));
                    } else {
                        forced.push((a, b));
                    }
                }
            }
        }
        // Every forced omission needs a detour through v.
        let need_in = forced.iter().fold(0u8, |m, &(a, _)| m | (1 << a));
        let need_out = forced.iter().fold(0u8, |m, &(_, b)| m | (1 << b));
        if need_in & !in_mask != 0 || need_out & !out_mask != 0 {
            return;
        }

        for a_set in submasks(in_mask) {
            if a_set & need_in != need_in {
                continue;
            }
            for b_set in submasks(out_mask) {
                if b_set & need_out != need_out {
                    continue;
                }
                let pairs_ok = bits(a_set).all(|a| {
                    bits(b_set).all(|b| a == b || base.code(a, b) != 0)
                });
                if !pairs_ok {
                    continue;
                }
                let mut key = base.clone();
                for a in bits(a_set) {
                    key.set_code(a, p, FUTURE);
                }
                for b in bits(b_set) {
                    key.set_code(p, b, FUTURE);
                }
                for &(a, b) in &forced {
                    key.set_code(a, b, 0);
                }
                let choices: Vec<(usize, usize)> = optional
                    .iter()
                    .copied()
                    .filter(|&(a, b)| a_set & (1 << a) != 0 && b_set & (1 << b) != 0)
                    .collect();
                for omit in 0u32..(1u32 << choices.len()) {
                    let mut k2 = key.clone();
                    for (bit, &(a, b)) in choices.iter().enumerate() {
                        if omit & (1 << bit) != 0 {
                            k2.set_code(a, b, 0);
                        }
                    }
                    if self.admissible(t, &k2) {
                        emit(k2, 0, false);
                    }
                }
            }
        }
    }

    fn join_key(&self, t: usize, a: &DpKey, b: &DpKey) -> Option<DpKey> {
        let s = self.bag(t).len();
        let mut key = DpKey::default();
        for i in 0..s {
            for j in 0..s {
                let (x, y) = (a.code(i, j), b.code(i, j));
                if x != 0 {
                    // direct < past < future as codes; the stronger realization wins.
                    key.set_code(i, j, x.min(y));
                }
            }
            key.bal[i] = a.bal[i] + b.bal[i];
        }
        key.del = a.del.clone();
        for &(i, j, c) in &b.del {
            for _ in 0..c {
                key.add_deleted(i as usize, j as usize);
            }
        }
        self.admissible(t, &key).then_some(key)
    }

    /// Root cost of the empty key, or the infeasible sentinel.
    pub fn root_cost(&self) -> usize {
        self.tables
            .last()
            .and_then(|t| t.cost(&DpKey::default()))
            .unwrap_or(self.infeasible())
    }

    /// Entry index chosen at every node by the reconstruction, if the root is feasible.
    pub fn trace(&self) -> Option<Vec<usize>> {
        let root = self.nd.root();
        let start = *self.tables[root].index.get(&DpKey::default())?;
        let mut chosen = vec![usize::MAX; self.nd.len()];
        let mut stack = vec![(root, start)];
        while let Some((t, e)) = stack.pop() {
            chosen[t] = e;
            let node = &self.nd.nodes[t];
            match self.tables[t].entries[e].origin {
                Origin::Leaf => {}
                Origin::Single { child, .. } => stack.push((node.children[0], child)),
                Origin::Join { left, right } => {
                    stack.push((node.children[0], left));
                    stack.push((node.children[1], right));
                }
            }
        }
        Some(chosen)
    }

    /// Deletion set reconstructed from the back-references.
    pub fn witness(&self) -> Option<ArcMultiset> {
        let chosen = self.trace()?;
        let mut s = ArcMultiset::new();
        for (t, &e) in chosen.iter().enumerate() {
            if let (NodeKind::IntroduceArc { u, v, .. }, Origin::Single { deleted: true, .. }) =
                (self.nd.nodes[t].kind, self.tables[t].entries[e].origin)
            {
                s.insert(u, v, 1);
            }
        }
        Some(s)
    }

    /// The chosen key at each node, paired with its bag and node kind.
    pub fn trace_steps(&self) -> Option<Vec<TraceStep>> {
        let chosen = self.trace()?;
        Some(
            chosen
                .iter()
                .enumerate()
                .map(|(t, &e)| {
                    let entry = &self.tables[t].entries[e];
                    TraceStep {
                        node: t,
                        bag: self.bag(t).to_vec(),
                        key: entry.key.clone(),
                        cost: entry.cost,
                        deleted_here: matches!(entry.origin, Origin::Single { deleted: true, .. }),
                    }
                })
                .collect(),
        )
    }

    pub fn stats(&self) -> DpStats {
        let entries_per_node: Vec<usize> = self.tables.iter().map(DpTable::len).collect();
        DpStats {
            max_entries: entries_per_node.iter().copied().max().unwrap_or(0),
            total_entries: entries_per_node.iter().sum(),
            entries_per_node,
        }
    }

    fn backward_single(&self, t: usize, child: &DpTable, key: &DpKey) -> usize {
        let mut best = self.infeasible();
        for e in &child.entries {
            self.successors(t, &e.key, &mut |k, delta, _| {
                if &k == key && e.cost + delta <= self.k {
                    best = best.min(e.cost + delta);
                }
            });
        }
        best
    }

    /// Cost of `key` at introduce-vertex node `t` computed from the child table.
    pub fn introduce_vertex_entry(&self, t: usize, child: &DpTable, key: &DpKey) -> usize {
        debug_assert!(matches!(self.nd.nodes[t].kind, NodeKind::IntroduceVertex(_)));
        self.backward_single(t, child, key)
    }

    /// Cost of `key` at introduce-arc node `t`: either one copy of the arc is
    /// in `W` and came from the child with one fewer, or the arc is direct
    /// and was kept.
    pub fn introduce_arc_entry(&self, t: usize, child: &DpTable, key: &DpKey) -> usize {
        let NodeKind::IntroduceArc { u, v, .. } = self.nd.nodes[t].kind else {
            panic!("node {t} is not an introduce-arc node");
        };
        let (i, j) = (self.pos(t, u), self.pos(t, v));
        let mut best = self.infeasible();
        if !self.admissible(t, key) {
            return best;
        }
        if key.deleted(i, j) > 0 {
            let mut prev = key.clone();
            let pos = prev
                .del
                .iter()
                .position(|&(a, b, _)| a as usize == i && b as usize == j)
                .expect("present");
            if prev.del[pos].2 == 1 {
                prev.del.remove(pos);
            } else {
                prev.del[pos].2 -= 1;
            }
            if let Some(c) = child.cost(&prev) {
                if c < self.k {
                    best = best.min(c + 1);
                }
            }
        }
        if key.code(i, j) == DIRECT {
            for e in &child.entries {
                if e.cost >= best {
                    continue;
                }
                self.successors(t, &e.key, &mut |k, delta, deleted| {
                    if !deleted && &k == key {
                        best = best.min(e.cost + delta);
                    }
                });
            }
        }
        best
    }

    /// Cost of `key` at forget node `t`: minimum over admissible child keys.
    pub fn forget_entry(&self, t: usize, child: &DpTable, key: &DpKey) -> usize {
        debug_assert!(matches!(self.nd.nodes[t].kind, NodeKind::Forget(_)));
        self.backward_single(t, child, key)
    }

    /// Cost of `key` at join node `t`: minimum of summed child costs over
    /// label splits and balance splits that combine into `key`.
    pub fn join_entry(&self, t: usize, left: &DpTable, right: &DpTable, key: &DpKey) -> usize {
        let mut best = self.infeasible();
        for a in &left.entries {
            for b in &right.entries {
                if a.key.arc_mask() == b.key.arc_mask() && a.cost + b.cost <= self.k {
                    if let Some(k) = self.join_key(t, &a.key, &b.key) {
                        if &k == key {
                            best = best.min(a.cost + b.cost);
                        }
                    }
                }
            }
        }
        best
    }
}

fn single_rank<'t>(child: &'t DpTable, o: &Origin) -> &'t DpKey {
    match *o {
        Origin::Single { child: c, .. } => &child.entries[c].key,
        _ => unreachable!(),
    }
}

fn join_rank<'t>(l: &'t DpTable, r: &'t DpTable, o: &Origin) -> (&'t DpKey, &'t DpKey) {
    match *o {
        Origin::Join { left, right } => (&l.entries[left].key, &r.entries[right].key),
        _ => unreachable!(),
    }
}

fn submasks(mask: u8) -> impl Iterator<Item = u8> {
    let mut next = Some(mask);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == 0 { None } else { Some((cur - 1) & mask) };
        Some(cur)
    })
}

fn bits(mask: u8) -> impl Iterator<Item = usize> {
    (0..8).filter(move |&i| mask & (1 << i) != 0)
}

/// Per-node reachability and degree bounds over the not-yet-introduced part.
fn node_infos(g: &MultiDigraph, nd: &NiceDecomposition) -> Vec<NodeInfo> {
    let n = g.n();
    let pairs: Vec<((Vertex, Vertex), usize)> = g.arcs().collect();
    let pair_id: FxHashMap<(Vertex, Vertex), usize> =
        pairs.iter().enumerate().map(|(i, &(p, _))| (p, i)).collect();
    let mut out_adj: Vec<Vec<(Vertex, usize)>> = vec![Vec::new(); n + 1];
    let mut in_adj: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
    for (i, &((u, v), _)) in pairs.iter().enumerate() {
        out_adj[u].push((v, i));
        in_adj[v].push(i);
    }

    let mut pending: Vec<Option<(Vec<bool>, Vec<usize>)>> = vec![None; nd.len()];
    let mut infos = Vec::with_capacity(nd.len());
    for (t, node) in nd.nodes.iter().enumerate() {
        let (mut in_vt, mut intro) = match node.children.as_slice() {
            [] => (vec![false; n + 1], vec![0usize; pairs.len()]),
            [c] => pending[*c].take().expect("child state"),
            [l, r] => {
                let (mut a, mut ai) = pending[*l].take().expect("child state");
                let (b, bi) = pending[*r].take().expect("child state");
                for (x, y) in a.iter_mut().zip(b) {
                    *x |= y;
                }
                for (x, y) in ai.iter_mut().zip(bi) {
                    *x += y;
                }
                (a, ai)
            }
            _ => unreachable!("binary tree"),
        };
        match node.kind {
            NodeKind::IntroduceVertex(v) => in_vt[v] = true,
            NodeKind::IntroduceArc { u, v, .. } => intro[pair_id[&(u, v)]] += 1,
            _ => {}
        }

        let bag = &node.bag;
        let left = |id: usize| pairs[id].1 - intro[id];
        let mut info = NodeInfo {
            fp: [0; MAX_BAG],
            fut_out: [0; MAX_BAG],
            fut_in: [0; MAX_BAG],
        };
        for (i, &u) in bag.iter().enumerate() {
            info.fut_out[i] = out_adj[u].iter().map(|&(_, id)| left(id) as i16).sum();
            info.fut_in[i] = in_adj[u].iter().map(|&id| left(id) as i16).sum();

            let mut seen = vec![false; n + 1];
            let mut stack = vec![u];
            while let Some(x) = stack.pop() {
                for &(y, id) in &out_adj[x] {
                    if left(id) == 0 {
                        continue;
                    }
                    if let Ok(j) = bag.binary_search(&y) {
                        if y != u {
                            info.fp[i] |= 1 << j;
                        }
                    } else if !in_vt[y] && !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
        }
        infos.push(info);
        pending[t] = Some((in_vt, intro));
    }
    infos
}

/// Solves ESCAD on `g` with budget `k` over the nice decomposition `nd`.
pub fn solve_dp(g: &MultiDigraph, k: usize, nd: &NiceDecomposition) -> Result<DpResult, DpError> {
    solve_dp_with(g, k, nd, &DpOptions::default())
}

pub fn solve_dp_with(
    g: &MultiDigraph,
    k: usize,
    nd: &NiceDecomposition,
    options: &DpOptions,
) -> Result<DpResult, DpError> {
    let mut dp = DpSolver::new(g, nd, k, options.clone())?;
    dp.run()?;
    let cost = dp.root_cost();
    let feasible = cost <= dp.budget();
    Ok(DpResult {
        feasible,
        optimum: feasible.then_some(cost),
        witness: if feasible { dp.witness() } else { None },
        stats: dp.stats(),
    })
}

/// Minimum solution size, running with budget `m`.
pub fn min_solution_dp(g: &MultiDigraph, nd: &NiceDecomposition) -> Result<DpResult, DpError> {
    solve_dp(g, g.m(), nd)
}

/// Imbalance of `v` in the subgraph of `g` induced by `v`'s strong component of `r`.
pub fn active_imbalance(
    g: &MultiDigraph,
    r: &ReachabilityArrangement,
    v: Vertex,
) -> Result<i64, DpError> {
    let idx = r
        .vertices
        .iter()
        .position(|&w| w == v)
        .ok_or(DpError::NotInDomain(v))?;
    let comp = r.component_ids();
    let mine = comp[idx];
    let members: Vec<Vertex> = r
        .vertices
        .iter()
        .zip(&comp)
        .filter(|&(_, &c)| c == mine)
        .map(|(&w, _)| w)
        .collect();
    let mut b = 0i64;
    for ((x, y), c) in g.arcs() {
        if x == v && members.contains(&y) {
            b += c as i64;
        }
        if y == v && members.contains(&x) {
            b -= c as i64;
        }
    }
    Ok(b)
}

/// `active_imbalance(g1, r, v) − active_imbalance(g2, r, v)`.
pub fn offset_imbalance(
    g1: &MultiDigraph,
    g2: &MultiDigraph,
    r: &ReachabilityArrangement,
    v: Vertex,
) -> Result<i64, DpError> {
    if g1.n() != g2.n() {
        return Err(DpError::DomainMismatch(g1.n(), g2.n()));
    }
    Ok(active_imbalance(g1, r, v)? - active_imbalance(g2, r, v)?)
}

#[cfg(test)]
mod tests;
