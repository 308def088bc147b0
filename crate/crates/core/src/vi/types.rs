//! Labeled component types, reachability signatures over `M`, and the
//! per-component compatibility test.

use crate::digraph::MultiDigraph;

use super::{Separator, ViError};

/// Bit of the ordered pair `(i, j)` of separator positions.
#[inline]
pub(crate) fn pair_bit(i: usize, j: usize) -> u64 {
    1 << (i * 8 + j)
}

/// Transitive closure of a pair mask over `m` positions, distinct pairs only.
pub(crate) fn close(m: usize, mask: u64) -> u64 {
    let mut rows = [0u8; 8];
    for (i, row) in rows.iter_mut().enumerate().take(m) {
        *row = ((mask >> (i * 8)) & 0xff) as u8;
    }
    for k in 0..m {
        for i in 0..m {
            if rows[i] & (1 << k) != 0 {
                rows[i] |= rows[k];
            }
        }
    }
    let mut out = 0;
    for (i, &row) in rows.iter().enumerate().take(m) {
        out |= ((row & !(1 << i)) as u64) << (i * 8);
    }
    out
}

/// A reachability relation on the separator, as distinct ordered pairs of positions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sigma {
    m: usize,
    mask: u64,
}

impl Sigma {
    pub fn new(m: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        assert!(m <= 8, "at most 8 separator vertices");
        let mut mask = 0;
        for (i, j) in pairs {
            assert!(i < m && j < m);
            if i != j {
                mask |= pair_bit(i, j);
            }
        }
        Self { m, mask }
    }

    pub(crate) fn from_mask(m: usize, mask: u64) -> Self {
        Self { m, mask }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        i == j || self.mask & pair_bit(i, j) != 0
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let m = self.m;
        (0..m)
            .flat_map(move |i| (0..m).map(move |j| (i, j)))
            .filter(|&(i, j)| i != j && self.mask & pair_bit(i, j) != 0)
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    pub fn is_closed(&self) -> bool {
        close(self.m, self.mask) == self.mask
    }
}

/// All transitively closed relations on `m` positions containing `base`, by
/// increasing mask.
pub fn enumerate_sigmas(m: usize, base: u64) -> Vec<Sigma> {
    let base = close(m, base);
    let free: Vec<u64> = (0..m)
        .flat_map(|i| (0..m).map(move |j| (i, j)))
        .filter(|&(i, j)| i != j && base & pair_bit(i, j) == 0)
        .map(|(i, j)| pair_bit(i, j))
        .collect();
    let mut out = Vec::new();
    for pick in 0u64..(1 << free.len()) {
        let mut mask = base;
        for (b, &bit) in free.iter().enumerate() {
            if pick >> b & 1 == 1 {
                mask |= bit;
            }
        }
        if close(m, mask) == mask {
            out.push(Sigma { m, mask });
        }
    }
    out.sort();
    out
}

/// Canonical form of a component graph `G_C` with the separator labeled:
/// positions `0..m` are the separator in order, the rest are component
/// vertices in the order minimizing the row encoding.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ComponentType {
    m: usize,
    size: usize,
    rows: Vec<u64>,
}

impl ComponentType {
    pub fn separator_size(&self) -> usize {
        self.m
    }

    /// Number of component (unlabeled) vertices.
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn vertices(&self) -> usize {
        self.m + self.size
    }

    /// Arcs in canonical coordinates, sorted.
    pub fn arcs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (x, &row) in self.rows.iter().enumerate() {
            for y in 0..self.rows.len() {
                if row >> y & 1 == 1 {
                    out.push((x, y));
                }
            }
        }
        out
    }

    pub fn arc_count(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones() as usize).sum()
    }

    /// Builds the canonical type of a local graph. Returns the type and the
    /// map from local position to canonical position.
    pub fn canonical(m: usize, rows: &[u64]) -> (ComponentType, Vec<usize>) {
        let len = rows.len();
        let size = len - m;
        let mut order: Vec<usize> = (m..len).collect();
        let mut best: Option<(Vec<u64>, Vec<usize>)> = None;
        loop {
            // order[i] is the local vertex placed at canonical position m + i.
            let mut perm: Vec<usize> = (0..len).collect();
            for (i, &local) in order.iter().enumerate() {
                perm[local] = m + i;
            }
            let permuted = permute_rows(rows, &perm);
            if best.as_ref().is_none_or(|(b, _)| permuted < *b) {
                best = Some((permuted, perm));
            }
            if !next_permutation(&mut order) {
                break;
            }
        }
        let (rows, perm) = best.expect("at least the identity");
        (ComponentType { m, size, rows }, perm)
    }
}

fn permute_rows(rows: &[u64], perm: &[usize]) -> Vec<u64> {
    let mut out = vec![0u64; rows.len()];
    for (x, &row) in rows.iter().enumerate() {
        let mut bits = row;
        while bits != 0 {
            let y = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            out[perm[x]] |= 1 << perm[y];
        }
    }
    out
}

fn next_permutation(a: &mut [usize]) -> bool {
    if a.len() < 2 {
        return false;
    }
    let mut i = a.len() - 1;
    while i > 0 && a[i - 1] >= a[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = a.len() - 1;
    while a[j] <= a[i - 1] {
        j -= 1;
    }
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}

/// Types of all components of `G − M`, with multiplicities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Typing {
    /// Distinct types in order of first appearance.
    pub types: Vec<ComponentType>,
    pub counts: Vec<usize>,
    /// Type index of each component of the separator.
    pub of_component: Vec<usize>,
    /// Local-to-canonical position map of each component. Local positions are
    /// the separator in order, then the component's vertices in order.
    pub perms: Vec<Vec<usize>>,
}

/// Types every component graph `G_C`: the arcs of `g` with at least one
/// endpoint in `C`, over `M ∪ C`.
pub fn component_types(g: &MultiDigraph, sep: &Separator) -> Result<Typing, ViError> {
    let m = sep.m.len();
    if m > 8 {
        return Err(ViError::SeparatorTooLarge(m));
    }
    let bound = sep.k.saturating_sub(m);
    let mut typing = Typing {
        types: Vec::new(),
        counts: Vec::new(),
        of_component: Vec::new(),
        perms: Vec::new(),
    };
    let mut local = vec![usize::MAX; g.n() + 1];
    for (i, &v) in sep.m.iter().enumerate() {
        local[v] = i;
    }
    for comp in &sep.components {
        if comp.len() > bound {
            return Err(ViError::InvalidSeparator {
                size: comp.len(),
                bound,
            });
        }
        if m + comp.len() > 64 {
            return Err(ViError::ComponentTooLarge { arcs: 0 });
        }
        for (i, &v) in comp.iter().enumerate() {
            local[v] = m + i;
        }
        let mut rows = vec![0u64; m + comp.len()];
        for ((u, v), _) in g.arcs() {
            let (a, b) = (local[u], local[v]);
            if a == usize::MAX || b == usize::MAX || (a < m && b < m) {
                continue;
            }
            rows[a] |= 1 << b;
        }
        for &v in comp {
            local[v] = usize::MAX;
        }
        let (ty, perm) = ComponentType::canonical(m, &rows);
        let idx = match typing.types.iter().position(|t| *t == ty) {
            Some(i) => i,
            None => {
                typing.types.push(ty);
                typing.counts.push(0);
                typing.types.len() - 1
            }
        };
        typing.counts[idx] += 1;
        typing.of_component.push(idx);
        typing.perms.push(perm);
    }
    for (i, &v) in sep.m.iter().enumerate() {
        debug_assert_eq!(local[v], i);
    }
    Ok(typing)
}

/// Outcome of deleting arcs from a component type under a signature.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Compat {
    /// Every component vertex is balanced in its strong component of
    /// `G_C − S_C + σ`.
    pub balanced: bool,
    /// Active-arc imbalance contributed to each separator vertex.
    pub contribution: Vec<i64>,
    /// Separator pairs joined by a path through the component alone.
    pub through: u64,
}

impl Compat {
    /// Balanced, and the component adds no separator reachability outside `σ`.
    pub fn fits(&self, sigma: &Sigma) -> bool {
        self.balanced && self.through & !sigma.mask() == 0
    }
}

/// Evaluates `ty − S_C + σ`, where bit `i` of `deleted` removes the `i`-th arc
/// of [`ComponentType::arcs`].
pub fn compatibility(ty: &ComponentType, deleted: u64, sigma: &Sigma) -> Compat {
    let arcs = ty.arcs();
    let mut kept = ty.rows.clone();
    for (i, &(x, y)) in arcs.iter().enumerate() {
        if deleted >> i & 1 == 1 {
            kept[x] &= !(1 << y);
        }
    }
    evaluate(ty.m, &kept, sigma)
}

pub(crate) fn evaluate(m: usize, kept: &[u64], sigma: &Sigma) -> Compat {
    let len = kept.len();
    let sep_mask: u64 = (1 << m) - 1;
    let comp_mask: u64 = if len == 64 { !sep_mask } else { ((1u64 << len) - 1) & !sep_mask };

    let mut through = 0u64;
    for i in 0..m {
        let mut reach = kept[i] & comp_mask;
        let mut frontier = reach;
        while frontier != 0 {
            let c = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let new = kept[c] & comp_mask & !reach;
            reach |= new;
            frontier |= new;
        }
        let mut hits = 0u64;
        let mut bits = reach;
        while bits != 0 {
            let c = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            hits |= kept[c] & sep_mask;
        }
        hits &= !(1 << i);
        for j in 0..m {
            if hits >> j & 1 == 1 {
                through |= pair_bit(i, j);
            }
        }
    }

    let mut reach = kept.to_vec();
    for (i, j) in sigma.pairs() {
        reach[i] |= 1 << j;
    }
    for (x, r) in reach.iter_mut().enumerate() {
        *r |= 1 << x;
    }
    for k in 0..len {
        for i in 0..len {
            if reach[i] >> k & 1 == 1 {
                reach[i] |= reach[k];
            }
        }
    }
    let mut bal = vec![0i64; len];
    for (x, &row) in kept.iter().enumerate() {
        let mut bits = row;
        while bits != 0 {
            let y = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            if reach[y] >> x & 1 == 1 {
                bal[x] += 1;
                bal[y] -= 1;
            }
        }
    }
    Compat {
        balanced: bal[m..].iter().all(|&b| b == 0),
        contribution: bal[..m].to_vec(),
        through,
    }
}
