//! Packed table keys: a labeled arrangement on the bag, running balances and
//! per-pair deletion counts.

use std::collections::BTreeMap;

use smallvec::SmallVec;

use crate::digraph::Vertex;

/// Largest bag the packed encoding supports.
pub const MAX_BAG: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    /// Realized by a kept arc copy already introduced.
    Direct,
    /// Realized by a path through forgotten vertices.
    Past,
    /// To be realized by arcs and vertices not yet introduced.
    Future,
}

impl Label {
    pub(crate) fn code(self) -> u128 {
        match self {
            Label::Direct => 1,
            Label::Past => 2,
            Label::Future => 3,
        }
    }

    pub(crate) fn from_code(c: u128) -> Option<Label> {
        match c {
            1 => Some(Label::Direct),
            2 => Some(Label::Past),
            3 => Some(Label::Future),
            _ => None,
        }
    }
}

pub(crate) const DIRECT: u128 = 1;
pub(crate) const PAST: u128 = 2;
pub(crate) const FUTURE: u128 = 3;

/// A table key over bag positions `0..bag.len()` (bag sorted ascending).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DpKey {
    pub(crate) labels: u128,
    pub(crate) bal: [i16; MAX_BAG],
    pub(crate) del: SmallVec<[(u8, u8, u16); 4]>,
}

#[inline]
fn shift(i: usize, j: usize) -> u32 {
    ((i * MAX_BAG + j) * 2) as u32
}

impl DpKey {
    pub(crate) fn code(&self, i: usize, j: usize) -> u128 {
        (self.labels >> shift(i, j)) & 3
    }

    pub(crate) fn set_code(&mut self, i: usize, j: usize, c: u128) {
        let s = shift(i, j);
        self.labels = (self.labels & !(3u128 << s)) | (c << s);
    }

    pub fn label(&self, i: usize, j: usize) -> Option<Label> {
        Label::from_code(self.code(i, j))
    }

    pub fn balance(&self, i: usize) -> i64 {
        self.bal[i] as i64
    }

    /// Deleted copies of the pair at bag positions `(i, j)`.
    pub fn deleted(&self, i: usize, j: usize) -> usize {
        self.del
            .iter()
            .find(|&&(a, b, _)| a as usize == i && b as usize == j)
            .map_or(0, |&(_, _, c)| c as usize)
    }

    pub fn deleted_total(&self) -> usize {
        self.del.iter().map(|&(_, _, c)| c as usize).sum()
    }

    pub(crate) fn add_deleted(&mut self, i: usize, j: usize) {
        let (i, j) = (i as u8, j as u8);
        match self.del.binary_search_by(|&(a, b, _)| (a, b).cmp(&(i, j))) {
            Ok(pos) => self.del[pos].2 += 1,
            Err(pos) => self.del.insert(pos, (i, j, 1)),
        }
    }

    /// Bit `i*8+j` set iff the arrangement has arc `(i, j)`.
    pub(crate) fn arc_mask(&self) -> u64 {
        let mut mask = 0u64;
        let mut bits = self.labels;
        let mut idx = 0;
        while bits != 0 {
            if bits & 3 != 0 {
                mask |= 1 << idx;
            }
            bits >>= 2;
            idx += 1;
        }
        mask
    }

    /// Row bitmasks of the transitive closure of the arrangement, `s` positions.
    pub(crate) fn closure(&self, s: usize) -> [u8; MAX_BAG] {
        let mask = self.arc_mask();
        let mut rows = [0u8; MAX_BAG];
        for (i, row) in rows.iter_mut().enumerate().take(s) {
            *row = ((mask >> (i * MAX_BAG)) & 0xff) as u8;
        }
        for k in 0..s {
            for i in 0..s {
                if rows[i] & (1 << k) != 0 {
                    rows[i] |= rows[k];
                }
            }
        }
        rows
    }

    /// Copy of this key with a fresh, empty position inserted at `p`.
    pub(crate) fn insert_position(&self, p: usize, s: usize) -> DpKey {
        let mut out = DpKey::default();
        let up = |i: usize| if i >= p { i + 1 } else { i };
        for i in 0..s {
            for j in 0..s {
                let c = self.code(i, j);
                if c != 0 {
                    out.set_code(up(i), up(j), c);
                }
            }
            out.bal[up(i)] = self.bal[i];
        }
        out.del = self
            .del
            .iter()
            .map(|&(a, b, c)| (up(a as usize) as u8, up(b as usize) as u8, c))
            .collect();
        out
    }

    /// Copy of this key with position `p` dropped, along with its labels,
    /// balance and deletion entries.
    pub(crate) fn remove_position(&self, p: usize, s: usize) -> DpKey {
        let mut out = DpKey::default();
        let down = |i: usize| if i > p { i - 1 } else { i };
        for i in (0..s).filter(|&i| i != p) {
            for j in (0..s).filter(|&j| j != p) {
                let c = self.code(i, j);
                if c != 0 {
                    out.set_code(down(i), down(j), c);
                }
            }
            out.bal[down(i)] = self.bal[i];
        }
        out.del = self
            .del
            .iter()
            .filter(|&&(a, b, _)| a as usize != p && b as usize != p)
            .map(|&(a, b, c)| (down(a as usize) as u8, down(b as usize) as u8, c))
            .collect();
        out
    }

    /// Readable form over the actual bag vertices.
    pub fn arrangement(&self, bag: &[Vertex]) -> ReachabilityArrangement {
        let mut arcs = BTreeMap::new();
        for (i, &u) in bag.iter().enumerate() {
            for (j, &v) in bag.iter().enumerate() {
                if let Some(l) = self.label(i, j) {
                    arcs.insert((u, v), l);
                }
            }
        }
        ReachabilityArrangement {
            vertices: bag.to_vec(),
            arcs,
        }
    }

    /// Builds a key from explicit parts over `bag`.
    pub fn from_parts(
        bag: &[Vertex],
        arrangement: &ReachabilityArrangement,
        balance: &BTreeMap<Vertex, i64>,
        deleted: &BTreeMap<(Vertex, Vertex), usize>,
    ) -> Option<DpKey> {
        if bag.len() > MAX_BAG {
            return None;
        }
        let pos = |v: Vertex| bag.binary_search(&v).ok();
        let mut key = DpKey::default();
        for (&(u, v), &l) in &arrangement.arcs {
            key.set_code(pos(u)?, pos(v)?, l.code());
        }
        for (&v, &b) in balance {
            key.bal[pos(v)?] = i16::try_from(b).ok()?;
        }
        for (&(u, v), &c) in deleted {
            if c > 0 {
                let (i, j) = (pos(u)?, pos(v)?);
                for _ in 0..c {
                    key.add_deleted(i, j);
                }
            }
        }
        Some(key)
    }
}

/// A simple labeled digraph on a bag.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ReachabilityArrangement {
    pub vertices: Vec<Vertex>,
    pub arcs: BTreeMap<(Vertex, Vertex), Label>,
}

impl ReachabilityArrangement {
    pub fn new(vertices: Vec<Vertex>) -> Self {
        Self {
            vertices,
            arcs: BTreeMap::new(),
        }
    }

    pub fn with_arc(mut self, u: Vertex, v: Vertex, l: Label) -> Self {
        self.arcs.insert((u, v), l);
        self
    }

    /// Strong components of the arrangement, as a component id per vertex of
    /// `vertices` (in the same order).
    pub fn component_ids(&self) -> Vec<usize> {
        let idx = |v: Vertex| self.vertices.iter().position(|&w| w == v);
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for &(u, v) in self.arcs.keys() {
            if let (Some(a), Some(b)) = (idx(u), idx(v)) {
                adj[a].push(b);
            }
        }
        crate::digraph::scc_ids(&adj).0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn label_packing() {
        let mut k = DpKey::default();
        k.set_code(0, 1, FUTURE);
        k.set_code(7, 6, DIRECT);
        assert_eq!(k.label(0, 1), Some(Label::Future));
        assert_eq!(k.label(7, 6), Some(Label::Direct));
        assert_eq!(k.label(1, 0), None);
        k.set_code(0, 1, PAST);
        assert_eq!(k.label(0, 1), Some(Label::Past));
        assert_eq!(k.arc_mask(), (1 << 1) | (1 << 62));
    }

    #[test]
    fn closure_and_positions() {
        let mut k = DpKey::default();
        k.set_code(0, 1, DIRECT);
        k.set_code(1, 2, PAST);
        k.bal[2] = -1;
        k.add_deleted(0, 2);
        k.add_deleted(0, 2);
        let rows = k.closure(3);
        assert_eq!(rows[0], 0b110);
        assert_eq!(rows[2], 0);

        let wide = k.insert_position(1, 3);
        assert_eq!(wide.label(0, 2), Some(Label::Direct));
        assert_eq!(wide.label(2, 3), Some(Label::Past));
        assert_eq!(wide.bal[3], -1);
        assert_eq!(wide.deleted(0, 3), 2);
        assert_eq!(wide.remove_position(1, 4), k);

        let narrow = k.remove_position(0, 3);
        assert_eq!(narrow.label(0, 1), Some(Label::Past));
        assert!(narrow.del.is_empty());
    }
}
