//! Exact solver for simple digraphs of small vertex integrity.
//!
//! A separator `M` splits the graph into small components. For every guess of
//! the deleted arcs inside `M` and of the reachability relation `σ` that `M`
//! will have after deletion, components are grouped by labeled type and an
//! integer system decides how many components of each type are turned into
//! each admissible outcome.

mod separator;
mod system;
mod types;

use std::fmt::Write as _;

use rustc_hash::FxHashMap;
use thiserror::Error;

use crate::digraph::{ArcMultiset, MultiDigraph, Vertex};

pub use separator::{find_separator, Separator};
pub use system::{
    build_transition_system, feasible, feasible_with_cap, Assignment, Cover, Transition,
    TransitionSystem, DEFAULT_NODE_CAP,
};
pub use types::{compatibility, component_types, enumerate_sigmas, Compat, ComponentType, Sigma, Typing};

use types::{close, evaluate, pair_bit};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ViError {
    #[error("arc ({u},{v}) has {count} copies; a simple digraph is required")]
    NotSimple { u: Vertex, v: Vertex, count: usize },
    #[error("no separator with bound {0}")]
    NoSeparator(usize),
    #[error("separator search exceeded {0} subsets")]
    SubsetCap(u128),
    #[error("feasibility search exceeded {0} nodes")]
    NodeCap(u64),
    #[error("separator of {0} vertices exceeds the supported 8")]
    SeparatorTooLarge(usize),
    #[error("component with {arcs} arcs is too large to enumerate")]
    ComponentTooLarge { arcs: usize },
    #[error("component of {size} vertices exceeds bound {bound}")]
    InvalidSeparator { size: usize, bound: usize },
}

/// Largest component arc count whose deletion subsets are enumerated.
pub const MAX_COMPONENT_ARCS: usize = 24;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ViOptions {
    pub max_subsets: u128,
    /// Search nodes summed over all feasibility calls.
    pub max_nodes: u64,
}

impl Default for ViOptions {
    fn default() -> Self {
        Self {
            max_subsets: 10_000_000,
            max_nodes: DEFAULT_NODE_CAP,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ViStats {
    pub separator: usize,
    pub components: usize,
    pub types: usize,
    pub inner_guesses: u64,
    pub sigmas: u64,
    pub nodes: u64,
}

impl ViStats {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "STAT separator_size={}", self.separator).unwrap();
        writeln!(out, "STAT components={}", self.components).unwrap();
        writeln!(out, "STAT component_types={}", self.types).unwrap();
        writeln!(out, "STAT inner_guesses={}", self.inner_guesses).unwrap();
        writeln!(out, "STAT signatures={}", self.sigmas).unwrap();
        writeln!(out, "STAT search_nodes={}", self.nodes).unwrap();
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ViResult {
    pub feasible: bool,
    /// Minimum solution size, when it is at most the budget.
    pub optimum: Option<usize>,
    pub witness: Option<ArcMultiset>,
    pub separator: Separator,
    /// Accepting `σ` over separator vertices, distinct pairs only.
    pub sigma: Option<Vec<(Vertex, Vertex)>>,
    pub stats: ViStats,
}

/// Cheapest deletion per outcome of one type under one `σ`.
#[derive(Clone, Debug)]
struct Outcome {
    transition: Transition,
    deleted: u64,
}

struct TypeTable {
    ty: ComponentType,
    arcs: Vec<(usize, usize)>,
    /// Through pairs for each deletion mask.
    through: Vec<u64>,
}

impl TypeTable {
    fn new(ty: &ComponentType) -> Result<Self, ViError> {
        let arcs = ty.arcs();
        if arcs.len() > MAX_COMPONENT_ARCS {
            return Err(ViError::ComponentTooLarge { arcs: arcs.len() });
        }
        let empty = Sigma::from_mask(ty.separator_size(), 0);
        let through = (0u64..1 << arcs.len())
            .map(|mask| compatibility(ty, mask, &empty).through)
            .collect();
        Ok(Self {
            ty: ty.clone(),
            arcs,
            through,
        })
    }

    fn kept_rows(&self, mask: u64) -> Vec<u64> {
        let mut rows = vec![0u64; self.ty.vertices()];
        for (i, &(x, y)) in self.arcs.iter().enumerate() {
            if mask >> i & 1 == 0 {
                rows[x] |= 1 << y;
            }
        }
        rows
    }

    fn outcomes(&self, sigma: &Sigma) -> Vec<Outcome> {
        let mut best: FxHashMap<(Vec<i64>, u64), (usize, u64)> = FxHashMap::default();
        for (mask, &through) in self.through.iter().enumerate() {
            let mask = mask as u64;
            if through & !sigma.mask() != 0 {
                continue;
            }
            let c = evaluate(self.ty.separator_size(), &self.kept_rows(mask), sigma);
            if !c.balanced {
                continue;
            }
            let cost = mask.count_ones() as usize;
            let slot = best.entry((c.contribution, c.through)).or_insert((cost, mask));
            if cost < slot.0 {
                *slot = (cost, mask);
            }
        }
        let mut out: Vec<Outcome> = best
            .into_iter()
            .map(|((contribution, through), (cost, deleted))| Outcome {
                transition: Transition {
                    contribution,
                    through,
                    cost,
                },
                deleted,
            })
            .collect();
        out.sort_by(|a, b| {
            (&a.transition.contribution, a.transition.through)
                .cmp(&(&b.transition.contribution, b.transition.through))
        });
        out
    }
}

pub fn solve_vi(g: &MultiDigraph, p: usize, k: usize) -> Result<ViResult, ViError> {
    solve_vi_with(g, p, k, &ViOptions::default())
}

/// Decides whether at most `p` deletions suffice, using a `k`-separator.
/// When they do, the result carries a minimum witness.
pub fn solve_vi_with(
    g: &MultiDigraph,
    p: usize,
    k: usize,
    opts: &ViOptions,
) -> Result<ViResult, ViError> {
    if let Some(((u, v), count)) = g.arcs().find(|&(_, c)| c > 1) {
        return Err(ViError::NotSimple { u, v, count });
    }
    let sep = find_separator(g, k, opts.max_subsets)?.ok_or(ViError::NoSeparator(k))?;
    let m = sep.m.len();
    if m > 8 {
        return Err(ViError::SeparatorTooLarge(m));
    }
    let typing = component_types(g, &sep)?;
    let tables: Vec<TypeTable> = typing
        .types
        .iter()
        .map(TypeTable::new)
        .collect::<Result<_, _>>()?;
    let inside: Vec<(usize, usize)> = g
        .arcs()
        .filter_map(|((u, v), _)| Some((sep.index_of(u)?, sep.index_of(v)?)))
        .collect();

    let mut stats = ViStats {
        separator: m,
        components: sep.components.len(),
        types: typing.types.len(),
        ..ViStats::default()
    };
    let mut cache: FxHashMap<(usize, u64), Vec<Outcome>> = FxHashMap::default();
    let prohibitive = g.m() + 1;
    let mut limit = p;
    let mut best: Option<(usize, u64, Sigma, Vec<Vec<Outcome>>)> = None;

    'sizes: for dsize in 0..=inside.len() {
        if dsize > limit {
            break;
        }
        for d in combinations(inside.len(), dsize) {
            if dsize > limit {
                break 'sizes;
            }
            stats.inner_guesses += 1;
            let mut base = 0u64;
            let mut rho = vec![0i64; m];
            let kept: Vec<(usize, usize)> = inside
                .iter()
                .enumerate()
                .filter(|(i, _)| d & (1 << i) == 0)
                .map(|(_, &a)| a)
                .collect();
            for &(i, j) in &kept {
                base |= pair_bit(i, j);
            }
            let d_mask = d;
            for sigma in enumerate_sigmas(m, base) {
                stats.sigmas += 1;
                rho.iter_mut().for_each(|r| *r = 0);
                for &(i, j) in &kept {
                    if sigma.contains(j, i) {
                        rho[i] += 1;
                        rho[j] -= 1;
                    }
                }
                let options: Vec<Vec<Outcome>> = (0..tables.len())
                    .map(|t| {
                        cache
                            .entry((t, sigma.mask()))
                            .or_insert_with(|| tables[t].outcomes(&sigma))
                            .clone()
                    })
                    .collect();
                let rows: Vec<Vec<Transition>> = options
                    .iter()
                    .map(|o| o.iter().map(|x| x.transition.clone()).collect())
                    .collect();
                let cover = Cover {
                    m,
                    base: close(m, base),
                    goal: sigma.mask(),
                };
                let sys = build_transition_system(
                    &typing.counts,
                    &rows,
                    rho.clone(),
                    Vec::new(),
                    Some(cover),
                    limit - dsize,
                    prohibitive,
                );
                let remaining = opts.max_nodes.saturating_sub(stats.nodes);
                let (found, nodes) = match feasible_with_cap(&sys, remaining) {
                    Ok(r) => r,
                    Err(_) => return Err(ViError::NodeCap(opts.max_nodes)),
                };
                stats.nodes += nodes;
                if let Some(a) = found {
                    let total = dsize + a.cost;
                    let picked = pick_outcomes(&sys, &a, &options);
                    best = Some((total, d_mask, sigma, picked));
                    match total.checked_sub(1) {
                        Some(l) => limit = l,
                        None => break 'sizes,
                    }
                    if dsize > limit {
                        break;
                    }
                }
            }
        }
    }

    let Some((total, d_mask, sigma, picked)) = best else {
        return Ok(ViResult {
            feasible: false,
            optimum: None,
            witness: None,
            separator: sep,
            sigma: None,
            stats,
        });
    };
    let mut s = ArcMultiset::new();
    for (i, &(a_, b_)) in inside.iter().enumerate() {
        if d_mask >> i & 1 == 1 {
            s.insert(sep.m[a_], sep.m[b_], 1);
        }
    }
    for (t, table) in tables.iter().enumerate() {
        let comps: Vec<usize> = (0..sep.components.len())
            .filter(|&c| typing.of_component[c] == t)
            .collect();
        for (&c, outcome) in comps.iter().zip(&picked[t]) {
            let perm = &typing.perms[c];
            let mut inv = vec![0; perm.len()];
            for (local, &canon) in perm.iter().enumerate() {
                inv[canon] = local;
            }
            let global = |local: usize| {
                if local < m {
                    sep.m[local]
                } else {
                    sep.components[c][local - m]
                }
            };
            for (i, &(x, y)) in table.arcs.iter().enumerate() {
                if outcome.deleted >> i & 1 == 1 {
                    s.insert(global(inv[x]), global(inv[y]), 1);
                }
            }
        }
    }
    debug_assert_eq!(s.size(), total);
    let sigma_pairs = sigma.pairs().map(|(i, j)| (sep.m[i], sep.m[j])).collect();
    Ok(ViResult {
        feasible: true,
        optimum: Some(total),
        witness: Some(s),
        separator: sep,
        sigma: Some(sigma_pairs),
        stats,
    })
}

/// For each source, the outcome chosen for each of its components in order.
fn pick_outcomes(sys: &TransitionSystem, a: &Assignment, options: &[Vec<Outcome>]) -> Vec<Vec<Outcome>> {
    a.x.iter()
        .enumerate()
        .map(|(s, row)| {
            let mut out = Vec::new();
            for (j, &count) in row.iter().enumerate() {
                if count == 0 {
                    continue;
                }
                let o = options[s]
                    .iter()
                    .find(|o| {
                        o.transition.contribution == sys.contributions[j]
                            && o.transition.through == sys.through[j]
                    })
                    .expect("used targets are offered");
                out.extend(std::iter::repeat_n(o.clone(), count));
            }
            out
        })
        .collect()
}

/// Minimum solution size, searching with budget `m`.
pub fn min_solution_vi(g: &MultiDigraph, k: usize, opts: &ViOptions) -> Result<ViResult, ViError> {
    solve_vi_with(g, g.m(), k, opts)
}

/// Bitmasks over `0..n` with `size` bits set, in lexicographic order of the
/// chosen index lists.
fn combinations(n: usize, size: usize) -> impl Iterator<Item = u64> {
    let mut pick: Option<Vec<usize>> = (size <= n).then(|| (0..size).collect());
    std::iter::from_fn(move || {
        let cur = pick.as_mut()?;
        let mask = cur.iter().fold(0u64, |acc, &i| acc | 1 << i);
        let mut i = size;
        while i > 0 && cur[i - 1] == n - size + i - 1 {
            i -= 1;
        }
        if i == 0 {
            pick = None;
        } else {
            cur[i - 1] += 1;
            for j in i..size {
                cur[j] = cur[j - 1] + 1;
            }
        }
        Some(mask)
    })
}

#[cfg(test)]
mod tests;
