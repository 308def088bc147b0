//! Exhaustive solver: tries every deletion multiset in order of increasing size.

use thiserror::Error;

use crate::digraph::{scc_ids, ArcMultiset, MultiDigraph};

pub const DEFAULT_CAP: u128 = 100_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("enumeration needs {needed} candidate sets, cap is {cap}")]
    BudgetExceeded { needed: u128, cap: u128 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    pub feasible: bool,
    pub optimum: Option<usize>,
    pub witness: Option<ArcMultiset>,
}

impl OracleResult {
    fn infeasible() -> Self {
        Self {
            feasible: false,
            optimum: None,
            witness: None,
        }
    }
}

/// Compact residual-graph checker over the distinct pairs of a graph.
pub(crate) struct Checker {
    n: usize,
    pairs: Vec<(usize, usize, usize)>,
}

impl Checker {
    pub(crate) fn new(g: &MultiDigraph) -> Self {
        Self {
            n: g.n(),
            pairs: g.arcs().map(|((u, v), c)| (u - 1, v - 1, c)).collect(),
        }
    }

    /// `del[i]` copies of pair `i` removed; true iff the strong subgraph is balanced.
    pub(crate) fn balanced_after(&self, del: &[usize]) -> bool {
        let mut adj = vec![Vec::new(); self.n];
        for (i, &(u, v, c)) in self.pairs.iter().enumerate() {
            if c > del[i] {
                adj[u].push(v);
            }
        }
        let (comp, _) = scc_ids(&adj);
        let mut bal = vec![0i64; self.n];
        for (i, &(u, v, c)) in self.pairs.iter().enumerate() {
            let left = (c - del[i]) as i64;
            if left > 0 && comp[u] == comp[v] {
                bal[u] += left;
                bal[v] -= left;
            }
        }
        bal.iter().all(|&b| b == 0)
    }

    fn witness(&self, del: &[usize]) -> ArcMultiset {
        self.pairs
            .iter()
            .zip(del)
            .map(|(&(u, v, _), &d)| (u + 1, v + 1, d))
            .collect()
    }
}

/// Number of multisets of size `s` drawn from pairs with the given multiplicities.
fn multisets_of_size(mults: &[usize], s: usize) -> u128 {
    let mut ways = vec![0u128; s + 1];
    ways[0] = 1;
    for &c in mults {
        let mut next = vec![0u128; s + 1];
        for (have, &w) in ways.iter().enumerate() {
            if w == 0 {
                continue;
            }
            for take in 0..=c.min(s - have) {
                next[have + take] = next[have + take].saturating_add(w);
            }
        }
        ways = next;
    }
    ways[s]
}

/// Depth-first enumeration of size-`left` completions in lexicographic order
/// of the sorted arc sequence. Returns true on the first verifying set.
fn search(chk: &Checker, del: &mut [usize], from: usize, left: usize) -> bool {
    if left == 0 {
        return chk.balanced_after(del);
    }
    for i in from..chk.pairs.len() {
        if del[i] < chk.pairs[i].2 {
            del[i] += 1;
            if search(chk, del, i, left - 1) {
                return true;
            }
            del[i] -= 1;
        }
    }
    false
}

/// Decides ESCAD by brute force with the default enumeration cap.
pub fn solve_brute(g: &MultiDigraph, k: usize) -> Result<OracleResult, OracleError> {
    solve_brute_with_cap(g, k, DEFAULT_CAP)
}

pub fn solve_brute_with_cap(
    g: &MultiDigraph,
    k: usize,
    cap: u128,
) -> Result<OracleResult, OracleError> {
    let chk = Checker::new(g);
    let mults: Vec<usize> = chk.pairs.iter().map(|p| p.2).collect();
    let k = k.min(g.m());
    let needed = (0..=k).fold(0u128, |acc, s| {
        acc.saturating_add(multisets_of_size(&mults, s))
    });
    if needed > cap {
        return Err(OracleError::BudgetExceeded { needed, cap });
    }
    Ok(run(&chk, k))
}

fn run(chk: &Checker, k: usize) -> OracleResult {
    let mut del = vec![0usize; chk.pairs.len()];
    for s in 0..=k {
        if search(chk, &mut del, 0, s) {
            return OracleResult {
                feasible: true,
                optimum: Some(s),
                witness: Some(chk.witness(&del)),
            };
        }
    }
    OracleResult::infeasible()
}

/// Minimum deletion size together with the canonical witness.
///
/// The cap is charged level by level, so graphs with small optimum are
/// solvable even when `2^m` exceeds it.
pub fn min_solution_with_cap(
    g: &MultiDigraph,
    cap: u128,
) -> Result<(usize, ArcMultiset), OracleError> {
    let chk = Checker::new(g);
    let mults: Vec<usize> = chk.pairs.iter().map(|p| p.2).collect();
    let mut spent = 0u128;
    let mut del = vec![0usize; chk.pairs.len()];
    for s in 0..=g.m() {
        spent = spent.saturating_add(multisets_of_size(&mults, s));
        if spent > cap {
            return Err(OracleError::BudgetExceeded { needed: spent, cap });
        }
        if search(&chk, &mut del, 0, s) {
            return Ok((s, chk.witness(&del)));
        }
    }
    unreachable!("deleting every arc always verifies")
}

pub fn min_solution_size(g: &MultiDigraph) -> Result<usize, OracleError> {
    min_solution_with_cap(g, DEFAULT_CAP).map(|(s, _)| s)
}
