//! The integer system over type-transition counts, and a bounded exact search for it.

use rustc_hash::FxHashMap;

use super::types::close;
use super::ViError;

/// Requirement that the realized separator pairs, together with `base`, close
/// up to exactly `goal`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Cover {
    pub m: usize,
    pub base: u64,
    pub goal: u64,
}

/// Sources are the component types of the input with counts `n_τ`; targets
/// are the outcome types a component may be turned into.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitionSystem {
    pub counts: Vec<usize>,
    /// `I(τ, u)` for each target and separator vertex.
    pub contributions: Vec<Vec<i64>>,
    /// Separator pairs each target connects through itself.
    pub through: Vec<u64>,
    /// `cost[source][target]`; `prohibitive` marks an impossible transition.
    pub cost: Vec<Vec<usize>>,
    pub prohibitive: usize,
    pub rho: Vec<i64>,
    /// Targets that must be reached at least once.
    pub required: Vec<usize>,
    pub cover: Option<Cover>,
    pub budget: usize,
}

/// One target row option offered to a source.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transition {
    pub contribution: Vec<i64>,
    pub through: u64,
    pub cost: usize,
}

/// Collects targets from the options of every source. Options without a
/// match in some row get the prohibitive cost there.
pub fn build_transition_system(
    counts: &[usize],
    options: &[Vec<Transition>],
    rho: Vec<i64>,
    required: Vec<usize>,
    cover: Option<Cover>,
    budget: usize,
    prohibitive: usize,
) -> TransitionSystem {
    let mut targets: Vec<(Vec<i64>, u64)> = options
        .iter()
        .flatten()
        .map(|t| (t.contribution.clone(), t.through))
        .collect();
    targets.sort();
    targets.dedup();
    let mut cost = vec![vec![prohibitive; targets.len()]; counts.len()];
    for (s, row) in options.iter().enumerate() {
        for t in row {
            let j = targets
                .binary_search(&(t.contribution.clone(), t.through))
                .expect("collected above");
            cost[s][j] = cost[s][j].min(t.cost);
        }
    }
    let (contributions, through) = targets.into_iter().unzip();
    TransitionSystem {
        counts: counts.to_vec(),
        contributions,
        through,
        cost,
        prohibitive,
        rho,
        required,
        cover,
        budget,
    }
}

/// Values of `x_{τ₁,τ₂}` and `y_τ`, with the total transition cost.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assignment {
    pub x: Vec<Vec<usize>>,
    pub y: Vec<usize>,
    pub cost: usize,
}

impl TransitionSystem {
    pub fn targets(&self) -> usize {
        self.contributions.len()
    }

    /// Checks all constraint families against `a`.
    pub fn check(&self, a: &Assignment) -> bool {
        let t = self.targets();
        if a.x.len() != self.counts.len() || a.y.len() != t {
            return false;
        }
        let mut total = 0;
        for (s, row) in a.x.iter().enumerate() {
            if row.len() != t || row.iter().sum::<usize>() != self.counts[s] {
                return false;
            }
            for (j, &x) in row.iter().enumerate() {
                if x > 0 {
                    if self.cost[s][j] >= self.prohibitive {
                        return false;
                    }
                    total += x * self.cost[s][j];
                }
            }
        }
        if total != a.cost || total > self.budget {
            return false;
        }
        for j in 0..t {
            if a.y[j] != a.x.iter().map(|row| row[j]).sum::<usize>() {
                return false;
            }
        }
        if self.required.iter().any(|&j| a.y[j] == 0) {
            return false;
        }
        for (u, &r) in self.rho.iter().enumerate() {
            let sum: i64 = (0..t)
                .map(|j| self.contributions[j][u] * a.y[j] as i64)
                .sum();
            if r + sum != 0 {
                return false;
            }
        }
        if let Some(c) = self.cover {
            let mut union = c.base;
            for j in (0..t).filter(|&j| a.y[j] > 0) {
                union |= self.through[j];
            }
            if close(c.m, union) != c.goal {
                return false;
            }
        }
        true
    }
}

pub const DEFAULT_NODE_CAP: u64 = 50_000_000;

/// Minimum-cost assignment within the budget, or `None` if the system is infeasible.
pub fn feasible(sys: &TransitionSystem) -> Result<Option<Assignment>, ViError> {
    feasible_with_cap(sys, DEFAULT_NODE_CAP).map(|(a, _)| a)
}

/// As [`feasible`], also returning the number of search nodes visited.
pub fn feasible_with_cap(
    sys: &TransitionSystem,
    cap: u64,
) -> Result<(Option<Assignment>, u64), ViError> {
    let mut search = Search::new(sys, cap);
    if search.possible {
        let width = sys.rho.len();
        let mut state = State {
            sum: vec![0; width],
            union: 0,
            hit: 0,
        };
        search.walk(0, 0, 0, 0, &mut state)?;
    }
    let nodes = search.nodes;
    let out = search.best.map(|(cost, x)| {
        let y = (0..sys.targets())
            .map(|j| x.iter().map(|row| row[j]).sum())
            .collect();
        Assignment { x, y, cost }
    });
    debug_assert!(out.as_ref().is_none_or(|a| sys.check(a)));
    Ok((out, nodes))
}

struct State {
    sum: Vec<i64>,
    union: u64,
    /// Bit `r` set once `required[r]` has been used.
    hit: u64,
}

struct Search<'a> {
    sys: &'a TransitionSystem,
    /// Usable targets per source.
    usable: Vec<Vec<usize>>,
    min_cost: Vec<usize>,
    lo: Vec<Vec<i64>>,
    hi: Vec<Vec<i64>>,
    /// Bounds contributed by sources `s..` in full.
    tail_cost: Vec<usize>,
    tail_lo: Vec<Vec<i64>>,
    tail_hi: Vec<Vec<i64>>,
    required_bit: Vec<u64>,
    possible: bool,
    x: Vec<Vec<usize>>,
    bound: usize,
    best: Option<(usize, Vec<Vec<usize>>)>,
    memo: FxHashMap<(usize, usize, usize, Vec<i64>, u64, u64), usize>,
    done: bool,
    nodes: u64,
    cap: u64,
}

impl<'a> Search<'a> {
    fn new(sys: &'a TransitionSystem, cap: u64) -> Self {
        let ns = sys.counts.len();
        let t = sys.targets();
        let w = sys.rho.len();
        let usable: Vec<Vec<usize>> = (0..ns)
            .map(|s| (0..t).filter(|&j| sys.cost[s][j] < sys.prohibitive).collect())
            .collect();
        let mut possible = sys.required.len() <= 64;
        let mut min_cost = vec![0; ns];
        let mut lo = vec![vec![0; w]; ns];
        let mut hi = vec![vec![0; w]; ns];
        for s in 0..ns {
            if usable[s].is_empty() {
                possible &= sys.counts[s] == 0;
                continue;
            }
            min_cost[s] = usable[s].iter().map(|&j| sys.cost[s][j]).min().unwrap();
            for u in 0..w {
                let vals = usable[s].iter().map(|&j| sys.contributions[j][u]);
                lo[s][u] = vals.clone().min().unwrap();
                hi[s][u] = vals.max().unwrap();
            }
        }
        let mut tail_cost = vec![0; ns + 1];
        let mut tail_lo = vec![vec![0; w]; ns + 1];
        let mut tail_hi = vec![vec![0; w]; ns + 1];
        for s in (0..ns).rev() {
            let n = sys.counts[s];
            tail_cost[s] = tail_cost[s + 1] + n * min_cost[s];
            for u in 0..w {
                tail_lo[s][u] = tail_lo[s + 1][u] + n as i64 * lo[s][u];
                tail_hi[s][u] = tail_hi[s + 1][u] + n as i64 * hi[s][u];
            }
        }
        let mut required_bit = vec![0u64; t];
        for (r, &j) in sys.required.iter().enumerate().take(64) {
            required_bit[j] |= 1 << r;
        }
        Self {
            sys,
            usable,
            min_cost,
            lo,
            hi,
            tail_cost,
            tail_lo,
            tail_hi,
            required_bit,
            possible,
            x: vec![vec![0; t]; ns],
            bound: sys.budget,
            best: None,
            memo: FxHashMap::default(),
            done: false,
            nodes: 0,
            cap,
        }
    }

    /// `r` components of source `s` already placed; next target index at least `jmin`.
    fn walk(&mut self, s: usize, r: usize, jmin: usize, cost: usize, st: &mut State) -> Result<(), ViError> {
        if self.done {
            return Ok(());
        }
        self.nodes += 1;
        if self.nodes > self.cap {
            return Err(ViError::NodeCap(self.cap));
        }
        let sys = self.sys;
        let ns = sys.counts.len();
        if s < ns && r == sys.counts[s] {
            return self.walk(s + 1, 0, 0, cost, st);
        }
        if s == ns {
            self.finish(cost, st);
            return Ok(());
        }
        let left = sys.counts[s] - r;
        if cost + left * self.min_cost[s] + self.tail_cost[s + 1] > self.bound {
            return Ok(());
        }
        for u in 0..sys.rho.len() {
            let base = sys.rho[u] + st.sum[u];
            let lo = base + left as i64 * self.lo[s][u] + self.tail_lo[s + 1][u];
            let hi = base + left as i64 * self.hi[s][u] + self.tail_hi[s + 1][u];
            if lo > 0 || hi < 0 {
                return Ok(());
            }
        }
        let key = (s, r, jmin, st.sum.clone(), st.union, st.hit);
        match self.memo.get(&key) {
            Some(&c) if c <= cost => return Ok(()),
            _ => {
                self.memo.insert(key, cost);
            }
        }
        for idx in 0..self.usable[s].len() {
            let j = self.usable[s][idx];
            if j < jmin {
                continue;
            }
            let c = sys.cost[s][j];
            let (old_union, old_hit) = (st.union, st.hit);
            for (u, v) in st.sum.iter_mut().enumerate() {
                *v += sys.contributions[j][u];
            }
            st.union |= sys.through[j];
            st.hit |= self.required_bit[j];
            self.x[s][j] += 1;
            let res = self.walk(s, r + 1, j, cost + c, st);
            self.x[s][j] -= 1;
            for (u, v) in st.sum.iter_mut().enumerate() {
                *v -= sys.contributions[j][u];
            }
            st.union = old_union;
            st.hit = old_hit;
            res?;
        }
        Ok(())
    }

    fn finish(&mut self, cost: usize, st: &State) {
        let sys = self.sys;
        if cost > self.bound {
            return;
        }
        if sys.rho.iter().zip(&st.sum).any(|(r, s)| r + s != 0) {
            return;
        }
        let need = if sys.required.len() >= 64 {
            u64::MAX
        } else {
            (1u64 << sys.required.len()) - 1
        };
        if st.hit & need != need {
            return;
        }
        if let Some(c) = sys.cover {
            if close(c.m, c.base | st.union) != c.goal {
                return;
            }
        }
        self.best = Some((cost, self.x.clone()));
        match cost.checked_sub(1) {
            Some(b) => self.bound = b,
            None => self.done = true,
        }
    }
}
