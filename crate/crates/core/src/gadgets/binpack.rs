//! Unary Bin Packing → ESCAD.

use super::{GadgetError, GadgetMetadata};
use crate::digraph::{ArcMultiset, MultiDigraph};

/// Items `x_1..x_n` (all ≥ 1) to be split into `h` bins of capacity `b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinPackingInstance {
    sizes: Vec<usize>,
    bins: usize,
    capacity: usize,
}

impl BinPackingInstance {
    pub fn new(sizes: Vec<usize>, bins: usize, capacity: usize) -> Result<Self, GadgetError> {
        if let Some(i) = sizes.iter().position(|&x| x == 0) {
            return Err(GadgetError::BadParameter(format!("item {} has size 0", i + 1)));
        }
        Ok(Self {
            sizes,
            bins,
            capacity,
        })
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn bins(&self) -> usize {
        self.bins
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn total(&self) -> usize {
        self.sizes.iter().sum()
    }

    pub fn is_exact(&self) -> bool {
        self.total() == self.bins * self.capacity
    }
}

/// Outcome of preprocessing into exact form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExactBinPacking {
    TriviallyYes,
    TriviallyNo,
    Exact(BinPackingInstance),
}

impl ExactBinPacking {
    /// A fixed ESCAD instance with the same answer, for the trivial verdicts.
    pub fn trivial_escad(&self) -> Option<(MultiDigraph, usize)> {
        match self {
            ExactBinPacking::TriviallyYes => Some((MultiDigraph::new(0), 0)),
            ExactBinPacking::TriviallyNo => {
                let g = MultiDigraph::from_arcs(2, [(1, 2, 2), (2, 1, 1)]).expect("valid");
                Some((g, 0))
            }
            ExactBinPacking::Exact(_) => None,
        }
    }
}

/// Short-circuits the trivial cases, otherwise pads with unit items until the
/// sizes sum to `b·h`.
pub fn to_exact_binpacking(inst: &BinPackingInstance) -> ExactBinPacking {
    let sum = inst.total();
    if sum == 0 {
        return ExactBinPacking::TriviallyYes;
    }
    if inst.bins == 0 {
        return ExactBinPacking::TriviallyNo;
    }
    if inst.capacity > sum {
        return ExactBinPacking::TriviallyYes;
    }
    let cap = inst.capacity * inst.bins;
    if cap < sum {
        return ExactBinPacking::TriviallyNo;
    }
    let mut sizes = inst.sizes.clone();
    sizes.resize(sizes.len() + cap - sum, 1);
    ExactBinPacking::Exact(BinPackingInstance {
        sizes,
        bins: inst.bins,
        capacity: inst.capacity,
    })
}

/// Builds the reduction graph with budget `k = b·h(h−1)`.
///
/// Vertices: `u_j = j`, `v_j = h + j`, `w_i = 2h + i`.
pub fn gen_binpack(
    exact: &BinPackingInstance,
) -> Result<(MultiDigraph, usize, GadgetMetadata), GadgetError> {
    if !exact.is_exact() {
        return Err(GadgetError::NotExact {
            sum: exact.total(),
            capacity: exact.bins * exact.capacity,
        });
    }
    let h = exact.bins;
    let b = exact.capacity;
    let n = exact.sizes.len();
    let k = b * h * h.saturating_sub(1);
    let thick = 3 * k;
    let u = |j: usize| j;
    let v = |j: usize| h + j;
    let w = |i: usize| 2 * h + i;

    let mut g = MultiDigraph::new(2 * h + n);
    let add = |g: &mut MultiDigraph, p, q, c| -> Result<(), GadgetError> {
        if c > 0 {
            g.add_arcs(p, q, c)?;
        }
        Ok(())
    };
    for j in 1..=h {
        add(&mut g, u(j), v(j), b + thick)?;
        add(&mut g, v(j), u(j), thick)?;
    }
    for j in 1..=h {
        for j2 in j + 1..=h {
            add(&mut g, u(j), u(j2), thick)?;
        }
    }
    for (i, &x) in exact.sizes.iter().enumerate() {
        for j in 1..=h {
            add(&mut g, w(i + 1), u(j), x)?;
            add(&mut g, v(j), w(i + 1), x)?;
        }
    }

    let mut roles = Vec::with_capacity(2 * h + n);
    roles.extend((1..=h).map(|j| format!("u_{j}")));
    roles.extend((1..=h).map(|j| format!("v_{j}")));
    roles.extend((1..=n).map(|i| format!("w_{i}")));
    let meta = GadgetMetadata {
        generator: "binpack".into(),
        params: vec![
            ("h".into(), h.to_string()),
            ("b".into(), b.to_string()),
            ("items".into(), n.to_string()),
        ],
        k,
        roles,
    };
    Ok((g, k, meta))
}

/// The deletion set of size `b·h(h−1)` induced by a packing. `bins[j]` lists
/// the 1-based items placed in bin `j + 1`.
pub fn lift_binpack_solution(
    exact: &BinPackingInstance,
    bins: &[Vec<usize>],
) -> Result<ArcMultiset, GadgetError> {
    let h = exact.bins;
    let n = exact.sizes.len();
    let bad = |m: String| Err(GadgetError::InvalidPacking(m));
    if !exact.is_exact() {
        return Err(GadgetError::NotExact {
            sum: exact.total(),
            capacity: h * exact.capacity,
        });
    }
    if bins.len() != h {
        return bad(format!("{} bins given, expected {h}", bins.len()));
    }
    let mut seen = vec![false; n + 1];
    for (j, bin) in bins.iter().enumerate() {
        let mut load = 0;
        for &i in bin {
            if i == 0 || i > n {
                return bad(format!("unknown item {i}"));
            }
            if std::mem::replace(&mut seen[i], true) {
                return bad(format!("item {i} packed twice"));
            }
            load += exact.sizes[i - 1];
        }
        if load != exact.capacity {
            return bad(format!("bin {} holds {load}, capacity is {}", j + 1, exact.capacity));
        }
    }
    if let Some(i) = (1..=n).find(|&i| !seen[i]) {
        return bad(format!("item {i} not packed"));
    }

    let mut s = ArcMultiset::new();
    for (j0, bin) in bins.iter().enumerate() {
        let j = j0 + 1;
        for &i in bin {
            let (wi, x) = (2 * h + i, exact.sizes[i - 1]);
            for j2 in 1..j {
                s.insert(wi, j2, x);
            }
            for j2 in j + 1..=h {
                s.insert(h + j2, wi, x);
            }
        }
    }
    Ok(s)
}
