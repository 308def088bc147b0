//! Per-node view of a reconstructed run, and direct recomputation of the
//! quantities its keys claim.

use crate::digraph::{scc, ArcMultiset, MultiDigraph, Vertex};
use crate::treedec::{NiceDecomposition, NodeKind};

use super::{offset_imbalance, DpKey};

/// The key chosen at one node of the reconstructed run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub node: usize,
    pub bag: Vec<Vertex>,
    pub key: DpKey,
    pub cost: usize,
    /// True at an introduce-arc node whose copy went into the solution.
    pub deleted_here: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OffsetViolation {
    pub node: usize,
    pub vertex: Vertex,
    pub what: &'static str,
    pub value: i64,
    pub bound: i64,
}

/// Recomputes, at every node of a trace, the offset imbalance of each bag vertex
/// between `G_t − S` and `G_t` and checks it against `|S ∩ E(G_t)|`.
///
/// Two groupings are checked: strong components of the node's arrangement,
/// and the final strong components of `G − S`. The stored balance must also
/// equal the kept active degree difference under the final components.
pub fn check_offset_bounds(
    g: &MultiDigraph,
    nd: &NiceDecomposition,
    steps: &[TraceStep],
) -> Vec<OffsetViolation> {
    let mut solution = ArcMultiset::new();
    for st in steps {
        if st.deleted_here {
            if let NodeKind::IntroduceArc { u, v, .. } = nd.nodes[st.node].kind {
                solution.insert(u, v, 1);
            }
        }
    }
    let Ok(rest) = g.remove(&solution) else {
        return vec![OffsetViolation {
            node: nd.root(),
            vertex: 0,
            what: "solution not contained in graph",
            value: solution.size() as i64,
            bound: g.m() as i64,
        }];
    };
    let final_scc = scc(&rest);

    // Introduced and deleted copies below each node.
    let mut below: Vec<Option<(ArcMultiset, ArcMultiset)>> = vec![None; nd.len()];
    let mut out = Vec::new();
    for st in steps.iter() {
        let t = st.node;
        let node = &nd.nodes[t];
        let (mut gt, mut st_del) = match node.children.as_slice() {
            [] => (ArcMultiset::new(), ArcMultiset::new()),
            [c] => below[*c].take().expect("child first"),
            [l, r] => {
                let (mut a, mut ad) = below[*l].take().expect("child first");
                let (b, bd) = below[*r].take().expect("child first");
                a.extend(&b);
                ad.extend(&bd);
                (a, ad)
            }
            _ => unreachable!(),
        };
        if let NodeKind::IntroduceArc { u, v, .. } = node.kind {
            gt.insert(u, v, 1);
            if st.deleted_here {
                st_del.insert(u, v, 1);
            }
        }

        let g_t = MultiDigraph::from_arcs(g.n(), gt.iter().map(|((u, v), c)| (u, v, c)))
            .expect("sub-multiset of a valid graph");
        let g_t_minus = g_t.remove(&st_del).expect("deleted copies were introduced");
        let bound = st_del.size() as i64;

        let arrangement = st.key.arrangement(&st.bag);
        for (i, &v) in st.bag.iter().enumerate() {
            let off = offset_imbalance(&g_t_minus, &g_t, &arrangement, v).expect("bag vertex");
            if off.abs() > bound {
                out.push(OffsetViolation {
                    node: t,
                    vertex: v,
                    what: "arrangement offset",
                    value: off,
                    bound,
                });
            }

            let active = |h: &MultiDigraph| -> i64 {
                let mut b = 0i64;
                for ((x, y), c) in h.arcs() {
                    if final_scc.same(x, y) {
                        if x == v {
                            b += c as i64;
                        }
                        if y == v {
                            b -= c as i64;
                        }
                    }
                }
                b
            };
            let kept = active(&g_t_minus);
            let off_final = kept - active(&g_t);
            if off_final.abs() > bound {
                out.push(OffsetViolation {
                    node: t,
                    vertex: v,
                    what: "final-component offset",
                    value: off_final,
                    bound,
                });
            }
            if kept != st.key.balance(i) {
                out.push(OffsetViolation {
                    node: t,
                    vertex: v,
                    what: "stored balance differs from recomputed active balance",
                    value: st.key.balance(i),
                    bound: kept,
                });
            }
        }
        below[t] = Some((gt, st_del));
    }
    out
}
