use std::collections::BTreeMap;

use super::key::{FUTURE, PAST};
use super::*;
use crate::digraph::verify_solution;
use crate::oracle::solve_brute;
use crate::treedec::{heuristic_decompose, make_nice, TreeDecomposition};

fn g(n: usize, arcs: &[(usize, usize, usize)]) -> MultiDigraph {
    MultiDigraph::from_arcs(n, arcs.iter().copied()).unwrap()
}

fn single(h: &MultiDigraph) -> NiceDecomposition {
    make_nice(h, &TreeDecomposition::single_bag(h)).unwrap()
}

fn node_where(nd: &NiceDecomposition, f: impl Fn(&NodeKind) -> bool) -> usize {
    nd.nodes.iter().position(|x| f(&x.kind)).expect("node exists")
}

fn solved<'a>(h: &'a MultiDigraph, nd: &'a NiceDecomposition) -> DpSolver<'a> {
    let mut dp = DpSolver::new(h, nd, h.m(), DpOptions::default()).unwrap();
    dp.run().unwrap();
    dp
}

#[test]
fn active_imbalance_examples() {
    let h = g(2, &[(1, 2, 2)]);
    let cycle = ReachabilityArrangement::new(vec![1, 2])
        .with_arc(1, 2, Label::Direct)
        .with_arc(2, 1, Label::Future);
    assert_eq!(active_imbalance(&h, &cycle, 1).unwrap(), 2);
    let none = ReachabilityArrangement::new(vec![1, 2]);
    assert_eq!(active_imbalance(&h, &none, 1).unwrap(), 0);
    let cyc = g(2, &[(1, 2, 1), (2, 1, 1)]);
    assert_eq!(active_imbalance(&cyc, &cycle, 1).unwrap(), 0);
    assert_eq!(active_imbalance(&cyc, &cycle, 2).unwrap(), 0);
    assert_eq!(
        active_imbalance(&cyc, &cycle, 3),
        Err(DpError::NotInDomain(3))
    );
}

#[test]
fn offset_imbalance_examples() {
    let h = g(2, &[(1, 2, 2), (2, 1, 1)]);
    let cycle = ReachabilityArrangement::new(vec![1, 2])
        .with_arc(1, 2, Label::Direct)
        .with_arc(2, 1, Label::Direct);
    assert_eq!(offset_imbalance(&h, &h, &cycle, 1).unwrap(), 0);
    let less = h.remove(&[(1, 2, 1)].into_iter().collect()).unwrap();
    assert_eq!(offset_imbalance(&less, &h, &cycle, 1).unwrap(), -1);
    assert_eq!(offset_imbalance(&less, &h, &cycle, 2).unwrap(), 1);
    let apart = ReachabilityArrangement::new(vec![1, 2]).with_arc(1, 2, Label::Direct);
    assert_eq!(offset_imbalance(&less, &h, &apart, 1).unwrap(), 0);
    assert_eq!(offset_imbalance(&less, &h, &apart, 2).unwrap(), 0);
    assert!(matches!(
        offset_imbalance(&g(3, &[]), &h, &cycle, 1),
        Err(DpError::DomainMismatch(3, 2))
    ));
}

#[test]
fn leaf_examples() {
    let t = leaf_entry();
    assert_eq!(t.len(), 1);
    assert_eq!(t.cost(&DpKey::default()), Some(0));
    let mut other = DpKey::default();
    other.bal[0] = 1;
    assert_eq!(t.cost(&other), None);
}

#[test]
fn introduce_vertex_examples() {
    let h = g(2, &[(1, 2, 1), (2, 1, 1)]);
    let nd = single(&h);
    let dp = solved(&h, &nd);
    let t = node_where(&nd, |k| *k == NodeKind::IntroduceVertex(2));
    let child = dp.table(nd.nodes[t].children[0]);
    let bag = [1, 2];

    let past = DpKey::from_parts(
        &bag,
        &ReachabilityArrangement::new(bag.to_vec()).with_arc(1, 2, Label::Past),
        &BTreeMap::new(),
        &BTreeMap::new(),
    )
    .unwrap();
    assert_eq!(dp.introduce_vertex_entry(t, child, &past), dp.infeasible());

    let mut unbalanced = DpKey::default();
    unbalanced.bal[1] = 1;
    assert_eq!(dp.introduce_vertex_entry(t, child, &unbalanced), dp.infeasible());

    let isolated = DpKey::default();
    assert_eq!(
        dp.introduce_vertex_entry(t, child, &isolated),
        child.cost(&DpKey::default()).unwrap()
    );
}

#[test]
fn introduce_arc_examples() {
    let h = g(2, &[(1, 2, 2), (2, 1, 1)]);
    let nd = single(&h);
    let dp = solved(&h, &nd);
    let t = node_where(&nd, |k| {
        matches!(k, NodeKind::IntroduceArc { u: 1, v: 2, copy: 2 })
    });
    let c = nd.nodes[t].children[0];
    let child = dp.table(c);

    // Deleted copy, endpoints in different components: child cost + 1.
    let mut checked = 0;
    for e in child.entries() {
        if e.key.closure(2)[0] & 0b10 == 0 || e.key.closure(2)[1] & 0b01 == 0 {
            let mut k = e.key.clone();
            k.add_deleted(0, 1);
            let best = dp.introduce_arc_entry(t, child, &k);
            assert_eq!(dp.table(t).cost(&k).unwrap_or(dp.infeasible()), best);
            if best != dp.infeasible() {
                assert!(best <= e.cost + 1);
                checked += 1;
            }
        }
    }
    assert!(checked > 0);

    // Deleted copy, same component: balances pass through unchanged.
    let mut same = 0;
    for e in child.entries() {
        let r = e.key.closure(2);
        if r[0] & 0b10 != 0 && r[1] & 0b01 != 0 {
            let mut k = e.key.clone();
            k.add_deleted(0, 1);
            if let Some(p) = dp.table(t).get(&k) {
                assert_eq!(p.key.bal, e.key.bal);
                same += 1;
            }
        }
    }
    assert!(same > 0);

    // Not deleted and not direct: infeasible.
    let mut k = DpKey::default();
    k.set_code(0, 1, FUTURE);
    k.set_code(1, 0, FUTURE);
    assert_eq!(k.deleted(0, 1), 0);
    assert_eq!(dp.introduce_arc_entry(t, child, &k), dp.infeasible());
}

#[test]
fn forget_examples() {
    // Arcs at 1 are introduced below the forget of 1; 2 -> 3 comes later.
    let h = g(3, &[(1, 2, 1), (2, 3, 1), (3, 1, 1)]);
    let nd = single(&h);
    let dp = solved(&h, &nd);
    let t = node_where(&nd, |k| *k == NodeKind::Forget(1));
    let c = nd.nodes[t].children[0];
    let child = dp.table(c);

    for e in child.entries() {
        let has_future = (0..3).any(|x| e.key.code(0, x) == FUTURE || e.key.code(x, 0) == FUTURE);
        let mut hit = false;
        dp.successors(t, &e.key, &mut |_, _, _| hit = true);
        if has_future || e.key.bal[0] != 0 {
            assert!(!hit, "inadmissible child key produced a parent");
        }
    }

    // Contraction: 3 -> 1 -> 2 become a past arc 3 -> 2 after forgetting 1.
    let mut contracted = DpKey::default();
    contracted.set_code(0, 1, FUTURE); // 2 -> 3
    contracted.set_code(1, 0, PAST); // 3 -> 2 through 1
    // The kept arcs 1 -> 2 and 3 -> 1 are active and already counted.
    contracted.bal[0] = -1;
    contracted.bal[1] = 1;
    assert_eq!(dp.forget_entry(t, child, &contracted), 0);
    assert_eq!(dp.table(t).cost(&contracted), Some(0));
}

#[test]
fn join_label_splits() {
    // Arcs between 1 and 2 are introduced above the join, so their labels are
    // free to be future there.
    let h = g(4, &[(1, 2, 1), (2, 1, 1), (1, 3, 1), (3, 2, 1), (1, 4, 1), (4, 2, 1)]);
    let td = TreeDecomposition::new(
        vec![vec![1, 2], vec![1, 2, 3], vec![1, 2, 4]],
        vec![(0, 1), (0, 2)],
    );
    let nd = make_nice(&h, &td).unwrap();
    let dp = solved(&h, &nd);
    let t = node_where(&nd, |k| *k == NodeKind::Join);
    assert_eq!(nd.nodes[t].bag, vec![1, 2]);

    let labels = [key::DIRECT, PAST, FUTURE];
    let count = |want: u128| {
        let mut n = 0;
        for &x in &labels {
            for &y in &labels {
                let mut a = DpKey::default();
                let mut b = DpKey::default();
                a.set_code(0, 1, x);
                b.set_code(0, 1, y);
                let k = dp.join_key(t, &a, &b).expect("admissible");
                if k.code(0, 1) == want {
                    n += 1;
                }
            }
        }
        n
    };
    assert_eq!(count(PAST), 3);
    assert_eq!(count(key::DIRECT), 5);
    assert_eq!(count(FUTURE), 1);

    // With no deletions the combined cost is the sum of the child costs.
    let (l, r) = (nd.nodes[t].children[0], nd.nodes[t].children[1]);
    for le in dp.table(l).entries() {
        for re in dp.table(r).entries() {
            if le.key.arc_mask() == re.key.arc_mask() && le.key.del.is_empty() && re.key.del.is_empty() {
                if let Some(k) = dp.join_key(t, &le.key, &re.key) {
                    assert_eq!(dp.table(t).get(&k).is_some(), le.cost + re.cost <= dp.budget());
                    assert!(dp.join_entry(t, dp.table(l), dp.table(r), &k) <= le.cost + re.cost);
                }
            }
        }
    }
}

#[test]
fn solve_examples() {
    let h = g(2, &[(1, 2, 2), (2, 1, 1)]);
    let nd = single(&h);
    let r = solve_dp(&h, 1, &nd).unwrap();
    assert!(r.feasible);
    assert_eq!(r.optimum, Some(1));
    assert!(verify_solution(&h, 1, r.witness.as_ref().unwrap()).unwrap());
    assert!(!solve_dp(&h, 0, &nd).unwrap().feasible);

    let tri = g(3, &[(1, 2, 1), (2, 3, 1), (3, 1, 1)]);
    let r = solve_dp(&tri, 0, &single(&tri)).unwrap();
    assert_eq!(r.optimum, Some(0));
}

#[test]
fn eulerian_with_parallel_return() {
    // Strongly connected and balanced, so nothing must be deleted.
    let h = g(3, &[(3, 2, 2), (2, 3, 1), (2, 1, 1), (1, 3, 1)]);
    for nd in [single(&h), make_nice(&h, &heuristic_decompose(&h)).unwrap()] {
        assert_eq!(solve_dp(&h, 0, &nd).unwrap().optimum, Some(0));
    }
}

#[test]
fn stored_costs_match_recurrences() {
    let graphs = [
        g(3, &[(1, 2, 2), (2, 1, 1), (2, 3, 1), (3, 1, 1)]),
        g(4, &[(1, 2, 1), (2, 3, 1), (3, 4, 1), (4, 1, 2), (1, 3, 1)]),
        g(3, &[(1, 2, 1), (1, 3, 1), (2, 1, 1), (3, 1, 1)]),
    ];
    for h in &graphs {
        for nd in [single(h), make_nice(h, &heuristic_decompose(h)).unwrap()] {
            let dp = solved(h, &nd);
            for (t, node) in nd.nodes.iter().enumerate() {
                for e in dp.table(t).entries() {
                    let back = match node.kind {
                        NodeKind::Leaf => 0,
                        NodeKind::IntroduceVertex(_) => {
                            dp.introduce_vertex_entry(t, dp.table(node.children[0]), &e.key)
                        }
                        NodeKind::IntroduceArc { .. } => {
                            dp.introduce_arc_entry(t, dp.table(node.children[0]), &e.key)
                        }
                        NodeKind::Forget(_) => {
                            dp.forget_entry(t, dp.table(node.children[0]), &e.key)
                        }
                        NodeKind::Join => dp.join_entry(
                            t,
                            dp.table(node.children[0]),
                            dp.table(node.children[1]),
                            &e.key,
                        ),
                    };
                    assert_eq!(back, e.cost, "node {t} key {:?}", e.key);
                }
            }
        }
    }
}

#[test]
fn agrees_with_brute_force_on_small_graphs() {
    let graphs = [
        g(3, &[(1, 2, 2), (2, 1, 1), (2, 3, 1), (3, 1, 1)]),
        g(4, &[(1, 2, 1), (2, 3, 1), (3, 4, 1), (4, 1, 2), (1, 3, 1)]),
        g(4, &[(1, 2, 3), (2, 1, 1), (3, 4, 2), (4, 3, 1), (2, 3, 1), (4, 1, 1)]),
        g(5, &[(1, 2, 1), (2, 3, 1), (3, 1, 1), (3, 4, 2), (4, 5, 1), (5, 3, 1)]),
    ];
    for h in &graphs {
        let want = solve_brute(h, h.m()).unwrap().optimum;
        for nd in [single(h), make_nice(h, &heuristic_decompose(h)).unwrap()] {
            let r = min_solution_dp(h, &nd).unwrap();
            assert_eq!(r.optimum, want);
            let w = r.witness.unwrap();
            assert_eq!(Some(w.size()), want);
            assert!(verify_solution(h, w.size(), &w).unwrap());
            let dp = solved(h, &nd);
            let steps = dp.trace_steps().unwrap();
            assert!(check_offset_bounds(h, &nd, &steps).is_empty());
        }
    }
}

#[test]
fn rejects_wide_bags() {
    let h = g(9, &[(1, 2, 1)]);
    let nd = single(&h);
    assert!(matches!(
        DpSolver::new(&h, &nd, 1, DpOptions::default()),
        Err(DpError::BagTooLarge { .. })
    ));
}

#[test]
fn table_limit_is_reported() {
    let h = g(3, &[(1, 2, 2), (2, 1, 1), (2, 3, 1), (3, 1, 1)]);
    let nd = single(&h);
    let opts = DpOptions {
        max_table_entries: 1,
    };
    assert!(matches!(
        solve_dp_with(&h, 3, &nd, &opts),
        Err(DpError::TableLimit { .. })
    ));
}
