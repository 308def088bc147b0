use escad_core::digraph::{is_strongly_balanced, scc, strong_subgraph, verify_solution};
use escad_core::dp::min_solution_dp;
use escad_core::format::{parse_graph, parse_solution, write_graph, write_solution};
use escad_core::gadgets::{imbalance_gadget, path_gadget, subdivide};
use escad_core::oracle::{min_solution_with_cap, DEFAULT_CAP};
use escad_core::treedec::{
    check_nice, heuristic_decompose, make_nice, parse_td, validate_td, write_td,
};
use escad_core::vi::solve_vi;
use escad_core::{ArcMultiset, MultiDigraph};
use proptest::prelude::*;

fn multigraph(max_n: usize, max_pairs: usize, max_mult: usize) -> impl Strategy<Value = MultiDigraph> {
    (1..=max_n).prop_flat_map(move |n| {
        proptest::collection::vec((1..=n, 1..=n, 1..=max_mult), 0..=max_pairs).prop_map(move |arcs| {
            let mut g = MultiDigraph::new(n);
            for (u, v, c) in arcs {
                if u != v && g.multiplicity(u, v) == 0 {
                    g.add_arcs(u, v, c).unwrap();
                }
            }
            g
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn graph_text_round_trip(g in multigraph(8, 14, 4)) {
        prop_assert_eq!(parse_graph(&write_graph(&g)).unwrap(), g.clone());
        let all = g.all_arcs();
        prop_assert_eq!(parse_solution(&write_solution(&all)).unwrap(), all);
    }

    #[test]
    fn imbalances_sum_to_zero(g in multigraph(8, 14, 4)) {
        prop_assert_eq!(g.imbalances().iter().sum::<i64>(), 0);
        let strong = strong_subgraph(&g);
        prop_assert_eq!(strong.imbalances().iter().sum::<i64>(), 0);
        let parts = scc(&g);
        for ((u, v), _) in strong.arcs() {
            prop_assert!(parts.same(u, v));
        }
    }

    #[test]
    fn deleting_everything_always_verifies(g in multigraph(8, 14, 4)) {
        prop_assert!(verify_solution(&g, g.m(), &g.all_arcs()).unwrap());
        prop_assert!(is_strongly_balanced(&MultiDigraph::new(g.n())));
    }

    #[test]
    fn oracle_witness_is_minimal(g in multigraph(5, 6, 2)) {
        let (opt, s) = min_solution_with_cap(&g, DEFAULT_CAP).unwrap();
        prop_assert_eq!(s.size(), opt);
        prop_assert!(verify_solution(&g, opt, &s).unwrap());
        if opt > 0 {
            // Dropping any one deleted copy breaks the solution.
            for ((u, v), _) in s.iter() {
                let mut smaller = ArcMultiset::new();
                for ((x, y), d) in s.iter() {
                    let keep = if (x, y) == (u, v) { d - 1 } else { d };
                    if keep > 0 {
                        smaller.insert(x, y, keep);
                    }
                }
                prop_assert!(!verify_solution(&g, opt, &smaller).unwrap());
            }
        }
    }

    #[test]
    fn heuristic_decompositions_are_valid(g in multigraph(9, 16, 3)) {
        let td = heuristic_decompose(&g);
        let check = validate_td(&g, &td);
        prop_assert!(check.valid, "{:?}", check.problems);
        let text = write_td(&td, g.n());
        prop_assert_eq!(parse_td(&text).unwrap(), td.clone());
        let nd = make_nice(&g, &td).unwrap();
        prop_assert!(check_nice(&g, &nd).is_ok());
        prop_assert_eq!(nd.count_arc_nodes(), g.m());
        prop_assert_eq!(nd.width(), td.width());
    }

    #[test]
    fn dp_matches_oracle(g in multigraph(6, 8, 3)) {
        let nd = make_nice(&g, &heuristic_decompose(&g)).unwrap();
        let res = min_solution_dp(&g, &nd).unwrap();
        let (opt, _) = min_solution_with_cap(&g, DEFAULT_CAP).unwrap();
        prop_assert_eq!(res.optimum, Some(opt));
        prop_assert!(verify_solution(&g, opt, &res.witness.unwrap()).unwrap());
    }

    #[test]
    fn subdivision_identities(g in multigraph(5, 6, 3)) {
        let sub = subdivide(&g);
        prop_assert_eq!(sub.graph.n(), g.n() + g.m());
        prop_assert_eq!(sub.graph.m(), 2 * g.m());
        prop_assert!(sub.graph.is_simple());
        prop_assert_eq!(sub.meta.roles.len(), sub.graph.n());
        let (a, s) = min_solution_with_cap(&g, DEFAULT_CAP).unwrap();
        let (b, _) = min_solution_with_cap(&sub.graph, DEFAULT_CAP).unwrap();
        prop_assert_eq!(a, b);
        prop_assert!(verify_solution(&sub.graph, a, &sub.lift_solution(&s)).unwrap());
    }

    #[test]
    fn vi_matches_oracle_on_sparse_graphs(g in multigraph(7, 9, 1)) {
        let k = (0..=g.n())
            .find(|&k| escad_core::vi::find_separator(&g, k, u128::MAX).unwrap().is_some())
            .unwrap();
        prop_assume!(k <= 4);
        let (opt, _) = min_solution_with_cap(&g, DEFAULT_CAP).unwrap();
        let res = solve_vi(&g, g.m(), k).unwrap();
        prop_assert_eq!(res.optimum, Some(opt));
        if opt > 0 {
            prop_assert!(!solve_vi(&g, opt - 1, k).unwrap().feasible);
        }
    }

    #[test]
    fn gadget_imbalances(b in 1usize..4, c in 0usize..4) {
        let mut g = MultiDigraph::new(2);
        let mid = imbalance_gadget(&mut g, b, c, 1, 2).unwrap();
        prop_assert_eq!(mid.len(), b);
        prop_assert_eq!(g.imbalance(1).unwrap(), c as i64);
        prop_assert_eq!(g.imbalance(2).unwrap(), -(c as i64));
        prop_assert_eq!(g.m(), (b + 1) * (2 * b + 2 + c));
        for &w in &mid {
            prop_assert_eq!(g.imbalance(w).unwrap(), 0);
        }
        if c > 0 {
            let mut h = MultiDigraph::new(2);
            let mid = path_gadget(&mut h, b, c, 1, 2).unwrap();
            prop_assert_eq!(h.m(), (b + 1) * c);
            prop_assert_eq!(h.imbalance(1).unwrap(), c as i64);
            prop_assert!(mid.iter().all(|&w| h.imbalance(w).unwrap() == 0));
        }
    }
}
