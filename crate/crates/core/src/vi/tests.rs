use super::*;
use crate::digraph::verify_solution;
use crate::oracle::min_solution_size;

fn graph(n: usize, arcs: &[(usize, usize)]) -> MultiDigraph {
    MultiDigraph::from_arcs(n, arcs.iter().map(|&(u, v)| (u, v, 1))).unwrap()
}

fn vertex_integrity(g: &MultiDigraph) -> usize {
    (0..=g.n())
        .find(|&k| find_separator(g, k, u128::MAX).unwrap().is_some())
        .unwrap()
}

/// Reachability among separator vertices in `g`, distinct pairs.
fn separator_reach(g: &MultiDigraph, m: &[Vertex]) -> Vec<(Vertex, Vertex)> {
    let mut out = Vec::new();
    for &a in m {
        let mut seen = vec![false; g.n() + 1];
        let mut stack = vec![a];
        seen[a] = true;
        while let Some(x) = stack.pop() {
            for ((u, v), _) in g.arcs() {
                if u == x && !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        out.extend(m.iter().filter(|&&b| b != a && seen[b]).map(|&b| (a, b)));
    }
    out.sort_unstable();
    out
}

#[test]
fn triangle_examples() {
    let tri = graph(3, &[(1, 2), (2, 3), (3, 1)]);
    let r = solve_vi(&tri, 0, 3).unwrap();
    assert!(r.feasible);
    assert_eq!(r.optimum, Some(0));

    let chord = graph(3, &[(1, 2), (2, 3), (3, 1), (1, 3)]);
    assert!(!solve_vi(&chord, 0, 3).unwrap().feasible);
    let r = solve_vi(&chord, 1, 3).unwrap();
    assert_eq!(r.optimum, Some(1));
    assert!(verify_solution(&chord, 1, r.witness.as_ref().unwrap()).unwrap());
    assert!(matches!(solve_vi(&chord, 1, 2), Err(ViError::NoSeparator(2))));
}

#[test]
fn full_budget_always_suffices() {
    let g = graph(5, &[(1, 2), (2, 1), (1, 3), (3, 4), (4, 1), (2, 5), (5, 3)]);
    let k = vertex_integrity(&g);
    assert!(solve_vi(&g, g.m(), k).unwrap().feasible);
}

#[test]
fn rejects_multigraphs() {
    let g = MultiDigraph::from_arcs(2, [(1, 2, 2), (2, 1, 1)]).unwrap();
    assert!(matches!(
        solve_vi(&g, 1, 2),
        Err(ViError::NotSimple { u: 1, v: 2, count: 2 })
    ));
    let k5 = graph(
        5,
        &(1..=5)
            .flat_map(|u| (1..=5).filter(move |&v| v != u).map(move |v| (u, v)))
            .collect::<Vec<_>>(),
    );
    assert!(matches!(solve_vi(&k5, 0, 2), Err(ViError::NoSeparator(2))));
}

#[test]
fn hub_with_many_components() {
    // Hub 1 with three pendant 2-cycles, a triangle 1 -> 5 -> 6 -> 1 and a
    // dangling arc 7 -> 1. Every strong component is balanced.
    let mut arcs = Vec::new();
    for c in 2..=4 {
        arcs.push((1, c));
        arcs.push((c, 1));
    }
    arcs.extend([(1, 5), (5, 6), (6, 1), (7, 1)]);
    let g = graph(7, &arcs);
    let r = solve_vi(&g, 3, 3).unwrap();
    assert_eq!(r.separator.m, vec![1]);
    assert_eq!(r.optimum, Some(0));

    let mut arcs2 = arcs.clone();
    arcs2.push((1, 7));
    arcs2.push((6, 5));
    let g2 = graph(7, &arcs2);
    let r = solve_vi(&g2, 5, 3).unwrap();
    assert_eq!(r.optimum, Some(min_solution_size(&g2).unwrap()));
    assert!(verify_solution(&g2, 5, r.witness.as_ref().unwrap()).unwrap());
}

#[test]
fn agrees_with_brute_force_on_random_graphs() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(41);
    let mut checked = 0;
    while checked < 60 {
        let n = rng.gen_range(1..=7);
        let mut arcs = Vec::new();
        let density = rng.gen_range(0.1..0.45);
        for u in 1..=n {
            for v in 1..=n {
                if u != v && rng.gen_bool(density) {
                    arcs.push((u, v));
                }
            }
        }
        let g = graph(n, &arcs);
        let k = vertex_integrity(&g);
        if k > 4 {
            continue;
        }
        checked += 1;
        let opt = min_solution_size(&g).unwrap();
        for p in 0..=g.m() {
            let r = solve_vi(&g, p, k).unwrap();
            assert_eq!(r.feasible, opt <= p, "graph {arcs:?} p={p}");
            if r.feasible {
                assert_eq!(r.optimum, Some(opt));
                let s = r.witness.unwrap();
                assert_eq!(s.size(), opt);
                assert!(verify_solution(&g, p, &s).unwrap());
                let rest = g.remove(&s).unwrap();
                assert_eq!(separator_reach(&rest, &r.separator.m), r.sigma.unwrap());
            }
        }
    }
}
