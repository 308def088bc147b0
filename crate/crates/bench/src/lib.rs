//! Seeded instances shared by the solver benchmarks.

use escad_core::MultiDigraph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `n` vertices, `m` arc copies, at most `max_mult` copies per ordered pair.
pub fn random_multigraph(seed: u64, n: usize, m: usize, max_mult: usize) -> MultiDigraph {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    let mut g = MultiDigraph::new(n);
    let cap = n * n.saturating_sub(1) * max_mult;
    while g.m() < m.min(cap) {
        let u = r.gen_range(1..=n);
        let v = r.gen_range(1..=n);
        if u != v && g.multiplicity(u, v) < max_mult {
            g.add_arc(u, v).unwrap();
        }
    }
    g
}

/// Hub vertex 1 joined to `petals` directed triangles, each with one chord
/// reversed at random. Vertex integrity stays at most 3.
pub fn flower(seed: u64, petals: usize) -> MultiDigraph {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    let mut g = MultiDigraph::new(1 + 2 * petals);
    for p in 0..petals {
        let a = 2 + 2 * p;
        let b = a + 1;
        g.add_arc(1, a).unwrap();
        g.add_arc(a, b).unwrap();
        g.add_arc(b, 1).unwrap();
        if r.gen_bool(0.5) {
            g.add_arc(b, a).unwrap();
        } else {
            g.add_arc(a, 1).unwrap();
        }
    }
    g
}

/// Directed cycle on `n` vertices with doubled arcs every third step, plus a
/// chord back two steps at every fourth vertex.
pub fn chorded_cycle(n: usize) -> MultiDigraph {
    let mut g = MultiDigraph::new(n);
    for i in 1..=n {
        let j = i % n + 1;
        g.add_arcs(i, j, if i % 3 == 0 { 2 } else { 1 }).unwrap();
        if i % 4 == 0 {
            g.add_arc(i, i - 2).unwrap();
        }
    }
    g
}
