#![allow(dead_code)]

use escad_core::MultiDigraph;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random multigraph with `n ≤ max_n` vertices, at most `max_m` arc copies and
/// at most `max_mult` copies per ordered pair.
pub fn random_multigraph(r: &mut impl Rng, max_n: usize, max_m: usize, max_mult: usize) -> MultiDigraph {
    let n = r.gen_range(1..=max_n);
    let mut g = MultiDigraph::new(n);
    if n < 2 {
        return g;
    }
    let target = r.gen_range(0..=max_m);
    let mut tries = 0;
    while g.m() < target && tries < 20 * max_m {
        tries += 1;
        let u = r.gen_range(1..=n);
        let v = r.gen_range(1..=n);
        if u != v && g.multiplicity(u, v) < max_mult {
            g.add_arc(u, v).unwrap();
        }
    }
    g
}
