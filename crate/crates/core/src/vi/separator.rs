use crate::digraph::{MultiDigraph, Vertex};

use super::ViError;

/// A vertex set `M` with `|M| ≤ k` such that every weakly connected component
/// of `G − M` has at most `k − |M|` vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Separator {
    pub m: Vec<Vertex>,
    pub k: usize,
    /// Weak components of `G − M`, each sorted, ordered by smallest vertex.
    pub components: Vec<Vec<Vertex>>,
}

impl Separator {
    /// Position of `v` in `m`, if present.
    pub fn index_of(&self, v: Vertex) -> Option<usize> {
        self.m.binary_search(&v).ok()
    }
}

fn weak_components(nb: &[Vec<Vertex>], n: usize, removed: &[bool]) -> Vec<Vec<Vertex>> {
    let mut seen = removed.to_vec();
    let mut out = Vec::new();
    for start in 1..=n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut comp = vec![start];
        let mut i = 0;
        while i < comp.len() {
            for &w in &nb[comp[i]] {
                if !seen[w] {
                    seen[w] = true;
                    comp.push(w);
                }
            }
            i += 1;
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Brute force over vertex subsets by increasing size, lexicographic within a
/// size. Returns the first valid `k`-separator.
pub fn find_separator(
    g: &MultiDigraph,
    k: usize,
    max_subsets: u128,
) -> Result<Option<Separator>, ViError> {
    let n = g.n();
    let nb = g.deoriented_neighbors();
    let mut tried = 0u128;
    for size in 0..=k.min(n) {
        let mut pick: Vec<usize> = (1..=size).collect();
        loop {
            tried += 1;
            if tried > max_subsets {
                return Err(ViError::SubsetCap(max_subsets));
            }
            let mut removed = vec![false; n + 1];
            removed[0] = true;
            for &v in &pick {
                removed[v] = true;
            }
            let components = weak_components(&nb, n, &removed);
            if components.iter().all(|c| c.len() <= k - size) {
                return Ok(Some(Separator {
                    m: pick,
                    k,
                    components,
                }));
            }
            // Next combination in lexicographic order.
            let mut i = size;
            while i > 0 && pick[i - 1] == n - size + i {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            pick[i - 1] += 1;
            for j in i..size {
                pick[j] = pick[j - 1] + 1;
            }
        }
    }
    Ok(None)
}
