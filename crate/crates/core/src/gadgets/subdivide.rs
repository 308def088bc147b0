//! One midpoint per arc copy, giving a simple digraph with the same optimum.

use super::GadgetMetadata;
use crate::digraph::{ArcMultiset, MultiDigraph, Vertex};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subdivision {
    pub graph: MultiDigraph,
    /// `(u, v, copy)` for midpoint `n + 1 + i`, copies counted from 1.
    pub midpoints: Vec<(Vertex, Vertex, usize)>,
    pub meta: GadgetMetadata,
}

impl Subdivision {
    pub fn midpoint(&self, u: Vertex, v: Vertex, copy: usize) -> Option<Vertex> {
        let n = self.graph.n() - self.midpoints.len();
        self.midpoints
            .iter()
            .position(|&m| m == (u, v, copy))
            .map(|i| n + 1 + i)
    }

    /// Replaces each deleted copy of `(u, v)` by the first half of one subdivided copy.
    pub fn lift_solution(&self, s: &ArcMultiset) -> ArcMultiset {
        let mut out = ArcMultiset::new();
        for ((u, v), c) in s.iter() {
            for copy in 1..=c {
                if let Some(w) = self.midpoint(u, v, copy) {
                    out.insert(u, w, 1);
                }
            }
        }
        out
    }
}

/// Midpoints are numbered `n+1, n+2, ...` in `(u, v)` order, copies in order.
pub fn subdivide(g: &MultiDigraph) -> Subdivision {
    let n = g.n();
    let mut midpoints = Vec::with_capacity(g.m());
    for ((u, v), c) in g.arcs() {
        midpoints.extend((1..=c).map(|copy| (u, v, copy)));
    }
    let mut out = MultiDigraph::new(n + midpoints.len());
    for (i, &(u, v, _)) in midpoints.iter().enumerate() {
        let w = n + 1 + i;
        out.add_arc(u, w).expect("fresh midpoint");
        out.add_arc(w, v).expect("fresh midpoint");
    }
    let mut roles: Vec<String> = (1..=n).map(|v| format!("v_{v}")).collect();
    roles.extend(midpoints.iter().map(|&(u, v, c)| format!("mid:{u}:{v}:{c}")));
    let meta = GadgetMetadata {
        generator: "subdivide".into(),
        params: vec![("n".into(), n.to_string()), ("m".into(), g.m().to_string())],
        k: 0,
        roles,
    };
    Subdivision {
        graph: out,
        midpoints,
        meta,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::verify_solution;
    use crate::oracle::{min_solution_size, min_solution_with_cap, DEFAULT_CAP};

    #[test]
    fn double_arc() {
        let g = MultiDigraph::from_arcs(2, [(1, 2, 2)]).unwrap();
        let sub = subdivide(&g);
        assert_eq!(sub.graph.n(), 4);
        assert_eq!(sub.graph.m(), 4);
        assert!(sub.graph.is_simple());
        assert_eq!(sub.midpoint(1, 2, 2), Some(4));
        assert_eq!(sub.meta.role(3), "mid:1:2:1");
    }

    #[test]
    fn two_cycle_stays_balanced() {
        let g = MultiDigraph::from_arcs(2, [(1, 2, 1), (2, 1, 1)]).unwrap();
        let sub = subdivide(&g);
        assert_eq!(min_solution_size(&sub.graph).unwrap(), 0);
    }

    #[test]
    fn lifted_solution_verifies() {
        let g = MultiDigraph::from_arcs(3, [(1, 2, 2), (2, 1, 1), (2, 3, 1), (3, 1, 1)]).unwrap();
        let k = min_solution_size(&g).unwrap();
        let sub = subdivide(&g);
        assert_eq!(min_solution_size(&sub.graph).unwrap(), k);
        let (size, s) = min_solution_with_cap(&g, DEFAULT_CAP).unwrap();
        assert_eq!(size, k);
        assert!(verify_solution(&sub.graph, k, &sub.lift_solution(&s)).unwrap());
    }
}
