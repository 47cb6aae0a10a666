//! Seeded random dual graphs.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::graph::{ComponentSpec, CurveGraph, GraphSpec, NodeSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphBounds {
    pub max_components: usize,
    pub max_extra_edges: usize,
    pub loops: bool,
}

impl Default for GraphBounds {
    fn default() -> Self {
        GraphBounds { max_components: 6, max_extra_edges: 4, loops: true }
    }
}

/// The graph at position `index` of the stream for `seed`. The number of
/// components is uniform in `1..=max_components` and the number of extra
/// edges uniform in `0..=max_extra_edges`; with one component and loops
/// disabled no extra edge can be placed.
pub fn random_graph(seed: u64, index: u64, bounds: &GraphBounds) -> CurveGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let p = rng.gen_range(1..=bounds.max_components.max(1));
    let mut label: Vec<usize> = (0..p).collect();
    label.shuffle(&mut rng);

    let mut edges: Vec<(usize, usize)> = Vec::new();
    for v in 1..p {
        let parent = rng.gen_range(0..v);
        edges.push((label[parent], label[v]));
    }
    let extra = rng.gen_range(0..=bounds.max_extra_edges);
    for _ in 0..extra {
        if bounds.loops {
            edges.push((rng.gen_range(0..p), rng.gen_range(0..p)));
        } else if p >= 2 {
            let u = rng.gen_range(0..p);
            let mut v = rng.gen_range(0..p - 1);
            if v >= u {
                v += 1;
            }
            edges.push((u, v));
        }
    }
    let marked = rng.gen_range(0..p);

    let name = |i: usize| format!("C{}", i + 1);
    let spec = GraphSpec {
        components: (0..p).map(|i| ComponentSpec::Name(name(i))).collect(),
        marked: name(marked),
        nodes: edges
            .iter()
            .enumerate()
            .map(|(e, &(u, v))| NodeSpec { id: format!("e{}", e + 1), ends: [name(u), name(v)] })
            .collect(),
    };
    CurveGraph::from_spec(&spec).expect("generated graphs are connected")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_position_same_graph() {
        let b = GraphBounds::default();
        for i in 0..20 {
            assert_eq!(random_graph(7, i, &b).to_json(), random_graph(7, i, &b).to_json());
        }
        assert_ne!(
            (0..20).map(|i| random_graph(7, i, &b).to_json()).collect::<Vec<_>>(),
            (0..20).map(|i| random_graph(8, i, &b).to_json()).collect::<Vec<_>>()
        );
    }

    #[test]
    fn single_component_has_only_loops() {
        let b = GraphBounds { max_components: 1, max_extra_edges: 3, loops: true };
        for i in 0..50 {
            let g = random_graph(1, i, &b);
            assert_eq!(g.n_components(), 1);
            assert!(g.n_nodes() <= 3);
            assert!(g.nodes().iter().all(|n| n.is_loop()));
        }
    }

    #[test]
    fn two_components_one_extra_edge_without_loops() {
        let b = GraphBounds { max_components: 2, max_extra_edges: 1, loops: false };
        let mut seen = std::collections::BTreeSet::new();
        for i in 0..200 {
            let g = random_graph(3, i, &b);
            if g.n_components() == 2 {
                assert!(g.nodes().iter().all(|n| !n.is_loop()));
                seen.insert(g.n_nodes());
            }
        }
        assert_eq!(seen.into_iter().collect::<Vec<_>>(), vec![1, 2]);
    }
}
