//! Seeded random digraphs.

use super::{VertexId, Weight, WeightedDigraph};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Up to `m` arcs between distinct vertex pairs, weights in `0..=wmax`.
pub fn random_digraph(seed: u64, n: usize, m: usize, wmax: Weight) -> WeightedDigraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs: Vec<(VertexId, VertexId)> = (0..n).flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v))).collect();
    pairs.shuffle(&mut rng);
    let mut g = WeightedDigraph::with_vertices(n);
    for (u, v) in pairs.into_iter().take(m) {
        g.add_arc(u, v, rng.gen_range(0..=wmax)).expect("vertices exist");
    }
    g
}

/// A `rows × cols` grid with each diagonal-free grid edge kept in each
/// direction with probability `keep`; weights in `1..=wmax`. Planar by construction.
pub fn random_planar_digraph(seed: u64, rows: usize, cols: usize, keep: f64, wmax: Weight) -> WeightedDigraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let id = |r: usize, c: usize| r * cols + c;
    let mut g = WeightedDigraph::with_vertices(rows * cols);
    for r in 0..rows {
        for c in 0..cols {
            let mut nbrs = Vec::new();
            if r + 1 < rows {
                nbrs.push(id(r + 1, c));
            }
            if c + 1 < cols {
                nbrs.push(id(r, c + 1));
            }
            for v in nbrs {
                let u = id(r, c);
                for (a, b) in [(u, v), (v, u)] {
                    if rng.gen_bool(keep) {
                        g.add_arc(a, b, rng.gen_range(1..=wmax)).expect("vertices exist");
                    }
                }
            }
        }
    }
    g
}

/// `k` distinct vertices drawn with the given seed.
pub fn random_terminals(seed: u64, n: usize, k: usize) -> Vec<VertexId> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut all: Vec<VertexId> = (0..n).collect();
    all.shuffle(&mut rng);
    all.truncate(k);
    all
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::planarity_check;

    #[test]
    fn deterministic_and_planar() {
        assert_eq!(random_digraph(4, 6, 10, 3), random_digraph(4, 6, 10, 3));
        assert_eq!(random_digraph(4, 6, 10, 3).arc_count(), 10);
        for seed in 0..10 {
            assert!(planarity_check(&random_planar_digraph(seed, 4, 5, 0.8, 9)));
        }
        let t = random_terminals(1, 10, 4);
        assert_eq!(t.len(), 4);
    }
}
