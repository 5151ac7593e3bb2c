use rand::Rng;

use super::{EdgeIndex, Hypergraph, KPartiteHypergraph};
use crate::combin::for_each_subset;
use crate::error::Result;

/// Draws from `G(n, c, s)`: each s-subset of `0..n` is an edge independently
/// with probability `c`, decided in lexicographic order of the subsets.
pub fn sample_er<R: Rng + ?Sized>(n: usize, c: f64, s: usize, rng: &mut R) -> Hypergraph {
    assert!((0.0..=1.0).contains(&c), "edge probability {c} outside [0, 1]");
    assert!(s >= 2, "uniformity must be at least 2");
    let mut edges = Vec::new();
    for_each_subset(n, s, |e| {
        if rng.random_bool(c) {
            edges.extend(e.iter().map(|&v| v as u32));
        }
    });
    Hypergraph::from_sorted_unchecked(n, s, edges)
}

/// Draws a k-partite hypergraph with every label-distinct s-set present
/// independently with probability `c`, decided in [`EdgeIndex`] order.
pub fn sample_er_kpartite<R: Rng + ?Sized>(
    n: usize,
    k: usize,
    c: f64,
    s: usize,
    rng: &mut R,
) -> Result<KPartiteHypergraph> {
    assert!((0.0..=1.0).contains(&c), "edge probability {c} outside [0, 1]");
    let index = EdgeIndex::new(n, k, s)?;
    let len = index.len();
    KPartiteHypergraph::from_indicator(index, (0..len).map(|_| rng.random_bool(c)))
}
