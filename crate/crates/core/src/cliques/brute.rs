use fixedbitset::FixedBitSet;
use num_bigint::BigUint;

use super::CliqueSet;
use crate::combin::{colex_rank, for_each_subset};
use crate::hypergraph::Hypergraph;

/// Depth-first search carrying candidate sets: `cand[d]` holds the vertices
/// above the last one of the current `d`-clique that extend it to a clique.
/// Pushing `v` intersects with the links of every (s-1)-set containing `v`.
/// `leaf` sees each (k-1)-clique with its candidates.
struct BitsetSearch<'a, F> {
    links: &'a [FixedBitSet],
    s: usize,
    k: usize,
    stack: Vec<usize>,
    cand: Vec<FixedBitSet>,
    key: Vec<usize>,
    leaf: F,
}

impl<F: FnMut(&[usize], &FixedBitSet)> BitsetSearch<'_, F> {
    fn run(&mut self, d: usize) {
        if d + 1 == self.k {
            (self.leaf)(&self.stack, &self.cand[d]);
            return;
        }
        let verts: Vec<usize> = self.cand[d].ones().collect();
        for v in verts {
            let (lo, hi) = self.cand.split_at_mut(d + 1);
            let next = &mut hi[0];
            next.clone_from(&lo[d]);
            next.set_range(..v + 1, false);
            if d + 2 >= self.s {
                // (s-2)-subsets of the stack, each completed by v.
                let key = &mut self.key;
                let stack = &self.stack;
                let links = self.links;
                for_each_subset(d, self.s - 2, |idx| {
                    for (slot, &i) in key.iter_mut().zip(idx) {
                        *slot = stack[i];
                    }
                    key[idx.len()] = v;
                    next.intersect_with(&links[colex_rank(key)]);
                });
            }
            self.stack.push(v);
            self.run(d + 1);
            self.stack.pop();
        }
    }
}

fn bitset_search<F: FnMut(&[usize], &FixedBitSet)>(g: &Hypergraph, links: &[FixedBitSet], k: usize, leaf: F) {
    let mut all = FixedBitSet::with_capacity(g.n());
    all.insert_range(..);
    let mut search = BitsetSearch {
        links,
        s: g.s(),
        k,
        stack: Vec::with_capacity(k),
        cand: vec![all; k],
        key: vec![0; g.s() - 1],
        leaf,
    };
    search.run(0);
}

/// Runs `leaf` over (k-1)-cliques when the bitset search applies; `false`
/// when the caller has to fall back to [`search`].
fn try_bitset_search<F: FnMut(&[usize], &FixedBitSet)>(g: &Hypergraph, k: usize, leaf: F) -> bool {
    match g.links() {
        Some(links) if k >= g.s() && k <= g.n() => {
            bitset_search(g, links, k, leaf);
            true
        }
        _ => false,
    }
}

/// Depth-first search over increasing vertex tuples, extending a clique only
/// by vertices that form an edge with every (s-1)-subset already chosen.
fn search(g: &Hypergraph, k: usize, mut visit: impl FnMut(&[usize])) {
    let n = g.n();
    let s = g.s();
    if k > n {
        return;
    }
    if k < s {
        // Every set of fewer than s vertices is a clique.
        for_each_subset(n, k, |c| visit(c));
        return;
    }
    let mut stack: Vec<usize> = Vec::with_capacity(k);
    let mut edge = vec![0usize; s];
    let mut ok_with = |stack: &[usize], v: usize| -> bool {
        if stack.len() + 1 < s {
            return true;
        }
        let mut all = true;
        for_each_subset(stack.len(), s - 1, |idx| {
            if all {
                for (d, &i) in edge.iter_mut().zip(idx) {
                    *d = stack[i];
                }
                edge[s - 1] = v;
                all = g.has_edge(&edge);
            }
        });
        all
    };
    // Iterative DFS: `next` is the next candidate for position stack.len().
    let mut next = 0usize;
    loop {
        if stack.len() == k {
            visit(&stack);
            next = stack.pop().unwrap() + 1;
            continue;
        }
        let remaining = k - stack.len();
        if next + remaining > n {
            match stack.pop() {
                Some(v) => {
                    next = v + 1;
                    continue;
                }
                None => return,
            }
        }
        if ok_with(&stack, next) {
            stack.push(next);
        }
        next += 1;
    }
}

/// Exact number of k-cliques.
pub fn brute_force_count(g: &Hypergraph, k: usize) -> BigUint {
    let mut count: u128 = 0;
    if !try_bitset_search(g, k, |_, cand| count += cand.count_ones(..) as u128) {
        search(g, k, |_| count += 1);
    }
    BigUint::from(count)
}

/// All k-cliques.
pub fn list_cliques(g: &Hypergraph, k: usize) -> CliqueSet {
    let mut out = CliqueSet::new(k);
    let mut clique = Vec::with_capacity(k);
    let done = try_bitset_search(g, k, |stack, cand| {
        for w in cand.ones() {
            clique.clear();
            clique.extend_from_slice(stack);
            clique.push(w);
            out.insert(&clique);
        }
    });
    if !done {
        search(g, k, |c| {
            out.insert(c);
        });
    }
    out
}

/// Number of k-cliques modulo 2.
pub fn parity_count(g: &Hypergraph, k: usize) -> u8 {
    let mut parity = 0u8;
    if !try_bitset_search(g, k, |_, cand| parity ^= (cand.count_ones(..) & 1) as u8) {
        search(g, k, |_| parity ^= 1);
    }
    parity
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::sample_er;
    use crate::seed::rng_from_seed;

    /// Enumerates every k-subset and tests all of its s-subsets.
    fn naive(g: &Hypergraph, k: usize) -> u64 {
        let mut count = 0;
        for_each_subset(g.n(), k, |c| {
            if g.is_clique(c) {
                count += 1;
            }
        });
        count
    }

    fn petersen() -> Hypergraph {
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push([i, (i + 1) % 5]);
            edges.push([i, i + 5]);
            edges.push([5 + i, 5 + (i + 2) % 5]);
        }
        Hypergraph::from_edges(10, 2, edges).unwrap()
    }

    #[test]
    fn small_examples() {
        assert_eq!(brute_force_count(&Hypergraph::complete(5, 2), 3), BigUint::from(10u32));
        assert_eq!(brute_force_count(&Hypergraph::empty(6, 2), 3), BigUint::ZERO);
        assert_eq!(brute_force_count(&petersen(), 3), BigUint::ZERO);
        assert_eq!(brute_force_count(&petersen(), 2), BigUint::from(15u32));
        assert_eq!(parity_count(&Hypergraph::complete(5, 2), 3), 0);
        let k4_plus = Hypergraph::from_edges(5, 2, crate::combin::subsets(4, 2)).unwrap();
        assert_eq!(parity_count(&k4_plus, 4), 1);
        assert_eq!(brute_force_count(&Hypergraph::complete(7, 3), 5), BigUint::from(21u32));
    }

    #[test]
    fn matches_naive_enumeration() {
        let mut rng = rng_from_seed(9);
        for (n, s, c) in [(10, 2, 0.5), (9, 3, 0.6), (8, 4, 0.7), (12, 2, 0.3)] {
            for _ in 0..10 {
                let g = sample_er(n, c, s, &mut rng);
                for k in s..=s + 3 {
                    assert_eq!(brute_force_count(&g, k), BigUint::from(naive(&g, k)));
                }
            }
        }
    }

    #[test]
    fn bitset_and_fallback_searches_agree() {
        let mut rng = rng_from_seed(10);
        for (n, s, c) in [(11, 2, 0.6), (9, 3, 0.7), (8, 4, 0.8)] {
            for _ in 0..10 {
                let g = sample_er(n, c, s, &mut rng);
                let plain = g.clone().without_links();
                for k in s..=s + 3 {
                    assert_eq!(brute_force_count(&g, k), brute_force_count(&plain, k));
                    assert_eq!(parity_count(&g, k), parity_count(&plain, k));
                    let (a, b) = (list_cliques(&g, k), list_cliques(&plain, k));
                    assert!(a.is_subset(&b) && b.is_subset(&a));
                }
            }
        }
    }

    #[test]
    fn sizes_below_s_and_above_n() {
        let g = Hypergraph::empty(4, 3);
        assert_eq!(brute_force_count(&g, 2), BigUint::from(6u32));
        assert_eq!(brute_force_count(&g, 5), BigUint::ZERO);
        assert_eq!(list_cliques(&Hypergraph::complete(4, 2), 3).len(), 4);
    }
}
