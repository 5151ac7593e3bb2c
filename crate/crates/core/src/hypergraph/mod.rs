//! s-uniform hypergraphs, Erdős–Rényi samplers and the k-partite blow-up.

mod index;
mod io;
mod kpartite;
mod sample;

pub use index::EdgeIndex;
pub use io::{
    parse_hypergraph, parse_kpartite, read_hypergraph, read_kpartite, write_hypergraph,
    write_kpartite,
};
pub use kpartite::{blow_up_k_partite, KPartiteHypergraph};
pub use sample::{sample_er, sample_er_kpartite};

use fixedbitset::FixedBitSet;

use crate::combin::{binomial, colex_rank, for_each_subset};
use crate::error::{Error, Result};

/// Link bitsets are built only while they fit in this many bits.
const LINK_BIT_BUDGET: u64 = 1 << 27;

/// An s-uniform hypergraph on vertices `0..n`.
///
/// Edges are kept as sorted s-tuples in lexicographic order. When memory
/// allows, each (s-1)-subset `B` also gets a bitset of the vertices `v` with
/// `B + v` an edge, which makes membership and common-neighbor queries cheap.
#[derive(Clone)]
pub struct Hypergraph {
    n: usize,
    s: usize,
    /// Flattened edge tuples, `s` entries each.
    edges: Vec<u32>,
    links: Option<Vec<FixedBitSet>>,
}

impl std::fmt::Debug for Hypergraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Hypergraph")
            .field("n", &self.n)
            .field("s", &self.s)
            .field("edges", &self.edge_list())
            .finish()
    }
}

impl PartialEq for Hypergraph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.s == other.s && self.edges == other.edges
    }
}

impl Eq for Hypergraph {}

impl Hypergraph {
    /// Builds a hypergraph from edges given as vertex lists in any order.
    ///
    /// Fails on edges of the wrong size, repeated or out-of-range vertices,
    /// and duplicate edges.
    pub fn from_edges<I, E>(n: usize, s: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = E>,
        E: AsRef<[usize]>,
    {
        if s < 2 {
            return Err(Error::invalid(format!("uniformity must be at least 2, got {s}")));
        }
        if n > u32::MAX as usize {
            return Err(Error::invalid("too many vertices"));
        }
        let mut tuples: Vec<Vec<u32>> = Vec::new();
        for e in edges {
            let mut e: Vec<usize> = e.as_ref().to_vec();
            if e.len() != s {
                return Err(Error::invalid(format!("edge {e:?} does not have {s} vertices")));
            }
            e.sort_unstable();
            if e.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::invalid(format!("edge {e:?} repeats a vertex")));
            }
            if e[s - 1] >= n {
                return Err(Error::invalid(format!("edge {e:?} has a vertex outside 0..{n}")));
            }
            tuples.push(e.into_iter().map(|v| v as u32).collect());
        }
        tuples.sort_unstable();
        if let Some(w) = tuples.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::invalid(format!("duplicate edge {:?}", w[0])));
        }
        Ok(Self::from_sorted_unchecked(n, s, tuples.concat()))
    }

    /// `edges` must be flattened, individually sorted, lexicographically
    /// sorted and duplicate free.
    pub(crate) fn from_sorted_unchecked(n: usize, s: usize, edges: Vec<u32>) -> Self {
        let mut g = Hypergraph {
            n,
            s,
            edges,
            links: None,
        };
        g.build_links();
        g
    }

    fn build_links(&mut self) {
        let sets = binomial(self.n as u64, self.s as u64 - 1);
        if sets.saturating_mul(self.n as u64) > LINK_BIT_BUDGET {
            return;
        }
        let mut links = vec![FixedBitSet::with_capacity(self.n); sets as usize];
        let mut buf = vec![0usize; self.s - 1];
        for e in self.edges.chunks_exact(self.s) {
            // For each vertex of the edge, link it to the remaining s-1.
            for skip in 0..self.s {
                let mut j = 0;
                for (i, &v) in e.iter().enumerate() {
                    if i != skip {
                        buf[j] = v as usize;
                        j += 1;
                    }
                }
                links[colex_rank(&buf)].insert(e[skip] as usize);
            }
        }
        self.links = Some(links);
    }

    pub fn empty(n: usize, s: usize) -> Self {
        assert!(s >= 2, "uniformity must be at least 2");
        Self::from_sorted_unchecked(n, s, Vec::new())
    }

    /// Every s-subset of `0..n` is an edge.
    pub fn complete(n: usize, s: usize) -> Self {
        assert!(s >= 2, "uniformity must be at least 2");
        let mut edges = Vec::new();
        for_each_subset(n, s, |e| edges.extend(e.iter().map(|&v| v as u32)));
        Self::from_sorted_unchecked(n, s, edges)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len() / self.s
    }

    /// Edges as sorted tuples in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = &[u32]> + '_ {
        self.edges.chunks_exact(self.s)
    }

    pub fn edge_list(&self) -> Vec<Vec<usize>> {
        self.edges()
            .map(|e| e.iter().map(|&v| v as usize).collect())
            .collect()
    }

    /// Membership test for a sorted s-tuple.
    pub fn has_edge(&self, e: &[usize]) -> bool {
        debug_assert_eq!(e.len(), self.s);
        debug_assert!(e.windows(2).all(|w| w[0] < w[1]));
        if let Some(links) = &self.links {
            return links[colex_rank(&e[..self.s - 1])].contains(e[self.s - 1]);
        }
        let key: Vec<u32> = e.iter().map(|&v| v as u32).collect();
        let m = self.edge_count();
        let (mut lo, mut hi) = (0, m);
        while lo < hi {
            let mid = (lo + hi) / 2;
            let cand = &self.edges[mid * self.s..(mid + 1) * self.s];
            match cand.cmp(&key[..]) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return true,
            }
        }
        false
    }

    /// Whether every s-subset of the sorted vertex list `a` is an edge.
    pub fn is_clique(&self, a: &[usize]) -> bool {
        if a.len() < self.s {
            return true;
        }
        let mut sub = vec![0usize; self.s];
        let mut ok = true;
        for_each_subset(a.len(), self.s, |idx| {
            if ok {
                for (d, &i) in sub.iter_mut().zip(idx) {
                    *d = a[i];
                }
                ok = self.has_edge(&sub);
            }
        });
        ok
    }

    /// `{v not in A : B + v is an edge for every (s-1)-subset B of A}`.
    ///
    /// `a` must have at least `s - 1` vertices.
    pub fn common_neighbors(&self, a: &[usize]) -> FixedBitSet {
        let mut a = a.to_vec();
        a.sort_unstable();
        assert!(a.len() + 1 >= self.s, "need at least s-1 vertices");
        let mut out = FixedBitSet::with_capacity(self.n);
        match &self.links {
            Some(links) => {
                out.insert_range(..);
                let mut sub = vec![0usize; self.s - 1];
                for_each_subset(a.len(), self.s - 1, |idx| {
                    for (d, &i) in sub.iter_mut().zip(idx) {
                        *d = a[i];
                    }
                    out.intersect_with(&links[colex_rank(&sub)]);
                });
            }
            None => {
                let mut with_v = a.clone();
                for v in 0..self.n {
                    if a.binary_search(&v).is_ok() {
                        continue;
                    }
                    with_v.clear();
                    with_v.extend_from_slice(&a);
                    let pos = with_v.partition_point(|&x| x < v);
                    with_v.insert(pos, v);
                    // Every new s-subset contains v; the rest are not required.
                    let mut all = true;
                    let mut sub = vec![0usize; self.s - 1];
                    let mut edge = vec![0usize; self.s];
                    for_each_subset(a.len(), self.s - 1, |idx| {
                        if !all {
                            return;
                        }
                        for (d, &i) in sub.iter_mut().zip(idx) {
                            *d = a[i];
                        }
                        let p = sub.partition_point(|&x| x < v);
                        edge[..p].copy_from_slice(&sub[..p]);
                        edge[p] = v;
                        edge[p + 1..].copy_from_slice(&sub[p..]);
                        all = self.has_edge(&edge);
                    });
                    if all {
                        out.insert(v);
                    }
                }
            }
        }
        for &v in &a {
            out.set(v, false);
        }
        out
    }

    /// `links[colex_rank(B)]` holds the vertices `v` with `B + v` an edge,
    /// for every (s-1)-subset `B`; absent for very large hypergraphs.
    pub(crate) fn links(&self) -> Option<&[FixedBitSet]> {
        self.links.as_deref()
    }

    /// Sub-hypergraph induced on `vertices`, relabeled `0..len` in the given
    /// order.
    pub fn induced(&self, vertices: &[usize]) -> Hypergraph {
        let mut new_id = vec![u32::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            new_id[v] = i as u32;
        }
        if vertices.windows(2).all(|w| w[0] < w[1]) {
            // Monotone relabeling keeps tuples and their order sorted.
            let mut flat = Vec::new();
            for e in self.edges() {
                if e.iter().all(|&v| new_id[v as usize] != u32::MAX) {
                    flat.extend(e.iter().map(|&v| new_id[v as usize]));
                }
            }
            return Self::from_sorted_unchecked(vertices.len(), self.s, flat);
        }
        let mut tuples: Vec<Vec<u32>> = self
            .edges()
            .filter(|e| e.iter().all(|&v| new_id[v as usize] != u32::MAX))
            .map(|e| {
                let mut t: Vec<u32> = e.iter().map(|&v| new_id[v as usize]).collect();
                t.sort_unstable();
                t
            })
            .collect();
        tuples.sort_unstable();
        Self::from_sorted_unchecked(vertices.len(), self.s, tuples.concat())
    }

    /// Same graph with links dropped, forcing the fallback query paths.
    #[cfg(test)]
    pub(crate) fn without_links(mut self) -> Self {
        self.links = None;
        self
    }
}
