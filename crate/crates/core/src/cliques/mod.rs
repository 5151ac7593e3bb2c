//! k-clique counting: brute force, greedy random sampling, iterative
//! generation with cutoffs, matrix-multiplication post-processing, and the
//! sparsity thresholds and expectations for `G(n, c, s)`.

mod brute;
mod greedy;
mod itgen;
mod matmul;
mod theory;

pub use brute::{brute_force_count, list_cliques, parity_count};
pub use greedy::{greedy_random_sampling, required_iterations};
pub use itgen::{default_cutoffs, it_gen_cliques, Cutoffs};
pub use matmul::matrix_mult_count;
pub use theory::{expected_clique_count, SparsityProfile};

use std::collections::BTreeSet;

/// A set of k-cliques, each stored as its sorted vertex tuple, ordered
/// lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CliqueSet {
    k: usize,
    members: BTreeSet<Vec<u32>>,
}

impl CliqueSet {
    pub fn new(k: usize) -> Self {
        CliqueSet {
            k,
            members: BTreeSet::new(),
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Inserts a clique given in any vertex order; returns whether it was new.
    pub fn insert(&mut self, clique: &[usize]) -> bool {
        debug_assert_eq!(clique.len(), self.k);
        let mut c: Vec<u32> = clique.iter().map(|&v| v as u32).collect();
        c.sort_unstable();
        self.members.insert(c)
    }

    pub fn contains(&self, clique: &[usize]) -> bool {
        let mut c: Vec<u32> = clique.iter().map(|&v| v as u32).collect();
        c.sort_unstable();
        self.members.contains(&c)
    }

    pub fn iter(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        self.members
            .iter()
            .map(|c| c.iter().map(|&v| v as usize).collect())
    }

    pub fn is_subset(&self, other: &CliqueSet) -> bool {
        self.members.is_subset(&other.members)
    }
}

impl FromIterator<Vec<usize>> for CliqueSet {
    /// Collects cliques; `k` is taken from the first member (0 when empty).
    fn from_iter<I: IntoIterator<Item = Vec<usize>>>(iter: I) -> Self {
        let mut out = CliqueSet::new(0);
        for c in iter {
            out.k = c.len();
            out.insert(&c);
        }
        out
    }
}
