use crate::combin::{binomial, subsets};
use crate::error::{Error, Result};

/// Canonical bijection between `0..N`, `N = C(k, s) n^s`, and the
/// label-respecting s-subsets of `[n] x [k]`.
///
/// Label-sets `T = {t_1 < ... < t_s}` of `[k]` are taken in lexicographic
/// order; within a label-set the edge `{(i_1, t_1), ..., (i_s, t_s)}` sits at
/// offset `sum_j i_j n^(s-1-j)`. Labels and within-part indices are 0-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeIndex {
    n: usize,
    k: usize,
    s: usize,
    labelsets: Vec<Vec<usize>>,
    per_set: usize,
}

impl EdgeIndex {
    pub fn new(n: usize, k: usize, s: usize) -> Result<Self> {
        if !(k >= s && s >= 2 && n >= 1) {
            return Err(Error::invalid(format!("need k >= s >= 2 and n >= 1, got n={n} k={k} s={s}")));
        }
        let per_set = n
            .checked_pow(s as u32)
            .ok_or_else(|| Error::invalid("n^s overflows"))?;
        let sets = binomial(k as u64, s as u64) as usize;
        sets.checked_mul(per_set)
            .ok_or_else(|| Error::invalid("edge index size overflows"))?;
        Ok(EdgeIndex {
            n,
            k,
            s,
            labelsets: subsets(k, s),
            per_set,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn s(&self) -> usize {
        self.s
    }

    /// `N = C(k, s) n^s`.
    pub fn len(&self) -> usize {
        self.labelsets.len() * self.per_set
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `D = C(k, s)`, the number of label-sets and the polynomial degree.
    pub fn degree(&self) -> usize {
        self.labelsets.len()
    }

    /// Number of edges per label-set, `n^s`.
    pub fn per_labelset(&self) -> usize {
        self.per_set
    }

    /// Label-sets in lexicographic order.
    pub fn labelsets(&self) -> &[Vec<usize>] {
        &self.labelsets
    }

    pub fn labelset_rank(&self, labels: &[usize]) -> Option<usize> {
        self.labelsets.binary_search_by(|t| t.as_slice().cmp(labels)).ok()
    }

    /// Index of the edge with label-set number `rank` and within-part indices
    /// `idx` (one per label, in label order).
    pub fn encode(&self, rank: usize, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.s);
        rank * self.per_set + idx.iter().fold(0, |acc, &i| acc * self.n + i)
    }

    /// Label-set number of edge `i`.
    pub fn labelset_of(&self, i: usize) -> usize {
        i / self.per_set
    }

    /// Within-part indices of edge `i`, in label order.
    pub fn indices_of(&self, i: usize) -> Vec<usize> {
        let mut off = i % self.per_set;
        let mut out = vec![0; self.s];
        for slot in out.iter_mut().rev() {
            *slot = off % self.n;
            off /= self.n;
        }
        out
    }

    /// `pi(i)`: the vertices `(label, index)` of edge `i`, sorted by label.
    pub fn edge(&self, i: usize) -> Vec<(usize, usize)> {
        let labels = &self.labelsets[self.labelset_of(i)];
        labels.iter().copied().zip(self.indices_of(i)).collect()
    }

    /// `pi^-1`: index of a label-distinct set of vertices `(label, index)`.
    pub fn index_of(&self, vertices: &[(usize, usize)]) -> Option<usize> {
        if vertices.len() != self.s {
            return None;
        }
        let mut v = vertices.to_vec();
        v.sort_unstable();
        if v.windows(2).any(|w| w[0].0 == w[1].0) || v.iter().any(|&(l, i)| l >= self.k || i >= self.n) {
            return None;
        }
        let labels: Vec<usize> = v.iter().map(|x| x.0).collect();
        let idx: Vec<usize> = v.iter().map(|x| x.1).collect();
        Some(self.encode(self.labelset_rank(&labels)?, &idx))
    }
}
