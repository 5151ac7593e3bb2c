use fixedbitset::FixedBitSet;

use super::{EdgeIndex, Hypergraph};
use crate::error::{Error, Result};

/// A hypergraph on `[n] x [k]` whose edges have pairwise distinct labels,
/// stored as an indicator vector over [`EdgeIndex`].
///
/// Vertex `(label j, index i)` maps to the flat id `j * n + i` when converted
/// to a plain [`Hypergraph`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KPartiteHypergraph {
    index: EdgeIndex,
    present: FixedBitSet,
}

impl KPartiteHypergraph {
    pub fn empty(index: EdgeIndex) -> Self {
        let present = FixedBitSet::with_capacity(index.len());
        KPartiteHypergraph { index, present }
    }

    /// Builds from an indicator over edge indices.
    pub fn from_indicator(index: EdgeIndex, bits: impl IntoIterator<Item = bool>) -> Result<Self> {
        let mut g = Self::empty(index);
        let mut len = 0;
        for (i, b) in bits.into_iter().enumerate() {
            if i >= g.index.len() {
                return Err(Error::invalid("indicator longer than the edge index"));
            }
            g.present.set(i, b);
            len += 1;
        }
        if len != g.index.len() {
            return Err(Error::invalid("indicator shorter than the edge index"));
        }
        Ok(g)
    }

    pub(crate) fn from_bitset(index: EdgeIndex, present: FixedBitSet) -> Self {
        debug_assert_eq!(present.len(), index.len());
        KPartiteHypergraph { index, present }
    }

    /// Builds from edges given as `(label, index)` vertex lists.
    pub fn from_edges<I, E>(index: EdgeIndex, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = E>,
        E: AsRef<[(usize, usize)]>,
    {
        let mut g = Self::empty(index);
        for e in edges {
            let e = e.as_ref();
            let i = g
                .index
                .index_of(e)
                .ok_or_else(|| Error::invalid(format!("{e:?} is not a label-distinct s-set")))?;
            if g.present.put(i) {
                return Err(Error::invalid(format!("duplicate edge {e:?}")));
            }
        }
        Ok(g)
    }

    pub fn index(&self) -> &EdgeIndex {
        &self.index
    }

    pub fn n(&self) -> usize {
        self.index.n()
    }

    pub fn k(&self) -> usize {
        self.index.k()
    }

    pub fn s(&self) -> usize {
        self.index.s()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.present.contains(i)
    }

    pub fn set(&mut self, i: usize, present: bool) {
        self.present.set(i, present);
    }

    pub fn edge_count(&self) -> usize {
        self.present.count_ones(..)
    }

    /// Indices of present edges, increasing.
    pub fn edge_indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.present.ones()
    }

    pub fn indicator(&self) -> &FixedBitSet {
        &self.present
    }

    /// Flat vertex id of `(label, index)`.
    pub fn vertex_id(&self, label: usize, idx: usize) -> usize {
        label * self.n() + idx
    }

    /// The same hypergraph on `n k` plain vertices.
    pub fn to_hypergraph(&self) -> Hypergraph {
        let mut tuples: Vec<Vec<u32>> = self
            .edge_indices()
            .map(|i| {
                let mut t: Vec<u32> = self
                    .index
                    .edge(i)
                    .into_iter()
                    .map(|(l, v)| self.vertex_id(l, v) as u32)
                    .collect();
                t.sort_unstable();
                t
            })
            .collect();
        tuples.sort_unstable();
        Hypergraph::from_sorted_unchecked(self.n() * self.k(), self.s(), tuples.concat())
    }
}

/// k-partite blow-up preserving the k-clique count.
///
/// Each edge `v_1 < ... < v_s` of `G` yields `{(v_1, t_1), ..., (v_s, t_s)}`
/// for every label-set `t_1 < ... < t_s`; the k-cliques of the result are
/// exactly `{(v_1, 1), ..., (v_k, k)}` for the k-cliques `v_1 < ... < v_k` of `G`.
pub fn blow_up_k_partite(g: &Hypergraph, k: usize) -> Result<KPartiteHypergraph> {
    let index = EdgeIndex::new(g.n(), k, g.s())?;
    let mut out = KPartiteHypergraph::empty(index);
    let idx_buf: Vec<Vec<usize>> = g
        .edges()
        .map(|e| e.iter().map(|&v| v as usize).collect())
        .collect();
    for rank in 0..out.index.degree() {
        for idx in &idx_buf {
            let i = out.index.encode(rank, idx);
            out.present.insert(i);
        }
    }
    Ok(out)
}
