use num_bigint::{BigInt, BigUint};
use rand::Rng;

use super::oracle::AverageCaseOracle;
use crate::combin::{binomial, for_each_subset};
use crate::hypergraph::{Hypergraph, KPartiteHypergraph};

/// Adds every s-set of `[n] x [k]` with a repeated label independently with
/// probability `c`.
///
/// If `g` is k-partite Erdos-Renyi with density `c`, the result is a plain
/// `G(nk, c, s)` sample on the flat vertex ids `label * n + index`.
pub fn add_within_part_edges<R: Rng + ?Sized>(g: &KPartiteHypergraph, c: f64, rng: &mut R) -> Hypergraph {
    let index = g.index();
    let (n, k, s) = (index.n(), index.k(), index.s());
    let mut edges: Vec<u32> = Vec::new();
    let mut labels = vec![0usize; s];
    let mut idx = vec![0usize; s];
    for_each_subset(n * k, s, |set| {
        for (j, &v) in set.iter().enumerate() {
            labels[j] = v / n;
            idx[j] = v % n;
        }
        let present = if labels.windows(2).all(|w| w[0] < w[1]) {
            let rank = index.labelset_rank(&labels).expect("labels within 0..k");
            g.contains(index.encode(rank, &idx))
        } else {
            rng.random_bool(c)
        };
        if present {
            edges.extend(set.iter().map(|&v| v as u32));
        }
    });
    Hypergraph::from_sorted_unchecked(n * k, s, edges)
}

/// `H_T`: the restriction of `h` to the vertices with labels in `mask`.
pub fn restrict_to_labels(h: &Hypergraph, n: usize, k: usize, mask: usize) -> Hypergraph {
    let vertices: Vec<usize> = (0..k)
        .filter(|l| mask >> l & 1 == 1)
        .flat_map(|l| l * n..(l + 1) * n)
        .collect();
    h.induced(&vertices)
}

/// Recovers `t_0, ..., t_k`, where `t_d` counts the k-cliques spanning exactly
/// `d` labels, from the clique counts of every `H_T`.
///
/// `counts[mask]` is `|cl_k(H_T)|` for the label set `T` encoded by `mask`
/// (entry 0 is ignored). Uses `t_0 = 0` and
/// `t_{d+1} = sum_{|T| = d+1} |cl_k(H_T)| - sum_{i <= d} C(k-i, d+1-i) t_i`.
pub fn label_span_counts(k: usize, counts: &[BigInt]) -> Vec<BigInt> {
    assert_eq!(counts.len(), 1 << k, "need one count per label subset");
    let mut t = vec![BigInt::ZERO; k + 1];
    for d in 0..k {
        let mut next: BigInt = (1usize..1 << k)
            .filter(|m| m.count_ones() as usize == d + 1)
            .map(|m| &counts[m])
            .sum();
        for (i, ti) in t.iter().enumerate().take(d + 1) {
            next -= ti * BigInt::from(binomial((k - i) as u64, (d + 1 - i) as u64));
        }
        t[d + 1] = next;
    }
    t
}

/// Which answer the oracle is asked for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Answer {
    Count,
    Parity,
}

/// Oracle calls per k-partite evaluation, `2^k - 1`.
pub fn calls_per_evaluation(k: usize) -> u64 {
    (1u64 << k) - 1
}

/// Counts the k-cliques of `g` using the oracle on `2^k - 1` sub-hypergraphs
/// `H_T`; call for `T` gets ordinal `first + mask(T) - 1`.
pub(crate) fn kpartite_to_general_at<R: Rng + ?Sized>(
    g: &KPartiteHypergraph,
    oracle: &AverageCaseOracle,
    c: f64,
    rng: &mut R,
    first: u64,
    answer: Answer,
) -> BigInt {
    let (n, k) = (g.n(), g.k());
    let h = add_within_part_edges(g, c, rng);
    let mut counts = vec![BigInt::ZERO; 1 << k];
    for (mask, slot) in counts.iter_mut().enumerate().skip(1) {
        let sub = restrict_to_labels(&h, n, k, mask);
        let ordinal = first + mask as u64 - 1;
        *slot = match answer {
            Answer::Count => BigInt::from(oracle.count_at(&sub, k, ordinal)),
            Answer::Parity => BigInt::from(oracle.parity_at(&sub, k, ordinal)),
        };
    }
    label_span_counts(k, &counts).pop().expect("k + 1 entries")
}

/// Number of k-cliques of the k-partite hypergraph `g`, computed from clique
/// counts of general hypergraphs.
///
/// Within-part edges are added with probability `c`, the oracle counts the
/// k-cliques of each label restriction `H_T`, and inclusion-exclusion over
/// label spans isolates the cliques with all `k` labels, which are exactly the
/// cliques of `g`. The result is exact when every oracle answer is; a wrong
/// answer can make it negative.
pub fn kpartite_to_general_count<R: Rng + ?Sized>(
    g: &KPartiteHypergraph,
    oracle: &AverageCaseOracle,
    c: f64,
    rng: &mut R,
) -> BigInt {
    let first = oracle.reserve(calls_per_evaluation(g.k()));
    kpartite_to_general_at(g, oracle, c, rng, first, Answer::Count)
}

/// Parity analogue of [`kpartite_to_general_count`].
pub fn kpartite_to_general_parity<R: Rng + ?Sized>(
    g: &KPartiteHypergraph,
    oracle: &AverageCaseOracle,
    c: f64,
    rng: &mut R,
) -> u8 {
    let first = oracle.reserve(calls_per_evaluation(g.k()));
    parity_of(&kpartite_to_general_at(g, oracle, c, rng, first, Answer::Parity))
}

pub(crate) fn parity_of(v: &BigInt) -> u8 {
    u8::from(v.bit(0))
}

pub(crate) fn residue_of(v: &BigInt, p: u64) -> u64 {
    let r = v % BigInt::from(p);
    let r = if r.sign() == num_bigint::Sign::Minus { r + p } else { r };
    let r: BigUint = r.to_biguint().expect("nonnegative");
    r.try_into().expect("residue fits u64")
}
