//! The clique polynomial of a k-partite hypergraph and the reductions that
//! evaluate it at worst-case points through random evaluations.
//!
//! For a weighted k-partite input `x` indexed by an [`EdgeIndex`],
//!
//! ```text
//! P(x) = sum over (u_1, ..., u_k) with u_i in part i of
//!        prod over label-sets S of x_{u_S}
//! ```
//!
//! which on 0/1 inputs counts k-cliques. It is homogeneous of degree
//! `D = C(k, s)` with one variable per label-set in every monomial.

mod ext;
mod selfreduce;
mod unweighted;

pub use ext::ext_to_base_reduce;
pub use selfreduce::{random_self_reduce, self_reduction_degree, self_reduction_points};
pub use unweighted::{
    sum_over_colorings, weighted_to_unweighted, BinaryExpansions, ExpansionLength, ExpansionPlan,
    MAX_COLORINGS,
};

use crate::error::{Error, Result};
use crate::fields::Semiring;
use crate::hypergraph::{EdgeIndex, KPartiteHypergraph};

/// A point of `F^N`: one value per label-respecting s-set of `[n] x [k]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedKPartiteInput<E> {
    index: EdgeIndex,
    values: Vec<E>,
}

impl<E: Copy> WeightedKPartiteInput<E> {
    pub fn new(index: EdgeIndex, values: Vec<E>) -> Result<Self> {
        if values.len() != index.len() {
            return Err(Error::invalid(format!(
                "input has {} entries, index expects {}",
                values.len(),
                index.len()
            )));
        }
        Ok(WeightedKPartiteInput { index, values })
    }

    /// The 0/1 indicator of `g`, mapped into `ring`.
    pub fn from_kpartite<S: Semiring<Elem = E>>(ring: &S, g: &KPartiteHypergraph) -> Self {
        let values = (0..g.index().len())
            .map(|i| if g.contains(i) { ring.one() } else { ring.zero() })
            .collect();
        WeightedKPartiteInput {
            index: g.index().clone(),
            values,
        }
    }

    pub fn index(&self) -> &EdgeIndex {
        &self.index
    }

    pub fn values(&self) -> &[E] {
        &self.values
    }

    pub fn into_values(self) -> Vec<E> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn map<T: Copy>(&self, f: impl FnMut(E) -> T) -> WeightedKPartiteInput<T> {
        WeightedKPartiteInput {
            index: self.index.clone(),
            values: self.values.iter().copied().map(f).collect(),
        }
    }
}

/// A map `a` from the `D` label-sets (by lexicographic rank) to colors
/// `0..t`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ColoringAssignment {
    colors: Vec<usize>,
    t: usize,
}

impl ColoringAssignment {
    pub fn new(colors: Vec<usize>, t: usize) -> Result<Self> {
        if let Some(&c) = colors.iter().find(|&&c| c >= t) {
            return Err(Error::invalid(format!("color {c} outside 0..{t}")));
        }
        Ok(ColoringAssignment { colors, t })
    }

    /// Number of colorings, `t^d`, if it fits in a `u64`.
    pub fn count(d: usize, t: usize) -> Option<u64> {
        (t as u64).checked_pow(d as u32)
    }

    /// The `i`-th coloring in mixed-radix order, label-set 0 varying fastest.
    pub fn from_index(mut i: u64, d: usize, t: usize) -> Self {
        let colors = (0..d)
            .map(|_| {
                let c = (i % t as u64) as usize;
                i /= t as u64;
                c
            })
            .collect();
        ColoringAssignment { colors, t }
    }

    pub fn all(d: usize, t: usize) -> impl Iterator<Item = ColoringAssignment> {
        let count = Self::count(d, t).expect("coloring count overflows u64");
        (0..count).map(move |i| Self::from_index(i, d, t))
    }

    /// Inverse of [`Self::from_index`].
    pub fn rank(&self) -> u64 {
        self.colors
            .iter()
            .rev()
            .fold(0u64, |acc, &c| acc * self.t as u64 + c as u64)
    }

    pub fn colors(&self) -> &[usize] {
        &self.colors
    }

    /// Color of label-set number `rank`.
    pub fn color(&self, rank: usize) -> usize {
        self.colors[rank]
    }

    pub fn palette(&self) -> usize {
        self.t
    }

    /// `|a|_1 = sum_S a(S)`.
    pub fn weight(&self) -> usize {
        self.colors.iter().sum()
    }
}

/// Label-sets whose largest label is `level`, with the labels before it.
fn sets_ending_at(index: &EdgeIndex) -> Vec<Vec<(usize, Vec<usize>)>> {
    let mut out = vec![Vec::new(); index.k()];
    for (rank, set) in index.labelsets().iter().enumerate() {
        let (&last, rest) = set.split_last().expect("label-sets are nonempty");
        out[last].push((rank, rest.to_vec()));
    }
    out
}

/// Evaluates the clique polynomial at `x` over `ring`.
///
/// Partial tuples `(u_1, ..., u_i)` are extended one part at a time, carrying
/// the product of the entries whose label-sets are already complete; branches
/// whose product vanishes are cut.
pub fn eval_clique_poly<S: Semiring>(ring: &S, x: &WeightedKPartiteInput<S::Elem>) -> S::Elem {
    let index = &x.index;
    let ending = sets_ending_at(index);
    let mut u = vec![0usize; index.k()];
    eval_level(ring, x, &ending, 0, ring.one(), &mut u)
}

fn eval_level<S: Semiring>(
    ring: &S,
    x: &WeightedKPartiteInput<S::Elem>,
    ending: &[Vec<(usize, Vec<usize>)>],
    level: usize,
    acc: S::Elem,
    u: &mut [usize],
) -> S::Elem {
    let index = &x.index;
    let n = index.n();
    if level == index.k() {
        return acc;
    }
    // Offset of each completed edge minus the index of its last vertex.
    let bases: Vec<usize> = ending[level]
        .iter()
        .map(|(rank, rest)| {
            let head = rest.iter().fold(0, |a, &l| a * n + u[l]);
            rank * index.per_labelset() + head * n
        })
        .collect();
    let mut sum = ring.zero();
    for v in 0..n {
        let mut prod = acc;
        for &b in &bases {
            prod = ring.mul(prod, x.values[b + v]);
            if ring.is_zero(prod) {
                break;
            }
        }
        if ring.is_zero(prod) {
            continue;
        }
        u[level] = v;
        sum = ring.add(sum, eval_level(ring, x, ending, level + 1, prod, u));
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cliques::brute_force_count;
    use crate::fields::{ExtField, Field, Integers, PrimeField};
    use crate::hypergraph::sample_er_kpartite;
    use crate::seed::rng_from_seed;
    use rand::Rng;

    /// Direct expansion of the defining sum over all `n^k` tuples.
    fn naive<S: Semiring>(ring: &S, x: &WeightedKPartiteInput<S::Elem>) -> S::Elem {
        let index = x.index();
        let (n, k) = (index.n(), index.k());
        let mut total = ring.zero();
        for code in 0..n.pow(k as u32) {
            let u: Vec<usize> = (0..k).map(|i| code / n.pow(i as u32) % n).collect();
            let mut prod = ring.one();
            for set in index.labelsets() {
                let verts: Vec<(usize, usize)> = set.iter().map(|&l| (l, u[l])).collect();
                prod = ring.mul(prod, x.values()[index.index_of(&verts).unwrap()]);
            }
            total = ring.add(total, prod);
        }
        total
    }

    #[test]
    fn all_ones() {
        for (n, k, s, p) in [(3, 3, 2, 5), (2, 4, 3, 7), (4, 3, 3, 13)] {
            let index = EdgeIndex::new(n, k, s).unwrap();
            let f = PrimeField::new(p).unwrap();
            let x = WeightedKPartiteInput::new(index.clone(), vec![1; index.len()]).unwrap();
            assert_eq!(eval_clique_poly(&f, &x), (n as u64).pow(k as u32) % p);
        }
    }

    #[test]
    fn single_entry() {
        let index = EdgeIndex::new(1, 2, 2).unwrap();
        let f = PrimeField::new(11).unwrap();
        for v in 0..11 {
            let x = WeightedKPartiteInput::new(index.clone(), vec![v]).unwrap();
            assert_eq!(eval_clique_poly(&f, &x), v);
        }
    }

    #[test]
    fn zero_one_inputs_count_cliques() {
        let mut rng = rng_from_seed(11);
        for (n, k, s) in [(3, 3, 2), (3, 4, 2), (2, 4, 3), (3, 4, 3)] {
            for _ in 0..20 {
                let g = sample_er_kpartite(n, k, 0.5, s, &mut rng).unwrap();
                let x = WeightedKPartiteInput::from_kpartite(&Integers, &g);
                let want = brute_force_count(&g.to_hypergraph(), k);
                assert_eq!(eval_clique_poly(&Integers, &x), u128::try_from(want.clone()).unwrap());
                let f = PrimeField::new(7).unwrap();
                let xf = WeightedKPartiteInput::from_kpartite(&f, &g);
                let want7: u64 = (want % 7u64).try_into().unwrap();
                assert_eq!(eval_clique_poly(&f, &xf), want7);
            }
        }
    }

    #[test]
    fn matches_naive_sum() {
        let mut rng = rng_from_seed(12);
        let f = PrimeField::new(73).unwrap();
        let e = ExtField::new(2, 4).unwrap();
        for (n, k, s) in [(2, 3, 2), (3, 3, 2), (2, 4, 3), (2, 4, 2)] {
            let index = EdgeIndex::new(n, k, s).unwrap();
            for _ in 0..10 {
                let vals = (0..index.len()).map(|_| f.random(&mut rng)).collect();
                let x = WeightedKPartiteInput::new(index.clone(), vals).unwrap();
                assert_eq!(eval_clique_poly(&f, &x), naive(&f, &x));
                let vals = (0..index.len()).map(|_| e.random(&mut rng)).collect();
                let x = WeightedKPartiteInput::new(index.clone(), vals).unwrap();
                assert_eq!(eval_clique_poly(&e, &x), naive(&e, &x));
            }
        }
    }

    #[test]
    fn coloring_enumeration() {
        let all: Vec<_> = ColoringAssignment::all(3, 2).collect();
        assert_eq!(all.len(), 8);
        assert_eq!(all[0].colors(), &[0, 0, 0]);
        assert_eq!(all[1].colors(), &[1, 0, 0]);
        assert_eq!(all[6].colors(), &[0, 1, 1]);
        assert_eq!(all[7].weight(), 3);
        assert!(all.iter().enumerate().all(|(i, a)| a.rank() == i as u64));
        assert!(ColoringAssignment::new(vec![0, 2], 2).is_err());
    }

    #[test]
    fn degree_along_lines() {
        // P restricted to x + t y has degree <= D in t.
        let mut rng = rng_from_seed(13);
        let f = PrimeField::new(101).unwrap();
        let index = EdgeIndex::new(2, 3, 2).unwrap();
        let d = index.degree();
        for _ in 0..20 {
            let x: Vec<u64> = (0..index.len()).map(|_| rng.random_range(0..101)).collect();
            let y: Vec<u64> = (0..index.len()).map(|_| rng.random_range(0..101)).collect();
            let at = |t: u64| {
                let v = x.iter().zip(&y).map(|(&a, &b)| f.add(a, f.mul(t, b))).collect();
                eval_clique_poly(&f, &WeightedKPartiteInput::new(index.clone(), v).unwrap())
            };
            let pts: Vec<(u64, u64)> = (1..=d as u64 + 1).map(|t| (t, at(t))).collect();
            for t in 20..25 {
                assert_eq!(crate::fields::interpolate_at(&f, &pts, t), at(t));
            }
        }
    }
}
