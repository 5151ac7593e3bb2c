use fixedbitset::FixedBitSet;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{ColoringAssignment, WeightedKPartiteInput};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::expansion::{minimal_t_mod_p, required_t_mod_2, required_t_mod_p, Bits, ExpansionSpec, Mod2Sampler, ModPSampler};
use crate::fields::{Field, PrimeField, Semiring};
use crate::hypergraph::{EdgeIndex, KPartiteHypergraph};

/// Refuse to enumerate more colorings than this one at a time.
pub const MAX_COLORINGS: u64 = 1 << 24;

/// How the expansion length is chosen for `p > 2`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExpansionLength {
    /// The explicit bound [`required_t_mod_p`].
    #[default]
    Bound,
    /// The smallest length whose exact residue distribution meets the same
    /// tolerance, [`minimal_t_mod_p`].
    Minimal,
}

#[derive(Debug, Clone)]
enum Sampler {
    ModP(ModPSampler),
    Mod2(Mod2Sampler),
}

/// Per-edge binary expansion settings for one prime.
///
/// The failure budget `gamma` is split evenly over the `N` edges,
/// `eps = gamma / N`. For `p > 2` the expansion length is the smallest `t`
/// whose residue is within `eps / 2` of uniform, and the rejection sampler
/// gets the other `eps / 2` as its failure probability, so each edge's bits
/// are within `eps` of `Ber(c)^(t+1)`. For `p = 2` the bits are conditioned
/// on their parity instead.
#[derive(Debug, Clone)]
pub struct ExpansionPlan {
    p: u64,
    c: f64,
    eps: f64,
    bits: usize,
    sampler: Sampler,
}

impl ExpansionPlan {
    pub fn new(p: u64, c: f64, gamma: f64, edges: usize) -> Result<Self> {
        Self::with_length(p, c, gamma, edges, ExpansionLength::Bound)
    }

    pub fn with_length(p: u64, c: f64, gamma: f64, edges: usize, length: ExpansionLength) -> Result<Self> {
        if !(c > 0.0 && c < 1.0) {
            return Err(Error::invalid(format!("edge density {c} outside (0, 1)")));
        }
        if !(gamma > 0.0 && gamma < 1.0) {
            return Err(Error::invalid(format!("failure budget {gamma} outside (0, 1)")));
        }
        let eps = gamma / edges.max(1) as f64;
        let c_eff = c.min(1.0 - c);
        let (bits, sampler) = if p == 2 {
            let t = required_t_mod_2(c_eff, eps)?;
            (t + 1, Sampler::Mod2(Mod2Sampler::new(c, t, eps)?))
        } else {
            let t = match length {
                ExpansionLength::Bound => required_t_mod_p(p, c_eff, eps / 2.0)?,
                ExpansionLength::Minimal => minimal_t_mod_p(p, c, eps / 2.0)?,
            };
            let spec = ExpansionSpec::uniform(p, c, t)?;
            (t + 1, Sampler::ModP(ModPSampler::new(spec, eps / 2.0)?))
        };
        Ok(ExpansionPlan { p, c, eps, bits, sampler })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    /// Per-edge slack `eps = gamma / N`.
    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// Bits per edge, `t + 1`; colorings take values in `0..bits()`.
    pub fn bits(&self) -> usize {
        self.bits
    }

    /// Samples one expansion per entry of `x`.
    ///
    /// An edge whose sampler gives up gets unconditioned bits instead; this
    /// happens with probability at most `eps / 2` per edge and is counted in
    /// [`BinaryExpansions::failures`].
    pub fn expand<R: Rng + ?Sized>(&self, x: &[u64], rng: &mut R) -> BinaryExpansions {
        let mut failures = 0;
        let edges = x
            .iter()
            .map(|&v| {
                let res = match &self.sampler {
                    Sampler::ModP(s) => s.sample(v, rng),
                    Sampler::Mod2(s) => s.sample((v & 1) as u8, rng),
                };
                res.unwrap_or_else(|_| {
                    failures += 1;
                    match &self.sampler {
                        Sampler::ModP(s) => s.sample_unconditioned(rng),
                        Sampler::Mod2(s) => s.sample_unconditioned(rng),
                    }
                })
            })
            .collect();
        BinaryExpansions {
            p: self.p,
            bits: self.bits,
            edges,
            failures,
        }
    }
}

/// Sampled expansions `X_j^(0), ..., X_j^(t)` of every entry of an input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryExpansions {
    p: u64,
    bits: usize,
    edges: Vec<Bits>,
    failures: usize,
}

impl BinaryExpansions {
    /// Wraps explicit per-edge bits, all of the same length.
    pub fn from_bits(p: u64, edges: Vec<Bits>) -> Result<Self> {
        let bits = edges.first().map_or(0, Bits::len);
        if bits == 0 || edges.iter().any(|b| b.len() != bits) {
            return Err(Error::invalid("expansions must be nonempty and of equal length"));
        }
        Ok(BinaryExpansions {
            p,
            bits,
            edges,
            failures: 0,
        })
    }

    pub fn bits(&self) -> usize {
        self.bits
    }

    pub fn edges(&self) -> &[Bits] {
        &self.edges
    }

    /// Edges whose sampler gave up.
    pub fn failures(&self) -> usize {
        self.failures
    }

    /// `Y^(a o L)`: edge `A` present iff bit `a(L(A))` of its expansion is set.
    pub fn coloring_input(&self, index: &EdgeIndex, a: &ColoringAssignment) -> KPartiteHypergraph {
        let mut present = FixedBitSet::with_capacity(index.len());
        for (i, e) in self.edges.iter().enumerate() {
            if e.get(a.color(index.labelset_of(i))) {
                present.insert(i);
            }
        }
        KPartiteHypergraph::from_bitset(index.clone(), present)
    }

    /// The field vector the bits encode: `sum_b 2^b X^(b) mod p`, or the
    /// parity of the bits when `p = 2`.
    pub fn recombine(&self) -> Vec<u64> {
        self.edges
            .iter()
            .map(|e| if self.p == 2 { u64::from(e.parity()) } else { e.value_mod(self.p) })
            .collect()
    }

    /// Coefficient of `P(Y^(a o L))` in the recombination: `2^|a|` mod `p`,
    /// or 1 when `p = 2`.
    pub fn coloring_weight(&self, a: &ColoringAssignment) -> u64 {
        if self.p == 2 {
            1
        } else {
            PrimeField::new(self.p).expect("expansion modulus is prime").pow(2, a.weight() as u64)
        }
    }
}

/// `sum_a 2^|a| er_eval(a, Y^(a o L))` over all colorings `a`.
pub fn sum_over_colorings<E>(
    field: &PrimeField,
    index: &EdgeIndex,
    exp: &BinaryExpansions,
    er_eval: E,
    exec: Exec,
) -> Result<u64>
where
    E: Fn(&ColoringAssignment, &KPartiteHypergraph) -> Result<u64> + Sync + Send,
{
    let d = index.degree();
    let count = ColoringAssignment::count(d, exp.bits())
        .filter(|&c| c <= MAX_COLORINGS)
        .ok_or_else(|| Error::invalid(format!("{}^{d} colorings are too many to enumerate", exp.bits())))?;
    let terms = exec.map_range(count as usize, |i| {
        let a = ColoringAssignment::from_index(i as u64, d, exp.bits());
        let y = exp.coloring_input(index, &a);
        let v = er_eval(&a, &y)?;
        Ok(field.mul(exp.coloring_weight(&a), field.reduce(v)))
    });
    terms
        .into_iter()
        .try_fold(field.zero(), |acc, t: Result<u64>| Ok(field.add(acc, t?)))
}

/// Evaluates the clique polynomial over `F_p` at `x` from its values on 0/1
/// inputs.
///
/// Each entry of `x` is expanded into `t + 1` bits of bias `c` whose binary
/// value is `x_j mod p`; then `P(x) = sum_a 2^|a| P(Y^(a o L))` over the
/// `(t + 1)^D` colorings, and `er_eval` is asked for each `P(Y^(a o L))`. The
/// result is wrong with probability at most `gamma` plus the chance that some
/// `er_eval` answer is wrong.
pub fn weighted_to_unweighted<E, R>(
    field: &PrimeField,
    x: &WeightedKPartiteInput<u64>,
    c: f64,
    gamma: f64,
    er_eval: E,
    rng: &mut R,
    exec: Exec,
) -> Result<u64>
where
    E: Fn(&ColoringAssignment, &KPartiteHypergraph) -> Result<u64> + Sync + Send,
    R: Rng + ?Sized,
{
    let plan = ExpansionPlan::new(field.p(), c, gamma, x.len())?;
    let exp = plan.expand(x.values(), rng);
    sum_over_colorings(field, x.index(), &exp, er_eval, exec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::Integers;
    use crate::polynomial::eval_clique_poly;
    use crate::seed::rng_from_seed;

    fn exact(field: &PrimeField) -> impl Fn(&ColoringAssignment, &KPartiteHypergraph) -> Result<u64> + Sync + '_ {
        move |_, y| Ok(eval_clique_poly(field, &WeightedKPartiteInput::from_kpartite(field, y)))
    }

    #[test]
    fn single_color_is_one_call() {
        let f = PrimeField::new(13).unwrap();
        let index = EdgeIndex::new(2, 3, 2).unwrap();
        let mut rng = rng_from_seed(31);
        let x: Vec<u64> = (0..index.len()).map(|_| rng.random_range(0..2)).collect();
        let edges = x.iter().map(|&v| Bits::from_bools(&[v == 1])).collect();
        let exp = BinaryExpansions::from_bits(13, edges).unwrap();
        let calls = std::sync::atomic::AtomicUsize::new(0);
        let got = sum_over_colorings(
            &f,
            &index,
            &exp,
            |a, y| {
                calls.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                assert_eq!(a.weight(), 0);
                exact(&f)(a, y)
            },
            Exec::Sequential,
        )
        .unwrap();
        assert_eq!(calls.into_inner(), 1);
        let want = eval_clique_poly(&f, &WeightedKPartiteInput::new(index, x).unwrap());
        assert_eq!(got, want);
    }

    #[test]
    fn exact_oracle_end_to_end() {
        let f = PrimeField::new(13).unwrap();
        let index = EdgeIndex::new(2, 3, 2).unwrap();
        let mut rng = rng_from_seed(32);
        let mut correct = 0;
        for _ in 0..100 {
            let vals = (0..index.len()).map(|_| f.random(&mut rng)).collect();
            let x = WeightedKPartiteInput::new(index.clone(), vals).unwrap();
            let got = weighted_to_unweighted(&f, &x, 0.5, 0.02, exact(&f), &mut rng, Exec::Parallel).unwrap();
            correct += usize::from(got == eval_clique_poly(&f, &x));
        }
        assert!(correct >= 97, "{correct}/100");
    }

    #[test]
    fn recombination_identity() {
        // Holds for any bits, including sampler fallbacks.
        let mut rng = rng_from_seed(33);
        for (p, c) in [(13, 0.5), (13, 0.3), (2, 0.3), (2, 0.5)] {
            let f = PrimeField::new(p).unwrap();
            let index = EdgeIndex::new(2, 3, 2).unwrap();
            let plan = ExpansionPlan::new(p, c, 0.1, index.len()).unwrap();
            let x: Vec<u64> = (0..index.len()).map(|_| f.random(&mut rng)).collect();
            let exp = plan.expand(&x, &mut rng);
            let direct = eval_clique_poly(&f, &WeightedKPartiteInput::new(index.clone(), exp.recombine()).unwrap());
            let summed = sum_over_colorings(&f, &index, &exp, exact(&f), Exec::Parallel).unwrap();
            assert_eq!(summed, direct);
            if exp.failures() == 0 {
                assert_eq!(exp.recombine(), x);
            }
        }
    }

    #[test]
    fn integer_recombination() {
        // Over the integers the weighted sum reproduces P of the integer
        // expansion values.
        let mut rng = rng_from_seed(34);
        let index = EdgeIndex::new(2, 3, 2).unwrap();
        let edges: Vec<Bits> = (0..index.len())
            .map(|_| Bits::from_bools(&[rng.random_bool(0.5), rng.random_bool(0.5), rng.random_bool(0.5)]))
            .collect();
        let exp = BinaryExpansions::from_bits(13, edges.clone()).unwrap();
        let vals: Vec<u128> = edges.iter().map(|b| b.value_mod(1 << 20) as u128).collect();
        let want = eval_clique_poly(&Integers, &WeightedKPartiteInput::new(index.clone(), vals).unwrap());
        let mut got = 0u128;
        for a in ColoringAssignment::all(index.degree(), 3) {
            let y = exp.coloring_input(&index, &a);
            got += (1u128 << a.weight()) * eval_clique_poly(&Integers, &WeightedKPartiteInput::from_kpartite(&Integers, &y));
        }
        assert_eq!(got, want);
    }

    #[test]
    fn mod2_path() {
        let f = PrimeField::new(2).unwrap();
        let index = EdgeIndex::new(2, 3, 2).unwrap();
        let mut rng = rng_from_seed(35);
        let mut correct = 0;
        for _ in 0..40 {
            let vals = (0..index.len()).map(|_| f.random(&mut rng)).collect();
            let x = WeightedKPartiteInput::new(index.clone(), vals).unwrap();
            let got = weighted_to_unweighted(&f, &x, 0.3, 0.05, exact(&f), &mut rng, Exec::Parallel).unwrap();
            correct += usize::from(got == eval_clique_poly(&f, &x));
        }
        assert!(correct >= 37, "{correct}/40");
    }
}
