use std::sync::atomic::{AtomicU64, Ordering};

use num_bigint::BigUint;
use serde::{Serialize, Serializer};

use super::inclusion::{calls_per_evaluation, kpartite_to_general_at, residue_of, Answer};
use super::{draw_flips, plurality, weight_counts, AverageCaseOracle, Dispatch, ReductionParams};
use crate::combin::binomial;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::fields::{crt_combine, select_primes, Field, PrimeField, ResidueVector, Semiring};
use crate::hypergraph::{blow_up_k_partite, EdgeIndex, Hypergraph};
use crate::polynomial::{
    eval_clique_poly, random_self_reduce, self_reduction_degree, sum_over_colorings, ColoringAssignment,
    ExpansionPlan, WeightedKPartiteInput,
};
use crate::seed::{child_rng, derive_seed, rng_from_seed};

pub(crate) fn decimal<S: Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_str_radix(10))
}

/// Outcome of the repetitions for one prime.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrimeVotes {
    pub p: u64,
    /// Expansion bits per edge, `t + 1`.
    pub bits: usize,
    pub dispatch: Dispatch,
    /// Decoded value per repetition; `None` where decoding failed.
    pub votes: Vec<Option<u64>>,
    pub residue: Option<u64>,
    /// Winning vote count minus the runner-up's.
    pub margin: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReductionReport {
    #[serde(serialize_with = "decimal")]
    pub count: BigUint,
    pub residues: ResidueVector,
    pub oracle_calls: u64,
    pub injected_errors: u64,
    /// Every prime produced a residue. Whether the count is right can only be
    /// judged against a reference.
    pub succeeded: bool,
    pub decode_failures: u64,
    pub sampler_failures: u64,
    pub primes: Vec<PrimeVotes>,
}

struct CountCtx<'a> {
    field: PrimeField,
    plan: ExpansionPlan,
    index: &'a EdgeIndex,
    oracle: &'a AverageCaseOracle,
    c: f64,
    dispatch: Dispatch,
    per_point: u64,
    sampler_failures: &'a AtomicU64,
}

impl CountCtx<'_> {
    /// The claimed value of the polynomial at `z`, through the oracle.
    fn eval_point(&self, z: &[u64], seed: u64, first: u64) -> Result<u64> {
        let mut rng = rng_from_seed(seed);
        let exp = self.plan.expand(z, &mut rng);
        self.sampler_failures
            .fetch_add(exp.failures() as u64, Ordering::Relaxed);
        let field = &self.field;
        let k = self.index.k();
        match self.dispatch {
            Dispatch::Aggregated => {
                let y = WeightedKPartiteInput::new(self.index.clone(), exp.recombine())?;
                let mut value = eval_clique_poly(field, &y);
                let delta = self.oracle.flip_rate().expect("aggregated dispatch needs a flip rate");
                let counts = weight_counts(self.index.degree(), exp.bits())
                    .ok_or_else(|| Error::invalid("coloring count overflows u64"))?;
                let mut errors = 0;
                for (w, &cw) in counts.iter().enumerate() {
                    for j in 1..=k {
                        let calls = cw
                            .checked_mul(binomial(k as u64, j as u64))
                            .ok_or_else(|| Error::invalid("oracle call count overflows u64"))?;
                        let flips = draw_flips(calls, delta, &mut rng);
                        if flips == 0 {
                            continue;
                        }
                        errors += flips;
                        // A +1 on |cl_k(H_T)| moves t_k by (-1)^(k - |T|).
                        let mut coef = field.pow(2, w as u64);
                        if (k - j) % 2 == 1 {
                            coef = field.neg(coef);
                        }
                        value = field.add(value, field.mul(field.from_u64(flips), coef));
                    }
                }
                self.oracle.record(self.per_point, errors);
                Ok(value)
            }
            _ => {
                let per_eval = calls_per_evaluation(k);
                sum_over_colorings(
                    field,
                    self.index,
                    &exp,
                    |a: &ColoringAssignment, y| {
                        let ai = a.rank();
                        let mut rng = child_rng(seed, 1 + ai);
                        let v = kpartite_to_general_at(y, self.oracle, self.c, &mut rng, first + ai * per_eval, Answer::Count);
                        Ok(residue_of(&v, field.p()))
                    },
                    Exec::Sequential,
                )
            }
        }
    }
}

/// Oracle error rate `1 / (4 t^D 2^k)` that the counting reduction tolerates,
/// where `t` is the largest number of expansion bits per edge over the primes
/// used for an `n`-vertex input: a point then sees a wrong oracle answer with
/// probability below `1/4`.
pub fn tolerable_flip_rate(n: usize, k: usize, s: usize, c: f64, params: &ReductionParams) -> Result<f64> {
    let index = EdgeIndex::new(n, k, s)?;
    let mut bits = 0;
    for p in select_primes(n as u64, k as u64, s as u64)? {
        bits = bits.max(ExpansionPlan::with_length(p, c, params.gamma, index.len(), params.expansion)?.bits());
    }
    Ok(1.0 / (4.0 * (bits as f64).powi(index.degree() as i32) * 2f64.powi(k as i32)))
}

/// Counts the k-cliques of a worst-case `g` with an oracle that is only asked
/// about hypergraphs distributed close to `G(., c, s)`.
///
/// With an exact oracle the count is correct whenever every prime decodes;
/// see the module docs for the pipeline. Primes are processed in order,
/// repetitions in order, and the `12 D` points of each repetition under
/// `params.exec`; every random choice is seeded from `seed` and the position
/// of the work item, so reports are reproducible.
pub fn to_er_count(
    g: &Hypergraph,
    k: usize,
    oracle: &AverageCaseOracle,
    c: f64,
    params: &ReductionParams,
    seed: u64,
) -> Result<ReductionReport> {
    params.validate()?;
    if !(c > 0.0 && c < 1.0) {
        return Err(Error::invalid(format!("edge density {c} outside (0, 1)")));
    }
    let blown = blow_up_k_partite(g, k)?;
    let index = blown.index().clone();
    let d = index.degree();
    let x: Vec<u64> = (0..index.len()).map(|i| u64::from(blown.contains(i))).collect();
    let primes = select_primes(g.n() as u64, k as u64, g.s() as u64)?;
    let m = self_reduction_degree(d) as u64;
    let (calls0, errors0) = (oracle.calls(), oracle.injected_errors());
    let sampler_failures = AtomicU64::new(0);
    let mut decode_failures = 0;
    let mut next_ordinal = 0u64;
    let mut per_prime = Vec::with_capacity(primes.len());

    for (pi, &p) in primes.iter().enumerate() {
        let field = PrimeField::new(p)?;
        let plan = ExpansionPlan::with_length(p, c, params.gamma, index.len(), params.expansion)?;
        let per_point = ColoringAssignment::count(d, plan.bits()).and_then(|n| n.checked_mul(calls_per_evaluation(k)));
        let dispatch = params.resolve(per_point, oracle)?;
        let per_point = per_point.unwrap_or(u64::MAX);
        let bits = plan.bits();
        let ctx = CountCtx {
            field,
            plan,
            index: &index,
            oracle,
            c,
            dispatch,
            per_point,
            sampler_failures: &sampler_failures,
        };
        let prime_seed = derive_seed(seed, pi as u64);
        let mut votes = Vec::with_capacity(params.repetitions);
        for r in 0..params.repetitions {
            let rep_seed = derive_seed(prime_seed, r as u64);
            let base = next_ordinal;
            next_ordinal = next_ordinal.wrapping_add(m.wrapping_mul(per_point));
            let mut rng = rng_from_seed(rep_seed);
            let res = random_self_reduce(
                &field,
                &x,
                d,
                |j, z| {
                    let point_seed = derive_seed(rep_seed, 1 + j as u64);
                    ctx.eval_point(z, point_seed, base.wrapping_add((j as u64).wrapping_mul(per_point)))
                },
                &mut rng,
                params.exec,
            );
            match res {
                Ok(v) => votes.push(Some(v)),
                Err(Error::DecodeFailure(_)) => {
                    decode_failures += 1;
                    votes.push(None);
                }
                Err(e) => return Err(e),
            }
        }
        let (residue, margin) = plurality(&votes);
        per_prime.push(PrimeVotes {
            p,
            bits,
            dispatch,
            votes,
            residue,
            margin,
        });
    }

    let succeeded = per_prime.iter().all(|v| v.residue.is_some());
    let residues = ResidueVector::new(primes, per_prime.iter().map(|v| v.residue.unwrap_or(0)).collect())?;
    let count = if succeeded { crt_combine(&residues) } else { BigUint::ZERO };
    Ok(ReductionReport {
        count,
        residues,
        oracle_calls: oracle.calls() - calls0,
        injected_errors: oracle.injected_errors() - errors0,
        succeeded,
        decode_failures,
        sampler_failures: sampler_failures.into_inner(),
        primes: per_prime,
    })
}
