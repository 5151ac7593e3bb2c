use std::sync::atomic::{AtomicU64, Ordering};

use serde::Serialize;

use super::inclusion::{calls_per_evaluation, kpartite_to_general_at, parity_of, Answer};
use super::{draw_flips, plurality, AverageCaseOracle, Dispatch, ReductionParams};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::fields::{find_normal_basis, ExtFieldCtx, PrimeField};
use crate::hypergraph::{blow_up_k_partite, EdgeIndex, Hypergraph, KPartiteHypergraph};
use crate::polynomial::{
    eval_clique_poly, ext_to_base_reduce, random_self_reduce, self_reduction_degree, sum_over_colorings,
    ColoringAssignment, ExpansionPlan, WeightedKPartiteInput,
};
use crate::seed::{child_rng, derive_seed, rng_from_seed};

/// `kappa = ceil(log2(12 D))`, so that `GF(2^kappa)` has more than `12 D`
/// nonzero elements.
pub fn parity_field_degree(d: usize) -> usize {
    let m = 12 * d as u64;
    (u64::BITS - (m - 1).leading_zeros()) as usize
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParityReport {
    pub parity: u8,
    /// Some repetition decoded to a value in `F_2`.
    pub succeeded: bool,
    pub votes: Vec<Option<u8>>,
    pub margin: usize,
    pub kappa: usize,
    /// `c = 1/2`: uniform `F_2` inputs are already Erdos-Renyi, so the
    /// binary expansion step is skipped.
    pub fast_path: bool,
    /// Expansion bits per edge in the mod-2 step, 1 on the fast path.
    pub bits: usize,
    pub dispatch: Dispatch,
    pub oracle_calls: u64,
    pub injected_errors: u64,
    pub decode_failures: u64,
    pub sampler_failures: u64,
}

struct ParityCtx<'a> {
    ext: ExtFieldCtx,
    f2: PrimeField,
    plan: Option<ExpansionPlan>,
    index: &'a EdgeIndex,
    oracle: &'a AverageCaseOracle,
    c: f64,
    dispatch: Dispatch,
    /// Oracle calls per `F_2` evaluation.
    per_base: u64,
    sampler_failures: &'a AtomicU64,
}

impl ParityCtx<'_> {
    fn kpartite(&self, y: &[u64]) -> Result<KPartiteHypergraph> {
        KPartiteHypergraph::from_indicator(self.index.clone(), y.iter().map(|&v| v == 1))
    }

    fn poly_f2(&self, y: Vec<u64>) -> Result<u64> {
        Ok(eval_clique_poly(&self.f2, &WeightedKPartiteInput::new(self.index.clone(), y)?))
    }

    /// `P(y)` over `F_2` at a uniform-looking `y`, through the oracle.
    fn eval_base(&self, y: &[u64], seed: u64, first: u64) -> Result<u64> {
        let mut rng = rng_from_seed(seed);
        let per_eval = calls_per_evaluation(self.index.k());
        if self.dispatch == Dispatch::Aggregated {
            let delta = self.oracle.flip_rate().expect("aggregated dispatch needs a flip rate");
            let value = match &self.plan {
                None => self.poly_f2(y.to_vec())?,
                Some(plan) => {
                    let exp = plan.expand(y, &mut rng);
                    self.sampler_failures.fetch_add(exp.failures() as u64, Ordering::Relaxed);
                    self.poly_f2(exp.recombine())?
                }
            };
            let flips = draw_flips(self.per_base, delta, &mut rng);
            self.oracle.record(self.per_base, flips);
            return Ok(value ^ (flips & 1));
        }
        match &self.plan {
            None => {
                let g = self.kpartite(y)?;
                let v = kpartite_to_general_at(&g, self.oracle, self.c, &mut rng, first, Answer::Parity);
                Ok(u64::from(parity_of(&v)))
            }
            Some(plan) => {
                let exp = plan.expand(y, &mut rng);
                self.sampler_failures.fetch_add(exp.failures() as u64, Ordering::Relaxed);
                sum_over_colorings(
                    &self.f2,
                    self.index,
                    &exp,
                    |b: &ColoringAssignment, z| {
                        let bi = b.rank();
                        let mut rng = child_rng(seed, 1 + bi);
                        let v = kpartite_to_general_at(z, self.oracle, self.c, &mut rng, first + bi * per_eval, Answer::Parity);
                        Ok(u64::from(parity_of(&v)))
                    },
                    Exec::Sequential,
                )
            }
        }
    }

    fn eval_point(&self, w: &[u32], seed: u64, first: u64) -> Result<u32> {
        ext_to_base_reduce(
            &self.ext,
            self.index,
            w,
            |a, y| {
                let ai = a.rank();
                self.eval_base(y, derive_seed(seed, ai), first.wrapping_add(ai.wrapping_mul(self.per_base)))
            },
            Exec::Sequential,
        )
    }
}

/// Parity of the number of k-cliques of a worst-case `g`, from an oracle for
/// the parity on hypergraphs distributed close to `G(., c, s)`.
///
/// The k-partite blow-up is evaluated over `GF(2^kappa)` by random
/// self-reduction; each point is split into `kappa^D` points of `F_2^N` along
/// a normal basis, and each of those goes through the mod-2 binary expansion
/// (skipped at `c = 1/2`) and inclusion-exclusion to the oracle.
pub fn to_er_parity(
    g: &Hypergraph,
    k: usize,
    oracle: &AverageCaseOracle,
    c: f64,
    params: &ReductionParams,
    seed: u64,
) -> Result<ParityReport> {
    params.validate()?;
    if !(c > 0.0 && c < 1.0) {
        return Err(Error::invalid(format!("edge density {c} outside (0, 1)")));
    }
    let blown = blow_up_k_partite(g, k)?;
    let index = blown.index().clone();
    let d = index.degree();
    let kappa = parity_field_degree(d);
    let ext = find_normal_basis(2, kappa)?;
    let x: Vec<u32> = (0..index.len()).map(|i| u32::from(blown.contains(i))).collect();

    let fast_path = c == 0.5;
    let plan = if fast_path {
        None
    } else {
        Some(ExpansionPlan::new(2, c, params.gamma, index.len())?)
    };
    let bits = plan.as_ref().map_or(1, ExpansionPlan::bits);
    let per_eval = calls_per_evaluation(k);
    let per_base = ColoringAssignment::count(d, bits).and_then(|n| n.checked_mul(per_eval));
    let per_point = ColoringAssignment::count(d, kappa)
        .zip(per_base)
        .and_then(|(a, b)| a.checked_mul(b));
    let dispatch = params.resolve(per_point, oracle)?;
    let per_base = per_base.unwrap_or(u64::MAX);
    let per_point = per_point.unwrap_or(u64::MAX);

    let (calls0, errors0) = (oracle.calls(), oracle.injected_errors());
    let sampler_failures = AtomicU64::new(0);
    let ctx = ParityCtx {
        f2: ext.base(),
        ext,
        plan,
        index: &index,
        oracle,
        c,
        dispatch,
        per_base,
        sampler_failures: &sampler_failures,
    };
    let m = self_reduction_degree(d) as u64;
    let mut votes = Vec::with_capacity(params.repetitions);
    let mut decode_failures = 0;
    for r in 0..params.repetitions {
        let rep_seed = derive_seed(seed, r as u64);
        let base = (r as u64).wrapping_mul(m).wrapping_mul(per_point);
        let mut rng = rng_from_seed(rep_seed);
        let res = random_self_reduce(
            &ctx.ext.field,
            &x,
            d,
            |j, w| {
                let point_seed = derive_seed(rep_seed, 1 + j as u64);
                ctx.eval_point(w, point_seed, base.wrapping_add((j as u64).wrapping_mul(per_point)))
            },
            &mut rng,
            params.exec,
        );
        match res {
            Ok(v) if v <= 1 => votes.push(Some(v as u8)),
            Ok(_) | Err(Error::DecodeFailure(_)) => {
                decode_failures += 1;
                votes.push(None);
            }
            Err(e) => return Err(e),
        }
    }
    let (winner, margin) = plurality(&votes);
    Ok(ParityReport {
        parity: winner.unwrap_or(0),
        succeeded: winner.is_some(),
        votes,
        margin,
        kappa,
        fast_path,
        bits,
        dispatch,
        oracle_calls: oracle.calls() - calls0,
        injected_errors: oracle.injected_errors() - errors0,
        decode_failures,
        sampler_failures: sampler_failures.into_inner(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cliques::parity_count;
    use crate::hypergraph::sample_er;

    #[test]
    fn kappa_values() {
        assert_eq!(parity_field_degree(3), 6);
        assert_eq!(parity_field_degree(6), 7);
        assert_eq!(parity_field_degree(4), 6);
        assert_eq!(parity_field_degree(1), 4);
    }

    #[test]
    fn k5_fast_path() {
        let oracle = AverageCaseOracle::exact();
        let p = ReductionParams {
            repetitions: 1,
            ..ReductionParams::default()
        };
        let r = to_er_parity(&Hypergraph::complete(5, 2), 3, &oracle, 0.5, &p, 3).unwrap();
        assert!(r.succeeded && r.fast_path);
        assert_eq!(r.parity, 0);
        assert_eq!(r.dispatch, Dispatch::PerCall);
        // 36 points, 6^3 colorings, 7 calls each.
        assert_eq!(r.oracle_calls, 36 * 216 * 7);
    }

    #[test]
    fn matches_parity_count() {
        let oracle = AverageCaseOracle::exact();
        let mut rng = rng_from_seed(71);
        let p = ReductionParams {
            repetitions: 1,
            ..ReductionParams::default()
        };
        for c in [0.5, 0.3] {
            for _ in 0..3 {
                let g = sample_er(5, 0.6, 2, &mut rng);
                let r = to_er_parity(&g, 3, &oracle, c, &p, 4).unwrap();
                assert!(r.succeeded);
                assert_eq!(r.parity, parity_count(&g, 3));
            }
        }
    }
}
