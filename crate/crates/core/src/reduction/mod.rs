//! The worst-case to average-case pipeline for k-clique counting and parity,
//! the decision-to-parity reduction, and the oracle harness.
//!
//! Counting runs: blow-up to a k-partite hypergraph, then per prime `p`
//! a random self-reduction to `12 D` uniform points of `F_p^N`, each
//! expanded into `(t + 1)^D` 0/1 inputs whose clique counts come from the
//! oracle through inclusion-exclusion over label restrictions; per-prime
//! answers are repeated, voted on and recombined by CRT. Parity replaces the
//! primes by `GF(2^kappa)` and an extra step down to `F_2`.

mod count;
mod decide;
mod inclusion;
mod oracle;
mod parity;
mod slowdown;

pub use count::{to_er_count, tolerable_flip_rate, PrimeVotes, ReductionReport};
pub use decide::{decide_via_parity, DEFAULT_DECIDE_CONST};
pub use inclusion::{
    add_within_part_edges, calls_per_evaluation, kpartite_to_general_count, kpartite_to_general_parity,
    label_span_counts, restrict_to_labels,
};
pub use oracle::{AverageCaseOracle, ErrorModel};
pub use parity::{parity_field_degree, to_er_parity, ParityReport};
pub use slowdown::{compute_slowdowns, SlowdownParams};

use rand::Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::polynomial::ExpansionLength;

/// How oracle calls for one evaluation point are carried out.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Dispatch {
    /// [`Dispatch::PerCall`] when a point needs at most
    /// [`ReductionParams::per_call_limit`] calls, else [`Dispatch::Aggregated`].
    #[default]
    Auto,
    /// Every coloring is materialized and every `H_T` goes to the oracle.
    PerCall,
    /// The weighted sum over colorings is evaluated in closed form, as the
    /// clique polynomial at the recombined expansion, and the oracle's
    /// independent flips are drawn per class of calls sharing the same
    /// coefficient. Same output law as [`Dispatch::PerCall`] for exact and
    /// random-flip oracles; not available for adversarial ones.
    Aggregated,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ReductionParams {
    /// Repetitions per prime for the majority vote.
    pub repetitions: usize,
    /// Failure budget of the binary expansion step.
    pub gamma: f64,
    pub expansion: ExpansionLength,
    pub dispatch: Dispatch,
    pub per_call_limit: u64,
    pub exec: Exec,
}

impl Default for ReductionParams {
    fn default() -> Self {
        ReductionParams {
            repetitions: 5,
            gamma: 0.01,
            expansion: ExpansionLength::Bound,
            dispatch: Dispatch::Auto,
            per_call_limit: 2048,
            exec: Exec::default(),
        }
    }
}

impl ReductionParams {
    fn validate(&self) -> Result<()> {
        if self.repetitions == 0 {
            return Err(Error::invalid("need at least one repetition"));
        }
        if !(self.gamma > 0.0 && self.gamma < 1.0) {
            return Err(Error::invalid(format!("failure budget {} outside (0, 1)", self.gamma)));
        }
        Ok(())
    }

    fn resolve(&self, calls_per_point: Option<u64>, oracle: &AverageCaseOracle) -> Result<Dispatch> {
        let adversarial = oracle.flip_rate().is_none();
        let small = calls_per_point.is_some_and(|c| c <= self.per_call_limit);
        match self.dispatch {
            Dispatch::Auto if small || adversarial => Ok(Dispatch::PerCall),
            Dispatch::Auto => Ok(Dispatch::Aggregated),
            Dispatch::Aggregated if adversarial => {
                Err(Error::invalid("adversarial oracles need per-call dispatch"))
            }
            d => Ok(d),
        }
    }
}

/// Most frequent value, ties to the smallest; with the winner's lead over the
/// runner-up.
pub(crate) fn plurality<T: Ord + Copy>(votes: &[Option<T>]) -> (Option<T>, usize) {
    let mut vals: Vec<T> = votes.iter().flatten().copied().collect();
    vals.sort_unstable();
    let mut tallies: Vec<(usize, T)> = Vec::new();
    for v in vals {
        match tallies.last_mut() {
            Some((c, w)) if *w == v => *c += 1,
            _ => tallies.push((1, v)),
        }
    }
    // Stable sort keeps ascending values within equal counts.
    tallies.sort_by(|a, b| b.0.cmp(&a.0));
    match tallies.as_slice() {
        [] => (None, 0),
        [(c, v)] => (Some(*v), *c),
        [(c, v), (c2, _), ..] => (Some(*v), c - c2),
    }
}

/// Number of flips among `calls` independent calls with rate `delta`.
pub(crate) fn draw_flips<R: Rng + ?Sized>(calls: u64, delta: f64, rng: &mut R) -> u64 {
    if calls == 0 || delta <= 0.0 {
        return 0;
    }
    if delta >= 1.0 {
        return calls;
    }
    Binomial::new(calls, delta).expect("valid binomial").sample(rng)
}

/// `counts[w]` = number of colorings `a: [D] -> 0..bits` with `|a|_1 = w`.
pub(crate) fn weight_counts(d: usize, bits: usize) -> Option<Vec<u64>> {
    let mut counts = vec![1u64];
    for _ in 0..d {
        let mut next = vec![0u64; counts.len() + bits - 1];
        for (w, &c) in counts.iter().enumerate() {
            for b in 0..bits {
                next[w + b] = next[w + b].checked_add(c)?;
            }
        }
        counts = next;
    }
    Some(counts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polynomial::ColoringAssignment;

    #[test]
    fn plurality_rules() {
        assert_eq!(plurality(&[Some(3), Some(1), Some(3), None, Some(1)]), (Some(1), 0));
        assert_eq!(plurality(&[Some(3), Some(3), Some(1)]), (Some(3), 1));
        assert_eq!(plurality::<u64>(&[None, None]), (None, 0));
        assert_eq!(plurality(&[Some(9)]), (Some(9), 1));
    }

    #[test]
    fn weight_counts_enumerate() {
        for (d, bits) in [(3, 4), (2, 5), (4, 2)] {
            let counts = weight_counts(d, bits).unwrap();
            let mut want = vec![0u64; counts.len()];
            for a in ColoringAssignment::all(d, bits) {
                want[a.weight()] += 1;
            }
            assert_eq!(counts, want);
        }
    }
}
