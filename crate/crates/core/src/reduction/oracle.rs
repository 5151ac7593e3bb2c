use std::collections::HashSet;
use std::sync::atomic::{AtomicU64, Ordering};

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::cliques::{brute_force_count, parity_count};
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::seed::derive_seed;

/// How an [`AverageCaseOracle`] corrupts answers.
///
/// A corrupted answer is the true answer plus one (mod 2 for parity), so a
/// triggered error is always wrong.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ErrorModel {
    Exact,
    /// Each call is corrupted independently with probability `delta`.
    RandomFlip { delta: f64 },
    /// Calls with these ordinals are corrupted.
    Adversarial { calls: Vec<u64> },
}

/// A brute-force clique counter behind an error model, with call accounting.
///
/// Every call carries an ordinal. Pipelines assign ordinals from the logical
/// position of a call, so which calls are corrupted does not depend on
/// scheduling; for random flips the decision for ordinal `i` is a fixed
/// function of `(seed, i)`. Direct calls through [`Self::count`] and
/// [`Self::parity`] take consecutive ordinals.
#[derive(Debug)]
pub struct AverageCaseOracle {
    model: ErrorModel,
    targets: HashSet<u64>,
    seed: u64,
    next: AtomicU64,
    calls: AtomicU64,
    errors: AtomicU64,
}

impl AverageCaseOracle {
    pub fn new(model: ErrorModel, seed: u64) -> Result<Self> {
        if let ErrorModel::RandomFlip { delta } = model {
            if !(0.0..=1.0).contains(&delta) {
                return Err(Error::invalid(format!("flip rate {delta} outside [0, 1]")));
            }
        }
        let targets = match &model {
            ErrorModel::Adversarial { calls } => calls.iter().copied().collect(),
            _ => HashSet::new(),
        };
        Ok(AverageCaseOracle {
            model,
            targets,
            seed,
            next: AtomicU64::new(0),
            calls: AtomicU64::new(0),
            errors: AtomicU64::new(0),
        })
    }

    pub fn exact() -> Self {
        Self::new(ErrorModel::Exact, 0).expect("exact model is valid")
    }

    pub fn model(&self) -> &ErrorModel {
        &self.model
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Per-call corruption probability, if calls are corrupted independently.
    pub fn flip_rate(&self) -> Option<f64> {
        match self.model {
            ErrorModel::Exact => Some(0.0),
            ErrorModel::RandomFlip { delta } => Some(delta),
            ErrorModel::Adversarial { .. } => None,
        }
    }

    /// Whether the call with this ordinal is corrupted.
    pub fn corrupts(&self, ordinal: u64) -> bool {
        match self.model {
            ErrorModel::Exact => false,
            ErrorModel::RandomFlip { delta } => {
                let u = (derive_seed(self.seed, ordinal) >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
                u < delta
            }
            ErrorModel::Adversarial { .. } => self.targets.contains(&ordinal),
        }
    }

    fn tally(&self, ordinal: u64) -> bool {
        let bad = self.corrupts(ordinal);
        self.calls.fetch_add(1, Ordering::Relaxed);
        if bad {
            self.errors.fetch_add(1, Ordering::Relaxed);
        }
        bad
    }

    /// Number of k-cliques of `h` as answered by call `ordinal`.
    pub fn count_at(&self, h: &Hypergraph, k: usize, ordinal: u64) -> BigUint {
        let bad = self.tally(ordinal);
        let v = brute_force_count(h, k);
        if bad {
            v + 1u32
        } else {
            v
        }
    }

    /// Parity of the k-clique count of `h` as answered by call `ordinal`.
    pub fn parity_at(&self, h: &Hypergraph, k: usize, ordinal: u64) -> u8 {
        let bad = self.tally(ordinal);
        parity_count(h, k) ^ u8::from(bad)
    }

    /// Reserves `len` consecutive ordinals for direct calls.
    pub fn reserve(&self, len: u64) -> u64 {
        self.next.fetch_add(len, Ordering::Relaxed)
    }

    pub fn count(&self, h: &Hypergraph, k: usize) -> BigUint {
        self.count_at(h, k, self.reserve(1))
    }

    pub fn parity(&self, h: &Hypergraph, k: usize) -> u8 {
        self.parity_at(h, k, self.reserve(1))
    }

    /// Accounts for calls answered without running the counter.
    pub(crate) fn record(&self, calls: u64, errors: u64) {
        self.calls.fetch_add(calls, Ordering::Relaxed);
        self.errors.fetch_add(errors, Ordering::Relaxed);
    }

    pub fn calls(&self) -> u64 {
        self.calls.load(Ordering::Relaxed)
    }

    pub fn injected_errors(&self) -> u64 {
        self.errors.load(Ordering::Relaxed)
    }

    pub fn reset(&self) {
        self.next.store(0, Ordering::Relaxed);
        self.calls.store(0, Ordering::Relaxed);
        self.errors.store(0, Ordering::Relaxed);
    }
}
