//! The subcommands. Trial `i` uses the seed `derive_seed(seed, i)`; inside a
//! trial, index 0 of that seed draws the input, 1 the oracle's randomness and
//! 2 everything else.

use std::io::BufReader;

use anyhow::{bail, Context, Result};
use num_bigint::BigUint;
use rayon::prelude::*;
use serde::Serialize;

use erclique::cliques::{
    brute_force_count, default_cutoffs, greedy_random_sampling, it_gen_cliques, matrix_mult_count, parity_count,
    required_iterations, Cutoffs,
};
use erclique::expansion::{closed_form_tv_unbiased, exact_distribution, required_t_mod_p, tv_to_uniform, ExpansionSpec};
use erclique::hypergraph::{read_hypergraph, sample_er, write_hypergraph, Hypergraph};
use erclique::reduction::{
    compute_slowdowns, decide_via_parity, to_er_count, to_er_parity, tolerable_flip_rate, AverageCaseOracle,
    ErrorModel, ParityReport, ReductionReport, SlowdownParams,
};
use erclique::seed::{child_rng, derive_seed};
use erclique::Exec;

use crate::config::{Algorithm, ExperimentConfig, ParitySolver};
use crate::output::{ensure_dir, timed, write_csv, write_json};

fn load_input(cfg: &ExperimentConfig) -> Result<Option<Hypergraph>> {
    let Some(path) = &cfg.input else { return Ok(None) };
    let file = std::fs::File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let g = read_hypergraph(BufReader::new(file)).with_context(|| format!("reading {}", path.display()))?;
    Ok(Some(g))
}

/// `(n, s)` of the inputs: the file's when one is given.
fn shape(cfg: &ExperimentConfig, fixed: &Option<Hypergraph>) -> (usize, usize) {
    fixed.as_ref().map_or((cfg.n, cfg.s), |g| (g.n(), g.s()))
}

fn instance(cfg: &ExperimentConfig, fixed: &Option<Hypergraph>, trial_seed: u64) -> Hypergraph {
    match fixed {
        Some(g) => g.clone(),
        None => sample_er(cfg.n, cfg.c, cfg.s, &mut child_rng(trial_seed, 0)),
    }
}

/// Runs trials on a pool of `cfg.workers` threads; results come back in
/// trial order whatever the completion order.
fn run_trials<T, F>(cfg: &ExperimentConfig, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize, u64) -> Result<T> + Sync + Send,
{
    let pool = rayon::ThreadPoolBuilder::new().num_threads(cfg.workers).build()?;
    let results: Vec<Result<T>> = pool.install(|| {
        (0..cfg.trials)
            .into_par_iter()
            .map(|i| f(i, derive_seed(cfg.seed, i as u64)))
            .collect()
    });
    results.into_iter().collect()
}

#[derive(Serialize)]
struct SampleRow {
    trial: usize,
    seed: u64,
    n: usize,
    s: usize,
    c: f64,
    edges: usize,
    file: String,
}

pub fn sample(cfg: &ExperimentConfig) -> Result<()> {
    cfg.validate(cfg.n, cfg.s)?;
    let dir = ensure_dir(&cfg.out_dir())?;
    let rows = run_trials(cfg, |trial, seed| {
        let g = instance(cfg, &None, seed);
        let file = format!("sample-{trial:04}.hg");
        let mut buf = Vec::new();
        write_hypergraph(&mut buf, &g)?;
        std::fs::write(dir.join(&file), buf).with_context(|| format!("writing {file}"))?;
        Ok(SampleRow {
            trial,
            seed,
            n: g.n(),
            s: g.s(),
            c: cfg.c,
            edges: g.edge_count(),
            file,
        })
    })?;
    write_csv(cfg, "sample", &rows)
}

#[derive(Serialize)]
struct CountRow {
    trial: usize,
    seed: u64,
    algorithm: Algorithm,
    n: usize,
    k: usize,
    s: usize,
    c: f64,
    count: String,
    reference: String,
    agrees: bool,
    iterations: Option<u64>,
    cutoffs: Option<String>,
    wall_ms: Option<f64>,
}

fn cutoffs_for(cfg: &ExperimentConfig, n: usize, s: usize) -> Result<Cutoffs> {
    match &cfg.cutoffs {
        Some(values) => {
            if values.len() != cfg.k + 2 - s {
                bail!("expected {} cutoffs for levels {}..={}, got {}", cfg.k + 2 - s, s - 1, cfg.k, values.len());
            }
            Ok(Cutoffs::new(s, values.clone())?)
        }
        None => Ok(default_cutoffs(n, cfg.c, cfg.k, s)),
    }
}

pub fn count(cfg: &ExperimentConfig) -> Result<()> {
    let fixed = load_input(cfg)?;
    let (n, s) = shape(cfg, &fixed);
    cfg.validate(n, s)?;
    let k = cfg.k;
    let cutoffs = cutoffs_for(cfg, n, s)?;
    let cutoff_text = cutoffs.values().iter().map(f64::to_string).collect::<Vec<_>>().join(";");
    let uses_greedy = cfg.algorithms.contains(&Algorithm::Greedy);
    let iterations = if uses_greedy { Some(required_iterations(n, cfg.c, k, s, cfg.eps)?) } else { None };
    let per_trial = run_trials(cfg, |trial, seed| {
        let g = instance(cfg, &fixed, seed);
        let reference = brute_force_count(&g, k);
        let mut rows = Vec::with_capacity(cfg.algorithms.len());
        for &algorithm in &cfg.algorithms {
            let (value, wall_ms) = timed(cfg.timing, || -> Result<BigUint> {
                Ok(match algorithm {
                    Algorithm::Brute => brute_force_count(&g, k),
                    Algorithm::Greedy => {
                        let t = iterations.expect("greedy iterations");
                        greedy_random_sampling(&g, k, t, &mut child_rng(seed, 2)).len().into()
                    }
                    Algorithm::Itgen => it_gen_cliques(&g, k, &cutoffs)
                        .with_context(|| format!("trial {trial}: it-gen-cliques"))?
                        .len()
                        .into(),
                    Algorithm::Matmul => matrix_mult_count(&g, k)?,
                })
            });
            let value = value?;
            rows.push(CountRow {
                trial,
                seed,
                algorithm,
                n,
                k,
                s,
                c: cfg.c,
                agrees: value == reference,
                count: value.to_string(),
                reference: reference.to_string(),
                iterations: (algorithm == Algorithm::Greedy).then_some(iterations).flatten(),
                cutoffs: (algorithm == Algorithm::Itgen).then(|| cutoff_text.clone()),
                wall_ms,
            });
        }
        Ok(rows)
    })?;
    write_csv(cfg, "count", &per_trial.into_iter().flatten().collect::<Vec<_>>())
}

fn model_name(m: &ErrorModel) -> &'static str {
    match m {
        ErrorModel::Exact => "exact",
        ErrorModel::RandomFlip { .. } => "random-flip",
        ErrorModel::Adversarial { .. } => "adversarial",
    }
}

fn error_model(cfg: &ExperimentConfig, n: usize, s: usize) -> Result<ErrorModel> {
    if cfg.tolerable_delta {
        let delta = tolerable_flip_rate(n, cfg.k, s, cfg.c, &cfg.params())?;
        return Ok(ErrorModel::RandomFlip { delta });
    }
    Ok(cfg.error_model.clone())
}

#[derive(Serialize)]
struct Summary {
    trials: usize,
    successes: usize,
    success_rate: f64,
    mean_oracle_calls: f64,
    mean_injected_errors: f64,
}

impl Summary {
    fn new(rows: &[(bool, u64, u64)]) -> Self {
        let t = rows.len() as f64;
        let successes = rows.iter().filter(|r| r.0).count();
        Summary {
            trials: rows.len(),
            successes,
            success_rate: successes as f64 / t,
            mean_oracle_calls: rows.iter().map(|r| r.1 as f64).sum::<f64>() / t,
            mean_injected_errors: rows.iter().map(|r| r.2 as f64).sum::<f64>() / t,
        }
    }

    fn write(&self, cfg: &ExperimentConfig, command: &str) -> Result<()> {
        eprintln!(
            "{command}: {}/{} correct (rate {:.3}), mean oracle calls {:.1}, mean injected errors {:.2}",
            self.successes, self.trials, self.success_rate, self.mean_oracle_calls, self.mean_injected_errors
        );
        let summary_cfg = ExperimentConfig {
            output: None,
            ..cfg.clone()
        };
        write_csv(&summary_cfg, &format!("{command}-summary"), std::slice::from_ref(self))
    }
}

#[derive(Serialize)]
struct TrialDoc<'a, R> {
    trial: usize,
    seed: u64,
    n: usize,
    k: usize,
    s: usize,
    c: f64,
    error_model: &'a ErrorModel,
    slowdowns: SlowdownParams,
    reference: String,
    correct: bool,
    report: &'a R,
}

#[derive(Serialize)]
struct ReduceRow {
    trial: usize,
    seed: u64,
    n: usize,
    k: usize,
    s: usize,
    c: f64,
    error_model: &'static str,
    delta: Option<f64>,
    count: String,
    reference: String,
    succeeded: bool,
    correct: bool,
    oracle_calls: u64,
    injected_errors: u64,
    decode_failures: u64,
    sampler_failures: u64,
    min_margin: usize,
    wall_ms: Option<f64>,
}

pub fn reduce(cfg: &ExperimentConfig) -> Result<()> {
    let fixed = load_input(cfg)?;
    let (n, s) = shape(cfg, &fixed);
    cfg.validate(n, s)?;
    let k = cfg.k;
    let model = error_model(cfg, n, s)?;
    let params = cfg.params();
    let slowdowns = compute_slowdowns(n, cfg.c, k, s, cfg.c_const)?;
    let dir = ensure_dir(&cfg.out_dir())?;
    let rows = run_trials(cfg, |trial, seed| {
        let g = instance(cfg, &fixed, seed);
        let oracle = AverageCaseOracle::new(model.clone(), derive_seed(seed, 1))?;
        let (report, wall_ms) = timed(cfg.timing, || to_er_count(&g, k, &oracle, cfg.c, &params, derive_seed(seed, 2)));
        let report: ReductionReport = report?;
        let reference = brute_force_count(&g, k);
        let correct = report.succeeded && report.count == reference;
        write_json(
            &dir.join(format!("reduce-{trial:04}.json")),
            &TrialDoc {
                trial,
                seed,
                n,
                k,
                s,
                c: cfg.c,
                error_model: &model,
                slowdowns,
                reference: reference.to_string(),
                correct,
                report: &report,
            },
        )?;
        Ok(ReduceRow {
            trial,
            seed,
            n,
            k,
            s,
            c: cfg.c,
            error_model: model_name(&model),
            delta: oracle.flip_rate(),
            count: report.count.to_string(),
            reference: reference.to_string(),
            succeeded: report.succeeded,
            correct,
            oracle_calls: report.oracle_calls,
            injected_errors: report.injected_errors,
            decode_failures: report.decode_failures,
            sampler_failures: report.sampler_failures,
            min_margin: report.primes.iter().map(|p| p.margin).min().unwrap_or(0),
            wall_ms,
        })
    })?;
    write_csv(cfg, "reduce", &rows)?;
    let stats: Vec<_> = rows.iter().map(|r| (r.correct, r.oracle_calls, r.injected_errors)).collect();
    Summary::new(&stats).write(cfg, "reduce")
}

#[derive(Serialize)]
struct ParityRow {
    trial: usize,
    seed: u64,
    n: usize,
    k: usize,
    s: usize,
    c: f64,
    error_model: &'static str,
    delta: Option<f64>,
    fast_path: bool,
    parity: u8,
    reference: u8,
    succeeded: bool,
    correct: bool,
    oracle_calls: u64,
    injected_errors: u64,
    decode_failures: u64,
    sampler_failures: u64,
    margin: usize,
    wall_ms: Option<f64>,
}

pub fn parity_reduce(cfg: &ExperimentConfig) -> Result<()> {
    let fixed = load_input(cfg)?;
    let (n, s) = shape(cfg, &fixed);
    cfg.validate(n, s)?;
    let k = cfg.k;
    let model = error_model(cfg, n, s)?;
    let params = cfg.params();
    let slowdowns = compute_slowdowns(n, cfg.c, k, s, cfg.c_const)?;
    let dir = ensure_dir(&cfg.out_dir())?;
    let rows = run_trials(cfg, |trial, seed| {
        let g = instance(cfg, &fixed, seed);
        let oracle = AverageCaseOracle::new(model.clone(), derive_seed(seed, 1))?;
        let (report, wall_ms) = timed(cfg.timing, || to_er_parity(&g, k, &oracle, cfg.c, &params, derive_seed(seed, 2)));
        let report: ParityReport = report?;
        let reference = parity_count(&g, k);
        let correct = report.succeeded && report.parity == reference;
        write_json(
            &dir.join(format!("parity-reduce-{trial:04}.json")),
            &TrialDoc {
                trial,
                seed,
                n,
                k,
                s,
                c: cfg.c,
                error_model: &model,
                slowdowns,
                reference: reference.to_string(),
                correct,
                report: &report,
            },
        )?;
        Ok(ParityRow {
            trial,
            seed,
            n,
            k,
            s,
            c: cfg.c,
            error_model: model_name(&model),
            delta: oracle.flip_rate(),
            fast_path: report.fast_path,
            parity: report.parity,
            reference,
            succeeded: report.succeeded,
            correct,
            oracle_calls: report.oracle_calls,
            injected_errors: report.injected_errors,
            decode_failures: report.decode_failures,
            sampler_failures: report.sampler_failures,
            margin: report.margin,
            wall_ms,
        })
    })?;
    write_csv(cfg, "parity-reduce", &rows)?;
    let stats: Vec<_> = rows.iter().map(|r| (r.correct, r.oracle_calls, r.injected_errors)).collect();
    Summary::new(&stats).write(cfg, "parity-reduce")
}

#[derive(Serialize)]
struct DecideRow {
    trial: usize,
    seed: u64,
    n: usize,
    k: usize,
    s: usize,
    c: f64,
    solver: ParitySolver,
    accepted: bool,
    has_clique: bool,
    correct: bool,
    wall_ms: Option<f64>,
}

pub fn decide(cfg: &ExperimentConfig) -> Result<()> {
    let fixed = load_input(cfg)?;
    let (n, s) = shape(cfg, &fixed);
    cfg.validate(n, s)?;
    let k = cfg.k;
    let params = cfg.params();
    let exact = AverageCaseOracle::exact();
    let rows = run_trials(cfg, |trial, seed| {
        let g = instance(cfg, &fixed, seed);
        let mut calls = 0u64;
        let solver = |h: &Hypergraph| match cfg.parity_solver {
            ParitySolver::Brute => Ok(parity_count(h, k)),
            ParitySolver::Reduction if h.n() < k => Ok(0),
            ParitySolver::Reduction => {
                calls += 1;
                Ok(to_er_parity(h, k, &exact, cfg.c, &params, derive_seed(seed, 2 + calls))?.parity)
            }
        };
        let (accepted, wall_ms) = timed(cfg.timing, || {
            decide_via_parity(&g, k, solver, cfg.decide_const, &mut child_rng(seed, 2))
        });
        let accepted = accepted?;
        let has_clique = brute_force_count(&g, k) > BigUint::ZERO;
        Ok(DecideRow {
            trial,
            seed,
            n,
            k,
            s,
            c: cfg.c,
            solver: cfg.parity_solver,
            accepted,
            has_clique,
            correct: accepted == has_clique,
            wall_ms,
        })
    })?;
    write_csv(cfg, "decide", &rows)
}

#[derive(Serialize)]
struct VerifyRow {
    p: u64,
    c: f64,
    eps: f64,
    required_t: usize,
    bits: usize,
    dp_tv: f64,
    pass: bool,
    closed_form_residual: Option<f64>,
}

pub fn verify_expansion(cfg: &ExperimentConfig) -> Result<()> {
    cfg.validate_expansions()?;
    let mut rows = Vec::with_capacity(cfg.expansions.len());
    for e in &cfg.expansions {
        let t = required_t_mod_p(e.p, e.c, e.eps)?;
        let spec = ExpansionSpec::uniform(e.p, e.c, t)?;
        let tv = tv_to_uniform(&exact_distribution(&spec));
        rows.push(VerifyRow {
            p: e.p,
            c: e.c,
            eps: e.eps,
            required_t: t,
            bits: spec.bits(),
            dp_tv: tv,
            pass: tv <= e.eps,
            closed_form_residual: (e.c == 0.5).then(|| (tv - closed_form_tv_unbiased(e.p, t)).abs()),
        });
    }
    write_csv(cfg, "verify-expansion", &rows)
}

#[derive(Serialize)]
struct BenchRow {
    trial: usize,
    seed: u64,
    n: usize,
    k: usize,
    s: usize,
    c: f64,
    exec: Exec,
    threads: usize,
    count: String,
    oracle_calls: u64,
    wall_ms: f64,
}

/// Times the counting reduction under both execution policies. Trials run
/// one after another so that the timings do not compete for cores.
pub fn bench(cfg: &ExperimentConfig) -> Result<()> {
    let fixed = load_input(cfg)?;
    let (n, s) = shape(cfg, &fixed);
    cfg.validate(n, s)?;
    let k = cfg.k;
    let mut rows = Vec::new();
    for trial in 0..cfg.trials {
        let seed = derive_seed(cfg.seed, trial as u64);
        let g = instance(cfg, &fixed, seed);
        for exec in [Exec::Sequential, Exec::Parallel] {
            let params = erclique::reduction::ReductionParams { exec, ..cfg.params() };
            let oracle = AverageCaseOracle::exact();
            let (report, wall_ms) = timed(true, || to_er_count(&g, k, &oracle, cfg.c, &params, derive_seed(seed, 2)));
            let report = report?;
            rows.push(BenchRow {
                trial,
                seed,
                n,
                k,
                s,
                c: cfg.c,
                exec,
                threads: if exec.is_parallel() { rayon::current_num_threads() } else { 1 },
                count: report.count.to_string(),
                oracle_calls: report.oracle_calls,
                wall_ms: wall_ms.unwrap_or_default(),
            });
        }
    }
    write_csv(cfg, "bench", &rows)
}
