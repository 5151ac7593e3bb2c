//! Experiment configuration: a TOML document plus command-line overrides.
//!
//! Precedence, highest first: flags, the `--config` document, then built-in
//! defaults. The output directory additionally falls back to
//! `ERCLIQUE_OUT_DIR` before the current directory.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};

use erclique::polynomial::ExpansionLength;
use erclique::reduction::{Dispatch, ErrorModel, ReductionParams, DEFAULT_DECIDE_CONST};
use erclique::Exec;

pub const OUT_DIR_ENV: &str = "ERCLIQUE_OUT_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    Brute,
    Greedy,
    Itgen,
    Matmul,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ParitySolver {
    /// Brute-force parity of the induced hypergraph.
    #[default]
    Brute,
    /// The parity reduction with an exact oracle.
    Reduction,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpansionCase {
    pub p: u64,
    pub c: f64,
    pub eps: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub n: usize,
    pub k: usize,
    pub s: usize,
    /// Edge density of generated inputs and of the oracle's distribution.
    pub c: f64,
    pub seed: u64,
    pub trials: usize,
    /// Hypergraph file used for every trial instead of generated inputs.
    pub input: Option<PathBuf>,
    pub algorithms: Vec<Algorithm>,
    /// Slack in the greedy iteration count.
    pub eps: f64,
    /// It-gen cutoffs for levels `s - 1..=k`; defaults to `2 n^t c^C(t, s)`.
    pub cutoffs: Option<Vec<f64>>,
    pub error_model: ErrorModel,
    /// Replace the error model by random flips at the rate the counting
    /// reduction tolerates.
    pub tolerable_delta: bool,
    pub repetitions: usize,
    pub gamma: f64,
    pub expansion: ExpansionLength,
    pub dispatch: Dispatch,
    pub per_call_limit: u64,
    /// Constant in the slowdown formulas.
    pub c_const: f64,
    pub decide_const: usize,
    pub parity_solver: ParitySolver,
    pub expansions: Vec<ExpansionCase>,
    pub out_dir: Option<PathBuf>,
    /// CSV destination, `-` for stdout; defaults to `<out_dir>/<command>.csv`.
    pub output: Option<PathBuf>,
    /// Trial worker threads; 0 picks one per core.
    pub workers: usize,
    /// Execution policy inside a trial.
    pub exec: Exec,
    /// Fill the `wall_ms` column. Off by default so that output is
    /// reproducible byte for byte.
    pub timing: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        let params = ReductionParams::default();
        ExperimentConfig {
            n: 8,
            k: 3,
            s: 2,
            c: 0.5,
            seed: 0,
            trials: 1,
            input: None,
            algorithms: vec![Algorithm::Brute],
            eps: 0.5,
            cutoffs: None,
            error_model: ErrorModel::Exact,
            tolerable_delta: false,
            repetitions: params.repetitions,
            gamma: params.gamma,
            expansion: params.expansion,
            dispatch: params.dispatch,
            per_call_limit: params.per_call_limit,
            c_const: 1.0,
            decide_const: DEFAULT_DECIDE_CONST,
            parity_solver: ParitySolver::default(),
            expansions: Vec::new(),
            out_dir: None,
            output: None,
            workers: 0,
            exec: Exec::Sequential,
            timing: false,
        }
    }
}

fn parse_case(s: &str) -> Result<ExpansionCase, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(format!("expected p,c,eps, got `{s}`"));
    }
    let bad = |what: &str| format!("bad {what} in `{s}`");
    Ok(ExpansionCase {
        p: parts[0].trim().parse().map_err(|_| bad("p"))?,
        c: parts[1].trim().parse().map_err(|_| bad("c"))?,
        eps: parts[2].trim().parse().map_err(|_| bad("eps"))?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExecArg {
    Sequential,
    Parallel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LengthArg {
    Bound,
    Minimal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DispatchArg {
    Auto,
    PerCall,
    Aggregated,
}

/// Flags shared by every subcommand; each one overrides the config document.
#[derive(Debug, Clone, Default, Args)]
pub struct Overrides {
    /// TOML configuration document.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Vertices of generated inputs.
    #[arg(long)]
    pub n: Option<usize>,
    /// Clique size.
    #[arg(long)]
    pub k: Option<usize>,
    /// Edge size of generated inputs.
    #[arg(long)]
    pub s: Option<usize>,
    /// Edge density in (0, 1).
    #[arg(long)]
    pub c: Option<f64>,
    /// Global seed; trial i uses the i-th derived seed.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub trials: Option<usize>,
    /// Hypergraph file used for every trial.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Counting algorithms, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub algorithm: Option<Vec<Algorithm>>,
    /// Slack in the greedy iteration count.
    #[arg(long)]
    pub eps: Option<f64>,
    /// It-gen cutoffs for levels s-1..=k, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub cutoffs: Option<Vec<f64>>,
    /// Random-flip oracle error rate.
    #[arg(long, conflicts_with = "tolerable_delta")]
    pub delta: Option<f64>,
    /// Random flips at the rate the counting reduction tolerates.
    #[arg(long)]
    pub tolerable_delta: bool,
    /// Repetitions per prime for the majority vote.
    #[arg(long)]
    pub repetitions: Option<usize>,
    /// Failure budget of the binary expansion step.
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long, value_enum)]
    pub expansion: Option<LengthArg>,
    #[arg(long, value_enum)]
    pub dispatch: Option<DispatchArg>,
    /// Constant C in the slowdown formulas.
    #[arg(long)]
    pub c_const: Option<f64>,
    /// Decide evaluates C * 2^k random restrictions.
    #[arg(long)]
    pub decide_const: Option<usize>,
    #[arg(long, value_enum)]
    pub parity_solver: Option<ParitySolver>,
    /// Expansion check `p,c,eps`; repeatable.
    #[arg(long = "case", value_parser = parse_case)]
    pub cases: Vec<ExpansionCase>,
    /// Output directory [env: ERCLIQUE_OUT_DIR, default: .]
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    /// CSV path, `-` for stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Trial worker threads, 0 for one per core.
    #[arg(long)]
    pub workers: Option<usize>,
    /// Execution policy inside a trial.
    #[arg(long, value_enum)]
    pub exec: Option<ExecArg>,
    /// Fill the wall_ms column.
    #[arg(long)]
    pub timing: bool,
}

impl Overrides {
    pub fn resolve(&self) -> Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(path) => load(path)?,
            None => ExperimentConfig::default(),
        };
        macro_rules! set {
            ($($f:ident),*) => { $(if let Some(v) = &self.$f { cfg.$f = v.clone(); })* };
        }
        set!(n, k, s, c, seed, trials, eps, repetitions, gamma, c_const, decide_const, parity_solver, workers);
        if let Some(v) = &self.input {
            cfg.input = Some(v.clone());
        }
        if let Some(v) = &self.algorithm {
            cfg.algorithms = v.clone();
        }
        if let Some(v) = &self.cutoffs {
            cfg.cutoffs = Some(v.clone());
        }
        if let Some(delta) = self.delta {
            cfg.error_model = ErrorModel::RandomFlip { delta };
            cfg.tolerable_delta = false;
        }
        cfg.tolerable_delta |= self.tolerable_delta;
        if let Some(v) = self.expansion {
            cfg.expansion = match v {
                LengthArg::Bound => ExpansionLength::Bound,
                LengthArg::Minimal => ExpansionLength::Minimal,
            };
        }
        if let Some(v) = self.dispatch {
            cfg.dispatch = match v {
                DispatchArg::Auto => Dispatch::Auto,
                DispatchArg::PerCall => Dispatch::PerCall,
                DispatchArg::Aggregated => Dispatch::Aggregated,
            };
        }
        if !self.cases.is_empty() {
            cfg.expansions = self.cases.clone();
        }
        if let Some(v) = &self.out_dir {
            cfg.out_dir = Some(v.clone());
        }
        if cfg.out_dir.is_none() {
            cfg.out_dir = std::env::var_os(OUT_DIR_ENV).map(PathBuf::from);
        }
        if let Some(v) = &self.output {
            cfg.output = Some(v.clone());
        }
        if let Some(v) = self.exec {
            cfg.exec = match v {
                ExecArg::Sequential => Exec::Sequential,
                ExecArg::Parallel => Exec::Parallel,
            };
        }
        cfg.timing |= self.timing;
        Ok(cfg)
    }
}

pub fn load(path: &Path) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

impl ExperimentConfig {
    pub fn out_dir(&self) -> PathBuf {
        self.out_dir.clone().unwrap_or_else(|| PathBuf::from("."))
    }

    pub fn params(&self) -> ReductionParams {
        ReductionParams {
            repetitions: self.repetitions,
            gamma: self.gamma,
            expansion: self.expansion,
            dispatch: self.dispatch,
            per_call_limit: self.per_call_limit,
            exec: self.exec,
        }
    }

    /// Checks the parameters every command uses; `n` and `s` are those of the
    /// input file when one is given.
    pub fn validate(&self, n: usize, s: usize) -> Result<()> {
        if !(self.c > 0.0 && self.c < 1.0) {
            bail!("c = {} must lie in (0, 1)", self.c);
        }
        if !(self.k >= s && s >= 2) {
            bail!("need k >= s >= 2, got k = {} and s = {s}", self.k);
        }
        if n < self.k {
            bail!("need n >= k, got n = {n} and k = {}", self.k);
        }
        if self.trials == 0 {
            bail!("trials must be positive");
        }
        if !(self.eps > 0.0) {
            bail!("eps = {} must be positive", self.eps);
        }
        if !(self.gamma > 0.0 && self.gamma < 1.0) {
            bail!("gamma = {} must lie in (0, 1)", self.gamma);
        }
        if self.repetitions == 0 {
            bail!("repetitions must be positive");
        }
        if !(self.c_const > 0.0) {
            bail!("c_const = {} must be positive", self.c_const);
        }
        if let ErrorModel::RandomFlip { delta } = self.error_model {
            if !(0.0..=1.0).contains(&delta) {
                bail!("delta = {delta} must lie in [0, 1]");
            }
        }
        Ok(())
    }

    pub fn validate_expansions(&self) -> Result<()> {
        if self.expansions.is_empty() {
            bail!("no expansion cases given; use --case p,c,eps or [[expansions]]");
        }
        for e in &self.expansions {
            if !(e.c > 0.0 && e.c < 1.0) {
                bail!("c = {} must lie in (0, 1)", e.c);
            }
            if !(e.eps > 0.0 && e.eps < 1.0) {
                bail!("eps = {} must lie in (0, 1)", e.eps);
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_document() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("exp.toml");
        std::fs::write(
            &path,
            "n = 12\nk = 4\ntrials = 3\nerror_model = { kind = \"random-flip\", delta = 0.01 }\n\
             [[expansions]]\np = 5\nc = 0.5\neps = 0.01\n",
        )
        .unwrap();
        let o = Overrides {
            config: Some(path),
            k: Some(3),
            ..Overrides::default()
        };
        let cfg = o.resolve().unwrap();
        assert_eq!((cfg.n, cfg.k, cfg.trials), (12, 3, 3));
        assert_eq!(cfg.error_model, ErrorModel::RandomFlip { delta: 0.01 });
        assert_eq!(cfg.expansions.len(), 1);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("exp.toml");
        std::fs::write(&path, "nn = 3\n").unwrap();
        assert!(load(&path).is_err());
    }

    #[test]
    fn ranges() {
        let cfg = ExperimentConfig::default();
        assert!(cfg.validate(8, 2).is_ok());
        assert!(ExperimentConfig { c: 1.0, ..cfg.clone() }.validate(8, 2).is_err());
        assert!(ExperimentConfig { k: 2, ..cfg.clone() }.validate(8, 3).is_err());
        assert!(cfg.validate(2, 2).is_err());
    }
}
