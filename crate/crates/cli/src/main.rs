use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod config;
mod output;
mod run;

use config::Overrides;

/// Experiment runner for k-clique counting on Erdos-Renyi hypergraphs and the
/// worst-case to average-case reductions.
#[derive(Parser)]
#[command(name = "erclique", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw G(n, c, s) hypergraphs into the output directory.
    Sample(Overrides),
    /// Count k-cliques with brute force, greedy sampling, it-gen or matmul.
    Count(Overrides),
    /// Run the counting reduction against an oracle.
    Reduce(Overrides),
    /// Run the parity reduction against an oracle.
    ParityReduce(Overrides),
    /// Decide k-clique existence through parity evaluations.
    Decide(Overrides),
    /// Check binary-expansion lengths against exact total variation.
    VerifyExpansion(Overrides),
    /// Time the counting reduction sequentially and in parallel.
    Bench(Overrides),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Sample(o) => o.resolve().and_then(|c| run::sample(&c)),
        Command::Count(o) => o.resolve().and_then(|c| run::count(&c)),
        Command::Reduce(o) => o.resolve().and_then(|c| run::reduce(&c)),
        Command::ParityReduce(o) => o.resolve().and_then(|c| run::parity_reduce(&c)),
        Command::Decide(o) => o.resolve().and_then(|c| run::decide(&c)),
        Command::VerifyExpansion(o) => o.resolve().and_then(|c| run::verify_expansion(&c)),
        Command::Bench(o) => o.resolve().and_then(|c| run::bench(&c)),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
