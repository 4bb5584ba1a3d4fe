//! Experiment commands. Each takes an [`ExperimentSpec`] and returns a
//! [`Report`]; results depend only on the settings and their master seed.

mod balance;
mod explore_stats;
mod giant_cycles;
mod lemma_checks;
mod pd_invariance;
mod split_prob;
mod verify_oracle;

pub use balance::cmd_balance;
pub use explore_stats::cmd_explore_stats;
pub use giant_cycles::cmd_giant_cycles;
pub use lemma_checks::cmd_lemma_checks;
pub use pd_invariance::cmd_pd_invariance;
pub use split_prob::cmd_split_prob;
pub use verify_oracle::{cmd_verify_oracle, minimize_counterexample};

use loopsoup_core::rng::stream_seed;
use rayon::prelude::*;

use crate::report::Report;
use crate::spec::{Command, ExperimentSpec};

pub fn run(cmd: Command, spec: &ExperimentSpec) -> anyhow::Result<Report> {
    spec.validate(cmd)?;
    match cmd {
        Command::VerifyOracle => cmd_verify_oracle(spec),
        Command::GiantCycles => cmd_giant_cycles(spec),
        Command::Balance => cmd_balance(spec),
        Command::SplitProb => cmd_split_prob(spec),
        Command::ExploreStats => cmd_explore_stats(spec),
        Command::LemmaChecks => cmd_lemma_checks(spec),
        Command::PdInvariance => cmd_pd_invariance(spec),
    }
}

/// Disjoint blocks of stream indices, one per sub-task of a command.
pub(crate) const STREAM_BLOCK: u64 = 1 << 32;

/// Seeds of replicas `0..count` in stream block `block`.
pub(crate) fn replica_seeds(master: u64, block: u64, count: usize) -> Vec<u64> {
    (0..count as u64)
        .map(|r| stream_seed(master, block * STREAM_BLOCK + r))
        .collect()
}

/// Run `f(index, seed)` for every seed in parallel, results in seed order.
pub(crate) fn par_map<T, F>(seeds: &[u64], f: F) -> anyhow::Result<Vec<T>>
where
    T: Send,
    F: Fn(usize, u64) -> anyhow::Result<T> + Sync,
{
    seeds
        .par_iter()
        .enumerate()
        .map(|(i, &s)| f(i, s))
        .collect()
}

pub(crate) fn key(parts: &[(&str, f64)]) -> String {
    parts
        .iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect::<Vec<_>>()
        .join(",")
}
