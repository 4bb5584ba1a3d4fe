use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    VerifyOracle,
    GiantCycles,
    Balance,
    SplitProb,
    ExploreStats,
    LemmaChecks,
    PdInvariance,
}

impl Command {
    pub const ALL: [Command; 7] = [
        Command::VerifyOracle,
        Command::GiantCycles,
        Command::Balance,
        Command::SplitProb,
        Command::ExploreStats,
        Command::LemmaChecks,
        Command::PdInvariance,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::VerifyOracle => "verify-oracle",
            Command::GiantCycles => "giant-cycles",
            Command::Balance => "balance",
            Command::SplitProb => "split-prob",
            Command::ExploreStats => "explore-stats",
            Command::LemmaChecks => "lemma-checks",
            Command::PdInvariance => "pd-invariance",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = String;

    fn from_str(s: &str) -> Result<Command, String> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| format!("unknown command {s}"))
    }
}

/// Parameters of one experiment run. Fields a command does not use are
/// ignored by it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub name: String,
    pub n: u32,
    pub beta: Vec<f64>,
    pub nu: Vec<f64>,
    pub theta: Vec<f64>,
    pub t_max: f64,
    pub replicas: usize,
    pub eps: Vec<f64>,
    pub rho: Vec<f64>,
    pub seed: u64,
    pub out: Option<PathBuf>,
    /// Poisson link counts instead of `floor(beta n / 2)`.
    pub poisson: bool,
    /// Sample count of a secondary task: vertices (balance), probes
    /// (split-prob), winding runs (explore-stats) or PD samples
    /// (pd-invariance).
    pub probes: usize,
    /// Chain steps per replica.
    pub steps: u64,
    pub k: Vec<usize>,
    pub s: Vec<u64>,
}

impl ExperimentSpec {
    pub fn defaults(cmd: Command) -> ExperimentSpec {
        let base = ExperimentSpec {
            name: cmd.name().into(),
            n: 100_000,
            beta: vec![1.5],
            nu: vec![0.5],
            theta: vec![0.5],
            t_max: 200.0,
            replicas: 200,
            eps: vec![0.01],
            rho: vec![0.1],
            seed: 1,
            out: None,
            poisson: false,
            probes: 0,
            steps: 0,
            k: Vec::new(),
            s: Vec::new(),
        };
        match cmd {
            Command::VerifyOracle => ExperimentSpec {
                n: 40,
                beta: vec![0.5, 3.0],
                nu: vec![0.0, 0.5, 1.0],
                replicas: 1000,
                // Fuzzed operations for the backend comparison at n = 1000.
                steps: 100_000,
                ..base
            },
            Command::GiantCycles => base,
            Command::Balance => ExperimentSpec {
                nu: vec![0.25, 0.5, 0.75, 1.0],
                replicas: 10,
                probes: 1000,
                ..base
            },
            Command::SplitProb => ExperimentSpec {
                nu: vec![0.5, 1.0],
                // Upper bound on replicas; runs stop once enough probes are in.
                replicas: 2000,
                probes: 10_000,
                steps: 50,
                ..base
            },
            Command::ExploreStats => ExperimentSpec {
                beta: vec![1.5, 2.0],
                replicas: 10_000,
                probes: 200,
                t_max: 200.0,
                ..base
            },
            Command::LemmaChecks => ExperimentSpec {
                n: 1000,
                replicas: 200,
                k: vec![1, 2, 5, 10, 20],
                s: vec![0, 100, 300, 600, 1000, 1500],
                ..base
            },
            Command::PdInvariance => ExperimentSpec {
                theta: vec![0.5, 1.0],
                replicas: 10_000,
                probes: 100_000,
                steps: 50,
                eps: vec![1e-4],
                ..base
            },
        }
    }

    /// Range checks shared by all commands plus per-command preconditions.
    pub fn validate(&self, cmd: Command) -> Result<(), SpecError> {
        let bad = |field: &'static str, reason: &str| {
            Err(SpecError {
                field,
                reason: reason.into(),
            })
        };
        if self.n < 2 {
            return bad("n", "at least 2 vertices are needed");
        }
        if self.replicas == 0 {
            return bad("replicas", "must be at least 1");
        }
        if self.beta.is_empty() || self.beta.iter().any(|b| !(b.is_finite() && *b > 0.0)) {
            return bad("beta", "values must be positive and finite");
        }
        if self.nu.is_empty() || self.nu.iter().any(|v| !(0.0..=1.0).contains(v)) {
            return bad("nu", "values must lie in [0, 1]");
        }
        if self.theta.iter().any(|t| !(*t > 0.0 && *t <= 1.0)) {
            return bad("theta", "values must lie in (0, 1]");
        }
        if !(self.t_max.is_finite() && self.t_max > 0.0) {
            return bad("t_max", "must be positive and finite");
        }
        if self.eps.iter().any(|e| !(*e > 0.0 && *e < 1.0)) {
            return bad("eps", "values must lie in (0, 1)");
        }
        if self.rho.iter().any(|r| !(*r > 0.0 && *r < 1.0)) {
            return bad("rho", "values must lie in (0, 1)");
        }
        match cmd {
            Command::Balance | Command::SplitProb => {
                if self.beta.iter().any(|b| *b <= 1.0) {
                    return bad("beta", "this command needs beta > 1");
                }
                if self.probes == 0 {
                    return bad("probes", "must be positive");
                }
            }
            Command::LemmaChecks => {
                if self.k.is_empty() || self.k.contains(&0) {
                    return bad("k", "needs at least one positive threshold");
                }
            }
            Command::PdInvariance => {
                if self.theta.is_empty() {
                    return bad("theta", "needs at least one value");
                }
                if self.probes == 0 {
                    return bad("probes", "number of PD samples must be positive");
                }
            }
            _ => {}
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("invalid `{field}`: {reason}")]
pub struct SpecError {
    pub field: &'static str,
    pub reason: String,
}
