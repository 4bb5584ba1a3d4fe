use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use loopsoup::report::write_outputs;
use loopsoup::{Command, ExperimentSpec};

#[derive(Parser)]
#[command(
    name = "loopsoup",
    version,
    about = "Monte Carlo experiments for the interchange process with reversals"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Tracer against incremental cycle build, plus backend fuzzing.
    VerifyOracle(Opts),
    /// Giant component and rescaled cycle sizes against PD(1/2).
    GiantCycles(Opts),
    /// Balance of long-cycle segments.
    Balance(Opts),
    /// Same-orientation probability under the segment probing scheme.
    SplitProb(Opts),
    /// Survival, frontier, winding and coupling statistics of explorations.
    ExploreStats(Opts),
    /// Small-split frequency and giant-versus-cycle gap bounds.
    LemmaChecks(Opts),
    /// PD identities and invariance under split-merge dynamics.
    PdInvariance(Opts),
}

/// Options left unset keep the command defaults.
#[derive(Args)]
struct Opts {
    /// JSON settings file; command-line options override its fields.
    #[arg(long)]
    spec: Option<PathBuf>,
    #[arg(long)]
    n: Option<u32>,
    #[arg(long, value_delimiter = ',')]
    beta: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    nu: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    theta: Option<Vec<f64>>,
    #[arg(long)]
    tmax: Option<f64>,
    #[arg(long)]
    replicas: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_delimiter = ',')]
    eps: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    rho: Option<Vec<f64>>,
    #[arg(long)]
    probes: Option<usize>,
    #[arg(long)]
    steps: Option<u64>,
    #[arg(long, value_delimiter = ',')]
    k: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',')]
    s: Option<Vec<u64>>,
    /// Poisson link counts instead of floor(beta n / 2).
    #[arg(long)]
    poisson: bool,
    /// Output directory for report.json, manifest.json and dist_*.csv.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Opts {
    fn into_spec(self, cmd: Command) -> anyhow::Result<ExperimentSpec> {
        let mut spec = match &self.spec {
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .with_context(|| format!("reading {}", p.display()))?;
                serde_json::from_str(&text).with_context(|| format!("parsing {}", p.display()))?
            }
            None => ExperimentSpec::defaults(cmd),
        };
        macro_rules! set {
            ($($f:ident => $g:ident),*) => {$(
                if let Some(v) = self.$f {
                    spec.$g = v;
                }
            )*};
        }
        set!(n => n, beta => beta, nu => nu, theta => theta, tmax => t_max, replicas => replicas,
             seed => seed, eps => eps, rho => rho, probes => probes, steps => steps, k => k, s => s);
        if self.poisson {
            spec.poisson = true;
        }
        if self.out.is_some() {
            spec.out = self.out;
        }
        Ok(spec)
    }
}

fn main() -> ExitCode {
    match real_main() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn real_main() -> anyhow::Result<bool> {
    let cli = Cli::parse();
    let (cmd, opts) = match cli.command {
        Cmd::VerifyOracle(o) => (Command::VerifyOracle, o),
        Cmd::GiantCycles(o) => (Command::GiantCycles, o),
        Cmd::Balance(o) => (Command::Balance, o),
        Cmd::SplitProb(o) => (Command::SplitProb, o),
        Cmd::ExploreStats(o) => (Command::ExploreStats, o),
        Cmd::LemmaChecks(o) => (Command::LemmaChecks, o),
        Cmd::PdInvariance(o) => (Command::PdInvariance, o),
    };
    let spec = opts.into_spec(cmd)?;
    let start = Instant::now();
    let report = loopsoup::run(cmd, &spec)?;
    let wall = start.elapsed().as_secs_f64();
    print!("{}", report.summary());
    println!(
        "{}: {} ({wall:.1}s)",
        cmd,
        if report.pass { "PASS" } else { "FAIL" }
    );
    if let Some(dir) = &spec.out {
        write_outputs(&report, dir, wall)?;
        println!("wrote {}", dir.display());
    }
    Ok(report.pass)
}
