//! Acceptance suite: one PASS/FAIL line per criterion. Runs as a plain binary
//! so all criteria are reported even when one fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use loopsoup::{run, Check, Command, ExperimentSpec, Report};
use loopsoup_core::exploration::solve_z;

struct Outcome {
    id: u32,
    title: &'static str,
    pass: bool,
    detail: Vec<String>,
    elapsed: Duration,
    budget: Duration,
}

fn mins(m: u64) -> Duration {
    Duration::from_secs(60 * m)
}

fn describe(c: &Check) -> String {
    format!(
        "{} [{}] value={:.6} target={:.6} tol={:.6}",
        c.name,
        if c.pass { "ok" } else { "FAIL" },
        c.value,
        c.target,
        c.tolerance
    )
}

/// Hard checks of `rep` whose names contain any of `needles`.
fn pick<'a>(rep: &'a Report, needles: &[&str]) -> Vec<&'a Check> {
    rep.checks
        .iter()
        .filter(|c| c.hard && needles.iter().any(|n| c.name.contains(n)))
        .collect()
}

fn judge(checks: &[&Check]) -> (bool, Vec<String>) {
    let pass = !checks.is_empty() && checks.iter().all(|c| c.pass);
    (pass, checks.iter().map(|c| describe(c)).collect())
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t = Instant::now();
    let v = f();
    (v, t.elapsed())
}

fn spec(cmd: Command, edit: impl FnOnce(&mut ExperimentSpec)) -> ExperimentSpec {
    let mut s = ExperimentSpec::defaults(cmd);
    edit(&mut s);
    s
}

fn main() -> ExitCode {
    let mut out: Vec<Outcome> = Vec::new();
    let mut record = |id, title, (pass, detail): (bool, Vec<String>), elapsed: Duration, budget| {
        let o = Outcome {
            id,
            title,
            pass: pass && elapsed < budget,
            detail,
            elapsed,
            budget,
        };
        println!(
            "criterion {:2} {:<28} {} ({:.1}s, budget {}s)",
            o.id,
            o.title,
            if o.pass { "PASS" } else { "FAIL" },
            o.elapsed.as_secs_f64(),
            o.budget.as_secs()
        );
        for d in &o.detail {
            println!("    {d}");
        }
        out.push(o);
    };

    // 1 and 2 share one verify-oracle run.
    let (rep, t) = timed(|| {
        run(
            Command::VerifyOracle,
            &spec(Command::VerifyOracle, |s| {
                s.replicas = 1000;
                s.n = 40;
                s.beta = vec![0.5, 3.0];
                s.nu = vec![0.0, 0.5, 1.0];
                s.steps = 100_000;
            }),
        )
        .expect("verify-oracle")
    });
    record(
        1,
        "oracle equivalence",
        judge(&pick(
            &rep,
            &["random configurations", "exhaustive", "twist"],
        )),
        t,
        mins(1),
    );
    record(
        2,
        "backend equivalence",
        judge(&pick(&rep, &["backends at n=1000"])),
        t,
        mins(1),
    );

    let (res, t) = timed(|| {
        let mut lines = Vec::new();
        let mut pass = true;
        for beta in [1.1, 1.5, 2.0, 3.0] {
            let z = solve_z(beta).expect("solve_z");
            let r = (1.0 - z - (-beta * z).exp()).abs();
            pass &= r < 1e-12;
            lines.push(format!("solve_z({beta}) = {z:.15} residual {r:.3e}"));
        }
        let rep = run(
            Command::GiantCycles,
            &spec(Command::GiantCycles, |s| {
                s.replicas = 50;
            }),
        )
        .expect("giant-cycles");
        let (p, mut l) = judge(&pick(&rep, &["|V_G|/n"]));
        lines.append(&mut l);
        (pass && p, lines)
    });
    record(3, "fixed point and giant", res, t, mins(2));

    let (rep, t) = timed(|| {
        run(
            Command::ExploreStats,
            &spec(Command::ExploreStats, |s| {
                s.beta = vec![1.5, 2.0];
                s.replicas = 10_000;
                s.t_max = 200.0;
            }),
        )
        .expect("explore-stats")
    });
    record(
        4,
        "survival probability",
        judge(&pick(&rep, &["survival frequency", "P(m_2"])),
        t,
        mins(2),
    );
    record(
        5,
        "trajectory invariants",
        judge(&pick(&rep, &["invariants:"])),
        t,
        mins(2),
    );

    let (rep, t) = timed(|| {
        run(
            Command::PdInvariance,
            &spec(Command::PdInvariance, |s| {
                s.theta = vec![0.5, 1.0];
                s.probes = 100_000;
                s.replicas = 10_000;
                s.steps = 50;
            }),
        )
        .expect("pd-invariance")
    });
    record(
        6,
        "PD identities",
        judge(&pick(
            &rep,
            &["theta=0.5: mean sigma", "theta=0.5: mean sum of squares"],
        )),
        t,
        mins(1),
    );
    record(
        7,
        "split-merge invariance",
        judge(&pick(
            &rep,
            &["KS largest block, t=0 vs t=50", "identical start"],
        )),
        t,
        mins(5),
    );

    let (rep, t) = timed(|| {
        run(
            Command::GiantCycles,
            &spec(Command::GiantCycles, |s| {
                s.n = 100_000;
                s.beta = vec![1.5];
                s.nu = vec![0.5];
                s.replicas = 200;
            }),
        )
        .expect("giant-cycles")
    });
    record(
        8,
        "cycle sizes vs PD(1/2)",
        judge(&pick(&rep, &["sum of squared", "rescaled part"])),
        t,
        mins(20),
    );

    let (rep, t) = timed(|| {
        run(
            Command::Balance,
            &spec(Command::Balance, |s| {
                s.nu = vec![0.25, 0.5, 0.75, 1.0];
                s.probes = 1000;
            }),
        )
        .expect("balance")
    });
    record(
        9,
        "balance",
        judge(&pick(
            &rep,
            &["95th percentile", "B != k", "|B| > k", "vertices sampled"],
        )),
        t,
        mins(10),
    );

    let (res, t) = timed(|| {
        let main = run(
            Command::SplitProb,
            &spec(Command::SplitProb, |s| {
                s.nu = vec![0.5];
                s.probes = 10_000;
            }),
        )
        .expect("split-prob");
        let control = run(
            Command::SplitProb,
            &spec(Command::SplitProb, |s| {
                s.nu = vec![1.0];
                s.probes = 1000;
            }),
        )
        .expect("split-prob control");
        let mut checks = pick(&main, &["p_hat", "probes collected"]);
        checks.extend(pick(&control, &["p_hat"]));
        judge(&checks)
    });
    record(10, "split probability", res, t, mins(5));

    let (rep, t) = timed(|| {
        run(
            Command::LemmaChecks,
            &ExperimentSpec::defaults(Command::LemmaChecks),
        )
        .expect("lemma-checks")
    });
    record(
        11,
        "bound checks",
        judge(&pick(&rep, &["vs 2k/(n-1)", "vs 4sk^2/(n-1)"])),
        t,
        mins(5),
    );

    let failed: Vec<u32> = out.iter().filter(|o| !o.pass).map(|o| o.id).collect();
    println!(
        "acceptance: {}/{} criteria passed",
        out.len() - failed.len(),
        out.len()
    );
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("failed: {failed:?}");
        let over: Vec<u32> = out
            .iter()
            .filter(|o| o.elapsed >= o.budget)
            .map(|o| o.id)
            .collect();
        if !over.is_empty() {
            println!("over time budget: {over:?}");
        }
        ExitCode::FAILURE
    }
}
