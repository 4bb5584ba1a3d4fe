use std::fs;
use std::process::Command as Proc;

use loopsoup::experiments::minimize_counterexample;
use loopsoup::formats::csv;
use loopsoup::report::{write_outputs, Report, RunManifest};
use loopsoup::{run, Command, ExperimentSpec};
use loopsoup_core::config::sample_configuration;
use sha2::{Digest, Sha256};

fn small(cmd: Command) -> ExperimentSpec {
    let mut s = ExperimentSpec::defaults(cmd);
    match cmd {
        Command::VerifyOracle => {
            s.replicas = 60;
            s.steps = 2000;
        }
        Command::GiantCycles => {
            s.n = 2000;
            s.replicas = 4;
        }
        Command::Balance => {
            s.n = 5000;
            s.replicas = 2;
            s.probes = 50;
        }
        Command::SplitProb => {
            s.n = 5000;
            s.replicas = 8;
            s.probes = 40;
        }
        Command::ExploreStats => {
            s.n = 2000;
            s.replicas = 50;
            s.probes = 4;
        }
        Command::LemmaChecks => {
            s.n = 200;
            s.replicas = 5;
            s.s = vec![0, 50, 100];
        }
        Command::PdInvariance => {
            s.replicas = 100;
            s.probes = 200;
            s.steps = 10;
        }
    }
    s
}

/// Dists as CSV text; censored times are NaN, so rows are not compared as floats.
fn tables(r: &Report) -> Vec<String> {
    r.dists.iter().map(|d| csv(&d.header, &d.rows)).collect()
}

#[test]
fn every_command_is_deterministic() {
    for cmd in Command::ALL {
        let spec = small(cmd);
        let a = run(cmd, &spec).unwrap();
        let b = run(cmd, &spec).unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap(),
            "{cmd}"
        );
        assert_eq!(tables(&a), tables(&b), "{cmd}");
        assert!(!a.checks.is_empty(), "{cmd}");
    }
}

#[test]
fn seed_changes_results() {
    let mut spec = small(Command::GiantCycles);
    let a = run(Command::GiantCycles, &spec).unwrap();
    spec.seed += 1;
    let b = run(Command::GiantCycles, &spec).unwrap();
    assert_ne!(tables(&a), tables(&b));
}

#[test]
fn validation_rejects_bad_specs() {
    let mut s = small(Command::GiantCycles);
    s.replicas = 0;
    assert!(run(Command::GiantCycles, &s).is_err());
    let mut s = small(Command::Balance);
    s.beta = vec![0.8];
    assert!(run(Command::Balance, &s).is_err());
    let mut s = small(Command::PdInvariance);
    s.theta = vec![1.5];
    assert!(run(Command::PdInvariance, &s).is_err());
    let mut s = small(Command::ExploreStats);
    s.nu = vec![1.2];
    assert!(run(Command::ExploreStats, &s).is_err());
}

#[test]
fn subcritical_giant_cycles_has_only_soft_checks() {
    let mut s = small(Command::GiantCycles);
    s.beta = vec![0.8];
    let rep = run(Command::GiantCycles, &s).unwrap();
    assert!(rep.checks.iter().all(|c| !c.hard));
    assert!(rep.pass);
}

#[test]
fn outputs_and_digests() {
    let dir = tempfile::tempdir().unwrap();
    let spec = small(Command::PdInvariance);
    let rep = run(Command::PdInvariance, &spec).unwrap();
    let m = write_outputs(&rep, dir.path(), 1.5).unwrap();
    let text = fs::read_to_string(dir.path().join("manifest.json")).unwrap();
    let back: RunManifest = serde_json::from_str(&text).unwrap();
    assert_eq!(back.spec, spec);
    assert_eq!(back.replica_seeds, rep.replica_seeds);
    assert!(m.digests.contains_key("report.json"));
    assert!(m.digests.contains_key("dist_ks.csv"));
    for (name, digest) in &m.digests {
        let body = fs::read(dir.path().join(name)).unwrap();
        assert_eq!(&hex::encode(Sha256::digest(&body)), digest, "{name}");
    }
}

#[test]
fn minimizer_leaves_agreeing_configs_unchanged() {
    let cfg = sample_configuration(6, 1.0, 0.5, 3).unwrap();
    let min = minimize_counterexample(&cfg).unwrap();
    assert_eq!(min, cfg);
}

fn bin() -> Proc {
    Proc::new(env!("CARGO_BIN_EXE_loopsoup"))
}

#[test]
fn cli_writes_outputs_and_sets_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args([
            "lemma-checks",
            "--n",
            "200",
            "--replicas",
            "5",
            "--s",
            "0,50",
            "--k",
            "1,2",
            "--out",
        ])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("lemma-checks: PASS"));
    for f in [
        "manifest.json",
        "report.json",
        "dist_gaps.csv",
        "dist_small_splits.csv",
    ] {
        assert!(dir.path().join(f).exists(), "{f}");
    }
    let rep: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(rep["spec"]["k"], serde_json::json!([1, 2]));
}

#[test]
fn cli_spec_file_and_errors() {
    let dir = tempfile::tempdir().unwrap();
    let spec_path = dir.path().join("spec.json");
    fs::write(
        &spec_path,
        serde_json::to_string(&small(Command::VerifyOracle)).unwrap(),
    )
    .unwrap();
    let out = bin()
        .arg("verify-oracle")
        .arg("--spec")
        .arg(&spec_path)
        .output()
        .unwrap();
    assert!(out.status.success());
    let out = bin().args(["balance", "--beta", "0.5"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = bin().arg("no-such-command").output().unwrap();
    assert!(!out.status.success());
}

#[test]
fn cli_failing_hard_check_exits_one() {
    // At n = 2 the fixed point is far from the giant fraction.
    let out = bin()
        .args([
            "giant-cycles",
            "--n",
            "2",
            "--replicas",
            "3",
            "--beta",
            "1.5",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL"));
}

#[test]
fn command_names_round_trip() {
    for c in Command::ALL {
        assert_eq!(c.name().parse::<Command>().unwrap(), c);
    }
    assert!("nope".parse::<Command>().is_err());
}
