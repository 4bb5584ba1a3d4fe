//! Reports, raw distributions and the run manifest.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::formats::csv;
use crate::spec::ExperimentSpec;

/// One assertion. Hard checks decide the exit code; soft checks are
/// reported only.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub target: f64,
    pub tolerance: f64,
    pub hard: bool,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub note: String,
}

impl Check {
    /// `|value - target| <= tolerance`.
    pub fn within(name: &str, value: f64, target: f64, tolerance: f64) -> Check {
        Check {
            name: name.into(),
            value,
            target,
            tolerance,
            hard: true,
            pass: (value - target).abs() <= tolerance,
            note: String::new(),
        }
    }

    /// `value <= bound + slack`.
    pub fn at_most(name: &str, value: f64, bound: f64, slack: f64) -> Check {
        Check {
            name: name.into(),
            value,
            target: bound,
            tolerance: slack,
            hard: true,
            pass: value <= bound + slack,
            note: String::new(),
        }
    }

    pub fn exact(name: &str, value: f64, target: f64) -> Check {
        Check {
            name: name.into(),
            value,
            target,
            tolerance: 0.0,
            hard: true,
            pass: value == target,
            note: String::new(),
        }
    }

    pub fn soft(mut self) -> Check {
        self.hard = false;
        self
    }

    pub fn note(mut self, s: impl Into<String>) -> Check {
        self.note = s.into();
        self
    }
}

/// A table written as `dist_<name>.csv`.
#[derive(Debug, Clone, PartialEq)]
pub struct Dist {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Dist {
    pub fn new(name: &str, header: &[&str]) -> Dist {
        Dist {
            name: name.into(),
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub spec: ExperimentSpec,
    pub checks: Vec<Check>,
    pub metrics: BTreeMap<String, serde_json::Value>,
    pub pass: bool,
    #[serde(skip)]
    pub dists: Vec<Dist>,
    /// Extra text files, e.g. a counterexample dump.
    #[serde(skip)]
    pub artifacts: Vec<(String, String)>,
    #[serde(skip)]
    pub replica_seeds: Vec<u64>,
}

impl Report {
    pub fn new(command: &str, spec: &ExperimentSpec) -> Report {
        Report {
            command: command.into(),
            spec: spec.clone(),
            checks: Vec::new(),
            metrics: BTreeMap::new(),
            pass: true,
            dists: Vec::new(),
            artifacts: Vec::new(),
            replica_seeds: Vec::new(),
        }
    }

    pub fn check(&mut self, c: Check) {
        if c.hard && !c.pass {
            self.pass = false;
        }
        self.checks.push(c);
    }

    pub fn metric(&mut self, key: &str, v: impl Serialize) {
        let v = serde_json::to_value(v).unwrap_or(serde_json::Value::Null);
        self.metrics.insert(key.into(), v);
    }

    pub fn find(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// One line per check, `PASS`/`FAIL`/`soft` and the numbers.
    pub fn summary(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            let tag = match (c.pass, c.hard) {
                (true, _) => "PASS",
                (false, true) => "FAIL",
                (false, false) => "soft-fail",
            };
            s.push_str(&format!(
                "{tag:9} {}: value={:.6} target={:.6} tol={:.6}\n",
                c.name, c.value, c.target, c.tolerance
            ));
        }
        s
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub spec: ExperimentSpec,
    pub command: String,
    pub replica_seeds: Vec<u64>,
    pub build: String,
    pub wall_clock_secs: f64,
    /// SHA-256 of every file written, keyed by file name.
    pub digests: BTreeMap<String, String>,
}

pub fn build_id() -> String {
    let profile = if cfg!(debug_assertions) {
        "debug"
    } else {
        "release"
    };
    format!(
        "loopsoup {} {} {}-{}",
        env!("CARGO_PKG_VERSION"),
        profile,
        std::env::consts::ARCH,
        std::env::consts::OS
    )
}

fn write_digest(
    dir: &Path,
    name: &str,
    body: &[u8],
    digests: &mut BTreeMap<String, String>,
) -> std::io::Result<()> {
    fs::write(dir.join(name), body)?;
    digests.insert(name.into(), hex::encode(Sha256::digest(body)));
    Ok(())
}

/// Write `dist_*.csv`, artifacts, `report.json` and finally `manifest.json`.
pub fn write_outputs(
    report: &Report,
    dir: &Path,
    wall_clock_secs: f64,
) -> anyhow::Result<RunManifest> {
    fs::create_dir_all(dir)?;
    let mut digests = BTreeMap::new();
    for d in &report.dists {
        let body = csv(&d.header, &d.rows);
        write_digest(
            dir,
            &format!("dist_{}.csv", d.name),
            body.as_bytes(),
            &mut digests,
        )?;
    }
    for (name, body) in &report.artifacts {
        write_digest(dir, name, body.as_bytes(), &mut digests)?;
    }
    let body = serde_json::to_vec_pretty(report)?;
    write_digest(dir, "report.json", &body, &mut digests)?;
    let manifest = RunManifest {
        spec: report.spec.clone(),
        command: report.command.clone(),
        replica_seeds: report.replica_seeds.clone(),
        build: build_id(),
        wall_clock_secs,
        digests,
    };
    fs::write(
        dir.join("manifest.json"),
        serde_json::to_vec_pretty(&manifest)?,
    )?;
    Ok(manifest)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spec::Command;

    #[test]
    fn check_constructors() {
        assert!(Check::within("a", 0.51, 0.5, 0.02).pass);
        assert!(!Check::within("a", 0.53, 0.5, 0.02).pass);
        assert!(Check::at_most("b", 1.1, 1.0, 0.2).pass);
        assert!(!Check::at_most("b", 1.3, 1.0, 0.2).pass);
        assert!(Check::exact("c", 0.0, 0.0).pass);
        assert!(!Check::exact("c", 1.0, 0.0).soft().hard);
    }

    #[test]
    fn soft_failures_do_not_fail_the_report() {
        let mut r = Report::new("x", &ExperimentSpec::defaults(Command::Balance));
        r.check(Check::exact("soft", 1.0, 0.0).soft());
        assert!(r.pass);
        assert!(r.summary().contains("soft-fail"));
        r.check(Check::exact("hard", 1.0, 0.0));
        assert!(!r.pass);
        assert!(r.find("hard").is_some());
    }
}
