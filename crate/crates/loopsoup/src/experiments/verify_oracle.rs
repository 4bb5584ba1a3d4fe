use loopsoup_core::cycles::{self, CycleBackend, NaiveCycles, TreapCycles};
use loopsoup_core::rng::seeded;
use loopsoup_core::{tracer, Configuration, CycleSet, Edge, Link, Mark};
use rand::Rng;

use super::{par_map, replica_seeds};
use crate::formats::{write_config, write_cycles};
use crate::report::{Check, Dist, Report};
use crate::spec::ExperimentSpec;

struct Outcome {
    mismatch: bool,
    twists: u64,
    nu: f64,
    n: u32,
    links: usize,
}

fn agrees(cfg: &Configuration) -> anyhow::Result<bool> {
    let a = tracer::cycles_at_zero(cfg)?;
    let b = cycles::build(&cfg.to_ordered()?)?.canonical_cycles();
    Ok(a == b)
}

/// Drop links one at a time while the tracer and the incremental build still
/// disagree.
pub fn minimize_counterexample(cfg: &Configuration) -> anyhow::Result<Configuration> {
    let mut cur = cfg.clone();
    let mut i = 0;
    while i < cur.links.len() {
        let mut links = cur.links.clone();
        links.remove(i);
        let cand = Configuration::new(cur.n, cur.beta, cur.nu, links)?;
        if !agrees(&cand)? {
            cur = cand;
        } else {
            i += 1;
        }
    }
    Ok(cur)
}

fn twist_count(cfg: &Configuration) -> anyhow::Result<u64> {
    let ord = cfg.to_ordered()?;
    let mut cs = CycleSet::singletons(cfg.n)?;
    let mut t = 0;
    for &(e, m) in ord.seq.iter().rev() {
        t += u64::from(cs.apply_edge(e, m)?.is_twist());
    }
    Ok(t)
}

/// Every link sequence on `n` vertices with at most `max_links` links and
/// all mark choices, phases evenly spaced. Returns (cases, mismatches).
fn exhaustive(n: u32, max_links: usize) -> anyhow::Result<(u64, Vec<Configuration>)> {
    let mut edges = Vec::new();
    for u in 1..=n {
        for v in u + 1..=n {
            edges.push(Edge::new(u, v)?);
        }
    }
    let choices = edges.len() * 2;
    let (mut cases, mut bad) = (0, Vec::new());
    for len in 0..=max_links {
        let total = choices.pow(len as u32);
        for code in 0..total {
            let mut c = code;
            let mut links = Vec::with_capacity(len);
            for i in 0..len {
                let pick = c % choices;
                c /= choices;
                links.push(Link {
                    edge: edges[pick / 2],
                    phase: (i + 1) as f64 / (len + 1) as f64,
                    mark: if pick % 2 == 0 {
                        Mark::Cross
                    } else {
                        Mark::Bar
                    },
                });
            }
            let cfg = Configuration::new(n, 1.0, 0.5, links)?;
            cases += 1;
            if !agrees(&cfg)? {
                bad.push(cfg);
            }
        }
    }
    Ok((cases, bad))
}

/// Identical random operations on both backends; compares event kinds at
/// every step and the canonical cycles every `every` steps and at the end.
fn backend_fuzz(n: u32, ops: u64, seed: u64, every: u64) -> anyhow::Result<(u64, u64)> {
    let mut rng = seeded(seed);
    let mut a = NaiveCycles::singletons(n)?;
    let mut b = TreapCycles::singletons(n)?;
    let (mut compared, mut bad) = (0, 0);
    for i in 1..=ops {
        let u = rng.random_range(1..=n);
        let mut v = rng.random_range(1..n);
        if v >= u {
            v += 1;
        }
        let m = if rng.random::<bool>() {
            Mark::Cross
        } else {
            Mark::Bar
        };
        let (ea, eb) = (a.apply_link(u, v, m)?, b.apply_link(u, v, m)?);
        if ea.kind() != eb.kind() {
            bad += 1;
        }
        if i % every == 0 || i == ops {
            compared += 1;
            if a.canonical_cycles() != b.canonical_cycles() {
                bad += 1;
            }
        }
    }
    Ok((compared, bad))
}

pub fn cmd_verify_oracle(spec: &ExperimentSpec) -> anyhow::Result<Report> {
    let mut rep = Report::new("verify-oracle", spec);
    let seeds = replica_seeds(spec.seed, 0, spec.replicas);
    let (b_lo, b_hi) = spec
        .beta
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), &b| {
            (lo.min(b), hi.max(b))
        });
    let max_n = spec.n.clamp(2, 400);
    let outcomes = par_map(&seeds, |r, seed| {
        let mut rng = seeded(seed);
        let n = rng.random_range(2..=max_n);
        let beta = if b_hi > b_lo {
            rng.random_range(b_lo..b_hi)
        } else {
            b_lo
        };
        let nu = spec.nu[r % spec.nu.len()];
        let cfg = Configuration::sample(n, beta, nu, &mut rng)?;
        let mismatch = !agrees(&cfg)?;
        let twists = if nu == 1.0 { twist_count(&cfg)? } else { 0 };
        let out = Outcome {
            mismatch,
            twists,
            nu,
            n,
            links: cfg.len(),
        };
        Ok((out, mismatch.then_some(cfg)))
    })?;
    rep.replica_seeds = seeds;

    let mut dist = Dist::new(
        "configs",
        &["replica", "n", "nu", "links", "mismatch", "twists"],
    );
    let mut mismatches = 0u64;
    let mut first_bad = None;
    let (mut nu1_cases, mut nu1_twists) = (0u64, 0u64);
    for (r, (o, cfg)) in outcomes.into_iter().enumerate() {
        dist.rows.push(vec![
            r as f64,
            f64::from(o.n),
            o.nu,
            o.links as f64,
            f64::from(u8::from(o.mismatch)),
            o.twists as f64,
        ]);
        mismatches += u64::from(o.mismatch);
        if o.nu == 1.0 {
            nu1_cases += 1;
            nu1_twists += o.twists;
        }
        if first_bad.is_none() {
            first_bad = cfg;
        }
    }
    rep.dists.push(dist);
    rep.check(Check::exact(
        "random configurations: mismatches",
        mismatches as f64,
        0.0,
    ));
    if nu1_cases > 0 {
        rep.check(Check::exact(
            "crosses only: twist events",
            nu1_twists as f64,
            0.0,
        ));
    }

    for (n, max_links) in [(2u32, 3usize), (3, 3)] {
        let (cases, bad) = exhaustive(n, max_links)?;
        rep.metric(&format!("exhaustive_n{n}_cases"), cases);
        rep.check(Check::exact(
            &format!("exhaustive n={n}, up to {max_links} links: mismatches"),
            bad.len() as f64,
            0.0,
        ));
        if first_bad.is_none() {
            first_bad = bad.into_iter().next();
        }
    }

    if let Some(cfg) = first_bad {
        let min = minimize_counterexample(&cfg)?;
        let ord = min.to_ordered()?;
        let body = format!(
            "# configuration\n{}# tracer\n{}# incremental\n{}",
            write_config(&min),
            write_cycles(&tracer::cycles_at_zero(&min)?),
            write_cycles(&cycles::build(&ord)?.canonical_cycles())
        );
        rep.artifacts.push(("counterexample.txt".into(), body));
    }

    let fuzz_n = 1000;
    let (compared, bad) =
        backend_fuzz(fuzz_n, spec.steps, replica_seeds(spec.seed, 1, 1)[0], 1000)?;
    rep.metric("backend_fuzz_ops", spec.steps);
    rep.metric("backend_fuzz_comparisons", compared);
    rep.check(Check::exact(
        &format!("backends at n={fuzz_n}: disagreements"),
        bad as f64,
        0.0,
    ));
    Ok(rep)
}
