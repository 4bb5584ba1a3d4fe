use loopsoup_core::pd::{sample_pd, PartitionSample, DEFAULT_TRUNC};
use loopsoup_core::rng::seeded;
use loopsoup_core::splitmerge::{blocks_from, lengths, run_chain, run_marginal, CoupledPartitions};
use loopsoup_core::stats::{ks_critical, ks_statistic, mean, quantile};
use rand::Rng;

use super::{key, par_map, replica_seeds};
use crate::formats::chain_stats_csv;
use crate::report::{Check, Dist, Report};
use crate::spec::ExperimentSpec;

const KS_ALPHA: f64 = 0.01;
/// Chains in the identical-start and decay experiments.
const CHAINS: usize = 200;
const DECAY_STEPS: u64 = 100;
/// Truncation of PD starts fed to the chains; the leftover mass is kept as
/// one extra block.
const CHAIN_TRUNC: f64 = 1e-9;

fn pd_start(theta: f64, seed: u64) -> anyhow::Result<Vec<f64>> {
    let s = sample_pd(theta, CHAIN_TRUNC, &mut seeded(seed))?;
    let mut p = s.parts;
    if s.truncation_mass > 0.0 {
        p.push(s.truncation_mass);
    }
    Ok(p)
}

fn top2(p: &[f64]) -> (f64, f64) {
    let mut a = (0.0, 0.0);
    for &x in p {
        if x > a.0 {
            a = (x, a.0);
        } else if x > a.1 {
            a.1 = x;
        }
    }
    a
}

/// Times at which marginals are compared: a few intermediate ones and the
/// final step count.
fn snapshot_times(steps: u64) -> Vec<u64> {
    let mut t: Vec<u64> = [steps / 5, steps / 2, steps]
        .into_iter()
        .filter(|&x| x > 0)
        .collect();
    t.dedup();
    t
}

pub fn cmd_pd_invariance(spec: &ExperimentSpec) -> anyhow::Result<Report> {
    let mut rep = Report::new("pd-invariance", spec);
    let mut block = 0;
    let times = snapshot_times(spec.steps);
    let mut ks_dist = Dist::new("ks", &["theta", "t", "D_largest", "D_second", "critical"]);
    let mut decay = Dist::new("r_decay", &["theta", "t", "median_R", "q90_R"]);
    for &theta in &spec.theta {
        let tag = key(&[("theta", theta)]);

        let seeds = replica_seeds(spec.seed, block, spec.probes);
        block += 1;
        let samples: Vec<PartitionSample> = par_map(&seeds, |_, s| {
            Ok(sample_pd(theta, DEFAULT_TRUNC, &mut seeded(s))?)
        })?;
        let sig = mean(&samples.iter().map(|s| s.sigma(0.1)).collect::<Vec<_>>());
        let sq = mean(&samples.iter().map(|s| s.sum_squares()).collect::<Vec<_>>());
        rep.check(Check::within(
            &format!("{tag}: mean sigma(0.1) vs 1 - 0.9^theta"),
            sig,
            1.0 - 0.9f64.powf(theta),
            0.003,
        ));
        rep.check(Check::within(
            &format!("{tag}: mean sum of squares vs 1/(1+theta)"),
            sq,
            1.0 / (1.0 + theta),
            0.01,
        ));

        // Reference marginals at t = 0 and chains from independent starts.
        let ref_seeds = replica_seeds(spec.seed, block, spec.replicas);
        block += 1;
        let chain_seeds = replica_seeds(spec.seed, block, spec.replicas);
        block += 1;
        let reference = par_map(&ref_seeds, |_, s| Ok(top2(&pd_start(theta, s)?)))?;
        let snaps = par_map(&chain_seeds, |_, s| {
            let mut rng = seeded(s);
            let mut cur = blocks_from(&pd_start(theta, rng.random::<u64>())?);
            let mut last = 0;
            let mut out = Vec::with_capacity(times.len());
            for &t in &times {
                cur = run_marginal(&cur, t - last, theta, &mut rng)?;
                last = t;
                out.push(top2(&lengths(&cur)));
            }
            Ok(out)
        })?;
        rep.replica_seeds.extend(&chain_seeds);
        let r1: Vec<f64> = reference.iter().map(|x| x.0).collect();
        let r2: Vec<f64> = reference.iter().map(|x| x.1).collect();
        for (i, &t) in times.iter().enumerate() {
            let s1: Vec<f64> = snaps.iter().map(|x| x[i].0).collect();
            let s2: Vec<f64> = snaps.iter().map(|x| x[i].1).collect();
            let crit = ks_critical(KS_ALPHA, r1.len(), s1.len());
            let (d1, d2) = (ks_statistic(&r1, &s1), ks_statistic(&r2, &s2));
            ks_dist.rows.push(vec![theta, t as f64, d1, d2, crit]);
            let c1 = Check::at_most(
                &format!("{tag}: KS largest block, t=0 vs t={t}"),
                d1,
                crit,
                0.0,
            );
            rep.check(if t == spec.steps { c1 } else { c1.soft() });
            rep.check(
                Check::at_most(
                    &format!("{tag}: KS second block, t=0 vs t={t}"),
                    d2,
                    crit,
                    0.0,
                )
                .soft(),
            );
        }

        // Identical starts stay identical.
        let seeds = replica_seeds(spec.seed, block, CHAINS);
        block += 1;
        let worst = par_map(&seeds, |_, s| {
            let mut rng = seeded(s);
            let cp = CoupledPartitions::identical(&pd_start(theta, rng.random::<u64>())?)?;
            let (_, stats) =
                run_chain(&cp, spec.steps.max(DECAY_STEPS), theta, &spec.eps, &mut rng)?;
            Ok(stats.iter().map(|c| c.r.abs()).fold(0.0, f64::max))
        })?;
        rep.check(Check::exact(
            &format!("{tag}: identical start, max R over all chains and times"),
            worst.iter().copied().fold(0.0, f64::max),
            0.0,
        ));

        // Independent starts: decay of the unmatched mass.
        let seeds = replica_seeds(spec.seed, block, CHAINS);
        block += 1;
        let chains = par_map(&seeds, |_, s| {
            let mut rng = seeded(s);
            let y = pd_start(theta, rng.random::<u64>())?;
            let z = pd_start(theta, rng.random::<u64>())?;
            let cp = CoupledPartitions::new(&y, &z)?;
            Ok(run_chain(&cp, DECAY_STEPS, theta, &spec.eps, &mut rng)?.1)
        })?;
        let mut med = Vec::new();
        for t in 0..=DECAY_STEPS as usize {
            let rs: Vec<f64> = chains.iter().map(|c| c[t].r).collect();
            let m = quantile(&rs, 0.5);
            med.push(m);
            decay
                .rows
                .push(vec![theta, t as f64, m, quantile(&rs, 0.9)]);
        }
        rep.check(
            Check::at_most(
                &format!("{tag}: median R at t={DECAY_STEPS} vs t=0"),
                med[DECAY_STEPS as usize],
                med[0],
                0.0,
            )
            .soft(),
        );
        for &rho in &spec.rho {
            let frac = chains
                .iter()
                .filter(|c| c[DECAY_STEPS as usize].r > rho)
                .count() as f64
                / chains.len() as f64;
            rep.metric(&format!("{tag}: P(R > {rho}) at t={DECAY_STEPS}"), frac);
        }
        if let Some(first) = chains.first() {
            rep.artifacts.push((
                format!("chain_theta{theta}.csv"),
                chain_stats_csv(first, &spec.eps),
            ));
        }
    }
    rep.dists.push(ks_dist);
    rep.dists.push(decay);
    Ok(rep)
}
