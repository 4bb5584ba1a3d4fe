use loopsoup_core::cycles::{self, CycleBackend};
use loopsoup_core::exploration::solve_z;
use loopsoup_core::pd::{sample_pd, sum_squares, DEFAULT_TRUNC};
use loopsoup_core::rng::seeded;
use loopsoup_core::stats::{mean, sem, UnionFind};
use loopsoup_core::OrderedLinks;
use rand::Rng;
use rand_distr::{Distribution, Poisson};

use super::{key, par_map, replica_seeds};
use crate::report::{Check, Dist, Report};
use crate::spec::ExperimentSpec;

/// Monte Carlo size of the PD(1/2) reference.
pub(crate) const PD_REFERENCE_SAMPLES: usize = 100_000;
const TOP: usize = 3;

#[derive(Debug, Clone)]
pub(crate) struct Replica {
    pub links: usize,
    pub giant_fraction: f64,
    /// Squares of `|C| / |V_G|` summed over cycles inside `V_G`.
    pub sum_squares: f64,
    pub top: [f64; TOP],
    pub largest_cycle: usize,
    pub cycle_count: usize,
}

fn link_count<R: Rng>(n: u32, beta: f64, poisson: bool, rng: &mut R) -> anyhow::Result<usize> {
    let mean = beta * f64::from(n) / 2.0;
    Ok(if poisson {
        Poisson::new(mean)?.sample(rng) as usize
    } else {
        mean.floor() as usize
    })
}

pub(crate) fn replica(
    n: u32,
    beta: f64,
    nu: f64,
    poisson: bool,
    seed: u64,
) -> anyhow::Result<Replica> {
    let mut rng = seeded(seed);
    let t = link_count(n, beta, poisson, &mut rng)?;
    let ord = OrderedLinks::sample(n, t, nu, &mut rng)?;
    let cs = cycles::build(&ord)?;
    let mut uf = UnionFind::new(n as usize);
    for (e, _) in &ord.seq {
        uf.union(e.lo() - 1, e.hi() - 1);
    }
    let (root, giant) = uf.largest();
    let summaries = cs.summaries();
    let inside: Vec<usize> = summaries
        .iter()
        .filter(|&&(v, _)| uf.find(v - 1) == root)
        .map(|&(_, s)| s)
        .collect();
    let parts = cycles::rescaled_sizes(&inside, giant as usize)?;
    let mut top = [0.0; TOP];
    for (slot, p) in top.iter_mut().zip(&parts) {
        *slot = *p;
    }
    Ok(Replica {
        links: t,
        giant_fraction: f64::from(giant) / f64::from(n),
        sum_squares: sum_squares(&parts),
        top,
        largest_cycle: summaries.iter().map(|s| s.1).max().unwrap_or(0),
        cycle_count: summaries.len(),
    })
}

/// Means of the top parts of PD(1/2) from `samples` draws.
pub(crate) fn pd_reference(samples: usize, master: u64) -> anyhow::Result<[f64; TOP]> {
    let seeds = replica_seeds(master, 7, samples);
    let tops = par_map(&seeds, |_, s| {
        let p = sample_pd(0.5, DEFAULT_TRUNC, &mut seeded(s))?;
        let mut top = [0.0; TOP];
        for (slot, x) in top.iter_mut().zip(&p.parts) {
            *slot = *x;
        }
        Ok(top)
    })?;
    let mut m = [0.0; TOP];
    for (i, slot) in m.iter_mut().enumerate() {
        *slot = tops.iter().map(|t| t[i]).sum::<f64>() / samples as f64;
    }
    Ok(m)
}

pub fn cmd_giant_cycles(spec: &ExperimentSpec) -> anyhow::Result<Report> {
    let mut rep = Report::new("giant-cycles", spec);
    let n = spec.n;
    let reference = pd_reference(PD_REFERENCE_SAMPLES, spec.seed)?;
    rep.metric("pd_half_reference_top", reference);
    let mut dist = Dist::new(
        "replicas",
        &[
            "beta",
            "nu",
            "replica",
            "links",
            "giant_fraction",
            "sum_squares",
            "p1",
            "p2",
            "p3",
            "largest_cycle",
            "cycles",
        ],
    );
    let mut block = 0;
    for &beta in &spec.beta {
        for &nu in &spec.nu {
            let seeds = replica_seeds(spec.seed, block, spec.replicas);
            block += 1;
            let reps = par_map(&seeds, |_, s| replica(n, beta, nu, spec.poisson, s))?;
            rep.replica_seeds.extend(&seeds);
            for (r, x) in reps.iter().enumerate() {
                dist.rows.push(vec![
                    beta,
                    nu,
                    r as f64,
                    x.links as f64,
                    x.giant_fraction,
                    x.sum_squares,
                    x.top[0],
                    x.top[1],
                    x.top[2],
                    x.largest_cycle as f64,
                    x.cycle_count as f64,
                ]);
            }
            let tag = key(&[("beta", beta), ("nu", nu)]);
            let giant: Vec<f64> = reps.iter().map(|x| x.giant_fraction).collect();
            let sq: Vec<f64> = reps.iter().map(|x| x.sum_squares).collect();
            rep.metric(&format!("{tag}: giant_fraction_sem"), sem(&giant));
            rep.metric(&format!("{tag}: sum_squares_sem"), sem(&sq));
            if beta > 1.0 {
                let z = solve_z(beta)?;
                rep.check(Check::within(
                    &format!("{tag}: mean |V_G|/n vs z"),
                    mean(&giant),
                    z,
                    0.01,
                ));
                rep.check(Check::within(
                    &format!("{tag}: mean sum of squared rescaled cycle sizes vs 2/3"),
                    mean(&sq),
                    2.0 / 3.0,
                    0.05,
                ));
                for (i, r) in reference.iter().enumerate() {
                    let m = mean(&reps.iter().map(|x| x.top[i]).collect::<Vec<_>>());
                    rep.check(Check::within(
                        &format!("{tag}: mean rescaled part {} vs PD(1/2)", i + 1),
                        m,
                        *r,
                        0.05,
                    ));
                }
            } else {
                let ln = f64::from(n).ln();
                let largest = reps.iter().map(|x| x.largest_cycle).max().unwrap_or(0);
                rep.check(
                    Check::at_most(
                        &format!("{tag}: largest cycle vs (log n)^2"),
                        largest as f64,
                        ln * ln,
                        0.0,
                    )
                    .soft()
                    .note("subcritical regime, report only"),
                );
            }
        }
    }
    rep.dists.push(dist);
    Ok(rep)
}
