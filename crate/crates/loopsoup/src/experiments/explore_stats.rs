use loopsoup_core::exploration::{
    check_invariants, coupled_run, coupling_bound, explore_onfly, frontier_decompose,
    simple_explore, solve_z, winding_sup, ExplorationPoint, InvariantReport,
};
use loopsoup_core::rng::seeded;
use loopsoup_core::stats::{binomial_sd, ks_critical, ks_statistic, mean, quantile, slope};
use rand::Rng;

use super::{key, par_map, replica_seeds};
use crate::report::{Check, Dist, Report};
use crate::spec::ExperimentSpec;

/// Horizon of the coupling runs.
pub(crate) const COUPLING_T: f64 = 10.0;
pub(crate) const WINDING_T: [f64; 3] = [1e2, 1e3, 1e4];
const TAIL_T: std::ops::RangeInclusive<u32> = 2..=30;
const KS_ALPHA: f64 = 0.01;

struct Run {
    tau: Option<f64>,
    record_minima: usize,
    /// `Delta_1` and `Delta_2` when both end well inside the horizon.
    delta: (Option<f64>, Option<f64>),
}

fn survival_run(n: u32, beta: f64, nu: f64, t_max: f64, seed: u64) -> anyhow::Result<Run> {
    let (_, st, zp) = simple_explore(n, beta, nu, seed, t_max)?;
    let fd = frontier_decompose(&zp);
    let settled = |k: usize| {
        fd.frontier_times
            .get(k)
            .filter(|&&l| l <= t_max / 2.0)
            .map(|_| fd.gaps[k])
    };
    let delta = if st.tau.is_none() {
        (settled(1), settled(2))
    } else {
        (None, None)
    };
    Ok(Run {
        tau: st.tau,
        record_minima: fd.record_minima.len(),
        delta,
    })
}

/// Both exploration variants with random parameters; counts invariant
/// failures and disagreements between `tau^Y` and the hitting time of `-1`.
fn fuzz_run(seed: u64) -> anyhow::Result<(InvariantReport, u64)> {
    let mut rng = seeded(seed);
    let n = rng.random_range(2..=200u32);
    let beta = rng.random_range(0.3..3.0);
    let nu = rng.random_range(0.0..=1.0);
    let sub = rng.random::<u64>();
    let (t, st, zp) = simple_explore(n, beta, nu, sub, 30.0)?;
    let mut rep = check_invariants(&t);
    let hit = zp.first_hit_minus_one();
    let tau_bad = match (st.tau, hit) {
        (None, None) => 0,
        (Some(a), Some(b)) if (a - b).abs() <= 1e-9 => 0,
        _ => 1,
    };
    let start = ExplorationPoint::new(rng.random_range(1..=n), 0.0, 1);
    let (t, _) = explore_onfly(n, beta, nu, sub, start, 30.0)?;
    rep.add(&check_invariants(&t));
    Ok((rep, tau_bad))
}

pub fn cmd_explore_stats(spec: &ExperimentSpec) -> anyhow::Result<Report> {
    let mut rep = Report::new("explore-stats", spec);
    let (n, nu) = (spec.n, spec.nu[0]);
    let mut runs_dist = Dist::new(
        "survival",
        &["beta", "replica", "survived", "tau", "record_minima"],
    );
    let mut block = 0;
    for &beta in &spec.beta {
        let tag = key(&[("beta", beta)]);
        let seeds = replica_seeds(spec.seed, block, spec.replicas);
        block += 1;
        let runs = par_map(&seeds, |_, s| survival_run(n, beta, nu, spec.t_max, s))?;
        rep.replica_seeds.extend(&seeds);
        let total = runs.len() as f64;
        for (r, x) in runs.iter().enumerate() {
            runs_dist.rows.push(vec![
                beta,
                r as f64,
                f64::from(u8::from(x.tau.is_none())),
                x.tau.unwrap_or(f64::NAN),
                x.record_minima as f64,
            ]);
        }
        let surv = runs.iter().filter(|x| x.tau.is_none()).count() as f64 / total;
        let m2 = runs.iter().filter(|x| x.record_minima >= 2).count() as f64 / total;
        rep.metric(
            &format!("{tag}: survival_sd"),
            binomial_sd(surv, runs.len() as u64),
        );
        if beta > 1.0 {
            let z = solve_z(beta)?;
            rep.check(Check::within(
                &format!("{tag}: survival frequency vs z"),
                surv,
                z,
                0.02,
            ));
            rep.check(Check::within(
                &format!("{tag}: P(m_2 < inf) vs 1 - z"),
                m2,
                1.0 - z,
                0.02,
            ));
        } else {
            rep.metric(&format!("{tag}: survival"), surv);
        }

        let taus: Vec<f64> = runs.iter().filter_map(|x| x.tau).collect();
        if !taus.is_empty() {
            let (mut xs, mut ys) = (Vec::new(), Vec::new());
            for t in TAIL_T {
                let p =
                    taus.iter().filter(|&&x| x >= f64::from(t)).count() as f64 / taus.len() as f64;
                if p > 0.0 {
                    xs.push(f64::from(t));
                    ys.push(p.ln());
                }
            }
            if xs.len() >= 2 {
                let s = slope(&xs, &ys);
                rep.check(
                    Check::at_most(&format!("{tag}: log P(tau >= t) slope"), s, 0.0, 0.0)
                        .soft()
                        .note("exponential tail of the closing time given closure"),
                );
            }
        }

        let d1: Vec<f64> = runs.iter().filter_map(|x| x.delta.0).collect();
        let d2: Vec<f64> = runs.iter().filter_map(|x| x.delta.1).collect();
        if !d1.is_empty() && !d2.is_empty() {
            let d = ks_statistic(&d1, &d2);
            let crit = ks_critical(KS_ALPHA, d1.len(), d2.len());
            rep.check(
                Check::at_most(&format!("{tag}: KS Delta_1 vs Delta_2"), d, crit, 0.0)
                    .soft()
                    .note("frontier gaps are i.i.d. given survival"),
            );
            rep.metric(&format!("{tag}: Delta_1 mean"), mean(&d1));
            rep.metric(&format!("{tag}: Delta_1 p99"), quantile(&d1, 0.99));
        }

        let seeds = replica_seeds(spec.seed, block, spec.replicas);
        block += 1;
        let outs = par_map(&seeds, |_, s| Ok(coupled_run(n, beta, nu, s, COUPLING_T)?))?;
        let fails = outs.iter().filter(|o| o.failed()).count() as f64 / outs.len() as f64;
        let silent = outs.iter().filter(|o| !o.agreed() && !o.failed()).count();
        let bound = coupling_bound(n, beta, COUPLING_T).min(1.0);
        rep.check(Check::at_most(
            &format!("{tag}: coupling failure rate vs bound"),
            fails,
            bound,
            3.0 * binomial_sd(bound, outs.len() as u64),
        ));
        rep.check(Check::exact(
            &format!("{tag}: divergence without a failure"),
            silent as f64,
            0.0,
        ));
    }
    rep.dists.push(runs_dist);

    let beta = spec.beta[0];
    let mut wind = Dist::new("winding", &["T", "run", "sup_abs_L"]);
    let mut medians = Vec::new();
    for &t in &WINDING_T {
        let seeds = replica_seeds(spec.seed, block, spec.probes.max(1));
        block += 1;
        let sups = par_map(&seeds, |_, s| {
            let (traj, st, _) = simple_explore(n, beta, nu, s, t)?;
            Ok(if st.tau.is_none() {
                Some(winding_sup(&traj, t)?)
            } else {
                None
            })
        })?;
        let sups: Vec<f64> = sups.into_iter().flatten().collect();
        for (i, s) in sups.iter().enumerate() {
            wind.rows.push(vec![t, i as f64, *s]);
        }
        if !sups.is_empty() {
            medians.push((t.ln(), quantile(&sups, 0.5).ln()));
        }
    }
    rep.dists.push(wind);
    if medians.len() >= 2 {
        let (xs, ys): (Vec<f64>, Vec<f64>) = medians.into_iter().unzip();
        rep.check(
            Check::within(
                "winding: log median sup |L| vs log T slope",
                slope(&xs, &ys),
                0.5,
                0.1,
            )
            .soft()
            .note("diffusive scaling on survivors"),
        );
    }

    let seeds = replica_seeds(spec.seed, block, spec.replicas);
    let fuzz = par_map(&seeds, |_, s| fuzz_run(s))?;
    let mut total = InvariantReport::default();
    let mut tau_bad = 0;
    for (r, b) in &fuzz {
        total.add(r);
        tau_bad += b;
    }
    rep.metric("invariant_checks", total.checks);
    rep.check(Check::exact(
        "invariants: K <= t + I + 1 violations",
        total.k_bound as f64,
        0.0,
    ));
    rep.check(Check::exact(
        "invariants: J <= I <= 2J violations",
        total.ji_bound as f64,
        0.0,
    ));
    rep.check(Check::exact(
        "invariants: ||B| - |L|| <= 3 violations",
        total.winding_bound as f64,
        0.0,
    ));
    rep.check(Check::exact(
        "invariants: tau^Y vs first hit of -1",
        tau_bad as f64,
        0.0,
    ));
    Ok(rep)
}
