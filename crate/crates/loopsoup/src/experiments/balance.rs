use loopsoup_core::cycles::{self, isqrt, CycleBackend};
use loopsoup_core::rng::seeded;
use loopsoup_core::stats::quantile;
use loopsoup_core::OrderedLinks;
use rand::Rng;

use super::{key, par_map, replica_seeds};
use crate::report::{Check, Dist, Report};
use crate::spec::ExperimentSpec;

/// Uniform vertices rejected until one lies in a cycle of length >= k.
const MAX_TRIES: usize = 1_000_000;

/// `(v, B(v, k))` for `count` vertices sampled uniformly from cycles of
/// length at least `k`.
fn sample_balances(
    n: u32,
    beta: f64,
    nu: f64,
    k: usize,
    count: usize,
    seed: u64,
) -> anyhow::Result<Vec<(u32, i64)>> {
    let mut rng = seeded(seed);
    let t = (beta * f64::from(n) / 2.0).floor() as usize;
    let cs = cycles::build(&OrderedLinks::sample(n, t, nu, &mut rng)?)?;
    let mut out = Vec::with_capacity(count);
    let mut tries = 0;
    while out.len() < count && tries < MAX_TRIES {
        tries += 1;
        let v = rng.random_range(1..=n);
        if cs.cycle_len(v)? >= k {
            out.push((v, cycles::balance(&cs, v, k)?));
        }
    }
    Ok(out)
}

pub fn cmd_balance(spec: &ExperimentSpec) -> anyhow::Result<Report> {
    let mut rep = Report::new("balance", spec);
    let n = spec.n;
    let k = isqrt(u64::from(n)) as usize;
    let threshold = 5.0 * f64::from(n).powf(0.25);
    let ln = f64::from(n).ln();
    let asymptotic = f64::from(n).powf(5.0 / 12.0) * ln * ln * ln;
    rep.metric("k", k);
    rep.metric("threshold_5n^(1/4)", threshold);
    rep.metric("asymptotic_threshold", asymptotic);
    let per = spec.probes.div_ceil(spec.replicas);
    let mut dist = Dist::new("balance", &["beta", "nu", "replica", "vertex", "B"]);
    let mut block = 0;
    for &beta in &spec.beta {
        for &nu in &spec.nu {
            let seeds = replica_seeds(spec.seed, block, spec.replicas);
            block += 1;
            let got = par_map(&seeds, |_, s| sample_balances(n, beta, nu, k, per, s))?;
            rep.replica_seeds.extend(&seeds);
            let mut abs = Vec::new();
            let mut over_k = 0u64;
            let mut not_k = 0u64;
            for (r, list) in got.iter().enumerate() {
                for &(v, b) in list {
                    if abs.len() == spec.probes {
                        break;
                    }
                    dist.rows
                        .push(vec![beta, nu, r as f64, f64::from(v), b as f64]);
                    abs.push(b.unsigned_abs() as f64);
                    over_k += u64::from(b.unsigned_abs() as usize > k);
                    not_k += u64::from(b != k as i64);
                }
            }
            let tag = key(&[("beta", beta), ("nu", nu)]);
            rep.metric(&format!("{tag}: vertices"), abs.len());
            rep.check(Check::exact(
                &format!("{tag}: vertices sampled"),
                abs.len() as f64,
                spec.probes as f64,
            ));
            rep.check(Check::exact(
                &format!("{tag}: |B| > k count"),
                over_k as f64,
                0.0,
            ));
            if abs.is_empty() {
                continue;
            }
            let p95 = quantile(&abs, 0.95);
            let exceed = abs.iter().filter(|&&b| b > threshold).count() as f64 / abs.len() as f64;
            rep.metric(&format!("{tag}: exceedance_fraction"), exceed);
            rep.metric(&format!("{tag}: median_abs_B"), quantile(&abs, 0.5));
            if nu == 1.0 {
                rep.check(Check::exact(
                    &format!("{tag}: B != k count"),
                    not_k as f64,
                    0.0,
                ));
            } else {
                rep.check(Check::at_most(
                    &format!("{tag}: 95th percentile of |B|"),
                    p95,
                    threshold,
                    0.0,
                ));
            }
        }
    }
    rep.dists.push(dist);
    Ok(rep)
}
