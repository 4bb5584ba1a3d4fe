use loopsoup_core::cycles::{self, isqrt, segment_partition, CycleBackend};
use loopsoup_core::rng::seeded;
use loopsoup_core::stats::{binomial_sd, mean};
use loopsoup_core::{Mark, OrderedLinks};
use rand::Rng;

use super::{key, par_map, replica_seeds};
use crate::report::{Check, Dist, Report};
use crate::spec::ExperimentSpec;

/// Replicas run per parallel batch.
const BATCH: usize = 64;

#[derive(Debug, Clone, Copy)]
struct Probe {
    /// `v` and `u` have the same stored orientation.
    same: bool,
    /// Exact conditional probability `#same / |S|`.
    p: f64,
    size: usize,
}

/// Run `steps` link insertions on a fresh configuration. A step whose
/// second endpoint `w` lands in an untouched segment of length at least
/// `floor(sqrt n)` in the cycle of `u` is a probe: the endpoint is
/// re-drawn uniformly inside that segment. Segments containing an endpoint
/// of an applied link become touched.
fn replica(n: u32, beta: f64, nu: f64, steps: u64, seed: u64) -> anyhow::Result<Vec<Probe>> {
    let mut rng = seeded(seed);
    let t = (beta * f64::from(n) / 2.0).floor() as usize;
    let mut cs = cycles::build(&OrderedLinks::sample(n, t, nu, &mut rng)?)?;
    let s_min = isqrt(u64::from(n)) as usize;
    let mut segments: Vec<Vec<u32>> = Vec::new();
    let mut seg_of = vec![0usize; n as usize + 1];
    for c in cs.cycles() {
        for seg in segment_partition(&c, n) {
            for &v in &seg {
                seg_of[v as usize] = segments.len();
            }
            segments.push(seg);
        }
    }
    let mut touched = vec![false; segments.len()];
    let mut probes = Vec::new();
    for _ in 0..steps {
        let u = rng.random_range(1..=n);
        let w = rng.random_range(1..=n);
        let sw = seg_of[w as usize];
        let seg = &segments[sw];
        let v = if !touched[sw] && seg.len() >= s_min && cs.cycle_id(u)? == cs.cycle_id(w)? {
            let v = seg[rng.random_range(0..seg.len())];
            let du = cs.stored_direction(u)?;
            let mut same = 0usize;
            for &x in seg {
                same += usize::from(cs.stored_direction(x)? == du);
            }
            probes.push(Probe {
                same: cs.stored_direction(v)? == du,
                p: same as f64 / seg.len() as f64,
                size: seg.len(),
            });
            v
        } else {
            w
        };
        if v == u {
            continue;
        }
        cs.apply_link(u, v, Mark::sample(nu, &mut rng))?;
        touched[seg_of[u as usize]] = true;
        touched[seg_of[v as usize]] = true;
    }
    Ok(probes)
}

pub fn cmd_split_prob(spec: &ExperimentSpec) -> anyhow::Result<Report> {
    let mut rep = Report::new("split-prob", spec);
    let n = spec.n;
    let mut dist = Dist::new("probes", &["beta", "nu", "replica", "same", "p", "segment"]);
    let mut block = 0;
    for &beta in &spec.beta {
        for &nu in &spec.nu {
            let seeds = replica_seeds(spec.seed, block, spec.replicas);
            block += 1;
            let mut probes: Vec<(usize, Probe)> = Vec::new();
            let mut used = 0;
            while probes.len() < spec.probes && used < seeds.len() {
                let end = (used + BATCH).min(seeds.len());
                let got = par_map(&seeds[used..end], |_, s| {
                    replica(n, beta, nu, spec.steps, s)
                })?;
                for (i, list) in got.into_iter().enumerate() {
                    probes.extend(list.into_iter().map(|p| (used + i, p)));
                }
                used = end;
            }
            probes.truncate(spec.probes);
            rep.replica_seeds.extend(&seeds[..used]);
            let tag = key(&[("beta", beta), ("nu", nu)]);
            rep.metric(&format!("{tag}: replicas_used"), used);
            rep.metric(&format!("{tag}: probes"), probes.len());
            for (r, p) in &probes {
                dist.rows.push(vec![
                    beta,
                    nu,
                    *r as f64,
                    f64::from(u8::from(p.same)),
                    p.p,
                    p.size as f64,
                ]);
            }
            rep.check(Check::exact(
                &format!("{tag}: probes collected"),
                probes.len() as f64,
                spec.probes as f64,
            ));
            if probes.is_empty() {
                continue;
            }
            let hat = probes.iter().filter(|(_, p)| p.same).count() as f64 / probes.len() as f64;
            let exact = mean(&probes.iter().map(|(_, p)| p.p).collect::<Vec<_>>());
            rep.metric(
                &format!("{tag}: p_hat_sd"),
                binomial_sd(hat, probes.len() as u64),
            );
            rep.metric(&format!("{tag}: mean_exact_p"), exact);
            if nu == 1.0 {
                rep.check(Check::exact(&format!("{tag}: p_hat"), hat, 1.0));
            } else {
                rep.check(Check::within(
                    &format!("{tag}: p_hat vs 1/2"),
                    hat,
                    0.5,
                    0.02,
                ));
            }
        }
    }
    rep.dists.push(dist);
    Ok(rep)
}
