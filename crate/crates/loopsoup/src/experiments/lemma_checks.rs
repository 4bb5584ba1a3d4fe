use loopsoup_core::cycles::{CycleBackend, LinkEvent};
use loopsoup_core::rng::seeded;
use loopsoup_core::stats::{binomial_sd, mean, sem, UnionFind};
use loopsoup_core::{CycleSet, Edge, Mark};

use super::{par_map, replica_seeds};
use crate::report::{Check, Dist, Report};
use crate::spec::ExperimentSpec;

struct Replica {
    /// Per `k`: steps that split off a cycle of at most `k` vertices.
    small_splits: Vec<u64>,
    /// Per `(s, k)`: `|V_G^s(k) \ V_C^s(k)|`.
    gaps: Vec<Vec<u64>>,
}

fn gap(cs: &CycleSet, uf: &mut UnionFind, n: u32, k: usize) -> anyhow::Result<u64> {
    let mut g = 0;
    for v in 1..=n {
        if uf.size_of(v - 1) as usize >= k && cs.cycle_len(v)? < k {
            g += 1;
        }
    }
    Ok(g)
}

fn replica(n: u32, nu: f64, ks: &[usize], grid: &[u64], seed: u64) -> anyhow::Result<Replica> {
    let mut rng = seeded(seed);
    let mut cs = CycleSet::singletons(n)?;
    let mut uf = UnionFind::new(n as usize);
    let mut small_splits = vec![0; ks.len()];
    let mut gaps = vec![Vec::new(); grid.len()];
    let s_max = grid.iter().copied().max().unwrap_or(0);
    let record = |s: u64,
                  cs: &CycleSet,
                  uf: &mut UnionFind,
                  gaps: &mut Vec<Vec<u64>>|
     -> anyhow::Result<()> {
        for (i, _) in grid.iter().enumerate().filter(|(_, &g)| g == s) {
            gaps[i] = ks
                .iter()
                .map(|&k| gap(cs, uf, n, k))
                .collect::<anyhow::Result<_>>()?;
        }
        Ok(())
    };
    record(0, &cs, &mut uf, &mut gaps)?;
    for s in 1..=s_max {
        let e = Edge::sample(n, &mut rng);
        let ev = cs.apply_edge(e, Mark::sample(nu, &mut rng))?;
        uf.union(e.lo() - 1, e.hi() - 1);
        if let LinkEvent::Split { first, second, .. } = ev {
            let small = cs.len_of(first).min(cs.len_of(second));
            for (c, &k) in small_splits.iter_mut().zip(ks) {
                *c += u64::from(small <= k);
            }
        }
        record(s, &cs, &mut uf, &mut gaps)?;
    }
    Ok(Replica { small_splits, gaps })
}

pub fn cmd_lemma_checks(spec: &ExperimentSpec) -> anyhow::Result<Report> {
    let mut rep = Report::new("lemma-checks", spec);
    let n = spec.n;
    let nf = f64::from(n);
    let nu = spec.nu[0];
    let steps = spec.s.iter().copied().max().unwrap_or(0);
    let seeds = replica_seeds(spec.seed, 0, spec.replicas);
    let reps = par_map(&seeds, |_, s| replica(n, nu, &spec.k, &spec.s, s))?;
    rep.replica_seeds = seeds;
    let trials = steps * spec.replicas as u64;

    let mut split_dist = Dist::new("small_splits", &["k", "frequency", "bound"]);
    if trials > 0 {
        for (i, &k) in spec.k.iter().enumerate() {
            let count: u64 = reps.iter().map(|r| r.small_splits[i]).sum();
            let freq = count as f64 / trials as f64;
            let bound = 2.0 * k as f64 / (nf - 1.0);
            split_dist.rows.push(vec![k as f64, freq, bound]);
            rep.check(Check::at_most(
                &format!("k={k}: small-split frequency vs 2k/(n-1)"),
                freq,
                bound,
                3.0 * binomial_sd(bound.min(1.0), trials),
            ));
        }
    }
    rep.dists.push(split_dist);

    let mut gap_dist = Dist::new("gaps", &["s", "k", "mean", "sem", "bound"]);
    for (si, &s) in spec.s.iter().enumerate() {
        for (ki, &k) in spec.k.iter().enumerate() {
            let xs: Vec<f64> = reps.iter().map(|r| r.gaps[si][ki] as f64).collect();
            let (m, e) = (mean(&xs), sem(&xs));
            let bound = 4.0 * s as f64 * (k * k) as f64 / (nf - 1.0);
            gap_dist.rows.push(vec![s as f64, k as f64, m, e, bound]);
            let mut c = Check::at_most(
                &format!("s={s}, k={k}: mean |V_G(k) minus V_C(k)| vs 4sk^2/(n-1)"),
                m,
                bound,
                3.0 * e,
            );
            if bound >= nf {
                c = c.note("bound exceeds n, non-binding");
            }
            rep.check(c);
        }
    }
    rep.dists.push(gap_dist);
    Ok(rep)
}
