use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::ops::Bound::{Excluded, Unbounded};

use super::{
    check_horizon, check_rates, check_start, earliest, lap_distance, EventKind, ExplorationPoint,
    Next, PoissonRings, RingSource, TrajStats, Trajectory, Walker,
};
use crate::error::Result;
use crate::rng::stream_rng;

/// Links found so far, keyed by vertex and then by phase bits. Phases are
/// non-negative so the bit order is the numeric order.
#[derive(Default)]
pub(crate) struct Discovered {
    at: BTreeMap<u32, BTreeMap<u64, (u32, i8)>>,
}

impl Discovered {
    pub fn insert(&mut self, u: u32, v: u32, phase: f64, xi: i8) {
        let key = phase.to_bits();
        self.at.entry(u).or_default().insert(key, (v, xi));
        self.at.entry(v).or_default().insert(key, (u, xi));
    }

    /// Next endpoint on `v` strictly ahead of `phi` in direction `d`:
    /// `(phase, other vertex, xi)`.
    pub fn next(&self, v: u32, phi: f64, d: i8) -> Option<(f64, u32, i8)> {
        let m = self.at.get(&v)?;
        let key = phi.to_bits();
        let hit = if d > 0 {
            m.range((Excluded(key), Unbounded))
                .next()
                .or_else(|| m.iter().next())
        } else {
            m.range(..key).next_back().or_else(|| m.iter().next_back())
        };
        hit.map(|(&k, &(w, xi))| (f64::from_bits(k), w, xi))
    }
}

/// Visited arcs per vertex. Arcs never straddle phase zero because every
/// passage through zero is an event.
#[derive(Default)]
pub(crate) struct History {
    arcs: BTreeMap<u32, Vec<(f64, f64)>>,
}

impl History {
    pub fn record(&mut self, v: u32, from: f64, d: i8, dt: f64) {
        if dt <= 0.0 {
            return;
        }
        let (lo, hi) = match (d > 0, from == 0.0) {
            (true, _) => (from, from + dt),
            (false, false) => ((from - dt).max(0.0), from),
            (false, true) => (1.0 - dt, 1.0),
        };
        self.arcs.entry(v).or_default().push((lo, hi));
    }

    pub fn contains(&self, v: u32, phi: f64) -> bool {
        self.arcs.get(&v).is_some_and(|a| {
            a.iter()
                .any(|&(lo, hi)| (lo <= phi && phi <= hi) || (phi == 0.0 && hi >= 1.0))
        })
    }
}

/// On-the-fly exploration with its own Poisson rings at rate `n beta/(n-1)`.
pub fn explore_onfly(
    n: u32,
    beta: f64,
    nu: f64,
    seed: u64,
    start: ExplorationPoint,
    t_max: f64,
) -> Result<(Trajectory, TrajStats)> {
    check_rates(n, beta, nu)?;
    let mut rings = PoissonRings::new(n, beta, nu, stream_rng(seed, 0));
    explore_onfly_with(n, &mut rings, start, t_max)
}

/// On-the-fly exploration driven by an arbitrary ring stream.
///
/// A ring proposing `w` is ignored when `w` is the current vertex or the
/// point `(w, phi)` has been visited. Otherwise a link with mark `xi` is
/// created and crossed. Reaching either end of a known link crosses it again.
pub fn explore_onfly_with<S: RingSource>(
    n: u32,
    rings: &mut S,
    start: ExplorationPoint,
    t_max: f64,
) -> Result<(Trajectory, TrajStats)> {
    check_start(n, start)?;
    check_horizon(t_max)?;
    let mut links = Discovered::default();
    let mut hist = History::default();
    let mut w = Walker::new(start);
    let mut pending = rings.next_ring();
    loop {
        let pos = w.pos;
        let target = links.next(pos.vertex, pos.phase, pos.dir);
        let close =
            (pos.vertex == start.vertex).then(|| lap_distance(pos.phase, start.phase, pos.dir));
        let ring = pending.map(|r| (r.time - w.t).max(0.0));
        let next = earliest(
            w.to_zero(),
            target.map(|(p, _, _)| lap_distance(pos.phase, p, pos.dir)),
            close,
            ring,
            t_max - w.t,
        );
        let dt = match next {
            Next::Zero(dt)
            | Next::Target(dt)
            | Next::Close(dt)
            | Next::Ring(dt)
            | Next::Stop(dt) => dt,
        };
        hist.record(pos.vertex, pos.phase, pos.dir, dt);
        match next {
            Next::Zero(dt) => w.cross_zero(dt),
            Next::Target(dt) => {
                let (p, other, xi) = target.expect("target exists");
                w.arrive(dt, p);
                w.pos.vertex = other;
                w.pos.dir *= xi;
                w.c.i += 1;
                w.log(EventKind::Backtrack);
            }
            Next::Ring(dt) => {
                let r = pending.take().expect("ring exists");
                pending = rings.next_ring();
                w.drift(dt);
                let phi = w.pos.phase;
                if r.vertex != w.pos.vertex && !hist.contains(r.vertex, phi) {
                    links.insert(w.pos.vertex, r.vertex, phi, r.xi);
                    w.pos.vertex = r.vertex;
                    w.pos.dir *= r.xi;
                    w.c.j += 1;
                    w.c.i += 1;
                    w.log(EventKind::Jump);
                }
            }
            Next::Close(dt) => {
                w.arrive(dt, start.phase);
                w.log(EventKind::Close);
                let tau = w.t;
                return Ok(w.finish(Some(tau)));
            }
            Next::Stop(dt) => {
                w.drift(dt);
                w.log(EventKind::Stop);
                return Ok(w.finish(None));
            }
        }
    }
}
