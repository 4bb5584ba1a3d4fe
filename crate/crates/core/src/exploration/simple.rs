use alloc::vec::Vec;

use rand::Rng;
use rand_distr::Exp1;

use super::{
    check_horizon, check_rates, check_start, earliest, lap_distance, EventKind, ExplorationPoint,
    Next, PoissonRings, RingSource, TrajStats, Trajectory, Walker, ZPath,
};
use crate::error::Result;
use crate::rng::stream_rng;

/// A fresh circle entered through a discovered link.
struct Frame {
    landing: f64,
    parent: ExplorationPoint,
    xi: i8,
}

/// Simple exploration from `(1, 0, +1)`. Rings come from stream 0 of `seed`;
/// the continuation of `Z` after closing uses stream 1 at rate `beta`.
pub fn simple_explore(
    n: u32,
    beta: f64,
    nu: f64,
    seed: u64,
    t_max: f64,
) -> Result<(Trajectory, TrajStats, ZPath)> {
    check_rates(n, beta, nu)?;
    let mut rings = PoissonRings::new(n, beta, nu, stream_rng(seed, 0));
    let mut ext = stream_rng(seed, 1);
    simple_explore_with(
        n,
        beta,
        &mut rings,
        ExplorationPoint::new(1, 0.0, 1),
        t_max,
        &mut ext,
    )
}

/// Simple exploration driven by `rings`.
///
/// Every accepted ring opens a new circle whose index is the ring index. The
/// only way back is to come round to the landing point, which returns to the
/// parent circle with direction `xi * d`. The discovery times, continued after
/// closing by independent rate-`beta` arrivals from `ext`, form the `Z` path
/// up to `t_max`.
pub fn simple_explore_with<S: RingSource, R: Rng>(
    n: u32,
    beta: f64,
    rings: &mut S,
    start: ExplorationPoint,
    t_max: f64,
    ext: &mut R,
) -> Result<(Trajectory, TrajStats, ZPath)> {
    check_start(n, start)?;
    check_horizon(t_max)?;
    let mut w = Walker::new(start);
    let mut stack: Vec<Frame> = Vec::new();
    let mut jumps: Vec<f64> = Vec::new();
    let mut pending = rings.next_ring();
    let tau = loop {
        let pos = w.pos;
        let (target, close) = match stack.last() {
            Some(f) => (Some(lap_distance(pos.phase, f.landing, pos.dir)), None),
            // Each circle takes exactly one lap, so the loop closes at J + 1.
            // Using that value keeps closings at the horizon from being lost to
            // rounding in the accumulated phase.
            None => (None, Some((jumps.len() as f64 + 1.0 - w.t).max(0.0))),
        };
        let ring = pending.map(|r| (r.time - w.t).max(0.0));
        match earliest(w.to_zero(), target, close, ring, t_max - w.t) {
            Next::Zero(dt) => w.cross_zero(dt),
            Next::Target(dt) => {
                let f = stack.pop().expect("frame exists");
                w.arrive(dt, f.landing);
                w.pos.vertex = f.parent.vertex;
                w.pos.circle = f.parent.circle;
                w.pos.dir *= f.xi;
                w.c.i += 1;
                w.log(EventKind::Backtrack);
            }
            Next::Ring(dt) => {
                let r = pending.take().expect("ring exists");
                pending = rings.next_ring();
                w.drift(dt);
                if r.vertex != w.pos.vertex {
                    stack.push(Frame {
                        landing: w.pos.phase,
                        parent: w.pos,
                        xi: r.xi,
                    });
                    w.pos.vertex = r.vertex;
                    w.pos.circle = r.index;
                    w.pos.dir *= r.xi;
                    w.c.j += 1;
                    w.c.i += 1;
                    jumps.push(w.t);
                    w.log(EventKind::Jump);
                }
            }
            Next::Close(dt) => {
                w.arrive(dt, start.phase);
                w.log(EventKind::Close);
                break Some(w.t);
            }
            Next::Stop(dt) => {
                w.drift(dt);
                w.log(EventKind::Stop);
                break None;
            }
        }
    };
    if let Some(mut t) = tau {
        loop {
            let e: f64 = ext.sample(Exp1);
            t += e / beta;
            if t > t_max {
                break;
            }
            jumps.push(t);
        }
    }
    let (traj, stats) = w.finish(tau);
    Ok((traj, stats, ZPath::new(jumps, t_max)))
}
