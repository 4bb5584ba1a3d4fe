use alloc::vec;
use alloc::vec::Vec;

use super::{
    check_horizon, check_start, earliest, lap_distance, EventKind, ExplorationPoint, Next,
    TrajStats, Trajectory, Walker,
};
use crate::config::{Configuration, Mark};
use crate::error::{Error, Result};

/// Per-vertex link endpoints sorted by phase.
struct Endpoints {
    ends: Vec<Vec<(f64, u32)>>,
}

impl Endpoints {
    fn new(cfg: &Configuration) -> Result<Endpoints> {
        let mut ends = vec![Vec::new(); cfg.n as usize];
        let mut phases = Vec::with_capacity(cfg.len());
        for (i, l) in cfg.links.iter().enumerate() {
            let (u, v) = l.edge.endpoints();
            if v > cfg.n {
                return Err(Error::UnknownVertex(v));
            }
            if !(l.phase > 0.0 && l.phase < 1.0) {
                return Err(Error::Malformed("link phase must lie in (0, 1)"));
            }
            phases.push(l.phase);
            ends[(u - 1) as usize].push((l.phase, i as u32));
            ends[(v - 1) as usize].push((l.phase, i as u32));
        }
        phases.sort_by(f64::total_cmp);
        if let Some(w) = phases.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicatePhase(w[0]));
        }
        for e in ends.iter_mut() {
            e.sort_by(|a, b| a.0.total_cmp(&b.0));
        }
        Ok(Endpoints { ends })
    }

    /// Next endpoint strictly ahead of `phi` in direction `d`, wrapping.
    fn next(&self, v: u32, phi: f64, d: i8) -> Option<(f64, u32)> {
        let e = &self.ends[(v - 1) as usize];
        if e.is_empty() {
            return None;
        }
        if d > 0 {
            let i = e.partition_point(|x| x.0 <= phi);
            Some(e[if i == e.len() { 0 } else { i }])
        } else {
            let i = e.partition_point(|x| x.0 < phi);
            Some(e[if i == 0 { e.len() - 1 } else { i - 1 }])
        }
    }
}

/// The exploration of `cfg` from `start`, run until it closes or `t_max`.
pub fn explore(
    cfg: &Configuration,
    start: ExplorationPoint,
    t_max: f64,
) -> Result<(Trajectory, TrajStats)> {
    check_start(cfg.n, start)?;
    check_horizon(t_max)?;
    let ends = Endpoints::new(cfg)?;
    let mut crossed = vec![0u8; cfg.len()];
    let mut w = Walker::new(start);
    loop {
        let pos = w.pos;
        let target = ends.next(pos.vertex, pos.phase, pos.dir);
        let close =
            (pos.vertex == start.vertex).then(|| lap_distance(pos.phase, start.phase, pos.dir));
        let next = earliest(
            w.to_zero(),
            target.map(|(p, _)| lap_distance(pos.phase, p, pos.dir)),
            close,
            None,
            t_max - w.t,
        );
        match next {
            Next::Zero(dt) => w.cross_zero(dt),
            Next::Target(dt) => {
                let (p, link) = target.expect("target exists");
                w.arrive(dt, p);
                let l = &cfg.links[link as usize];
                w.pos.vertex = l.edge.other(pos.vertex);
                if l.mark == Mark::Bar {
                    w.pos.dir = -w.pos.dir;
                }
                w.c.i += 1;
                let seen = &mut crossed[link as usize];
                *seen += 1;
                if *seen == 1 {
                    w.c.j += 1;
                    w.log(EventKind::Jump);
                } else {
                    w.log(EventKind::Backtrack);
                }
            }
            Next::Close(dt) => {
                w.arrive(dt, start.phase);
                w.log(EventKind::Close);
                let tau = w.t;
                return Ok(w.finish(Some(tau)));
            }
            Next::Stop(dt) | Next::Ring(dt) => {
                w.drift(dt);
                w.log(EventKind::Stop);
                return Ok(w.finish(None));
            }
        }
    }
}
