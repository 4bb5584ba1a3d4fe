//! Exploration processes.
//!
//! * [`explore`]: the exploration `X` on a fixed configuration.
//! * [`explore_onfly`]: `X` built together with a Poisson configuration, one
//!   ring at a time, with jumps into the history suppressed.
//! * [`simple_explore`]: the simple exploration `Y`, which lands on a fresh
//!   circle at every discovered link.
//! * [`coupled_run`]: `Y` and an on-the-fly `X` driven by the same rings.
//!
//! All walkers move at unit speed and are event driven: the next link
//! endpoint, level-zero crossing, closing point, ring or horizon is computed
//! exactly and the walker jumps straight to it. Phases reached as targets are
//! snapped to the stored value, so laps never drift.
//!
//! Counters follow one convention throughout: `K` and `B` count the start when
//! `phi0 = 0`, and the return to the start at `tau` is not counted.

use alloc::vec::Vec;

use crate::error::{invalid, Error, Result};

mod coupling;
mod finite;
mod onfly;
mod rings;
mod simple;
mod zpath;

pub use coupling::{coupled_run, coupling_bound, CouplingOutcome};
pub use finite::explore;
pub use onfly::{explore_onfly, explore_onfly_with};
pub use rings::{PoissonRings, Ring, RingSource, ScriptedRings};
pub use simple::{simple_explore, simple_explore_with};
pub use zpath::{frontier_decompose, solve_z, FrontierDecomposition, ZPath};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExplorationPoint {
    pub vertex: u32,
    pub phase: f64,
    /// `+1` or `-1`.
    pub dir: i8,
    /// Circle index of the simple exploration; zero for `X`.
    pub circle: u64,
}

impl ExplorationPoint {
    pub fn new(vertex: u32, phase: f64, dir: i8) -> ExplorationPoint {
        ExplorationPoint {
            vertex,
            phase,
            dir,
            circle: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EventKind {
    /// A link is discovered and crossed.
    Jump,
    /// A known link is crossed a second time.
    Backtrack,
    /// Passage through phase zero.
    Level0,
    /// Return to the start; the loop is complete.
    Close,
    /// The time horizon was reached first.
    Stop,
}

impl EventKind {
    pub fn name(self) -> &'static str {
        match self {
            EventKind::Jump => "jump",
            EventKind::Backtrack => "backtrack",
            EventKind::Level0 => "level0",
            EventKind::Close => "close",
            EventKind::Stop => "stop",
        }
    }

    pub fn parse(s: &str) -> Option<EventKind> {
        Some(match s {
            "jump" => EventKind::Jump,
            "backtrack" => EventKind::Backtrack,
            "level0" => EventKind::Level0,
            "close" => EventKind::Close,
            "stop" => EventKind::Stop,
            _ => return None,
        })
    }
}

/// Running totals. `l` is the winding `∫ d`, `b` the signed count of
/// level-zero passages.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Counters {
    pub j: u64,
    pub i: u64,
    pub k: u64,
    pub b: i64,
    pub l: f64,
}

/// An event together with the state and counters right after it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Event {
    pub t: f64,
    pub kind: EventKind,
    pub point: ExplorationPoint,
    pub counters: Counters,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub start: ExplorationPoint,
    pub events: Vec<Event>,
    /// Time up to which the path is known.
    pub end: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajStats {
    /// Closing time, `None` when censored at `t_end`.
    pub tau: Option<f64>,
    pub t_end: f64,
    pub j: u64,
    pub i: u64,
    pub k: u64,
    pub l: f64,
    pub b: i64,
}

impl TrajStats {
    pub fn survived(&self) -> bool {
        self.tau.is_none()
    }
}

/// Time to reach phase `p` from `phi` moving in direction `d`. Being at `p`
/// already means a full lap.
#[inline]
pub(crate) fn lap_distance(phi: f64, p: f64, d: i8) -> f64 {
    if d > 0 {
        if p > phi {
            p - phi
        } else {
            p - phi + 1.0
        }
    } else if p < phi {
        phi - p
    } else {
        phi - p + 1.0
    }
}

#[inline]
pub(crate) fn wrap(x: f64) -> f64 {
    if x >= 1.0 {
        x - 1.0
    } else if x < 0.0 {
        let y = x + 1.0;
        if y >= 1.0 {
            0.0
        } else {
            y
        }
    } else {
        x
    }
}

pub(crate) fn check_start(n: u32, start: ExplorationPoint) -> Result<()> {
    if start.vertex == 0 || start.vertex > n {
        return Err(Error::UnknownVertex(start.vertex));
    }
    if !(0.0..1.0).contains(&start.phase) {
        return Err(Error::OutOfUnitInterval(start.phase));
    }
    if start.dir != 1 && start.dir != -1 {
        return Err(invalid("d0", "direction must be +1 or -1"));
    }
    Ok(())
}

pub(crate) fn check_horizon(t_max: f64) -> Result<()> {
    if t_max >= 0.0 && !t_max.is_nan() {
        Ok(())
    } else {
        Err(invalid("t_max", "must be non-negative"))
    }
}

pub(crate) fn check_rates(n: u32, beta: f64, nu: f64) -> Result<()> {
    if n < 2 {
        return Err(invalid("n", "need at least two vertices"));
    }
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(invalid("beta", "must be positive and finite"));
    }
    if !(0.0..=1.0).contains(&nu) {
        return Err(invalid("nu", "must lie in [0, 1]"));
    }
    Ok(())
}

/// Shared walker state: position, clock, counters and the event log.
pub(crate) struct Walker {
    pub pos: ExplorationPoint,
    pub t: f64,
    pub c: Counters,
    pub events: Vec<Event>,
    start: ExplorationPoint,
}

impl Walker {
    pub fn new(start: ExplorationPoint) -> Walker {
        let mut w = Walker {
            pos: start,
            t: 0.0,
            c: Counters::default(),
            events: Vec::new(),
            start,
        };
        if start.phase == 0.0 {
            w.c.k = 1;
            w.c.b = i64::from(start.dir);
            w.log(EventKind::Level0);
        }
        w
    }

    /// Time to the next level-zero passage.
    pub fn to_zero(&self) -> f64 {
        if self.pos.dir > 0 {
            1.0 - self.pos.phase
        } else if self.pos.phase > 0.0 {
            self.pos.phase
        } else {
            1.0
        }
    }

    /// Move `dt` without reaching any target.
    pub fn drift(&mut self, dt: f64) {
        self.t += dt;
        self.c.l += f64::from(self.pos.dir) * dt;
        self.pos.phase = wrap(self.pos.phase + f64::from(self.pos.dir) * dt);
    }

    /// Move `dt` and land exactly on phase `p`.
    pub fn arrive(&mut self, dt: f64, p: f64) {
        self.t += dt;
        self.c.l += f64::from(self.pos.dir) * dt;
        self.pos.phase = p;
    }

    pub fn cross_zero(&mut self, dt: f64) {
        self.arrive(dt, 0.0);
        self.c.k += 1;
        self.c.b += i64::from(self.pos.dir);
        self.log(EventKind::Level0);
    }

    pub fn log(&mut self, kind: EventKind) {
        self.events.push(Event {
            t: self.t,
            kind,
            point: self.pos,
            counters: self.c,
        });
    }

    pub fn finish(self, tau: Option<f64>) -> (Trajectory, TrajStats) {
        let stats = TrajStats {
            tau,
            t_end: self.t,
            j: self.c.j,
            i: self.c.i,
            k: self.c.k,
            l: self.c.l,
            b: self.c.b,
        };
        let traj = Trajectory {
            start: self.start,
            events: self.events,
            end: self.t,
        };
        (traj, stats)
    }
}

/// What the next step of a walker will be.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Next {
    Zero(f64),
    Target(f64),
    Close(f64),
    Ring(f64),
    Stop(f64),
}

/// Pick the earliest of the candidate times. Closing wins ties, then targets,
/// then level zero.
pub(crate) fn earliest(
    zero: f64,
    target: Option<f64>,
    close: Option<f64>,
    ring: Option<f64>,
    remaining: f64,
) -> Next {
    let mut best = Next::Stop(remaining);
    let mut bt = remaining;
    let mut consider = |cand: Option<f64>, mk: fn(f64) -> Next, strict: bool| {
        if let Some(x) = cand {
            if x < bt || (!strict && x <= bt) {
                bt = x;
                best = mk(x);
            }
        }
    };
    consider(close, Next::Close, false);
    consider(target, Next::Target, true);
    consider(Some(zero), Next::Zero, true);
    consider(ring, Next::Ring, true);
    best
}

/// Number of times each invariant failed on a trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct InvariantReport {
    pub checks: u64,
    /// `K_t <= t + I_t + 1`.
    pub k_bound: u64,
    /// `J_t <= I_t <= 2 J_t`.
    pub ji_bound: u64,
    /// `| |B_t| - |L_t| | <= 3`.
    pub winding_bound: u64,
}

impl InvariantReport {
    pub fn violations(&self) -> u64 {
        self.k_bound + self.ji_bound + self.winding_bound
    }

    pub fn add(&mut self, o: &InvariantReport) {
        self.checks += o.checks;
        self.k_bound += o.k_bound;
        self.ji_bound += o.ji_bound;
        self.winding_bound += o.winding_bound;
    }
}

/// Re-check the trajectory invariants from the event log alone.
///
/// Between events `K`, `I`, `J`, `B` are constant and `L` is linear, so the
/// bounds only need checking at event times and where `L` changes sign.
pub fn check_invariants(traj: &Trajectory) -> InvariantReport {
    let mut rep = InvariantReport::default();
    let tol = 1e-9;
    let mut prev = Counters::default();
    if traj.start.phase == 0.0 {
        prev.k = 1;
        prev.b = i64::from(traj.start.dir);
    }
    let check = |t: f64, c: &Counters, rep: &mut InvariantReport| {
        rep.checks += 1;
        if c.k as f64 > t + c.i as f64 + 1.0 + tol {
            rep.k_bound += 1;
        }
        if c.j > c.i || c.i > 2 * c.j {
            rep.ji_bound += 1;
        }
        if ((c.b.abs() as f64) - c.l.abs()).abs() > 3.0 + tol {
            rep.winding_bound += 1;
        }
    };
    check(0.0, &prev, &mut rep);
    for e in &traj.events {
        if prev.l.signum() * e.counters.l.signum() < 0.0 && prev.b.abs() > 3 {
            rep.checks += 1;
            rep.winding_bound += 1;
        }
        check(e.t, &e.counters, &mut rep);
        prev = e.counters;
    }
    rep
}

/// `sup_{t <= T} |L_t|`. The winding is linear between events, so the
/// supremum is attained at an event or at `T` itself.
pub fn winding_sup(traj: &Trajectory, t: f64) -> Result<f64> {
    if traj.end < t {
        return Err(Error::TrajectoryTooShort {
            end: traj.end,
            requested: t,
        });
    }
    let mut sup = 0.0f64;
    let (mut last_t, mut last_l, mut last_d) = (0.0, 0.0, f64::from(traj.start.dir));
    for e in &traj.events {
        if e.t > t {
            break;
        }
        sup = sup.max(e.counters.l.abs());
        last_t = e.t;
        last_l = e.counters.l;
        last_d = f64::from(e.point.dir);
    }
    Ok(sup.max((last_l + last_d * (t - last_t)).abs()))
}
