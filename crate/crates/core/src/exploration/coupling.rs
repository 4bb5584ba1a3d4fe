use alloc::collections::BTreeSet;

use super::{
    check_rates, explore_onfly_with, simple_explore_with, Event, ExplorationPoint, PoissonRings,
    ScriptedRings, Trajectory,
};
use crate::error::{invalid, Result};
use crate::rng::stream_rng;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingOutcome {
    pub horizon: f64,
    /// Closing time of the simple exploration, if before the horizon.
    pub tau_y: Option<f64>,
    /// First ring proposing a vertex already visited by the exploration.
    pub rho: Option<f64>,
    /// First time the two paths differ, if before `tau_y` and the horizon.
    pub divergence: Option<f64>,
}

impl CouplingOutcome {
    /// Paths agreed on `[0, tau_y ∧ T)`.
    pub fn agreed(&self) -> bool {
        self.divergence.is_none()
    }

    /// `rho < tau_y ∧ T`, the event whose probability the bound controls.
    pub fn failed(&self) -> bool {
        let end = self.tau_y.unwrap_or(self.horizon).min(self.horizon);
        self.rho.is_some_and(|r| r < end)
    }
}

/// `4 beta T (J + beta T) / n` with `J = 1`.
pub fn coupling_bound(n: u32, beta: f64, t: f64) -> f64 {
    4.0 * beta * t * (1.0 + beta * t) / f64::from(n)
}

/// Event times of the two paths are compared up to this tolerance.
const TIME_TOL: f64 = 1e-9;

fn same(a: &Event, b: &Event) -> bool {
    a.kind == b.kind
        && a.point.vertex == b.point.vertex
        && a.point.dir == b.point.dir
        && (a.t - b.t).abs() <= TIME_TOL
}

/// Simple exploration and on-the-fly exploration from `(1, 0, +1)`, both
/// driven by one list of rings up to `T`.
pub fn coupled_run(n: u32, beta: f64, nu: f64, seed: u64, t: f64) -> Result<CouplingOutcome> {
    check_rates(n, beta, nu)?;
    if !(t >= 0.0 && t.is_finite()) {
        return Err(invalid("T", "must be finite and non-negative"));
    }
    let rings = PoissonRings::new(n, beta, nu, stream_rng(seed, 0)).take_until(t);
    let start = ExplorationPoint::new(1, 0.0, 1);
    let (ty, sy, _) = simple_explore_with(
        n,
        beta,
        &mut ScriptedRings::new(rings.clone()),
        start,
        t,
        &mut stream_rng(seed, 1),
    )?;
    let (tx, _) = explore_onfly_with(n, &mut ScriptedRings::new(rings.clone()), start, t)?;
    let end = sy.tau.unwrap_or(t).min(t);
    let divergence = first_difference(&ty, &tx, end);
    let mut visited = BTreeSet::new();
    visited.insert(start.vertex);
    let mut ev = tx.events.iter().peekable();
    let mut rho = None;
    for r in &rings {
        while let Some(e) = ev.next_if(|e| e.t < r.time) {
            visited.insert(e.point.vertex);
        }
        if visited.contains(&r.vertex) {
            rho = Some(r.time);
            break;
        }
    }
    Ok(CouplingOutcome {
        horizon: t,
        tau_y: sy.tau,
        rho,
        divergence,
    })
}

fn first_difference(a: &Trajectory, b: &Trajectory, end: f64) -> Option<f64> {
    let ea = a.events.iter().filter(|e| e.t < end - TIME_TOL);
    let mut eb = b.events.iter().filter(|e| e.t < end - TIME_TOL);
    for x in ea {
        match eb.next() {
            Some(y) if same(x, y) => continue,
            Some(y) => return Some(x.t.min(y.t)),
            None => return Some(x.t),
        }
    }
    eb.next().map(|y| y.t)
}
