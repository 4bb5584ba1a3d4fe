use alloc::vec::Vec;

use rand::Rng;
use rand_distr::Exp1;

/// One arrival of the driving Poisson process with its marks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ring {
    /// Absolute arrival time.
    pub time: f64,
    /// 1-based ring count, used as the circle index of a fresh circle.
    pub index: u64,
    /// Proposed vertex, uniform on `1..=n`.
    pub vertex: u32,
    /// `+1` (cross) with probability `nu`, else `-1` (bar).
    pub xi: i8,
}

/// A stream of rings in increasing time order.
pub trait RingSource {
    fn next_ring(&mut self) -> Option<Ring>;
}

/// Rings at rate `n beta / (n - 1)`.
pub struct PoissonRings<R> {
    rng: R,
    n: u32,
    rate: f64,
    nu: f64,
    t: f64,
    count: u64,
}

impl<R: Rng> PoissonRings<R> {
    pub fn new(n: u32, beta: f64, nu: f64, rng: R) -> Self {
        let rate = f64::from(n) * beta / f64::from(n - 1);
        PoissonRings::with_rate(n, rate, nu, rng)
    }

    pub fn with_rate(n: u32, rate: f64, nu: f64, rng: R) -> Self {
        PoissonRings {
            rng,
            n,
            rate,
            nu,
            t: 0.0,
            count: 0,
        }
    }

    /// All rings up to time `t_max`.
    pub fn take_until(&mut self, t_max: f64) -> Vec<Ring> {
        let mut out = Vec::new();
        while let Some(r) = self.next_ring() {
            if r.time > t_max {
                break;
            }
            out.push(r);
        }
        out
    }
}

impl<R: Rng> RingSource for PoissonRings<R> {
    fn next_ring(&mut self) -> Option<Ring> {
        let e: f64 = self.rng.sample(Exp1);
        self.t += e / self.rate;
        self.count += 1;
        let vertex = self.rng.random_range(1..=self.n);
        let xi = if self.rng.random::<f64>() < self.nu {
            1
        } else {
            -1
        };
        Some(Ring {
            time: self.t,
            index: self.count,
            vertex,
            xi,
        })
    }
}

/// A fixed list of rings, for tests and for driving two walkers identically.
#[derive(Debug, Clone)]
pub struct ScriptedRings {
    rings: Vec<Ring>,
    at: usize,
}

impl ScriptedRings {
    pub fn new(rings: Vec<Ring>) -> ScriptedRings {
        ScriptedRings { rings, at: 0 }
    }

    /// Rings at the given `(time, vertex, xi)` with consecutive indices.
    pub fn from_triples(triples: &[(f64, u32, i8)]) -> ScriptedRings {
        let rings = triples
            .iter()
            .enumerate()
            .map(|(i, &(time, vertex, xi))| Ring {
                time,
                index: i as u64 + 1,
                vertex,
                xi,
            })
            .collect();
        ScriptedRings::new(rings)
    }
}

impl RingSource for ScriptedRings {
    fn next_ring(&mut self) -> Option<Ring> {
        let r = self.rings.get(self.at).copied();
        self.at += 1;
        r
    }
}
