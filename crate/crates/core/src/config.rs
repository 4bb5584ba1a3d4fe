//! Random link configurations on the complete graph.
//!
//! Vertices are numbered `1..=n`. Phases live on the circle `[0, 1)`.

use alloc::vec::Vec;

use rand::Rng;
use rand_distr::{Distribution, Poisson};

use crate::error::{invalid, Error, Result};
use crate::rng::seeded;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mark {
    /// Traversal keeps its direction.
    Cross,
    /// Traversal reverses its direction.
    Bar,
}

impl Mark {
    pub fn sample<R: Rng + ?Sized>(nu: f64, rng: &mut R) -> Mark {
        if rng.random::<f64>() < nu {
            Mark::Cross
        } else {
            Mark::Bar
        }
    }

    /// `+1` for a cross, `-1` for a bar.
    pub fn sign(self) -> i8 {
        match self {
            Mark::Cross => 1,
            Mark::Bar => -1,
        }
    }
}

/// Unordered vertex pair, stored with `lo < hi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    lo: u32,
    hi: u32,
}

impl Edge {
    pub fn new(u: u32, v: u32) -> Result<Edge> {
        if u == v {
            return Err(Error::SelfLink(u));
        }
        if u == 0 || v == 0 {
            return Err(Error::UnknownVertex(0));
        }
        Ok(Edge {
            lo: u.min(v),
            hi: u.max(v),
        })
    }

    pub fn lo(self) -> u32 {
        self.lo
    }

    pub fn hi(self) -> u32 {
        self.hi
    }

    pub fn endpoints(self) -> (u32, u32) {
        (self.lo, self.hi)
    }

    pub fn other(self, v: u32) -> u32 {
        if v == self.lo {
            self.hi
        } else {
            self.lo
        }
    }

    /// Uniform edge of the complete graph on `1..=n`.
    pub fn sample<R: Rng + ?Sized>(n: u32, rng: &mut R) -> Edge {
        let u = rng.random_range(1..=n);
        let mut v = rng.random_range(1..n);
        if v >= u {
            v += 1;
        }
        Edge {
            lo: u.min(v),
            hi: u.max(v),
        }
    }

    /// Dense index in `0..n(n-1)/2`, used for frequency tables.
    pub fn index(self, n: u32) -> usize {
        let (i, j) = ((self.lo - 1) as usize, (self.hi - 1) as usize);
        let n = n as usize;
        i * (2 * n - i - 1) / 2 + (j - i - 1)
    }

    fn check(self, n: u32) -> Result<()> {
        if self.hi > n {
            Err(Error::UnknownVertex(self.hi))
        } else {
            Ok(())
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Link {
    pub edge: Edge,
    pub phase: f64,
    pub mark: Mark,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Configuration {
    pub n: u32,
    pub beta: f64,
    pub nu: f64,
    pub links: Vec<Link>,
}

/// Links in increasing phase order with the phases dropped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderedLinks {
    pub n: u32,
    pub seq: Vec<(Edge, Mark)>,
}

pub(crate) fn check_n(n: u32) -> Result<()> {
    if n < 2 {
        Err(invalid("n", "need at least two vertices"))
    } else {
        Ok(())
    }
}

fn check_nu(nu: f64) -> Result<()> {
    if (0.0..=1.0).contains(&nu) {
        Ok(())
    } else {
        Err(invalid("nu", "must lie in [0, 1]"))
    }
}

/// A phase in the open interval `(0, 1)`. Zero is excluded so no link sits
/// exactly on the level where cycles are read off.
fn sample_phase<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    loop {
        let p: f64 = rng.random();
        if p > 0.0 {
            return p;
        }
    }
}

impl Configuration {
    /// Validating constructor for configurations read from elsewhere.
    pub fn new(n: u32, beta: f64, nu: f64, links: Vec<Link>) -> Result<Configuration> {
        check_n(n)?;
        check_nu(nu)?;
        for link in &links {
            link.edge.check(n)?;
            if !(0.0..1.0).contains(&link.phase) {
                return Err(Error::OutOfUnitInterval(link.phase));
            }
        }
        Ok(Configuration { n, beta, nu, links })
    }

    pub fn empty(n: u32) -> Result<Configuration> {
        Configuration::new(n, 0.0, 0.0, Vec::new())
    }

    /// Poisson configuration with intensity `beta/(n-1)` per edge.
    ///
    /// The total count is drawn first as `Poisson(beta*n/2)` and then filled
    /// with i.i.d. uniform (edge, phase, mark) triples.
    pub fn sample<R: Rng + ?Sized>(n: u32, beta: f64, nu: f64, rng: &mut R) -> Result<Self> {
        check_n(n)?;
        check_nu(nu)?;
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(invalid("beta", "must be positive and finite"));
        }
        let mean = beta * f64::from(n) / 2.0;
        let count = Poisson::new(mean)
            .map_err(|_| invalid("beta", "Poisson mean out of range"))?
            .sample(rng) as usize;
        let mut links: Vec<Link> = (0..count)
            .map(|_| Link {
                edge: Edge::sample(n, rng),
                phase: sample_phase(rng),
                mark: Mark::sample(nu, rng),
            })
            .collect();
        resolve_collisions(&mut links, rng);
        Ok(Configuration { n, beta, nu, links })
    }

    pub fn len(&self) -> usize {
        self.links.len()
    }

    pub fn is_empty(&self) -> bool {
        self.links.is_empty()
    }

    /// Sort by phase and drop the phases.
    pub fn to_ordered(&self) -> Result<OrderedLinks> {
        let mut sorted: Vec<&Link> = self.links.iter().collect();
        sorted.sort_by(|a, b| a.phase.total_cmp(&b.phase));
        if let Some(w) = sorted.windows(2).find(|w| w[0].phase == w[1].phase) {
            return Err(Error::DuplicatePhase(w[0].phase));
        }
        Ok(OrderedLinks {
            n: self.n,
            seq: sorted.iter().map(|l| (l.edge, l.mark)).collect(),
        })
    }

    /// Edges carrying at least one link, in phase order, without dedup.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.links.iter().map(|l| l.edge)
    }
}

fn resolve_collisions<R: Rng + ?Sized>(links: &mut [Link], rng: &mut R) {
    loop {
        links.sort_by(|a, b| a.phase.total_cmp(&b.phase));
        let mut clean = true;
        for i in 1..links.len() {
            if links[i].phase == links[i - 1].phase {
                links[i].phase = sample_phase(rng);
                clean = false;
            }
        }
        if clean {
            return;
        }
    }
}

impl OrderedLinks {
    /// `t` links laid down one after another, each edge uniform and each mark
    /// a cross with probability `nu`.
    pub fn sample<R: Rng + ?Sized>(n: u32, t: usize, nu: f64, rng: &mut R) -> Result<Self> {
        check_n(n)?;
        check_nu(nu)?;
        let seq = (0..t)
            .map(|_| (Edge::sample(n, rng), Mark::sample(nu, rng)))
            .collect();
        Ok(OrderedLinks { n, seq })
    }

    pub fn len(&self) -> usize {
        self.seq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seq.is_empty()
    }
}

pub fn sample_configuration(n: u32, beta: f64, nu: f64, seed: u64) -> Result<Configuration> {
    Configuration::sample(n, beta, nu, &mut seeded(seed))
}

pub fn sample_ordered(n: u32, t: usize, nu: f64, seed: u64) -> Result<OrderedLinks> {
    OrderedLinks::sample(n, t, nu, &mut seeded(seed))
}
