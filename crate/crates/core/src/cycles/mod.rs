//! Oriented cycles and their evolution under link insertion.
//!
//! A cycle is the list of `(vertex, direction)` pairs at which a loop passes
//! level zero, defined up to rotation and overall reversal. Inserting a new
//! link just above level zero either merges two cycles, splits one, or twists
//! one in place. [`NaiveCycles`] keeps plain vectors and is the reference;
//! [`CycleSet`] keeps one implicit treap per cycle and handles `n = 10^5`.

use alloc::vec::Vec;
use core::fmt;
use core::ops::Neg;

use crate::config::{Edge, Mark, OrderedLinks};
use crate::error::{invalid, Error, Result};

mod naive;
mod treap;

pub use naive::NaiveCycles;
pub use treap::TreapCycles;

/// The default backend.
pub type CycleSet = TreapCycles;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    Up,
    Down,
}

impl Direction {
    pub fn sign(self) -> i32 {
        match self {
            Direction::Up => 1,
            Direction::Down => -1,
        }
    }

    pub fn from_sign(s: i32) -> Direction {
        if s >= 0 {
            Direction::Up
        } else {
            Direction::Down
        }
    }

    /// Direction after crossing a link with this mark.
    pub fn through(self, mark: Mark) -> Direction {
        match mark {
            Mark::Cross => self,
            Mark::Bar => -self,
        }
    }
}

impl Neg for Direction {
    type Output = Direction;

    fn neg(self) -> Direction {
        match self {
            Direction::Up => Direction::Down,
            Direction::Down => Direction::Up,
        }
    }
}

/// Handle to a cycle inside a backend. Handles are only meaningful until the
/// next mutation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CycleId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LinkEvent {
    /// Two distinct cycles joined into `into`.
    Merge {
        a: CycleId,
        b: CycleId,
        into: CycleId,
    },
    /// One cycle broke into two. `first` contains the lower endpoint.
    Split {
        from: CycleId,
        first: CycleId,
        second: CycleId,
    },
    /// The vertex set is unchanged but the order or orientation changed.
    Twist(CycleId),
    /// Both endpoints were the same vertex.
    Noop,
}

impl LinkEvent {
    pub fn is_merge(&self) -> bool {
        matches!(self, LinkEvent::Merge { .. })
    }

    pub fn is_split(&self) -> bool {
        matches!(self, LinkEvent::Split { .. })
    }

    pub fn is_twist(&self) -> bool {
        matches!(self, LinkEvent::Twist(_))
    }

    /// Discriminant used when comparing backends, which assign ids differently.
    pub fn kind(&self) -> u8 {
        match self {
            LinkEvent::Merge { .. } => 0,
            LinkEvent::Split { .. } => 1,
            LinkEvent::Twist(_) => 2,
            LinkEvent::Noop => 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cycle {
    pub seq: Vec<(u32, Direction)>,
}

impl Cycle {
    pub fn new(seq: Vec<(u32, Direction)>) -> Cycle {
        Cycle { seq }
    }

    pub fn len(&self) -> usize {
        self.seq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seq.is_empty()
    }

    pub fn vertices(&self) -> impl Iterator<Item = u32> + '_ {
        self.seq.iter().map(|e| e.0)
    }

    pub fn min_vertex(&self) -> Option<u32> {
        self.vertices().min()
    }

    /// Reverse the order and negate every direction.
    pub fn reversed(&self) -> Cycle {
        Cycle {
            seq: self.seq.iter().rev().map(|&(v, d)| (v, -d)).collect(),
        }
    }

    /// The same cycle read from `v` onwards in the orientation where `v` is up.
    pub fn oriented_at(&self, v: u32) -> Option<Cycle> {
        let p = self.seq.iter().position(|e| e.0 == v)?;
        let mut out = Vec::with_capacity(self.len());
        if self.seq[p].1 == Direction::Up {
            out.extend(self.seq[p..].iter().chain(&self.seq[..p]).copied());
        } else {
            let back = self.seq[..=p]
                .iter()
                .rev()
                .chain(self.seq[p + 1..].iter().rev());
            out.extend(back.map(|&(w, d)| (w, -d)));
        }
        Some(Cycle { seq: out })
    }
}

impl fmt::Display for Cycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (v, d)) in self.seq.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            let s = if *d == Direction::Up { '+' } else { '-' };
            write!(f, "{v}^{s}")?;
        }
        Ok(())
    }
}

/// Operations shared by the cycle backends.
pub trait CycleBackend: Sized {
    fn singletons(n: u32) -> Result<Self>;

    fn n(&self) -> u32;

    /// Insert a link between `u` and `v` below every existing link.
    fn apply_link(&mut self, u: u32, v: u32, mark: Mark) -> Result<LinkEvent>;

    fn cycle_id(&self, v: u32) -> Result<CycleId>;

    fn len_of(&self, id: CycleId) -> usize;

    fn cycle_count(&self) -> usize;

    /// `(min vertex, size)` for every cycle, ordered by min vertex.
    fn summaries(&self) -> Vec<(u32, usize)>;

    /// The cycle of `v` as stored; orientation and rotation are arbitrary.
    fn cycle_of(&self, v: u32) -> Result<Cycle>;

    /// Stored direction of `v`. Only the product of two stored directions in
    /// one cycle is meaningful.
    fn stored_direction(&self, v: u32) -> Result<Direction>;

    /// The entry `offset` steps after `v` in the orientation where `v` is up,
    /// with its direction in that orientation.
    fn step_from(&self, v: u32, offset: usize) -> Result<(u32, Direction)>;

    /// `#up - #down` over the first `min(k, |C(v)|)` entries of `C(v)` read
    /// from `v` with `v` up.
    fn balance(&self, v: u32, k: usize) -> Result<i64>;

    fn cycle_len(&self, v: u32) -> Result<usize> {
        Ok(self.len_of(self.cycle_id(v)?))
    }

    fn apply_edge(&mut self, edge: Edge, mark: Mark) -> Result<LinkEvent> {
        let (u, v) = edge.endpoints();
        self.apply_link(u, v, mark)
    }

    /// Like [`CycleBackend::apply_link`] but a self-pair is a no-op.
    fn apply_endpoints(&mut self, u: u32, v: u32, mark: Mark) -> Result<LinkEvent> {
        if u == v {
            self.check_vertex(u)?;
            Ok(LinkEvent::Noop)
        } else {
            self.apply_link(u, v, mark)
        }
    }

    fn check_vertex(&self, v: u32) -> Result<()> {
        if v == 0 || v > self.n() {
            Err(Error::UnknownVertex(v))
        } else {
            Ok(())
        }
    }

    fn cycles(&self) -> Vec<Cycle> {
        self.summaries()
            .into_iter()
            .map(|(v, _)| self.cycle_of(v).expect("summary vertex exists"))
            .collect()
    }

    fn sizes(&self) -> Vec<usize> {
        self.summaries().into_iter().map(|s| s.1).collect()
    }

    /// All cycles in canonical form, sorted by size descending then min vertex.
    fn canonical_cycles(&self) -> Vec<Cycle> {
        let mut out: Vec<Cycle> = self.cycles().iter().map(canonical).collect();
        sort_cycles(&mut out);
        out
    }
}

pub(crate) fn sort_cycles(cycles: &mut [Cycle]) {
    cycles.sort_by(|a, b| b.len().cmp(&a.len()).then(a.seq[0].0.cmp(&b.seq[0].0)));
}

/// `n` fixed points, all up.
pub fn singleton_cycles(n: u32) -> Result<CycleSet> {
    CycleSet::singletons(n)
}

/// Cycles of an ordered link list, built with the default backend.
pub fn build(ordered: &OrderedLinks) -> Result<CycleSet> {
    build_with(ordered)
}

/// Cycles of an ordered link list.
///
/// [`CycleBackend::apply_link`] inserts below all existing links, so the
/// sequence is consumed from the highest phase down.
pub fn build_with<B: CycleBackend>(ordered: &OrderedLinks) -> Result<B> {
    let mut cs = B::singletons(ordered.n)?;
    for &(edge, mark) in ordered.seq.iter().rev() {
        cs.apply_edge(edge, mark)?;
    }
    Ok(cs)
}

/// Rotate so the minimum vertex comes first, then orient it up.
pub fn canonical(c: &Cycle) -> Cycle {
    match c.min_vertex() {
        Some(m) => c.oriented_at(m).expect("min vertex is present"),
        None => c.clone(),
    }
}

/// Sizes divided by `denom`, in decreasing order.
pub fn rescaled_sizes(sizes: &[usize], denom: usize) -> Result<Vec<f64>> {
    if denom == 0 {
        return Err(invalid("denom", "must be positive"));
    }
    let mut s: Vec<usize> = sizes.to_vec();
    s.sort_unstable_by(|a, b| b.cmp(a));
    Ok(s.into_iter().map(|x| x as f64 / denom as f64).collect())
}

pub fn balance<B: CycleBackend>(cs: &B, v: u32, k: usize) -> Result<i64> {
    if k == 0 {
        return Err(invalid("k", "must be at least 1"));
    }
    cs.balance(v, k)
}

/// Integer square root.
pub fn isqrt(n: u64) -> u64 {
    let mut r = libm::sqrt(n as f64) as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Consecutive runs of `canonical(c)` of size `s = floor(sqrt(n))`, with any
/// remainder shorter than `s` absorbed by the last run. A cycle shorter than
/// `s` is a single segment.
pub fn segment_partition(c: &Cycle, n: u32) -> Vec<Vec<u32>> {
    let c = canonical(c);
    let s = isqrt(u64::from(n)).max(1) as usize;
    let verts: Vec<u32> = c.vertices().collect();
    if verts.is_empty() {
        return Vec::new();
    }
    if verts.len() < s {
        return alloc::vec![verts];
    }
    let count = verts.len() / s;
    (0..count)
        .map(|i| {
            let end = if i + 1 == count {
                verts.len()
            } else {
                (i + 1) * s
            };
            verts[i * s..end].to_vec()
        })
        .collect()
}

/// Validate `n` for a backend constructor.
pub(crate) fn check_n(n: u32) -> Result<()> {
    if n == 0 {
        Err(invalid("n", "need at least one vertex"))
    } else {
        Ok(())
    }
}

/// Cycle edits in terms of a rotated and oriented sequence `a, mid.., b, rest..`
/// where `a` is up. Both backends follow this table.
pub(crate) enum Plan {
    /// `a ++ rest` and `mid ++ b`.
    CrossSplit,
    /// `a ++ revneg(mid) ++ b ++ rest`.
    CrossTwist,
    /// `a ++ b ++ rest` and `mid`; `mid` must be non-empty.
    BarSplit,
    /// `a ++ revneg(mid ++ b) ++ rest`.
    BarTwist,
    /// `mid` is empty and `b` is down: nothing changes.
    Unchanged,
}

pub(crate) fn plan(mark: Mark, db: Direction, mid_len: usize) -> Plan {
    match (mark, db) {
        (Mark::Cross, Direction::Up) => Plan::CrossSplit,
        (Mark::Cross, Direction::Down) => Plan::CrossTwist,
        (Mark::Bar, Direction::Down) if mid_len == 0 => Plan::Unchanged,
        (Mark::Bar, Direction::Down) => Plan::BarSplit,
        (Mark::Bar, Direction::Up) => Plan::BarTwist,
    }
}

#[cfg(test)]
mod tests;
