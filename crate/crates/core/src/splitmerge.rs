//! Split-merge dynamics on interval partitions of `[0, 1)` and the matched
//! coupling of two such partitions.
//!
//! One step uses three uniforms `(u, u2, w)`. The block containing `u` is
//! highlighted and moved to the front. If `u2` then falls in another block the
//! two merge; if it falls in the highlighted block a split at `u2` is
//! proposed and carried out when `w <= theta`.
//!
//! In the coupling both partitions use the same uniforms. Pieces created by a
//! joint split that have exactly the same length are matched. The layout puts
//! unmatched blocks first and matched blocks after them, each part in
//! decreasing order, with matched pairs in the same order on both sides.

use alloc::vec::Vec;
use core::cmp::Ordering;

use rand::Rng;

use crate::error::{invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Block {
    pub length: f64,
    /// Stable token, unique across both partitions of a coupling.
    pub id: u64,
    pub matched_to: Option<u64>,
}

impl Block {
    pub fn new(length: f64, id: u64) -> Block {
        Block {
            length,
            id,
            matched_to: None,
        }
    }
}

pub fn lengths(blocks: &[Block]) -> Vec<f64> {
    blocks.iter().map(|b| b.length).collect()
}

/// Blocks from lengths, with ids `0, 1, ...`.
pub fn blocks_from(lengths: &[f64]) -> Vec<Block> {
    lengths
        .iter()
        .enumerate()
        .map(|(i, &l)| Block::new(l, i as u64))
        .collect()
}

fn check_unit(name: &'static str, x: f64) -> Result<()> {
    if (0.0..1.0).contains(&x) {
        Ok(())
    } else {
        Err(invalid(name, "must lie in [0, 1)"))
    }
}

fn check_theta(theta: f64) -> Result<()> {
    if theta > 0.0 && theta <= 1.0 {
        Ok(())
    } else {
        Err(invalid("theta", "must lie in (0, 1]"))
    }
}

/// Index of the block containing coordinate `x`. Rounding can leave the
/// lengths summing to slightly under one; such `x` go to the last block.
fn locate(blocks: &[Block], x: f64) -> usize {
    let mut acc = 0.0;
    for (i, b) in blocks.iter().enumerate() {
        acc += b.length;
        if x < acc {
            return i;
        }
    }
    blocks.len() - 1
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Outcome {
    /// The front block was split into `blocks[0]` and `blocks[1]`.
    Split { old: Block },
    /// A split was proposed and rejected, or was degenerate.
    Kept,
    /// The front block absorbed `other`; the result is `blocks[0]`.
    Merged { old: Block, other: Block },
}

fn act(blocks: &mut Vec<Block>, u: f64, u2: f64, split: bool, next_id: &mut u64) -> Outcome {
    let i = locate(blocks, u);
    let h = blocks.remove(i);
    blocks.insert(0, h);
    if u2 < h.length {
        if !split || u2 == 0.0 {
            return Outcome::Kept;
        }
        let left = Block::new(u2, *next_id);
        let right = Block::new(h.length - u2, *next_id + 1);
        *next_id += 2;
        blocks[0] = left;
        blocks.insert(1, right);
        return Outcome::Split { old: h };
    }
    let k = locate(blocks, u2).max(1);
    let other = blocks.remove(k);
    blocks[0] = Block::new(h.length + other.length, *next_id);
    *next_id += 1;
    Outcome::Merged { old: h, other }
}

/// One step of the single-partition chain. The result keeps the relocated
/// layout: new blocks at the front, the rest in their previous order.
pub fn marginal_step(p: &[Block], u: f64, u2: f64, w: f64, theta: f64) -> Result<Vec<Block>> {
    check_unit("u", u)?;
    check_unit("u2", u2)?;
    check_unit("w", w)?;
    check_theta(theta)?;
    if p.is_empty() {
        return Err(invalid("p", "partition has no blocks"));
    }
    let mut blocks = p.to_vec();
    let mut next_id = p.iter().map(|b| b.id).max().unwrap_or(0) + 1;
    act(&mut blocks, u, u2, w <= theta, &mut next_id);
    Ok(blocks)
}

/// Run the single-partition chain for `steps` steps with fresh uniforms.
pub fn run_marginal<R: Rng + ?Sized>(
    p: &[Block],
    steps: u64,
    theta: f64,
    rng: &mut R,
) -> Result<Vec<Block>> {
    let mut cur = p.to_vec();
    for _ in 0..steps {
        let (u, u2, w) = (rng.random(), rng.random(), rng.random());
        cur = marginal_step(&cur, u, u2, w, theta)?;
    }
    Ok(cur)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoupledPartitions {
    pub y: Vec<Block>,
    pub z: Vec<Block>,
    next_id: u64,
}

fn layout_order(a: &Block, b: &Block) -> Ordering {
    let key = |x: &Block| x.matched_to.map(|m| m.min(x.id));
    match (a.matched_to.is_some(), b.matched_to.is_some()) {
        (false, true) => Ordering::Less,
        (true, false) => Ordering::Greater,
        (false, false) => b.length.total_cmp(&a.length).then(a.id.cmp(&b.id)),
        (true, true) => b.length.total_cmp(&a.length).then(key(a).cmp(&key(b))),
    }
}

fn validate(name: &'static str, ls: &[f64]) -> Result<()> {
    if ls.is_empty() || ls.iter().any(|&l| l.is_nan() || l <= 0.0) {
        return Err(invalid(name, "blocks must have positive length"));
    }
    if (ls.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
        return Err(invalid(name, "block lengths must sum to one"));
    }
    Ok(())
}

impl CoupledPartitions {
    /// Two partitions with nothing matched.
    pub fn new(y: &[f64], z: &[f64]) -> Result<CoupledPartitions> {
        validate("y", y)?;
        validate("z", z)?;
        let ny = y.len() as u64;
        let yb = blocks_from(y);
        let zb = z
            .iter()
            .enumerate()
            .map(|(i, &l)| Block::new(l, ny + i as u64))
            .collect();
        let mut cp = CoupledPartitions {
            y: yb,
            z: zb,
            next_id: ny + z.len() as u64,
        };
        cp.relayout();
        Ok(cp)
    }

    /// Two copies of `p` with every block matched to its twin.
    pub fn identical(p: &[f64]) -> Result<CoupledPartitions> {
        let mut cp = CoupledPartitions::new(p, p)?;
        let ny = p.len() as u64;
        for b in cp.y.iter_mut() {
            b.matched_to = Some(b.id + ny);
        }
        for b in cp.z.iter_mut() {
            b.matched_to = Some(b.id - ny);
        }
        cp.relayout();
        Ok(cp)
    }

    fn relayout(&mut self) {
        self.y.sort_by(layout_order);
        self.z.sort_by(layout_order);
    }

    /// Unmatched mass `R`, computed on `y` (both sides agree up to rounding).
    pub fn r(&self) -> f64 {
        self.y
            .iter()
            .filter(|b| b.matched_to.is_none())
            .map(|b| b.length)
            .sum()
    }

    pub fn q(&self) -> f64 {
        self.y
            .iter()
            .filter(|b| b.matched_to.is_some())
            .map(|b| b.length)
            .sum()
    }

    pub fn r_z(&self) -> f64 {
        self.z
            .iter()
            .filter(|b| b.matched_to.is_none())
            .map(|b| b.length)
            .sum()
    }

    /// Check the matching: a bijection between equal-length blocks.
    pub fn matching_consistent(&self) -> bool {
        let find = |side: &[Block], id: u64| side.iter().find(|b| b.id == id).copied();
        let ok = |a: &[Block], b: &[Block]| {
            a.iter().all(|x| match x.matched_to {
                None => true,
                Some(m) => {
                    find(b, m).is_some_and(|y| y.matched_to == Some(x.id) && y.length == x.length)
                }
            })
        };
        ok(&self.y, &self.z) && ok(&self.z, &self.y)
    }

    fn unmatch(side: &mut [Block], id: Option<u64>) {
        if let Some(id) = id {
            if let Some(b) = side.iter_mut().find(|b| b.id == id) {
                b.matched_to = None;
            }
        }
    }
}

/// Largest and second largest unmatched lengths.
fn top_unmatched(side: &[Block]) -> (f64, f64) {
    let mut a = 0.0f64;
    let mut b = 0.0f64;
    for x in side.iter().filter(|x| x.matched_to.is_none()) {
        if x.length > a {
            b = a;
            a = x.length;
        } else if x.length > b {
            b = x.length;
        }
    }
    (a, b)
}

/// One coupled step driven by shared uniforms.
pub fn coupled_step(
    cp: &CoupledPartitions,
    u: f64,
    u2: f64,
    w: f64,
    theta: f64,
) -> Result<CoupledPartitions> {
    check_unit("u", u)?;
    check_unit("u2", u2)?;
    check_unit("w", w)?;
    check_theta(theta)?;
    let mut next = cp.clone();
    let split = w <= theta;
    let oy = act(&mut next.y, u, u2, split, &mut next.next_id);
    let oz = act(&mut next.z, u, u2, split, &mut next.next_id);

    // Blocks that no longer exist, per side, and whether their partner on
    // the other side was consumed by the same step.
    let gone = |o: &Outcome| -> Vec<Block> {
        match *o {
            Outcome::Split { old } => alloc::vec![old],
            Outcome::Merged { old, other } => alloc::vec![old, other],
            Outcome::Kept => Vec::new(),
        }
    };
    let (gy, gz) = (gone(&oy), gone(&oz));
    for b in &gy {
        CoupledPartitions::unmatch(&mut next.z, b.matched_to);
    }
    for b in &gz {
        CoupledPartitions::unmatch(&mut next.y, b.matched_to);
    }

    let pair = |a: &Block, b: &Block| a.matched_to == Some(b.id);
    match (oy, oz) {
        (Outcome::Split { old: hy }, Outcome::Split { old: hz }) => {
            let (ly, lz) = (next.y[0].id, next.z[0].id);
            next.y[0].matched_to = Some(lz);
            next.z[0].matched_to = Some(ly);
            if pair(&hy, &hz) || next.y[1].length == next.z[1].length {
                let (ry, rz) = (next.y[1].id, next.z[1].id);
                next.y[1].matched_to = Some(rz);
                next.z[1].matched_to = Some(ry);
            }
        }
        (Outcome::Merged { old: ay, other: by }, Outcome::Merged { old: az, other: bz })
            if pair(&ay, &az) && pair(&by, &bz) =>
        {
            let (my, mz) = (next.y[0].id, next.z[0].id);
            next.y[0].matched_to = Some(mz);
            next.z[0].matched_to = Some(my);
        }
        _ => {}
    }
    next.relayout();
    Ok(next)
}

/// Statistics recorded after each step of the coupled chain.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainStats {
    pub t: u64,
    pub r: f64,
    pub q: f64,
    /// Largest and second largest unmatched blocks of `y`.
    pub y1: f64,
    pub y2: f64,
    /// Largest unmatched block of `z`.
    pub z1: f64,
    /// Unmatched blocks of size at least each `eps`, summed over both sides.
    pub n_eps: Vec<u64>,
}

pub fn chain_stats(cp: &CoupledPartitions, t: u64, eps: &[f64]) -> ChainStats {
    let (y1, y2) = top_unmatched(&cp.y);
    let (z1, _) = top_unmatched(&cp.z);
    let count = |side: &[Block], e: f64| {
        side.iter()
            .filter(|b| b.matched_to.is_none() && b.length >= e)
            .count() as u64
    };
    ChainStats {
        t,
        r: cp.r(),
        q: cp.q(),
        y1,
        y2,
        z1,
        n_eps: eps
            .iter()
            .map(|&e| count(&cp.y, e) + count(&cp.z, e))
            .collect(),
    }
}

/// Run the coupled chain; the result has `steps + 1` entries starting at
/// `t = 0`.
pub fn run_chain<R: Rng + ?Sized>(
    cp: &CoupledPartitions,
    steps: u64,
    theta: f64,
    eps: &[f64],
    rng: &mut R,
) -> Result<(CoupledPartitions, Vec<ChainStats>)> {
    check_theta(theta)?;
    let mut cur = cp.clone();
    let mut out = Vec::with_capacity(steps as usize + 1);
    out.push(chain_stats(&cur, 0, eps));
    for t in 1..=steps {
        let (u, u2, w) = (rng.random(), rng.random(), rng.random());
        cur = coupled_step(&cur, u, u2, w, theta)?;
        out.push(chain_stats(&cur, t, eps));
    }
    Ok((cur, out))
}
