//! Direct loop tracing on a finite configuration.
//!
//! Each circle `{v} × S¹` is cut by its link endpoints into arcs. A loop is
//! traced by running along arcs and crossing links, reversing on bars, until
//! the starting arc comes round again. Every arc belongs to exactly one loop.

use alloc::vec;
use alloc::vec::Vec;

use crate::config::{Configuration, Mark};
use crate::cycles::{canonical, sort_cycles, Cycle, Direction};
use crate::error::{Error, Result};

/// A point on a loop: either a level-zero crossing or the landing point of a
/// link traversal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Visit {
    pub vertex: u32,
    pub phase: f64,
    /// Direction of motion just after the point.
    pub dir: Direction,
    /// Index of the traversed link, `None` at level zero.
    pub link: Option<u32>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Loop {
    pub length: f64,
    pub visits: Vec<Visit>,
    /// Number of link traversals along the loop.
    pub traversals: usize,
}

impl Loop {
    /// Successive passages through level zero.
    pub fn level0(&self) -> impl Iterator<Item = (u32, Direction)> + '_ {
        self.visits
            .iter()
            .filter(|v| v.link.is_none())
            .map(|v| (v.vertex, v.dir))
    }
}

struct Arcs {
    /// Per vertex: `(phase, link, side)` sorted by phase.
    ends: Vec<Vec<(f64, u32, u8)>>,
    /// Per link and side: index of that endpoint in `ends`.
    slot: Vec<[u32; 2]>,
    offset: Vec<usize>,
}

impl Arcs {
    fn new(cfg: &Configuration) -> Result<Arcs> {
        let n = cfg.n as usize;
        let mut phases: Vec<f64> = Vec::with_capacity(cfg.len());
        let mut ends: Vec<Vec<(f64, u32, u8)>> = vec![Vec::new(); n];
        for (i, l) in cfg.links.iter().enumerate() {
            let (u, v) = l.edge.endpoints();
            if v as usize > n {
                return Err(Error::UnknownVertex(v));
            }
            if !(l.phase > 0.0 && l.phase < 1.0) {
                return Err(Error::Malformed("link phase must lie in (0, 1)"));
            }
            phases.push(l.phase);
            ends[(u - 1) as usize].push((l.phase, i as u32, 0));
            ends[(v - 1) as usize].push((l.phase, i as u32, 1));
        }
        phases.sort_by(f64::total_cmp);
        if let Some(w) = phases.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicatePhase(w[0]));
        }
        let mut slot = vec![[0u32; 2]; cfg.len()];
        let mut offset = Vec::with_capacity(n + 1);
        let mut acc = 0;
        for e in ends.iter_mut() {
            e.sort_by(|a, b| a.0.total_cmp(&b.0));
            for (k, &(_, l, s)) in e.iter().enumerate() {
                slot[l as usize][s as usize] = k as u32;
            }
            offset.push(acc);
            acc += e.len().max(1);
        }
        offset.push(acc);
        Ok(Arcs { ends, slot, offset })
    }

    fn arc_len(&self, v: usize, k: usize) -> f64 {
        let e = &self.ends[v];
        let m = e.len();
        if m == 0 {
            1.0
        } else if k + 1 < m {
            e[k + 1].0 - e[k].0
        } else {
            1.0 - e[m - 1].0 + e[0].0
        }
    }
}

/// All loops of `cfg`.
pub fn trace(cfg: &Configuration) -> Result<Vec<Loop>> {
    let arcs = Arcs::new(cfg)?;
    let n = cfg.n as usize;
    let mut visited = vec![false; arcs.offset[n]];
    let mut loops = Vec::new();
    for v0 in 0..n {
        let m0 = arcs.ends[v0].len();
        if m0 == 0 {
            visited[arcs.offset[v0]] = true;
            loops.push(Loop {
                length: 1.0,
                visits: vec![Visit {
                    vertex: v0 as u32 + 1,
                    phase: 0.0,
                    dir: Direction::Up,
                    link: None,
                }],
                traversals: 0,
            });
            continue;
        }
        for k0 in 0..m0 {
            if visited[arcs.offset[v0] + k0] {
                continue;
            }
            loops.push(trace_from(cfg, &arcs, &mut visited, v0, k0));
        }
    }
    Ok(loops)
}

/// Follow the loop that runs upwards along arc `k0` of vertex `v0`.
fn trace_from(
    cfg: &Configuration,
    arcs: &Arcs,
    visited: &mut [bool],
    v0: usize,
    k0: usize,
) -> Loop {
    let (mut v, mut k, mut d) = (v0, k0, Direction::Up);
    let mut length = 0.0;
    let mut visits = Vec::new();
    let mut traversals = 0;
    loop {
        let m = arcs.ends[v].len();
        let arc = if d == Direction::Up {
            k
        } else {
            (k + m - 1) % m
        };
        let id = arcs.offset[v] + arc;
        if visited[id] {
            break;
        }
        visited[id] = true;
        length += arcs.arc_len(v, arc);
        if arc == m - 1 {
            visits.push(Visit {
                vertex: v as u32 + 1,
                phase: 0.0,
                dir: d,
                link: None,
            });
        }
        let next = if d == Direction::Up {
            (k + 1) % m
        } else {
            (k + m - 1) % m
        };
        let (phase, link, side) = arcs.ends[v][next];
        let l = &cfg.links[link as usize];
        let other = 1 - side as usize;
        let w = if other == 0 { l.edge.lo() } else { l.edge.hi() };
        if l.mark == Mark::Bar {
            d = -d;
        }
        traversals += 1;
        v = (w - 1) as usize;
        k = arcs.slot[link as usize][other] as usize;
        visits.push(Visit {
            vertex: w,
            phase,
            dir: d,
            link: Some(link),
        });
    }
    Loop {
        length,
        visits,
        traversals,
    }
}

/// Cycles read off at level zero, canonical and sorted by size then min vertex.
pub fn cycles_at_zero(cfg: &Configuration) -> Result<Vec<Cycle>> {
    let mut out: Vec<Cycle> = trace(cfg)?
        .iter()
        .map(|l| Cycle::new(l.level0().collect()))
        .filter(|c| !c.is_empty())
        .map(|c| canonical(&c))
        .collect();
    sort_cycles(&mut out);
    Ok(out)
}

/// How often each link is crossed over all loops.
pub fn traversal_counts(cfg: &Configuration) -> Result<Vec<u32>> {
    let mut counts = vec![0u32; cfg.len()];
    for l in trace(cfg)? {
        for link in l.visits.iter().filter_map(|v| v.link) {
            counts[link as usize] += 1;
        }
    }
    Ok(counts)
}
