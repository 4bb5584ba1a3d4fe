use alloc::vec;
use alloc::vec::Vec;

use super::{check_n, plan, Cycle, CycleBackend, CycleId, Direction, LinkEvent, Plan};
use crate::config::Mark;
use crate::error::{Error, Result};

/// Reference backend: one vector per cycle plus a vertex index.
///
/// Every operation is linear in the size of the cycles involved.
#[derive(Debug, Clone)]
pub struct NaiveCycles {
    n: u32,
    slots: Vec<Vec<(u32, Direction)>>,
    free: Vec<u32>,
    /// `(slot, position)` for vertex `v` at `v - 1`.
    index: Vec<(u32, u32)>,
    count: usize,
}

fn revneg(s: &[(u32, Direction)]) -> impl Iterator<Item = (u32, Direction)> + '_ {
    s.iter().rev().map(|&(v, d)| (v, -d))
}

impl NaiveCycles {
    fn oriented(&self, slot: u32, v: u32) -> Vec<(u32, Direction)> {
        Cycle::new(self.slots[slot as usize].clone())
            .oriented_at(v)
            .expect("index is consistent")
            .seq
    }

    fn store(&mut self, slot: u32, seq: Vec<(u32, Direction)>) {
        for (i, &(v, _)) in seq.iter().enumerate() {
            self.index[(v - 1) as usize] = (slot, i as u32);
        }
        self.slots[slot as usize] = seq;
    }

    fn fresh_slot(&mut self) -> u32 {
        match self.free.pop() {
            Some(s) => s,
            None => {
                self.slots.push(Vec::new());
                (self.slots.len() - 1) as u32
            }
        }
    }

    fn locate(&self, v: u32) -> Result<(u32, u32)> {
        self.check_vertex(v)?;
        Ok(self.index[(v - 1) as usize])
    }
}

impl CycleBackend for NaiveCycles {
    fn singletons(n: u32) -> Result<Self> {
        check_n(n)?;
        Ok(NaiveCycles {
            n,
            slots: (1..=n).map(|v| vec![(v, Direction::Up)]).collect(),
            free: Vec::new(),
            index: (0..n).map(|i| (i, 0)).collect(),
            count: n as usize,
        })
    }

    fn n(&self) -> u32 {
        self.n
    }

    fn apply_link(&mut self, a: u32, b: u32, mark: Mark) -> Result<LinkEvent> {
        if a == b {
            return Err(Error::SelfLink(a));
        }
        let (ca, _) = self.locate(a)?;
        let (cb, _) = self.locate(b)?;
        if ca != cb {
            let sa = self.oriented(ca, a);
            let sb = self.oriented(cb, b);
            let mut out = Vec::with_capacity(sa.len() + sb.len());
            out.push(sa[0]);
            match mark {
                Mark::Cross => {
                    out.extend_from_slice(&sb[1..]);
                    out.push(sb[0]);
                }
                Mark::Bar => {
                    out.push((b, Direction::Down));
                    out.extend(revneg(&sb[1..]));
                }
            }
            out.extend_from_slice(&sa[1..]);
            self.slots[cb as usize].clear();
            self.free.push(cb);
            self.store(ca, out);
            self.count -= 1;
            return Ok(LinkEvent::Merge {
                a: CycleId(ca),
                b: CycleId(cb),
                into: CycleId(ca),
            });
        }
        let s = self.oriented(ca, a);
        let j = s.iter().position(|e| e.0 == b).expect("same cycle");
        let (head, mid, tb, rest) = (s[0], &s[1..j], s[j], &s[j + 1..]);
        let split = |me: &mut Self, first: Vec<_>, second: Vec<_>| {
            let other = me.fresh_slot();
            me.store(ca, first);
            me.store(other, second);
            me.count += 1;
            LinkEvent::Split {
                from: CycleId(ca),
                first: CycleId(ca),
                second: CycleId(other),
            }
        };
        let event = match plan(mark, tb.1, mid.len()) {
            Plan::CrossSplit => {
                let first = core::iter::once(head).chain(rest.iter().copied()).collect();
                let second = mid.iter().copied().chain(core::iter::once(tb)).collect();
                split(self, first, second)
            }
            Plan::BarSplit => {
                let first = [head, tb].into_iter().chain(rest.iter().copied()).collect();
                let second = mid.to_vec();
                split(self, first, second)
            }
            Plan::CrossTwist => {
                let mut out = vec![head];
                out.extend(revneg(mid));
                out.push(tb);
                out.extend_from_slice(rest);
                self.store(ca, out);
                LinkEvent::Twist(CycleId(ca))
            }
            Plan::BarTwist => {
                let mut out = vec![head, (tb.0, -tb.1)];
                out.extend(revneg(mid));
                out.extend_from_slice(rest);
                self.store(ca, out);
                LinkEvent::Twist(CycleId(ca))
            }
            Plan::Unchanged => LinkEvent::Twist(CycleId(ca)),
        };
        Ok(event)
    }

    fn cycle_id(&self, v: u32) -> Result<CycleId> {
        Ok(CycleId(self.locate(v)?.0))
    }

    fn len_of(&self, id: CycleId) -> usize {
        self.slots[id.0 as usize].len()
    }

    fn cycle_count(&self) -> usize {
        self.count
    }

    fn summaries(&self) -> Vec<(u32, usize)> {
        let mut out: Vec<(u32, usize)> = self
            .slots
            .iter()
            .filter(|s| !s.is_empty())
            .map(|s| (s.iter().map(|e| e.0).min().unwrap_or(0), s.len()))
            .collect();
        out.sort_unstable();
        out
    }

    fn cycle_of(&self, v: u32) -> Result<Cycle> {
        let (slot, _) = self.locate(v)?;
        Ok(Cycle::new(self.slots[slot as usize].clone()))
    }

    fn stored_direction(&self, v: u32) -> Result<Direction> {
        let (slot, pos) = self.locate(v)?;
        Ok(self.slots[slot as usize][pos as usize].1)
    }

    fn step_from(&self, v: u32, offset: usize) -> Result<(u32, Direction)> {
        let (slot, _) = self.locate(v)?;
        let s = self.oriented(slot, v);
        Ok(s[offset % s.len()])
    }

    fn balance(&self, v: u32, k: usize) -> Result<i64> {
        let (slot, _) = self.locate(v)?;
        let s = self.oriented(slot, v);
        Ok(s.iter().take(k).map(|e| i64::from(e.1.sign())).sum())
    }
}
