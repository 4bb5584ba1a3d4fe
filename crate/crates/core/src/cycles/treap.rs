use alloc::vec;
use alloc::vec::Vec;

use super::{check_n, plan, Cycle, CycleBackend, CycleId, Direction, LinkEvent, Plan};
use crate::config::Mark;
use crate::error::{Error, Result};
use crate::rng::splitmix64;

const NIL: u32 = u32::MAX;

#[derive(Debug, Clone)]
struct Node {
    left: u32,
    right: u32,
    parent: u32,
    prio: u32,
    size: u32,
    sum: i32,
    dir: i8,
    /// Children still owe a reverse-and-negate. The node's own fields are
    /// already up to date.
    rev: bool,
}

/// One implicit treap per cycle over an arena holding a node per vertex.
///
/// Rotation, splitting, joining and reversal are `O(log n)` expected. A cycle
/// is identified by its root node, so handles change on every mutation.
#[derive(Debug, Clone)]
pub struct TreapCycles {
    nodes: Vec<Node>,
    count: usize,
}

#[inline]
fn flip(d: i8, f: bool) -> i8 {
    if f {
        -d
    } else {
        d
    }
}

fn dir_of(d: i8) -> Direction {
    if d > 0 {
        Direction::Up
    } else {
        Direction::Down
    }
}

impl TreapCycles {
    #[inline]
    fn size(&self, x: u32) -> u32 {
        if x == NIL {
            0
        } else {
            self.nodes[x as usize].size
        }
    }

    #[inline]
    fn sum(&self, x: u32) -> i32 {
        if x == NIL {
            0
        } else {
            self.nodes[x as usize].sum
        }
    }

    fn revneg(&mut self, x: u32) {
        if x == NIL {
            return;
        }
        let nd = &mut self.nodes[x as usize];
        core::mem::swap(&mut nd.left, &mut nd.right);
        nd.dir = -nd.dir;
        nd.sum = -nd.sum;
        nd.rev = !nd.rev;
    }

    fn push(&mut self, x: u32) {
        if self.nodes[x as usize].rev {
            let (l, r) = (self.nodes[x as usize].left, self.nodes[x as usize].right);
            self.revneg(l);
            self.revneg(r);
            self.nodes[x as usize].rev = false;
        }
    }

    fn update(&mut self, x: u32) {
        let (l, r) = (self.nodes[x as usize].left, self.nodes[x as usize].right);
        let size = 1 + self.size(l) + self.size(r);
        let sum = i32::from(self.nodes[x as usize].dir) + self.sum(l) + self.sum(r);
        let nd = &mut self.nodes[x as usize];
        nd.size = size;
        nd.sum = sum;
        if l != NIL {
            self.nodes[l as usize].parent = x;
        }
        if r != NIL {
            self.nodes[r as usize].parent = x;
        }
    }

    fn split_rec(&mut self, t: u32, k: u32) -> (u32, u32) {
        if t == NIL {
            return (NIL, NIL);
        }
        self.push(t);
        let l = self.nodes[t as usize].left;
        let ls = self.size(l);
        if k <= ls {
            let (a, b) = self.split_rec(l, k);
            self.nodes[t as usize].left = b;
            self.update(t);
            (a, t)
        } else {
            let r = self.nodes[t as usize].right;
            let (a, b) = self.split_rec(r, k - ls - 1);
            self.nodes[t as usize].right = a;
            self.update(t);
            (t, b)
        }
    }

    fn merge_rec(&mut self, a: u32, b: u32) -> u32 {
        if a == NIL {
            return b;
        }
        if b == NIL {
            return a;
        }
        if self.nodes[a as usize].prio > self.nodes[b as usize].prio {
            self.push(a);
            let r = self.nodes[a as usize].right;
            let m = self.merge_rec(r, b);
            self.nodes[a as usize].right = m;
            self.update(a);
            a
        } else {
            self.push(b);
            let l = self.nodes[b as usize].left;
            let m = self.merge_rec(a, l);
            self.nodes[b as usize].left = m;
            self.update(b);
            b
        }
    }

    fn detach(&mut self, x: u32) {
        if x != NIL {
            self.nodes[x as usize].parent = NIL;
        }
    }

    /// First `k` entries and the rest.
    fn split(&mut self, t: u32, k: u32) -> (u32, u32) {
        let (a, b) = self.split_rec(t, k);
        self.detach(a);
        self.detach(b);
        (a, b)
    }

    fn merge(&mut self, a: u32, b: u32) -> u32 {
        let m = self.merge_rec(a, b);
        self.detach(m);
        m
    }

    fn merge_all(&mut self, parts: &[u32]) -> u32 {
        parts.iter().fold(NIL, |acc, &p| self.merge(acc, p))
    }

    fn root(&self, mut x: u32) -> u32 {
        while self.nodes[x as usize].parent != NIL {
            x = self.nodes[x as usize].parent;
        }
        x
    }

    /// Root, position and effective direction of node `x`, without touching
    /// pending flags.
    fn locate_node(&self, x: u32) -> (u32, u32, i8) {
        let mut f = false;
        let mut y = self.nodes[x as usize].parent;
        while y != NIL {
            f ^= self.nodes[y as usize].rev;
            y = self.nodes[y as usize].parent;
        }
        let nd = &self.nodes[x as usize];
        let dir = flip(nd.dir, f);
        let mut pos = self.size(if f { nd.right } else { nd.left });
        let mut cur = x;
        let mut fc = f;
        loop {
            let p = self.nodes[cur as usize].parent;
            if p == NIL {
                return (cur, pos, dir);
            }
            let fp = fc ^ self.nodes[p as usize].rev;
            let pn = &self.nodes[p as usize];
            let stored_right = pn.right == cur;
            if stored_right != fp {
                let sibling = if stored_right { pn.left } else { pn.right };
                pos += self.size(sibling) + 1;
            }
            cur = p;
            fc = fp;
        }
    }

    fn locate(&self, v: u32) -> Result<(u32, u32, i8)> {
        self.check_vertex(v)?;
        Ok(self.locate_node(v - 1))
    }

    /// Node at position `k` of the tree at `root` with its effective direction.
    fn select(&self, root: u32, mut k: u32) -> (u32, i8) {
        let mut t = root;
        let mut f = false;
        loop {
            let nd = &self.nodes[t as usize];
            let (el, er) = if f {
                (nd.right, nd.left)
            } else {
                (nd.left, nd.right)
            };
            let ls = self.size(el);
            let cf = f ^ nd.rev;
            if k < ls {
                t = el;
            } else if k == ls {
                return (t, flip(nd.dir, f));
            } else {
                k -= ls + 1;
                t = er;
            }
            f = cf;
        }
    }

    /// Sum of the first `k` effective directions.
    fn prefix(&self, root: u32, mut k: u32) -> i64 {
        let mut acc = 0i64;
        let mut t = root;
        let mut f = false;
        while t != NIL && k > 0 {
            let nd = &self.nodes[t as usize];
            if k >= nd.size {
                return acc + i64::from(flip_sum(nd.sum, f));
            }
            let (el, er) = if f {
                (nd.right, nd.left)
            } else {
                (nd.left, nd.right)
            };
            let ls = self.size(el);
            let cf = f ^ nd.rev;
            if k <= ls {
                t = el;
            } else {
                acc += i64::from(flip(nd.dir, f)) + i64::from(flip_sum(self.sum(el), cf));
                k -= ls + 1;
                t = er;
            }
            f = cf;
        }
        acc
    }

    /// Sum over `m <= len` entries starting at `start`, wrapping around.
    fn cyclic_sum(&self, root: u32, start: u32, m: u32) -> i64 {
        let len = self.size(root);
        if start + m <= len {
            self.prefix(root, start + m) - self.prefix(root, start)
        } else {
            self.prefix(root, len) - self.prefix(root, start) + self.prefix(root, start + m - len)
        }
    }

    /// Rotate and orient so that node at `pos` with direction `dir` comes
    /// first and is up.
    fn orient(&mut self, root: u32, pos: u32, dir: i8) -> u32 {
        let mut pos = pos;
        if dir < 0 {
            self.revneg(root);
            pos = self.size(root) - 1 - pos;
        }
        if pos == 0 {
            return root;
        }
        let (l, r) = self.split(root, pos);
        self.merge(r, l)
    }

    fn collect(&self, root: u32, out: &mut Vec<(u32, Direction)>) {
        let mut stack: Vec<(u32, bool, bool)> = vec![(root, false, false)];
        while let Some((t, f, expanded)) = stack.pop() {
            if t == NIL {
                continue;
            }
            let nd = &self.nodes[t as usize];
            if expanded {
                out.push((t + 1, dir_of(flip(nd.dir, f))));
                continue;
            }
            let (el, er) = if f {
                (nd.right, nd.left)
            } else {
                (nd.left, nd.right)
            };
            let cf = f ^ nd.rev;
            stack.push((er, cf, false));
            stack.push((t, f, true));
            stack.push((el, cf, false));
        }
    }
}

#[inline]
fn flip_sum(s: i32, f: bool) -> i32 {
    if f {
        -s
    } else {
        s
    }
}

impl CycleBackend for TreapCycles {
    fn singletons(n: u32) -> Result<Self> {
        check_n(n)?;
        let nodes = (0..n)
            .map(|i| Node {
                left: NIL,
                right: NIL,
                parent: NIL,
                prio: (splitmix64(u64::from(i)) >> 32) as u32,
                size: 1,
                sum: 1,
                dir: 1,
                rev: false,
            })
            .collect();
        Ok(TreapCycles {
            nodes,
            count: n as usize,
        })
    }

    fn n(&self) -> u32 {
        self.nodes.len() as u32
    }

    fn apply_link(&mut self, a: u32, b: u32, mark: Mark) -> Result<LinkEvent> {
        if a == b {
            return Err(Error::SelfLink(a));
        }
        let (ra, pa, da) = self.locate(a)?;
        let (rb, pb, db) = self.locate(b)?;
        let (na, nb) = (a - 1, b - 1);
        if ra != rb {
            let ta = self.orient(ra, pa, da);
            let tb = self.orient(rb, pb, db);
            let (ha, resta) = self.split(ta, 1);
            let (hb, restb) = self.split(tb, 1);
            let root = match mark {
                Mark::Cross => self.merge_all(&[ha, restb, hb, resta]),
                Mark::Bar => {
                    self.revneg(hb);
                    self.revneg(restb);
                    self.merge_all(&[ha, hb, restb, resta])
                }
            };
            self.count -= 1;
            return Ok(LinkEvent::Merge {
                a: CycleId(ra),
                b: CycleId(rb),
                into: CycleId(root),
            });
        }
        let t = self.orient(ra, pa, da);
        let (_, j, dj) = self.locate_node(nb);
        let (ha, rest) = self.split(t, 1);
        let (mid, rest) = self.split(rest, j - 1);
        let (hb, rest) = self.split(rest, 1);
        debug_assert_eq!(ha, na);
        debug_assert_eq!(hb, nb);
        let mid_len = self.size(mid) as usize;
        let event = match plan(mark, dir_of(dj), mid_len) {
            Plan::CrossSplit => {
                let first = self.merge(ha, rest);
                let second = self.merge(mid, hb);
                self.count += 1;
                LinkEvent::Split {
                    from: CycleId(ra),
                    first: CycleId(first),
                    second: CycleId(second),
                }
            }
            Plan::BarSplit => {
                let first = self.merge_all(&[ha, hb, rest]);
                self.count += 1;
                LinkEvent::Split {
                    from: CycleId(ra),
                    first: CycleId(first),
                    second: CycleId(mid),
                }
            }
            Plan::CrossTwist => {
                self.revneg(mid);
                LinkEvent::Twist(CycleId(self.merge_all(&[ha, mid, hb, rest])))
            }
            Plan::BarTwist => {
                let tail = self.merge(mid, hb);
                self.revneg(tail);
                LinkEvent::Twist(CycleId(self.merge_all(&[ha, tail, rest])))
            }
            Plan::Unchanged => LinkEvent::Twist(CycleId(self.merge_all(&[ha, hb, rest]))),
        };
        Ok(event)
    }

    fn cycle_id(&self, v: u32) -> Result<CycleId> {
        self.check_vertex(v)?;
        Ok(CycleId(self.root(v - 1)))
    }

    fn len_of(&self, id: CycleId) -> usize {
        self.size(id.0) as usize
    }

    fn cycle_count(&self) -> usize {
        self.count
    }

    fn summaries(&self) -> Vec<(u32, usize)> {
        let mut seen = vec![false; self.nodes.len()];
        let mut out = Vec::with_capacity(self.count);
        for x in 0..self.nodes.len() as u32 {
            let r = self.root(x);
            if !seen[r as usize] {
                seen[r as usize] = true;
                out.push((x + 1, self.size(r) as usize));
            }
        }
        out
    }

    fn cycle_of(&self, v: u32) -> Result<Cycle> {
        self.check_vertex(v)?;
        let r = self.root(v - 1);
        let mut seq = Vec::with_capacity(self.size(r) as usize);
        self.collect(r, &mut seq);
        Ok(Cycle::new(seq))
    }

    fn stored_direction(&self, v: u32) -> Result<Direction> {
        Ok(dir_of(self.locate(v)?.2))
    }

    fn step_from(&self, v: u32, offset: usize) -> Result<(u32, Direction)> {
        let (root, p, d) = self.locate(v)?;
        let len = u64::from(self.size(root));
        let off = (offset as u64 % len) as u32;
        let len = len as u32;
        let (node, dir) = if d > 0 {
            self.select(root, (p + off) % len)
        } else {
            let (x, e) = self.select(root, (p + len - off) % len);
            (x, -e)
        };
        Ok((node + 1, dir_of(dir)))
    }

    fn balance(&self, v: u32, k: usize) -> Result<i64> {
        let (root, p, d) = self.locate(v)?;
        let len = self.size(root);
        let m = k.min(len as usize) as u32;
        if d > 0 {
            Ok(self.cyclic_sum(root, p, m))
        } else {
            let start = (p + len + 1 - m) % len;
            Ok(-self.cyclic_sum(root, start, m))
        }
    }
}
