//! Text formats: configurations, cycle dumps, event logs and CSV rows.

use std::fmt::Write as _;

use loopsoup_core::cycles::{Cycle, Direction};
use loopsoup_core::exploration::{Counters, Event, EventKind, ExplorationPoint, Trajectory};
use loopsoup_core::splitmerge::ChainStats;
use loopsoup_core::{Configuration, Edge, Link, Mark};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error(transparent)]
    Model(#[from] loopsoup_core::Error),
}

fn syntax(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Syntax {
        line,
        msg: msg.into(),
    }
}

/// Seventeen significant digits, enough to round-trip any `f64`.
pub fn real(x: f64) -> String {
    format!("{x:.16e}")
}

fn field<T: std::str::FromStr>(
    tok: Option<&str>,
    line: usize,
    what: &str,
) -> Result<T, FormatError> {
    tok.ok_or_else(|| syntax(line, format!("missing {what}")))?
        .parse()
        .map_err(|_| syntax(line, format!("bad {what}")))
}

/// Header `n beta nu`, then one link per line as `u v phase mark` with
/// mark `X` (cross) or `B` (bar).
pub fn write_config(cfg: &Configuration) -> String {
    let mut s = format!("{} {} {}\n", cfg.n, real(cfg.beta), real(cfg.nu));
    for l in &cfg.links {
        let m = match l.mark {
            Mark::Cross => 'X',
            Mark::Bar => 'B',
        };
        let _ = writeln!(s, "{} {} {} {}", l.edge.lo(), l.edge.hi(), real(l.phase), m);
    }
    s
}

pub fn parse_config(text: &str) -> Result<Configuration, FormatError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (ln, head) = lines.next().ok_or_else(|| syntax(1, "empty input"))?;
    let mut t = head.split_whitespace();
    let n: u32 = field(t.next(), ln, "n")?;
    let beta: f64 = field(t.next(), ln, "beta")?;
    let nu: f64 = field(t.next(), ln, "nu")?;
    let mut links = Vec::new();
    for (ln, l) in lines {
        let mut t = l.split_whitespace();
        let u: u32 = field(t.next(), ln, "u")?;
        let v: u32 = field(t.next(), ln, "v")?;
        let phase: f64 = field(t.next(), ln, "phase")?;
        let mark = match t.next() {
            Some("X") => Mark::Cross,
            Some("B") => Mark::Bar,
            _ => return Err(syntax(ln, "mark must be X or B")),
        };
        if t.next().is_some() {
            return Err(syntax(ln, "trailing fields"));
        }
        links.push(Link {
            edge: Edge::new(u, v)?,
            phase,
            mark,
        });
    }
    Ok(Configuration::new(n, beta, nu, links)?)
}

/// One cycle per line in the given order, e.g. `1^+ 3^- 2^-`.
pub fn write_cycles(cycles: &[Cycle]) -> String {
    let mut s = String::new();
    for c in cycles {
        let _ = writeln!(s, "{c}");
    }
    s
}

pub fn parse_cycles(text: &str) -> Result<Vec<Cycle>, FormatError> {
    let mut out = Vec::new();
    for (i, l) in text.lines().enumerate() {
        let l = l.trim();
        if l.is_empty() {
            continue;
        }
        let mut seq = Vec::new();
        for tok in l.split_whitespace() {
            let (v, d) = tok
                .split_once('^')
                .ok_or_else(|| syntax(i + 1, format!("bad entry {tok}")))?;
            let v: u32 = v.parse().map_err(|_| syntax(i + 1, "bad vertex"))?;
            let d = match d {
                "+" => Direction::Up,
                "-" => Direction::Down,
                _ => return Err(syntax(i + 1, "direction must be + or -")),
            };
            seq.push((v, d));
        }
        out.push(Cycle::new(seq));
    }
    Ok(out)
}

/// One event per line: `t kind vertex phase dir circle J I K B L`.
pub fn write_events(traj: &Trajectory) -> String {
    let mut s = String::new();
    for e in &traj.events {
        let p = e.point;
        let c = e.counters;
        let _ = writeln!(
            s,
            "{} {} {} {} {} {} {} {} {} {} {}",
            real(e.t),
            e.kind.name(),
            p.vertex,
            real(p.phase),
            if p.dir > 0 { '+' } else { '-' },
            p.circle,
            c.j,
            c.i,
            c.k,
            c.b,
            real(c.l)
        );
    }
    s
}

pub fn parse_events(text: &str) -> Result<Vec<Event>, FormatError> {
    let mut out = Vec::new();
    for (i, l) in text.lines().enumerate() {
        let ln = i + 1;
        if l.trim().is_empty() {
            continue;
        }
        let mut t = l.split_whitespace();
        let time: f64 = field(t.next(), ln, "time")?;
        let kind = t
            .next()
            .and_then(EventKind::parse)
            .ok_or_else(|| syntax(ln, "unknown event kind"))?;
        let vertex: u32 = field(t.next(), ln, "vertex")?;
        let phase: f64 = field(t.next(), ln, "phase")?;
        let dir = match t.next() {
            Some("+") => 1,
            Some("-") => -1,
            _ => return Err(syntax(ln, "direction must be + or -")),
        };
        let circle: u64 = field(t.next(), ln, "circle")?;
        let counters = Counters {
            j: field(t.next(), ln, "J")?,
            i: field(t.next(), ln, "I")?,
            k: field(t.next(), ln, "K")?,
            b: field(t.next(), ln, "B")?,
            l: field(t.next(), ln, "L")?,
        };
        let mut point = ExplorationPoint::new(vertex, phase, dir);
        point.circle = circle;
        out.push(Event {
            t: time,
            kind,
            point,
            counters,
        });
    }
    Ok(out)
}

/// Descending parts as one CSV row.
pub fn partition_row(parts: &[f64]) -> String {
    let mut p = parts.to_vec();
    p.sort_by(|a, b| b.total_cmp(a));
    p.iter().map(|x| real(*x)).collect::<Vec<_>>().join(",")
}

pub fn parse_partition_row(row: &str) -> Result<Vec<f64>, FormatError> {
    if row.trim().is_empty() {
        return Ok(Vec::new());
    }
    row.trim()
        .split(',')
        .map(|x| {
            x.trim()
                .parse()
                .map_err(|_| syntax(1, format!("bad part {x}")))
        })
        .collect()
}

/// `t,R,Q,y1,y2,z1,Neps...` with one `Neps` column per threshold.
pub fn chain_stats_csv(stats: &[ChainStats], eps: &[f64]) -> String {
    let mut s = String::from("t,R,Q,y1,y2,z1");
    for e in eps {
        let _ = write!(s, ",Neps_{e}");
    }
    s.push('\n');
    for c in stats {
        let _ = write!(
            s,
            "{},{},{},{},{},{}",
            c.t,
            real(c.r),
            real(c.q),
            real(c.y1),
            real(c.y2),
            real(c.z1)
        );
        for n in &c.n_eps {
            let _ = write!(s, ",{n}");
        }
        s.push('\n');
    }
    s
}

/// Plain numeric CSV with a header row.
pub fn csv(header: &[String], rows: &[Vec<f64>]) -> String {
    let mut s = header.join(",");
    s.push('\n');
    for r in rows {
        let line: Vec<String> = r.iter().map(|x| format!("{x}")).collect();
        s.push_str(&line.join(","));
        s.push('\n');
    }
    s
}
