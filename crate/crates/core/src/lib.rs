//! Simulation primitives for the interchange process with reversals on the
//! complete graph.
//!
//! A configuration is a finite set of marked links on `E_n × S¹`. Following
//! the links produces loops, and the successive passages of a loop through
//! level zero produce oriented cycles. This crate contains:
//!
//! * [`config`]: Poisson and sequential link samplers.
//! * [`cycles`]: incremental cycle maintenance under link insertion, with a
//!   naive reference backend and a balanced-tree backend.
//! * [`tracer`]: a direct loop tracer used as an oracle for [`cycles`].
//! * [`exploration`]: the exploration process, its on-the-fly construction,
//!   the simple exploration and the drifted counting process `Z`.
//! * [`pd`]: stick-breaking GEM/PD samplers and partition statistics.
//! * [`splitmerge`]: split-merge dynamics on interval partitions and the
//!   matched two-partition coupling.
//! * [`stats`]: small statistical helpers (KS, union-find, moments).
//!
//! The crate is `no_std` and only needs `alloc`.
#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod config;
pub mod cycles;
mod error;
pub mod exploration;
pub mod pd;
pub mod rng;
pub mod splitmerge;
pub mod stats;
pub mod tracer;

pub use config::{Configuration, Edge, Link, Mark, OrderedLinks};
pub use cycles::{CycleSet, Direction, LinkEvent};
pub use error::{Error, Result};
