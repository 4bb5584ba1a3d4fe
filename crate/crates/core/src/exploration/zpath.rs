use alloc::vec::Vec;

use crate::error::{invalid, Result};

/// The counting process `Z_t = N'_t - t` given by its jump times up to a
/// finite horizon.
#[derive(Debug, Clone, PartialEq)]
pub struct ZPath {
    pub jump_times: Vec<f64>,
    pub horizon: f64,
}

impl ZPath {
    pub fn new(jump_times: Vec<f64>, horizon: f64) -> ZPath {
        ZPath {
            jump_times,
            horizon,
        }
    }

    pub fn z_at(&self, t: f64) -> f64 {
        let k = self.jump_times.partition_point(|&s| s <= t);
        k as f64 - t
    }

    /// `Z` just before the `j`-th jump (0-based): `j - tau_j`.
    pub fn z_before(&self, j: usize) -> f64 {
        j as f64 - self.jump_times[j]
    }

    /// First time `Z` reaches `-1`, if within the horizon.
    pub fn first_hit_minus_one(&self) -> Option<f64> {
        for k in 0..=self.jump_times.len() {
            // After k jumps Z = k - t, which reaches -1 at t = k + 1.
            let hit = (k + 1) as f64;
            let next = self.jump_times.get(k).copied().unwrap_or(f64::INFINITY);
            if hit <= next {
                return (hit <= self.horizon).then_some(hit);
            }
        }
        None
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct FrontierDecomposition {
    /// Times of record minima of `Z_{t-}`, starting with the first jump.
    pub record_minima: Vec<f64>,
    /// Frontier times `l_1 < l_2 < ...` seen within the horizon.
    pub frontier_times: Vec<f64>,
    /// `Delta_0 = l_1` followed by `l_{k+1} - l_k`.
    pub gaps: Vec<f64>,
    /// Frontier times are only provisional: arrivals past the horizon may
    /// undercut any of them.
    pub censored: bool,
}

/// Record minima and frontier times of a `Z` path.
///
/// `m_1` is the first jump and `m_{k+1}` the first later jump at which `Z_{t-}`
/// is strictly below `Z_{m_k -}`. A jump is a frontier time when `Z_{t-}`
/// there is strictly below all later values of `Z_{s-}` up to the horizon.
pub fn frontier_decompose(zp: &ZPath) -> FrontierDecomposition {
    let jumps = &zp.jump_times;
    let within = jumps.partition_point(|&s| s <= zp.horizon);
    if within == 0 {
        return FrontierDecomposition::default();
    }
    let mut record_minima = Vec::new();
    let mut best = f64::INFINITY;
    for (j, &t) in jumps[..within].iter().enumerate() {
        let z = zp.z_before(j);
        if z < best {
            best = z;
            record_minima.push(t);
        }
    }
    // Between jumps Z decreases, so the lowest later value is either a
    // pre-jump value or Z at the horizon.
    let mut suffix = zp.z_at(zp.horizon);
    let mut frontier_times = Vec::new();
    for j in (0..within).rev() {
        let z = zp.z_before(j);
        if z < suffix {
            frontier_times.push(jumps[j]);
            suffix = z;
        }
    }
    frontier_times.reverse();
    let mut gaps = Vec::with_capacity(frontier_times.len());
    let mut prev = 0.0;
    for &l in &frontier_times {
        gaps.push(l - prev);
        prev = l;
    }
    FrontierDecomposition {
        record_minima,
        frontier_times,
        gaps,
        censored: zp.horizon.is_finite(),
    }
}

/// The positive root of `1 - z = exp(-beta z)` for `beta > 1`, by bisection.
pub fn solve_z(beta: f64) -> Result<f64> {
    if !(beta > 1.0 && beta.is_finite()) {
        return Err(invalid("beta", "a positive root exists only for beta > 1"));
    }
    let f = |z: f64| -libm::expm1(-beta * z) - z;
    let (mut lo, mut hi) = (1e-300f64, 1.0f64);
    for _ in 0..2000 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
