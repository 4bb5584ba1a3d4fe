//! GEM(θ) and PD(θ) partitions by stick breaking.

use alloc::vec::Vec;

use rand::Rng;

use crate::error::{invalid, Result};

pub const DEFAULT_TRUNC: f64 = 1e-12;

/// A partition of `[0, 1)` into parts, with the unbroken tail kept as
/// `truncation_mass` so that everything sums to one.
#[derive(Debug, Clone, PartialEq)]
pub struct PartitionSample {
    pub parts: Vec<f64>,
    pub truncation_mass: f64,
}

impl PartitionSample {
    pub fn total(&self) -> f64 {
        self.parts.iter().sum::<f64>() + self.truncation_mass
    }

    pub fn sort_desc(&mut self) {
        self.parts.sort_by(|a, b| b.total_cmp(a));
    }

    /// Mass of parts below `eps`. The tail is made of parts below the
    /// truncation level, so it is counted too when `eps` exceeds it.
    pub fn sigma(&self, eps: f64) -> f64 {
        sigma_small(&self.parts, eps) + self.truncation_mass
    }

    pub fn sum_squares(&self) -> f64 {
        sum_squares(&self.parts)
    }
}

fn check_theta(theta: f64) -> Result<()> {
    if theta > 0.0 && theta.is_finite() {
        Ok(())
    } else {
        Err(invalid("theta", "must be positive and finite"))
    }
}

/// Inverse CDF of Beta(1, θ): `1 - (1 - u)^(1/θ)`.
pub fn sample_beta1theta(theta: f64, u: f64) -> Result<f64> {
    check_theta(theta)?;
    if !(0.0..1.0).contains(&u) {
        return Err(invalid("u", "must lie in [0, 1)"));
    }
    Ok(-libm::expm1(libm::log1p(-u) / theta))
}

/// Stick breaking driven by an explicit stream of uniforms.
pub fn sample_gem_from<F: FnMut() -> f64>(
    theta: f64,
    trunc: f64,
    mut uniform: F,
) -> Result<PartitionSample> {
    check_theta(theta)?;
    if !(trunc > 0.0 && trunc < 1.0) {
        return Err(invalid("trunc", "must lie in (0, 1)"));
    }
    let mut parts = Vec::new();
    let mut rest = 1.0f64;
    while rest >= trunc {
        let b = sample_beta1theta(theta, uniform())?;
        let p = b * rest;
        if p > 0.0 {
            parts.push(p);
        }
        rest -= p;
    }
    Ok(PartitionSample {
        parts,
        truncation_mass: rest,
    })
}

/// GEM(θ) in stick order, broken until less than `trunc` remains.
pub fn sample_gem<R: Rng + ?Sized>(theta: f64, trunc: f64, rng: &mut R) -> Result<PartitionSample> {
    sample_gem_from(theta, trunc, || rng.random::<f64>())
}

/// PD(θ): a GEM sample sorted in decreasing order.
pub fn sample_pd<R: Rng + ?Sized>(theta: f64, trunc: f64, rng: &mut R) -> Result<PartitionSample> {
    let mut s = sample_gem(theta, trunc, rng)?;
    s.sort_desc();
    Ok(s)
}

/// `max_i |a_i - b_i|` over the decreasing rearrangements, padding with zeros.
pub fn sup_distance(a: &[f64], b: &[f64]) -> f64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(|x, y| y.total_cmp(x));
    b.sort_by(|x, y| y.total_cmp(x));
    let len = a.len().max(b.len());
    (0..len)
        .map(|i| (a.get(i).copied().unwrap_or(0.0) - b.get(i).copied().unwrap_or(0.0)).abs())
        .fold(0.0, f64::max)
}

/// Total mass of the parts strictly below `eps`.
pub fn sigma_small(p: &[f64], eps: f64) -> f64 {
    p.iter().filter(|&&x| x < eps).sum()
}

/// Number of parts of size at least `eps`.
pub fn count_at_least(p: &[f64], eps: f64) -> usize {
    p.iter().filter(|&&x| x >= eps).count()
}

pub fn sum_squares(p: &[f64]) -> f64 {
    p.iter().map(|x| x * x).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;
    use crate::stats::{mean, sem};

    #[test]
    fn beta_inverse_cdf() {
        assert_eq!(sample_beta1theta(2.0, 0.0).unwrap(), 0.0);
        assert!((sample_beta1theta(1.0, 0.5).unwrap() - 0.5).abs() < 1e-15);
        assert!((sample_beta1theta(0.5, 0.75).unwrap() - 0.9375).abs() < 1e-15);
        assert!(sample_beta1theta(0.0, 0.5).is_err());
        assert!(sample_beta1theta(1.0, 1.0).is_err());
    }

    #[test]
    fn forced_halves() {
        let s = sample_gem_from(1.0, 1e-3, || 0.5).unwrap();
        let expect: Vec<f64> = (1..=10).map(|k| libm::pow(0.5, k as f64)).collect();
        assert_eq!(s.parts, expect);
        assert!(s.truncation_mass < 1e-3);
        assert_eq!(s.total(), 1.0);
    }

    #[test]
    fn normalization_and_order() {
        let mut rng = seeded(1);
        for theta in [0.1, 0.5, 1.0, 3.0] {
            for _ in 0..200 {
                let s = sample_pd(theta, DEFAULT_TRUNC, &mut rng).unwrap();
                assert!((s.total() - 1.0).abs() < 1e-12);
                assert!(s.truncation_mass < DEFAULT_TRUNC);
                assert!(s.parts.windows(2).all(|w| w[0] >= w[1]));
                assert!(s.parts.iter().all(|&p| p > 0.0));
            }
        }
    }

    #[test]
    fn first_stick_mean() {
        let mut rng = seeded(2);
        let firsts: Vec<f64> = (0..20_000)
            .map(|_| sample_gem(0.5, 1e-6, &mut rng).unwrap().parts[0])
            .collect();
        assert!((mean(&firsts) - 2.0 / 3.0).abs() < 4.0 * sem(&firsts));
    }

    #[test]
    fn size_biased_identities() {
        let mut rng = seeded(3);
        let mut sq = Vec::new();
        let mut sig = Vec::new();
        for _ in 0..20_000 {
            let s = sample_pd(0.5, DEFAULT_TRUNC, &mut rng).unwrap();
            sq.push(s.sum_squares());
            sig.push(s.sigma(0.1));
        }
        assert!((mean(&sq) - 2.0 / 3.0).abs() < 4.0 * sem(&sq));
        let target = 1.0 - libm::sqrt(0.9);
        assert!((mean(&sig) - target).abs() < 4.0 * sem(&sig));
    }

    #[test]
    fn distances_and_counts() {
        assert_eq!(sup_distance(&[0.5, 0.3], &[0.5, 0.3]), 0.0);
        assert!((sup_distance(&[0.5, 0.3], &[0.5]) - 0.3).abs() < 1e-15);
        assert!((sup_distance(&[0.6], &[0.5, 0.1]) - 0.1).abs() < 1e-15);
        let p = [0.5, 0.3, 0.1, 0.1];
        assert!((sigma_small(&p, 0.2) - 0.2).abs() < 1e-15);
        assert_eq!(count_at_least(&p, 0.2), 2);
        assert!((sigma_small(&p, 0.9) - 1.0).abs() < 1e-15);
        assert_eq!(count_at_least(&p, 0.9), 0);
    }
}
