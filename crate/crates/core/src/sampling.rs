//! Deterministic low-discrepancy sampling of the unit disk.
//!
//! Points come from the Halton sequence in bases 2 and 3 applied to
//! `(r², θ/2π)`, which is equidistributed for area measure and therefore
//! dense near the boundary. A seeded Cranley–Patterson rotation makes
//! different seeds give different, equally well-spread point sets.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::jet::C64;

pub const DEFAULT_RADIUS_CAP: f64 = 1.0 - 1e-6;

/// Van der Corput radical inverse of `i` in `base`.
pub fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let (mut value, mut factor) = (0.0, inv);
    while i > 0 {
        value += (i % base) as f64 * factor;
        i /= base;
        factor *= inv;
    }
    value
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiskSampler {
    pub count: usize,
    pub seed: u64,
    pub radius_cap: f64,
}

impl DiskSampler {
    pub fn new(count: usize, seed: u64) -> Self {
        Self {
            count,
            seed,
            radius_cap: DEFAULT_RADIUS_CAP,
        }
    }

    pub fn with_radius_cap(mut self, radius_cap: f64) -> Self {
        self.radius_cap = radius_cap;
        self
    }

    fn shift(&self) -> (f64, f64) {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        (rng.gen(), rng.gen())
    }

    /// The `k`-th point (`k < count`), independent of the others.
    pub fn point(&self, k: usize) -> C64 {
        let (s1, s2) = self.shift();
        self.point_shifted(k, s1, s2)
    }

    fn point_shifted(&self, k: usize, s1: f64, s2: f64) -> C64 {
        let i = k as u64 + 1;
        let u1 = (radical_inverse(i, 2) + s1).fract();
        let u2 = (radical_inverse(i, 3) + s2).fract();
        C64::from_polar(self.radius_cap * u1.sqrt(), std::f64::consts::TAU * u2)
    }

    pub fn points(&self) -> impl Iterator<Item = C64> + '_ {
        let (s1, s2) = self.shift();
        (0..self.count).map(move |k| self.point_shifted(k, s1, s2))
    }

    pub fn to_vec(&self) -> Vec<C64> {
        self.points().collect()
    }
}

/// Points on the segment `[0, cap)·e^{iθ}`, clustered towards the boundary.
pub fn ray_points(theta: f64, count: usize, cap: f64) -> Vec<C64> {
    (0..count)
        .map(|k| {
            let s = (k as f64 + 0.5) / count as f64;
            let r = cap * (std::f64::consts::FRAC_PI_2 * s).sin();
            C64::from_polar(r, theta)
        })
        .collect()
}
