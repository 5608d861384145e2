//! Seeded randomness shared by the optimizer and the Lyapunov estimator.

use core::f64::consts::PI;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::vec3::{from_spherical, Vec3};

pub type Rng = ChaCha8Rng;

pub fn seeded(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform in `[0, 1)` with 53 bits of resolution.
#[inline]
pub fn uniform(rng: &mut impl RngCore) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Uniform angle in `[0, 2π)`.
#[inline]
pub fn angle(rng: &mut impl RngCore) -> f64 {
    2.0 * PI * uniform(rng)
}

/// Polar angle whose cosine is uniform, i.e. area-uniform on the sphere.
#[inline]
pub fn polar_angle(rng: &mut impl RngCore) -> f64 {
    (1.0 - 2.0 * uniform(rng)).clamp(-1.0, 1.0).acos()
}

/// Uniform point on the unit sphere.
pub fn unit_vector(rng: &mut impl RngCore) -> Vec3 {
    let theta = polar_angle(rng);
    from_spherical(theta, angle(rng))
}

/// Sub-seed for work item `index` of a run seeded with `seed`.
#[inline]
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    seed ^ index
}
