//! Classical kicked top: stroboscopic map on the unit sphere, trajectories,
//! phase portraits and a two-trajectory Lyapunov estimator.
//!
//! The map is fixed at precession `p = π/2` and period `τ = 1`.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::rng;
use crate::vec3::{self, Vec3};

/// Tolerance on `|x² + y² + z² − 1|` for map inputs.
pub const INPUT_SPHERE_TOL: f64 = 1e-6;
/// Tolerance re-checked on every map output.
pub const OUTPUT_SPHERE_TOL: f64 = 1e-9;

/// Point `(X, Y, Z)` on the unit sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePoint {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl PhasePoint {
    /// Accepts points within `1e-6` of the sphere.
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let p = Self { x, y, z };
        p.check_sphere(INPUT_SPHERE_TOL)?;
        Ok(p)
    }

    /// `(sinθ cosφ, sinθ sinφ, cosθ)`
    pub fn from_angles(theta: f64, phi: f64) -> Self {
        let [x, y, z] = vec3::from_spherical(theta, phi);
        Self { x, y, z }
    }

    /// Projects any nonzero vector onto the sphere.
    pub fn normalized(v: Vec3) -> Result<Self> {
        let n = vec3::norm(&v);
        if !(n > 0.0 && n.is_finite()) {
            return Err(Error::InvalidParameter("cannot normalize a zero vector"));
        }
        Ok(Self {
            x: v[0] / n,
            y: v[1] / n,
            z: v[2] / n,
        })
    }

    #[inline]
    pub fn to_array(self) -> Vec3 {
        [self.x, self.y, self.z]
    }

    #[inline]
    pub fn norm_sq(self) -> f64 {
        self.x * self.x + self.y * self.y + self.z * self.z
    }

    #[inline]
    pub fn sphere_deviation(self) -> f64 {
        (self.norm_sq() - 1.0).abs()
    }

    fn check_sphere(self, tol: f64) -> Result<()> {
        let dev = self.sphere_deviation();
        if dev > tol || !dev.is_finite() {
            return Err(Error::OffSphere(dev));
        }
        Ok(())
    }

    /// `θ = arccos Z`, clamped into `[0, π]`.
    pub fn theta(self) -> f64 {
        self.z.clamp(-1.0, 1.0).acos()
    }

    /// `φ = atan2(Y, X)`; zero at the poles.
    pub fn phi(self) -> f64 {
        if self.x == 0.0 && self.y == 0.0 {
            0.0
        } else {
            self.y.atan2(self.x)
        }
    }

    pub fn distance(self, other: PhasePoint) -> f64 {
        vec3::norm(&vec3::sub(&self.to_array(), &other.to_array()))
    }
}

/// Which Y-row update the map applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash)]
pub enum MapVariant {
    /// `Y' = Y cos(κX) + Z sin(κX)`: a rotation, so the sphere is preserved.
    #[default]
    NormPreserving,
    /// `Y' = Y sin(κX) + Z cos(κX)` as commonly printed; does not preserve
    /// the sphere and is kept only for comparison.
    Verbatim,
}

/// One kick of the stroboscopic map.
///
/// With `c = cos(κX)`, `s = sin(κX)`: `X' = Zc − Ys`, `Z' = −X`, and the Y
/// row per [`MapVariant`]. Inputs off the sphere by more than `1e-6` and
/// outputs off by more than `1e-9` are rejected.
pub fn classical_step(pt: PhasePoint, kappa: f64, variant: MapVariant) -> Result<PhasePoint> {
    pt.check_sphere(INPUT_SPHERE_TOL)?;
    let (s, c) = (kappa * pt.x).sin_cos();
    let y = match variant {
        MapVariant::NormPreserving => pt.y * c + pt.z * s,
        MapVariant::Verbatim => pt.y * s + pt.z * c,
    };
    let next = PhasePoint {
        x: pt.z * c - pt.y * s,
        y,
        z: -pt.x,
    };
    next.check_sphere(OUTPUT_SPHERE_TOL)?;
    Ok(next)
}

/// `n_steps + 1` points starting at `pt0`.
pub fn trajectory(
    pt0: PhasePoint,
    kappa: f64,
    n_steps: usize,
    variant: MapVariant,
) -> Result<Vec<PhasePoint>> {
    pt0.check_sphere(INPUT_SPHERE_TOL)?;
    let mut out = Vec::with_capacity(n_steps + 1);
    out.push(pt0);
    let mut pt = pt0;
    for _ in 0..n_steps {
        pt = classical_step(pt, kappa, variant)?;
        out.push(pt);
    }
    Ok(out)
}

/// One labeled point of a phase portrait.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PortraitPoint {
    pub seed: usize,
    pub step: usize,
    pub theta: f64,
    pub phi: f64,
}

/// Trajectories of every seed projected to `(θ, φ)`.
pub fn phase_portrait(
    seeds: &[PhasePoint],
    kappa: f64,
    n_steps: usize,
    variant: MapVariant,
) -> Result<Vec<PortraitPoint>> {
    if seeds.is_empty() {
        return Err(Error::EmptySeeds);
    }
    let mut out = Vec::with_capacity(seeds.len() * (n_steps + 1));
    for (seed, &pt0) in seeds.iter().enumerate() {
        for (step, pt) in trajectory(pt0, kappa, n_steps, variant)?
            .into_iter()
            .enumerate()
        {
            out.push(PortraitPoint {
                seed,
                step,
                theta: pt.theta(),
                phi: pt.phi(),
            });
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LyapunovConfig {
    /// Kicks averaged over, after the transient.
    pub n_steps: usize,
    /// Separation the companion trajectory is reset to after each kick.
    pub delta0: f64,
    /// Kicks discarded before averaging.
    pub transient: usize,
    /// Seeds the initial and any replacement tangent directions.
    pub seed: u64,
    pub variant: MapVariant,
}

impl Default for LyapunovConfig {
    fn default() -> Self {
        Self {
            n_steps: 2000,
            delta0: 1e-8,
            transient: 100,
            seed: 0,
            variant: MapVariant::NormPreserving,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LyapunovEstimate {
    /// Largest Lyapunov exponent in nats per kick.
    pub exponent: f64,
    /// How many times the separation collapsed and a fresh tangent
    /// direction had to be drawn.
    pub reseeds: usize,
}

/// Benettin estimate of the largest Lyapunov exponent at `pt0`.
///
/// A companion point is kept at distance `delta0` along the tangent plane;
/// after every kick the stretched separation is logged and rescaled.
pub fn lyapunov_exponent(
    pt0: PhasePoint,
    kappa: f64,
    cfg: &LyapunovConfig,
) -> Result<LyapunovEstimate> {
    if cfg.n_steps < 100 {
        return Err(Error::InvalidParameter(
            "lyapunov n_steps must be at least 100",
        ));
    }
    if !(cfg.delta0 > 0.0 && cfg.delta0 <= 1e-6) {
        return Err(Error::InvalidParameter(
            "lyapunov delta0 must lie in (0, 1e-6]",
        ));
    }
    pt0.check_sphere(INPUT_SPHERE_TOL)?;

    let mut rng = rng::seeded(cfg.seed);
    let mut reseeds = 0usize;
    let mut pt = pt0;
    let (mut companion, mut sep) = offset_along(pt, random_tangent(pt, &mut rng), cfg.delta0)?;
    let mut log_sum = 0.0;

    for k in 0..cfg.transient + cfg.n_steps {
        let next = classical_step(pt, kappa, cfg.variant)?;
        let next_companion = classical_step(companion, kappa, cfg.variant)?;
        let diff = vec3::sub(&next_companion.to_array(), &next.to_array());
        let tangent = tangent_part(next, diff);
        let d = vec3::norm(&diff);

        if k >= cfg.transient && d > 0.0 {
            log_sum += (d / sep).ln();
        }
        pt = next;
        let dir = if d > 0.0 && vec3::norm(&tangent) > 0.0 {
            tangent
        } else {
            reseeds += 1;
            random_tangent(pt, &mut rng)
        };
        (companion, sep) = offset_along(pt, dir, cfg.delta0)?;
    }

    Ok(LyapunovEstimate {
        exponent: log_sum / cfg.n_steps as f64,
        reseeds,
    })
}

/// Component of `v` orthogonal to the radial direction at `pt`.
fn tangent_part(pt: PhasePoint, v: Vec3) -> Vec3 {
    let p = pt.to_array();
    vec3::sub(&v, &vec3::scale(&p, vec3::dot(&v, &p)))
}

fn random_tangent(pt: PhasePoint, rng: &mut rng::Rng) -> Vec3 {
    loop {
        let t = tangent_part(pt, rng::unit_vector(rng));
        if vec3::norm(&t) > 1e-3 {
            return t;
        }
    }
}

/// Companion point `delta` away from `pt` along `dir`, projected back onto
/// the sphere, with its actual separation.
fn offset_along(pt: PhasePoint, dir: Vec3, delta: f64) -> Result<(PhasePoint, f64)> {
    let unit = vec3::scale(&dir, 1.0 / vec3::norm(&dir));
    let moved = PhasePoint::normalized(vec3::add(&pt.to_array(), &vec3::scale(&unit, delta)))?;
    let sep = moved.distance(pt);
    Ok((moved, sep))
}
