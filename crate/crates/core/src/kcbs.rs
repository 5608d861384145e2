//! The five-projector KCBS operator for spin 1 and its maximization over
//! cyclically orthogonal pentagons.
//!
//! For a direction `r`, `Π⁰_r` projects onto the zero eigenvector of `r·J`.
//! The KCBS operator is `β = Σᵢ Π⁰_{rᵢ}` with `rᵢ ⊥ rᵢ₊₁ (mod 5)`; any
//! noncontextual assignment keeps `⟨β⟩ ≤ 2`, while quantum states reach `√5`.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::optimize::{nelder_mead, NelderMeadConfig};
use crate::rng;
use crate::spin::{Spin, SpinOperators, SpinState};
use crate::vec3::{self, Vec3};

/// Noncontextual bound on `⟨β⟩`.
pub const BETA_CLASSICAL: f64 = 2.0;
/// Largest quantum value of `⟨β⟩` for the pentagon, `√5`.
pub const BETA_QUANTUM_MAX: f64 = 2.236_067_977_499_79;

const UNIT_TOL: f64 = 1e-10;
const ORTHO_TOL: f64 = 1e-8;
const CLOSURE_TOL: f64 = 1e-8;

/// Five unit vectors with `rᵢ·rᵢ₊₁ = 0` cyclically.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pentagon {
    vectors: [Vec3; 5],
}

impl Pentagon {
    pub fn new(vectors: [Vec3; 5]) -> Result<Self> {
        for r in &vectors {
            let n = vec3::norm(r);
            if (n - 1.0).abs() > UNIT_TOL {
                return Err(Error::NotUnit(n));
            }
        }
        for i in 0..5 {
            let k = (i + 1) % 5;
            let d = vec3::dot(&vectors[i], &vectors[k]);
            if d.abs() > ORTHO_TOL {
                return Err(Error::NotOrthogonal(i, k, d));
            }
        }
        Ok(Self { vectors })
    }

    #[inline]
    pub fn vectors(&self) -> &[Vec3; 5] {
        &self.vectors
    }

    /// Regular pentagram about `z`: `rᵢ = (sinΘ cos(4πi/5), sinΘ sin(4πi/5), cosΘ)`
    /// with `cos²Θ = cos(π/5)/(1 + cos(π/5))`.
    pub fn regular_pentagram() -> Self {
        Self::regular_pentagram_in([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]])
    }

    /// Regular pentagram whose symmetry axis is `frame[2]`, with `frame[0]`
    /// as the azimuth reference. `frame` must be orthonormal.
    pub fn regular_pentagram_in(frame: [Vec3; 3]) -> Self {
        let c5 = (PI / 5.0).cos();
        let cos_t = (c5 / (1.0 + c5)).sqrt();
        let sin_t = (1.0 - cos_t * cos_t).sqrt();
        let mut vectors = [[0.0; 3]; 5];
        for (i, r) in vectors.iter_mut().enumerate() {
            let (s, c) = (4.0 * PI * i as f64 / 5.0).sin_cos();
            let local = [sin_t * c, sin_t * s, cos_t];
            *r = in_frame(&frame, &local);
        }
        Self { vectors }
    }

    /// `(c, a, b, a, b)` built from `frame = [a, b, c]`.
    pub fn degenerate_in(frame: [Vec3; 3]) -> Self {
        let [a, b, c] = frame;
        Self {
            vectors: [c, a, b, a, b],
        }
    }

    /// `(z, x, y, x, y)`
    pub fn degenerate() -> Self {
        Self::degenerate_in([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]])
    }
}

fn in_frame(frame: &[Vec3; 3], local: &Vec3) -> Vec3 {
    let mut out = [0.0; 3];
    for (axis, coeff) in frame.iter().zip(local) {
        for (o, a) in out.iter_mut().zip(axis) {
            *o += coeff * a;
        }
    }
    out
}

/// Unconstrained coordinates on the pentagon manifold.
///
/// `[α₁, α₂]` are the polar and azimuthal angles of `r₀`; `α₃` picks `r₁` in
/// the plane orthogonal to `r₀`; `α₄` picks `r₂ ⊥ r₁` in `span(r₀, r₀×r₁)`;
/// `α₅` picks `r₃ ⊥ r₂` in `span(r₁, r₁×r₂)`; `r₄` closes the cycle as the
/// normalized `r₃ × r₀`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PentagonParams(pub [f64; 5]);

impl PentagonParams {
    pub fn to_pentagon(&self) -> Result<Pentagon> {
        let vectors = chain(&self.0)?;
        Ok(Pentagon { vectors })
    }

    /// Inverse of [`to_pentagon`](Self::to_pentagon); reproduces `r₀…r₃`
    /// exactly and `r₄` up to sign.
    pub fn from_pentagon(p: &Pentagon) -> Self {
        let [r0, r1, r2, r3, _] = p.vectors;
        let a1 = r0[2].clamp(-1.0, 1.0).acos();
        let a2 = r0[1].atan2(r0[0]);
        let (u, w) = polar_frame(a1, a2);
        let a3 = vec3::dot(&r1, &w).atan2(vec3::dot(&r1, &u));
        let a4 = vec3::dot(&r2, &vec3::cross(&r0, &r1)).atan2(vec3::dot(&r2, &r0));
        let a5 = vec3::dot(&r3, &vec3::cross(&r1, &r2)).atan2(vec3::dot(&r3, &r1));
        Self([a1, a2, a3, a4, a5])
    }
}

/// Tangent basis `(e_θ, e_φ)` at polar angles `(θ, φ)`; orthonormal even at
/// the poles.
#[inline]
fn polar_frame(theta: f64, phi: f64) -> (Vec3, Vec3) {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    ([ct * cp, ct * sp, -st], [-sp, cp, 0.0])
}

#[inline]
fn chain(a: &[f64; 5]) -> Result<[Vec3; 5]> {
    let r0 = vec3::from_spherical(a[0], a[1]);
    let (u, w) = polar_frame(a[0], a[1]);
    let r1 = vec3::rotate_in_plane(&u, &w, a[2]);
    let r2 = vec3::rotate_in_plane(&r0, &vec3::cross(&r0, &r1), a[3]);
    let r3 = vec3::rotate_in_plane(&r1, &vec3::cross(&r1, &r2), a[4]);
    let closure = vec3::cross(&r3, &r0);
    let len = vec3::norm(&closure);
    if len < CLOSURE_TOL {
        return Err(Error::DegenerateClosure(len));
    }
    Ok([r0, r1, r2, r3, vec3::scale(&closure, 1.0 / len)])
}

/// Zero eigenvector `|0⟩_r` of `r·J` for spin 1, found by diagonalizing
/// `r·J`. The phase makes the first nonzero amplitude real and positive.
pub fn zero_eigenvector(r: &Vec3) -> Result<SpinState> {
    let n = vec3::norm(r);
    if (n - 1.0).abs() > 1e-8 {
        return Err(Error::NotUnit(n));
    }
    let ops = SpinOperators::new(Spin::ONE);
    let eig = ops.component(r).hermitian_eigen()?;
    // eigenvalues ascend as −1, 0, 1
    let mut v = eig.vector(1);
    if let Some(lead) = v.iter().find(|a| a.norm() > 1e-12).copied() {
        let phase = lead.conj() / lead.norm();
        v.iter_mut().for_each(|a| *a *= phase);
    }
    SpinState::normalized(Spin::ONE, v)
}

fn check_spin_one(psi: &SpinState) -> Result<()> {
    if psi.dim() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            found: psi.dim(),
        });
    }
    Ok(())
}

/// Real symmetric matrix `M` with `⟨Π⁰_r⟩ = rᵀ M r` for a spin-1 state.
///
/// `M = Re(v v†)` where `v` holds the state's components in the Cartesian
/// basis `|x⟩ = (|−1⟩ − |+1⟩)/√2`, `|y⟩ = i(|−1⟩ + |+1⟩)/√2`, `|z⟩ = |0⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CartesianMoment {
    pub m: [[f64; 3]; 3],
}

impl CartesianMoment {
    pub fn from_state(psi: &SpinState) -> Result<Self> {
        check_spin_one(psi)?;
        let a = psi.amplitudes();
        let (up, zero, down) = (a[0], a[1], a[2]);
        let s = core::f64::consts::FRAC_1_SQRT_2;
        let v = [(down - up) * s, (down + up) * Complex64::new(0.0, -s), zero];
        let mut m = [[0.0; 3]; 3];
        for (k, row) in m.iter_mut().enumerate() {
            for (l, entry) in row.iter_mut().enumerate() {
                *entry = (v[k] * v[l].conj()).re;
            }
        }
        Ok(Self { m })
    }

    /// `rᵀ M r`
    #[inline]
    pub fn projector_expectation(&self, r: &Vec3) -> f64 {
        let m = &self.m;
        let mut acc = 0.0;
        for k in 0..3 {
            acc += r[k] * (m[k][0] * r[0] + m[k][1] * r[1] + m[k][2] * r[2]);
        }
        acc
    }

    #[inline]
    pub fn beta(&self, pent: &Pentagon) -> f64 {
        pent.vectors
            .iter()
            .map(|r| self.projector_expectation(r))
            .sum()
    }

    /// Eigenvectors of `M` sorted by descending eigenvalue, as a right-handed
    /// orthonormal frame.
    pub fn principal_axes(&self) -> Result<([f64; 3], [Vec3; 3])> {
        let mut cm = CMatrix::zeros(3);
        for k in 0..3 {
            for l in 0..3 {
                cm[(k, l)] = Complex64::new(self.m[k][l], 0.0);
            }
        }
        let eig = cm.hermitian_eigen()?;
        let mut axes = [[0.0; 3]; 3];
        let mut values = [0.0; 3];
        for (slot, k) in (0..3).rev().enumerate() {
            values[slot] = eig.values[k];
            let col = eig.vector(k);
            // real symmetric input: rotate away any residual global phase
            let lead = col
                .iter()
                .copied()
                .max_by(|a, b| a.norm().total_cmp(&b.norm()))
                .unwrap_or(Complex64::new(1.0, 0.0));
            let phase = lead.conj() / lead.norm();
            let real: Vec<f64> = col.iter().map(|z| (z * phase).re).collect();
            let len = vec3::norm(&[real[0], real[1], real[2]]);
            axes[slot] = [real[0] / len, real[1] / len, real[2] / len];
        }
        axes[2] = vec3::cross(&axes[0], &axes[1]);
        Ok((values, axes))
    }
}

/// `Σᵢ ⟨Π⁰_{rᵢ}⟩`, evaluated as `Σᵢ rᵢᵀ M rᵢ`.
pub fn beta_expectation(psi: &SpinState, pent: &Pentagon) -> Result<f64> {
    Ok(CartesianMoment::from_state(psi)?.beta(pent))
}

/// `Σᵢ |⟨0_{rᵢ}|ψ⟩|²` through explicit zero eigenvectors. Slower than
/// [`beta_expectation`]; kept as the reference path.
pub fn beta_expectation_projectors(psi: &SpinState, pent: &Pentagon) -> Result<f64> {
    check_spin_one(psi)?;
    pent.vectors
        .iter()
        .try_fold(0.0, |acc, r| Ok(acc + zero_eigenvector(r)?.fidelity(psi)?))
}

/// `Σᵢ ⟨(rᵢ·J)²⟩`, evaluated by matrix arithmetic.
pub fn s_squared_sum(psi: &SpinState, pent: &Pentagon) -> Result<f64> {
    check_spin_one(psi)?;
    let ops = SpinOperators::new(Spin::ONE);
    pent.vectors.iter().try_fold(0.0, |acc, r| {
        let s = ops.component(r);
        Ok(acc + psi.expectation(&s.matmul(&s))?)
    })
}

/// Normalized violation: `(β − 2)/(√5 − 2)` above the classical bound, zero
/// otherwise, clamped to at most 1.
pub fn beta_prime(beta_max: f64) -> f64 {
    if beta_max > BETA_CLASSICAL {
        ((beta_max - BETA_CLASSICAL) / (BETA_QUANTUM_MAX - BETA_CLASSICAL)).min(1.0)
    } else {
        0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizerConfig {
    /// Random starting points, in addition to the two warm starts.
    pub restarts: usize,
    /// Objective evaluations allowed per local search.
    pub max_evals: usize,
    /// Local searches stop when the simplex's objective spread falls below this.
    pub f_tol: f64,
    /// Initial simplex edge, in radians.
    pub initial_step: f64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            restarts: 32,
            max_evals: 2000,
            f_tol: 1e-9,
            initial_step: 0.25,
        }
    }
}

/// Number of deterministic warm starts tried before the random restarts.
pub const WARM_STARTS: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KcbsResult {
    pub beta_max: f64,
    pub beta_prime: f64,
    pub argmax: Pentagon,
    /// Local searches run, warm starts included.
    pub restarts_used: usize,
    /// Whether at least one local search met the tolerance.
    pub converged: bool,
}

/// Maximizes `⟨β⟩` over pentagons for a spin-1 state.
///
/// Two warm starts come first: the regular pentagram about the dominant axis
/// of [`CartesianMoment`], and the degenerate pentagon `(c, a, b, a, b)` with
/// `c` the weakest axis. Then `cfg.restarts` random starts drawn from `seed`.
/// The best value wins; ties keep the earliest start.
pub fn beta_max(psi: &SpinState, cfg: &OptimizerConfig, seed: u64) -> Result<KcbsResult> {
    let moment = CartesianMoment::from_state(psi)?;
    let (_, axes) = moment.principal_axes()?;
    let [major, middle, minor] = axes;

    let nm = NelderMeadConfig {
        initial_step: cfg.initial_step,
        f_tol: cfg.f_tol,
        max_evals: cfg.max_evals,
    };
    let objective = |a: &[f64]| -> f64 {
        let params = [a[0], a[1], a[2], a[3], a[4]];
        match chain(&params) {
            Ok(vectors) => -vectors
                .iter()
                .map(|r| moment.projector_expectation(r))
                .sum::<f64>(),
            Err(_) => f64::INFINITY,
        }
    };

    let warm = [
        Pentagon::regular_pentagram_in([middle, minor, major]),
        Pentagon::degenerate_in([major, middle, minor]),
    ];
    let mut best: Option<(f64, [f64; 5])> = None;
    let mut converged = false;
    let mut runs = 0usize;

    let mut consider = |start: [f64; 5], best: &mut Option<(f64, [f64; 5])>| {
        let found = nelder_mead(objective, &start, &nm);
        runs += 1;
        converged |= found.converged;
        // the start itself is a valid candidate if the search wandered off
        let start_val = -objective(&start);
        let (val, x) = if -found.f >= start_val {
            (
                -found.f,
                [found.x[0], found.x[1], found.x[2], found.x[3], found.x[4]],
            )
        } else {
            (start_val, start)
        };
        if val.is_finite() && best.is_none_or(|(b, _)| val > b) {
            *best = Some((val, x));
        }
    };

    for p in &warm {
        consider(PentagonParams::from_pentagon(p).0, &mut best);
    }
    let mut rng = rng::seeded(seed);
    for _ in 0..cfg.restarts {
        let start = loop {
            let a = [
                rng::polar_angle(&mut rng),
                rng::angle(&mut rng),
                rng::angle(&mut rng),
                rng::angle(&mut rng),
                rng::angle(&mut rng),
            ];
            if chain(&a).is_ok() {
                break a;
            }
        };
        consider(start, &mut best);
    }

    let (value, params) = best.expect("warm starts are always feasible");
    Ok(KcbsResult {
        beta_max: value,
        beta_prime: beta_prime(value),
        argmax: PentagonParams(params).to_pentagon()?,
        restarts_used: runs,
        converged,
    })
}
