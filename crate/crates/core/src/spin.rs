//! Spin-j operators, the kicked-top Floquet unitary, coherent states and
//! Husimi values.
//!
//! Basis ordering is `|j, m⟩` with `m = j, j−1, …, −j`; index `k` holds
//! `m = j − k`. ħ = 1 throughout.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
use num_traits::Euclid;

use crate::error::{Error, Result};
use crate::linalg::{inner, vec_norm, CMatrix, HermitianEigen};

/// Spin size `j`, stored as the integer `2j ≥ 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Spin {
    twice_j: u32,
}

impl Spin {
    pub const ONE: Spin = Spin { twice_j: 2 };
    pub const HALF: Spin = Spin { twice_j: 1 };

    /// Rejects `j` unless `2j` is a positive integer.
    pub fn new(j: f64) -> Result<Self> {
        let twice = 2.0 * j;
        if !twice.is_finite() || twice < 1.0 || (twice - twice.round()).abs() > 1e-12 {
            return Err(Error::InvalidSpin(j));
        }
        Ok(Self {
            twice_j: twice.round() as u32,
        })
    }

    pub fn from_twice(twice_j: u32) -> Result<Self> {
        if twice_j == 0 {
            return Err(Error::InvalidSpin(0.0));
        }
        Ok(Self { twice_j })
    }

    #[inline]
    pub fn j(self) -> f64 {
        self.twice_j as f64 / 2.0
    }

    #[inline]
    pub fn twice_j(self) -> u32 {
        self.twice_j
    }

    #[inline]
    pub fn dim(self) -> usize {
        self.twice_j as usize + 1
    }

    #[inline]
    pub fn is_integer(self) -> bool {
        self.twice_j.is_multiple_of(2)
    }

    /// `m` quantum number of basis index `k`.
    #[inline]
    pub fn m(self, k: usize) -> f64 {
        self.j() - k as f64
    }
}

/// Normalized pure state in the `|j, m⟩` basis.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinState {
    spin: Spin,
    amplitudes: Vec<Complex64>,
}

const NORM_TOL: f64 = 1e-12;

impl SpinState {
    /// Wraps amplitudes that are already normalized to within `1e-12`.
    pub fn new(spin: Spin, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != spin.dim() {
            return Err(Error::DimensionMismatch {
                expected: spin.dim(),
                found: amplitudes.len(),
            });
        }
        let n2 = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>();
        if (n2 - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(n2));
        }
        Ok(Self { spin, amplitudes })
    }

    /// Normalizes arbitrary nonzero amplitudes.
    pub fn normalized(spin: Spin, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != spin.dim() {
            return Err(Error::DimensionMismatch {
                expected: spin.dim(),
                found: amplitudes.len(),
            });
        }
        let n = vec_norm(&amplitudes);
        if !(n > 0.0 && n.is_finite()) {
            return Err(Error::NotNormalized(n * n));
        }
        let inv = 1.0 / n;
        Ok(Self {
            spin,
            amplitudes: amplitudes.into_iter().map(|a| a * inv).collect(),
        })
    }

    /// `|j, m⟩` for basis index `k` (`m = j − k`).
    pub fn basis(spin: Spin, k: usize) -> Result<Self> {
        if k >= spin.dim() {
            return Err(Error::InvalidParameter("basis index out of range"));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); spin.dim()];
        amps[k] = Complex64::new(1.0, 0.0);
        Ok(Self {
            spin,
            amplitudes: amps,
        })
    }

    #[inline]
    pub fn spin(&self) -> Spin {
        self.spin
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    #[inline]
    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        vec_norm(&self.amplitudes)
    }

    pub fn inner(&self, other: &SpinState) -> Result<Complex64> {
        self.check_same_dim(other.dim())?;
        Ok(inner(&self.amplitudes, &other.amplitudes))
    }

    /// `|⟨self|other⟩|²`; the phase-insensitive comparison used for states.
    pub fn fidelity(&self, other: &SpinState) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    /// Applies `op` without renormalizing (the operator is assumed unitary).
    pub fn apply(&self, op: &CMatrix) -> Result<SpinState> {
        self.check_same_dim(op.dim())?;
        Ok(SpinState {
            spin: self.spin,
            amplitudes: op.mul_vec(&self.amplitudes)?,
        })
    }

    /// Real part of `⟨ψ|op|ψ⟩`.
    pub fn expectation(&self, op: &CMatrix) -> Result<f64> {
        self.check_same_dim(op.dim())?;
        Ok(op.expectation(&self.amplitudes)?.re)
    }

    fn check_same_dim(&self, other: usize) -> Result<()> {
        if other != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other,
            });
        }
        Ok(())
    }
}

/// `Jx, Jy, Jz` for one spin size, plus the cached eigendecomposition of `Jy`
/// used for rotations about the y axis.
#[derive(Debug, Clone)]
pub struct SpinOperators {
    spin: Spin,
    pub jx: CMatrix,
    pub jy: CMatrix,
    pub jz: CMatrix,
    jy_eigen: HermitianEigen,
}

/// Builds the standard ladder-operator matrices for spin `j`.
pub fn angular_momentum_ops(spin: Spin) -> SpinOperators {
    let n = spin.dim();
    let j = spin.j();
    let mut jp = CMatrix::zeros(n);
    let mut jz = CMatrix::zeros(n);
    for k in 0..n {
        let m = spin.m(k);
        jz[(k, k)] = Complex64::new(m, 0.0);
        if k > 0 {
            // J+|j,m⟩ = √(j(j+1) − m(m+1)) |j,m+1⟩, and m+1 sits at index k−1
            jp[(k - 1, k)] = Complex64::new((j * (j + 1.0) - m * (m + 1.0)).sqrt(), 0.0);
        }
    }
    let jm = jp.adjoint();
    let jx = jp.add(&jm).scale(Complex64::new(0.5, 0.0));
    let jy = jp.sub(&jm).scale(Complex64::new(0.0, -0.5));
    let jy_eigen = jy
        .hermitian_eigen()
        .expect("Jy is Hermitian by construction");
    SpinOperators {
        spin,
        jx,
        jy,
        jz,
        jy_eigen,
    }
}

impl SpinOperators {
    pub fn new(spin: Spin) -> Self {
        angular_momentum_ops(spin)
    }

    #[inline]
    pub fn spin(&self) -> Spin {
        self.spin
    }

    /// `exp(−i·angle·Jy)`
    pub fn rotation_y(&self, angle: f64) -> CMatrix {
        self.jy_eigen.unitary_exp(angle)
    }

    /// `exp(−i·angle·Jz)`, diagonal.
    pub fn rotation_z(&self, angle: f64) -> CMatrix {
        let diag: Vec<Complex64> = (0..self.spin.dim())
            .map(|k| Complex64::from_polar(1.0, -angle * self.spin.m(k)))
            .collect();
        CMatrix::from_diagonal(&diag)
    }

    /// `R(θ, φ) = exp(−iφJz)·exp(−iθJy)`
    pub fn rotation(&self, theta: f64, phi: f64) -> CMatrix {
        self.rotation_z(phi).matmul(&self.rotation_y(theta))
    }

    /// `r·J` for a real direction `r`.
    pub fn component(&self, r: &[f64; 3]) -> CMatrix {
        self.jx
            .scale(Complex64::new(r[0], 0.0))
            .add(&self.jy.scale(Complex64::new(r[1], 0.0)))
            .add(&self.jz.scale(Complex64::new(r[2], 0.0)))
    }

    /// `(⟨Jx⟩, ⟨Jy⟩, ⟨Jz⟩)`
    pub fn mean_spin(&self, psi: &SpinState) -> Result<[f64; 3]> {
        Ok([
            psi.expectation(&self.jx)?,
            psi.expectation(&self.jy)?,
            psi.expectation(&self.jz)?,
        ])
    }

    /// Coherent state centred at `(θ, φ)`; see [`coherent_state`].
    pub fn coherent_state(&self, theta: f64, phi: f64) -> SpinState {
        let (theta, phi) = normalize_angles(theta, phi);
        let top = SpinState::basis(self.spin, 0).expect("index 0 always exists");
        top.apply(&self.rotation(theta, phi))
            .expect("rotation has the state's dimension")
    }
}

/// Maps arbitrary angles onto `θ ∈ [0, π]`, `φ ∈ (−π, π]` naming the same
/// point of the sphere: θ is reduced mod 2π, reflected through the pole when
/// it exceeds π (which shifts φ by π), and φ is then wrapped mod 2π.
pub fn normalize_angles(theta: f64, phi: f64) -> (f64, f64) {
    let two_pi = 2.0 * PI;
    let mut t = Euclid::rem_euclid(&theta, &two_pi);
    let mut p = phi;
    if t > PI {
        t = two_pi - t;
        p += PI;
    }
    (t, wrap_phi(p))
}

/// Wraps an azimuth into `(−π, π]`.
pub fn wrap_phi(phi: f64) -> f64 {
    let two_pi = 2.0 * PI;
    let mut p = Euclid::rem_euclid(&(phi + PI), &two_pi) - PI;
    if p <= -PI {
        p += two_pi;
    }
    p
}

/// Spin coherent state `R(θ, φ)|j, j⟩`.
///
/// Out-of-range angles are normalized with [`normalize_angles`], not rejected.
pub fn coherent_state(spin: Spin, theta: f64, phi: f64) -> SpinState {
    SpinOperators::new(spin).coherent_state(theta, phi)
}

/// One kick period of the quantum kicked top.
#[derive(Debug, Clone)]
pub struct FloquetSpec {
    pub spin: Spin,
    pub kappa: f64,
    pub p: f64,
    pub tau: f64,
    unitary: CMatrix,
}

/// `U = exp(−i κ/(2j) Jz²)·exp(−i (p/τ) Jy)`.
pub fn floquet(spin: Spin, kappa: f64, p: f64, tau: f64) -> Result<FloquetSpec> {
    FloquetSpec::with_ops(&SpinOperators::new(spin), kappa, p, tau)
}

impl FloquetSpec {
    /// Precession `p = π/2` and period `τ = 1`.
    pub fn standard(spin: Spin, kappa: f64) -> Result<Self> {
        floquet(spin, kappa, PI / 2.0, 1.0)
    }

    pub fn with_ops(ops: &SpinOperators, kappa: f64, p: f64, tau: f64) -> Result<Self> {
        if !(tau > 0.0 && tau.is_finite()) {
            return Err(Error::InvalidPeriod(tau));
        }
        if !kappa.is_finite() || !p.is_finite() {
            return Err(Error::InvalidParameter("kappa and p must be finite"));
        }
        let spin = ops.spin();
        let twist: Vec<Complex64> = (0..spin.dim())
            .map(|k| {
                let m = spin.m(k);
                Complex64::from_polar(1.0, -kappa * m * m / (2.0 * spin.j()))
            })
            .collect();
        let unitary = CMatrix::from_diagonal(&twist).matmul(&ops.rotation_y(p / tau));
        Ok(Self {
            spin,
            kappa,
            p,
            tau,
            unitary,
        })
    }

    #[inline]
    pub fn unitary(&self) -> &CMatrix {
        &self.unitary
    }

    pub fn step(&self, psi: &SpinState) -> Result<SpinState> {
        psi.apply(&self.unitary)
    }
}

/// `Uⁿψ`, one kick at a time.
pub fn evolve(floquet: &FloquetSpec, psi: &SpinState, n: usize) -> Result<SpinState> {
    let mut state = psi.clone();
    if state.dim() != floquet.unitary.dim() {
        return Err(Error::DimensionMismatch {
            expected: floquet.unitary.dim(),
            found: state.dim(),
        });
    }
    for _ in 0..n {
        state = floquet.step(&state)?;
    }
    Ok(state)
}

/// Husimi value `|⟨θ, φ|ψ⟩|²`.
pub fn husimi(psi: &SpinState, theta: f64, phi: f64) -> f64 {
    let probe = coherent_state(psi.spin(), theta, phi);
    probe
        .fidelity(psi)
        .expect("probe built with the state's spin")
        .min(1.0)
}
