//! Small dense complex matrices.
//!
//! Dimensions in this crate are tiny (2j+1 for modest j), so everything is a
//! flat row-major `Vec` and the eigensolver is a cyclic Jacobi sweep, which is
//! slow asymptotically but accurate to machine precision on Hermitian input.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Square complex matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_diagonal(diag: &[Complex64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, d) in diag.iter().enumerate() {
            m[(i, i)] = *d;
        }
        m
    }

    /// Builds a matrix from row-major entries. Panics if `data.len() != dim²`.
    pub fn from_row_major(dim: usize, data: Vec<Complex64>) -> Self {
        assert_eq!(data.len(), dim * dim, "row-major data has wrong length");
        Self { dim, data }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for r in 0..n {
            for c in 0..n {
                out[(c, r)] = self[(r, c)].conj();
            }
        }
        out
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "matmul dimension mismatch");
        let n = self.dim;
        let mut out = Self::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let a = self[(r, k)];
                if a == ZERO {
                    continue;
                }
                for c in 0..n {
                    out.data[r * n + c] += a * rhs.data[k * n + c];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: v.len(),
            });
        }
        let n = self.dim;
        Ok((0..n)
            .map(|r| {
                self.data[r * n..(r + 1) * n]
                    .iter()
                    .zip(v)
                    .fold(ZERO, |acc, (a, b)| acc + a * b)
            })
            .collect())
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "add dimension mismatch");
        Self {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "sub dimension mismatch");
        Self {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    /// `[self, rhs] = self·rhs − rhs·self`
    pub fn commutator(&self, rhs: &Self) -> Self {
        self.matmul(rhs).sub(&rhs.matmul(self))
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|x| x.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, rhs: &Self) -> f64 {
        self.sub(rhs).max_abs()
    }

    /// `⟨v|self|v⟩`
    pub fn expectation(&self, v: &[Complex64]) -> Result<Complex64> {
        let mv = self.mul_vec(v)?;
        Ok(v.iter()
            .zip(&mv)
            .fold(ZERO, |acc, (a, b)| acc + a.conj() * b))
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.max_abs_diff(&self.adjoint()) <= tol
    }

    /// Distance from unitarity, `max |U†U − I|`.
    pub fn unitarity_defect(&self) -> f64 {
        self.adjoint()
            .matmul(self)
            .max_abs_diff(&Self::identity(self.dim))
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut result = Self::identity(self.dim);
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = result.matmul(&base);
            }
            base = base.matmul(&base);
            e >>= 1;
        }
        result
    }

    /// Eigendecomposition of a Hermitian matrix; see [`HermitianEigen`].
    pub fn hermitian_eigen(&self) -> Result<HermitianEigen> {
        HermitianEigen::new(self)
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;

    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        &self.data[r * self.dim + c]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        &mut self.data[r * self.dim + c]
    }
}

/// `H = V·diag(values)·V†` with eigenvalues in ascending order and the
/// eigenvectors stored as the columns of `vectors`.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

const MAX_SWEEPS: usize = 64;

impl HermitianEigen {
    pub fn new(h: &CMatrix) -> Result<Self> {
        let n = h.dim();
        let scale = h.max_abs();
        if !h.is_hermitian(1e-10 * scale.max(1.0)) {
            return Err(Error::NotHermitian);
        }
        let mut a = h.clone();
        let mut v = CMatrix::identity(n);

        for _ in 0..MAX_SWEEPS {
            let off: f64 = (0..n)
                .flat_map(|r| (0..n).filter(move |&c| c != r).map(move |c| (r, c)))
                .map(|(r, c)| a[(r, c)].norm_sqr())
                .sum();
            if off.sqrt() <= f64::EPSILON * scale * 1e-2 || off == 0.0 {
                break;
            }
            for p in 0..n {
                for q in p + 1..n {
                    jacobi_rotate(&mut a, &mut v, p, q);
                }
            }
        }

        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&x, &y| a[(x, x)].re.total_cmp(&a[(y, y)].re));
        let values = order.iter().map(|&i| a[(i, i)].re).collect();
        let mut vectors = CMatrix::zeros(n);
        for (new_c, &old_c) in order.iter().enumerate() {
            for r in 0..n {
                vectors[(r, new_c)] = v[(r, old_c)];
            }
        }
        Ok(Self { values, vectors })
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// Column `k` of the eigenvector matrix.
    pub fn vector(&self, k: usize) -> Vec<Complex64> {
        (0..self.dim()).map(|r| self.vectors[(r, k)]).collect()
    }

    /// `V·diag(f(λ))·V†`
    pub fn apply_fn(&self, f: impl Fn(f64) -> Complex64) -> CMatrix {
        let n = self.dim();
        let phases: Vec<Complex64> = self.values.iter().map(|&l| f(l)).collect();
        let mut out = CMatrix::zeros(n);
        for r in 0..n {
            for c in 0..n {
                out[(r, c)] = (0..n).fold(ZERO, |acc, k| {
                    acc + self.vectors[(r, k)] * phases[k] * self.vectors[(c, k)].conj()
                });
            }
        }
        out
    }

    /// `exp(−i·t·H)`
    pub fn unitary_exp(&self, t: f64) -> CMatrix {
        self.apply_fn(|l| Complex64::from_polar(1.0, -t * l))
    }
}

/// One complex Jacobi rotation zeroing `a[p][q]`, accumulated into `v`.
fn jacobi_rotate(a: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    // D = diag(1, e^{-iφ}) makes the (p,q) entry real, then a real rotation.
    let phase = apq / mag;
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let tau = (aqq - app) / (2.0 * mag);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    // G restricted to (p,q): [[c, s], [−s·e^{−iφ}, c·e^{−iφ}]]
    let pc = phase.conj();
    let gpp = Complex64::new(c, 0.0);
    let gpq = Complex64::new(s, 0.0);
    let gqp = pc * (-s);
    let gqq = pc * c;

    let n = a.dim();
    // A ← A·G
    for r in 0..n {
        let arp = a[(r, p)];
        let arq = a[(r, q)];
        a[(r, p)] = arp * gpp + arq * gqp;
        a[(r, q)] = arp * gpq + arq * gqq;
        let vrp = v[(r, p)];
        let vrq = v[(r, q)];
        v[(r, p)] = vrp * gpp + vrq * gqp;
        v[(r, q)] = vrp * gpq + vrq * gqq;
    }
    // A ← G†·A
    for c_ in 0..n {
        let apc = a[(p, c_)];
        let aqc = a[(q, c_)];
        a[(p, c_)] = gpp.conj() * apc + gqp.conj() * aqc;
        a[(q, c_)] = gpq.conj() * apc + gqq.conj() * aqc;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
}

/// Euclidean norm of a complex vector.
pub fn vec_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// `⟨a|b⟩`
pub fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).fold(ZERO, |acc, (x, y)| acc + x.conj() * y)
}
