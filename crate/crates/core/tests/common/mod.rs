//! Reference implementations that share no code with the library.

#![allow(dead_code)]

use num_complex::Complex64 as C;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

pub type M3 = [[C; 3]; 3];

fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

/// Spin-1 matrices in the `m = 1, 0, −1` basis.
pub fn spin_one() -> [M3; 3] {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let z = c(0.0, 0.0);
    let jx = [
        [z, c(s, 0.0), z],
        [c(s, 0.0), z, c(s, 0.0)],
        [z, c(s, 0.0), z],
    ];
    let jy = [
        [z, c(0.0, -s), z],
        [c(0.0, s), z, c(0.0, -s)],
        [z, c(0.0, s), z],
    ];
    let jz = [[c(1.0, 0.0), z, z], [z, z, z], [z, z, c(-1.0, 0.0)]];
    [jx, jy, jz]
}

pub fn matmul(a: &M3, b: &M3) -> M3 {
    let mut out = [[c(0.0, 0.0); 3]; 3];
    for i in 0..3 {
        for k in 0..3 {
            for j in 0..3 {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

pub fn expect(psi: &[C; 3], m: &M3) -> f64 {
    let mut acc = c(0.0, 0.0);
    for i in 0..3 {
        for j in 0..3 {
            acc += psi[i].conj() * m[i][j] * psi[j];
        }
    }
    acc.re
}

/// `⟨Π⁰_r⟩ = 1 − ⟨(r·J)²⟩`, valid because `r·J` has spectrum `{1, 0, −1}`.
pub fn projector_expectation(psi: &[C; 3], r: &[f64; 3]) -> f64 {
    let j = spin_one();
    let mut rj = [[c(0.0, 0.0); 3]; 3];
    for (a, ja) in j.iter().enumerate() {
        for i in 0..3 {
            for k in 0..3 {
                rj[i][k] += ja[i][k] * r[a];
            }
        }
    }
    1.0 - expect(psi, &matmul(&rj, &rj))
}

pub fn beta(psi: &[C; 3], pent: &[[f64; 3]; 5]) -> f64 {
    pent.iter().map(|r| projector_expectation(psi, r)).sum()
}

pub fn dot(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn normalize(v: [f64; 3]) -> [f64; 3] {
    let n = dot(&v, &v).sqrt();
    [v[0] / n, v[1] / n, v[2] / n]
}

pub fn cross(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn isotropic3(rng: &mut impl Rng) -> [f64; 3] {
    loop {
        let v = [
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        ];
        let n2 = dot(&v, &v);
        if n2 > 1e-4 && n2 <= 1.0 {
            return v;
        }
    }
}

fn random_orthogonal_to(rng: &mut impl Rng, a: &[f64; 3]) -> [f64; 3] {
    loop {
        let v = isotropic3(rng);
        let d = dot(&v, a);
        let w = [v[0] - d * a[0], v[1] - d * a[1], v[2] - d * a[2]];
        if dot(&w, &w) > 1e-6 {
            return normalize(w);
        }
    }
}

/// Random cyclically orthogonal pentagon by Gram–Schmidt on random vectors.
pub fn random_pentagon(rng: &mut impl Rng) -> [[f64; 3]; 5] {
    loop {
        let r0 = normalize(isotropic3(rng));
        let r1 = random_orthogonal_to(rng, &r0);
        let r2 = random_orthogonal_to(rng, &r1);
        let r3 = random_orthogonal_to(rng, &r2);
        let closure = cross(&r3, &r0);
        if dot(&closure, &closure) > 1e-8 {
            return [r0, r1, r2, r3, normalize(closure)];
        }
    }
}

pub fn random_state(rng: &mut impl Rng) -> [C; 3] {
    let mut a = [c(0.0, 0.0); 3];
    for x in &mut a {
        *x = c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
    }
    let n = a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    a.map(|x| x / n)
}

/// `R(θ, φ)|1, 1⟩` written out by hand.
pub fn coherent(theta: f64, phi: f64) -> [C; 3] {
    let (s, co) = (theta / 2.0).sin_cos();
    let e = C::from_polar(1.0, -phi);
    [
        e * co * co,
        C::new(std::f64::consts::SQRT_2 * s * co, 0.0),
        e.conj() * s * s,
    ]
}

pub fn rng(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}
