//! Nelder–Mead simplex minimization.

use alloc::vec;
use alloc::vec::Vec;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NelderMeadConfig {
    /// Edge length of the initial simplex along each coordinate.
    pub initial_step: f64,
    /// Stop once the spread of objective values across the simplex drops
    /// below this.
    pub f_tol: f64,
    pub max_evals: usize,
}

impl Default for NelderMeadConfig {
    fn default() -> Self {
        Self {
            initial_step: 0.25,
            f_tol: 1e-9,
            max_evals: 2000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub f: f64,
    pub evals: usize,
    pub converged: bool,
}

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

/// Minimizes `f` from `x0`. Non-finite objective values are treated as `+∞`,
/// which lets callers mark infeasible points.
pub fn nelder_mead<F>(mut f: F, x0: &[f64], cfg: &NelderMeadConfig) -> Minimum
where
    F: FnMut(&[f64]) -> f64,
{
    let n = x0.len();
    let mut evals = 0usize;
    let mut eval = |x: &[f64], evals: &mut usize| {
        *evals += 1;
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    simplex.push(x0.to_vec());
    for i in 0..n {
        let mut v = x0.to_vec();
        v[i] += cfg.initial_step;
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|v| eval(v, &mut evals)).collect();

    let mut centroid = vec![0.0; n];
    let mut trial = vec![0.0; n];
    let mut trial2 = vec![0.0; n];
    let mut converged = false;

    loop {
        sort_simplex(&mut simplex, &mut values);
        let best = values[0];
        let worst = values[n];
        if worst.is_finite() && (worst - best).abs() <= cfg.f_tol {
            converged = true;
            break;
        }
        if evals >= cfg.max_evals {
            break;
        }

        centroid.iter_mut().for_each(|c| *c = 0.0);
        for v in &simplex[..n] {
            for (c, x) in centroid.iter_mut().zip(v) {
                *c += x;
            }
        }
        centroid.iter_mut().for_each(|c| *c /= n as f64);

        along(&centroid, &simplex[n], -REFLECT, &mut trial);
        let f_reflect = eval(&trial, &mut evals);

        if f_reflect < best {
            along(&centroid, &simplex[n], -EXPAND, &mut trial2);
            let f_expand = eval(&trial2, &mut evals);
            if f_expand < f_reflect {
                simplex[n].copy_from_slice(&trial2);
                values[n] = f_expand;
            } else {
                simplex[n].copy_from_slice(&trial);
                values[n] = f_reflect;
            }
            continue;
        }
        if f_reflect < values[n - 1] {
            simplex[n].copy_from_slice(&trial);
            values[n] = f_reflect;
            continue;
        }

        let (f_contract, accept) = if f_reflect < worst {
            // outside contraction
            along(&centroid, &simplex[n], -CONTRACT, &mut trial2);
            let fc = eval(&trial2, &mut evals);
            (fc, fc <= f_reflect)
        } else {
            along(&centroid, &simplex[n], CONTRACT, &mut trial2);
            let fc = eval(&trial2, &mut evals);
            (fc, fc < worst)
        };
        if accept {
            simplex[n].copy_from_slice(&trial2);
            values[n] = f_contract;
            continue;
        }

        let (head, tail) = simplex.split_at_mut(1);
        let anchor = &head[0];
        for (v, val) in tail.iter_mut().zip(values[1..].iter_mut()) {
            for (x, a) in v.iter_mut().zip(anchor) {
                *x = a + SHRINK * (*x - a);
            }
            *val = eval(v, &mut evals);
        }
    }

    sort_simplex(&mut simplex, &mut values);
    Minimum {
        x: simplex.swap_remove(0),
        f: values[0],
        evals,
        converged,
    }
}

/// `out = c + t·(p − c)`
#[inline]
fn along(c: &[f64], p: &[f64], t: f64, out: &mut [f64]) {
    for ((o, ci), pi) in out.iter_mut().zip(c).zip(p) {
        *o = ci + t * (pi - ci);
    }
}

/// Stable sort by value so ties keep their insertion order.
fn sort_simplex(simplex: &mut [Vec<f64>], values: &mut [f64]) {
    let n = values.len();
    for i in 1..n {
        let mut k = i;
        while k > 0 && values[k] < values[k - 1] {
            values.swap(k, k - 1);
            simplex.swap(k, k - 1);
            k -= 1;
        }
    }
}
