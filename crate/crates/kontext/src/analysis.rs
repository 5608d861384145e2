//! Rank statistics for comparing `K` maps with Lyapunov maps.

use std::cmp::Ordering;

/// Ranks starting at 1, with ties sharing their average rank.
pub fn ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut out = vec![0.0; values.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len()
            && values[order[end]].total_cmp(&values[order[start]]) == Ordering::Equal
        {
            end += 1;
        }
        let avg = (start + end + 1) as f64 / 2.0;
        for &i in &order[start..end] {
            out[i] = avg;
        }
        start = end;
    }
    out
}

pub fn pearson(a: &[f64], b: &[f64]) -> Option<f64> {
    if a.len() != b.len() || a.len() < 2 {
        return None;
    }
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        sab += (x - ma) * (y - mb);
        saa += (x - ma) * (x - ma);
        sbb += (y - mb) * (y - mb);
    }
    if saa == 0.0 || sbb == 0.0 {
        return None;
    }
    Some(sab / (saa * sbb).sqrt())
}

/// Spearman rank correlation; `None` for mismatched lengths or a constant
/// input.
pub fn spearman(a: &[f64], b: &[f64]) -> Option<f64> {
    if a.len() != b.len() {
        return None;
    }
    pearson(&ranks(a), &ranks(b))
}

/// Linearly interpolated percentile, `q` in `[0, 100]`.
pub fn percentile(values: &[f64], q: f64) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let pos = q.clamp(0.0, 100.0) / 100.0 * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    Some(sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64))
}

pub fn median(values: &[f64]) -> Option<f64> {
    percentile(values, 50.0)
}

pub fn mean(values: &[f64]) -> Option<f64> {
    (!values.is_empty()).then(|| values.iter().sum::<f64>() / values.len() as f64)
}

pub const CHAOTIC_LAMBDA: f64 = 0.1;
pub const REGULAR_LAMBDA: f64 = 0.02;

/// Mean `K` over chaotic (`λ > 0.1`) and regular (`λ < 0.02`) grid points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeContrast {
    pub chaotic_mean: Option<f64>,
    pub regular_mean: Option<f64>,
    pub n_chaotic: usize,
    pub n_regular: usize,
}

pub fn regime_contrast(k: &[f64], lambda: &[f64]) -> RegimeContrast {
    let pick = |pred: &dyn Fn(f64) -> bool| -> Vec<f64> {
        k.iter()
            .zip(lambda)
            .filter(|(_, &l)| pred(l))
            .map(|(&v, _)| v)
            .collect()
    };
    let chaotic = pick(&|l| l > CHAOTIC_LAMBDA);
    let regular = pick(&|l| l < REGULAR_LAMBDA);
    RegimeContrast {
        chaotic_mean: mean(&chaotic),
        regular_mean: mean(&regular),
        n_chaotic: chaotic.len(),
        n_regular: regular.len(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ties_share_ranks() {
        assert_eq!(ranks(&[3.0, 1.0, 3.0, 2.0]), vec![3.5, 1.0, 3.5, 2.0]);
    }

    #[test]
    fn spearman_of_monotone_map_is_one() {
        let a = [0.1, 0.5, 0.3, 2.0];
        let b: Vec<f64> = a.iter().map(|x: &f64| x.exp()).collect();
        assert!((spearman(&a, &b).unwrap() - 1.0).abs() < 1e-12);
        let c: Vec<f64> = a.iter().map(|x| -x).collect();
        assert!((spearman(&a, &c).unwrap() + 1.0).abs() < 1e-12);
        assert!(spearman(&a, &[1.0; 4]).is_none());
    }

    #[test]
    fn percentiles_interpolate() {
        let v = [4.0, 1.0, 3.0, 2.0, 5.0];
        assert_eq!(median(&v), Some(3.0));
        assert_eq!(percentile(&v, 10.0), Some(1.4));
        assert_eq!(percentile(&[], 50.0), None);
    }

    #[test]
    fn regimes_split_by_threshold() {
        let r = regime_contrast(&[0.1, 0.9, 0.5], &[0.0, 0.3, 0.05]);
        assert_eq!((r.n_regular, r.n_chaotic), (1, 1));
        assert_eq!(r.regular_mean, Some(0.1));
        assert_eq!(r.chaotic_mean, Some(0.9));
    }
}
