//! Agreement between ground-truth and estimated scores.

use crate::error::{Error, Result};

/// Clamp applied before `arctanh` so perfect correlations stay finite.
pub const FISHER_CLAMP: f64 = 1e-7;

fn check_sample(x: &[f64], y: &[f64]) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::UndefinedCorrelation("vectors differ in length"));
    }
    if x.len() < 3 {
        return Err(Error::UndefinedCorrelation("fewer than 3 observations"));
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(Error::UndefinedCorrelation("non-finite entry"));
    }
    Ok(())
}

fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::UndefinedCorrelation("constant vector"));
    }
    Ok((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

/// Pearson linear correlation coefficient.
pub fn plcc(x: &[f64], y: &[f64]) -> Result<f64> {
    check_sample(x, y)?;
    pearson(x, y)
}

/// 1-based ranks with ties sharing their average rank.
pub fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]] == values[order[start]] {
            end += 1;
        }
        let rank = (start + end + 1) as f64 / 2.0;
        for &k in &order[start..end] {
            ranks[k] = rank;
        }
        start = end;
    }
    ranks
}

/// Spearman rank-order correlation (Pearson on average ranks).
pub fn srocc(x: &[f64], y: &[f64]) -> Result<f64> {
    check_sample(x, y)?;
    pearson(&average_ranks(x), &average_ranks(y))
}

/// `arctanh(r)` after clamping to `[−1 + 1e−7, 1 − 1e−7]`.
pub fn fisher_z(r: f64) -> Result<f64> {
    if !(-1.0..=1.0).contains(&r) {
        return Err(Error::Domain(r));
    }
    Ok(r.clamp(-1.0 + FISHER_CLAMP, 1.0 - FISHER_CLAMP).atanh())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn golden_values() {
        let v = [0.3, -1.2, 2.5, 0.9];
        let neg: Vec<f64> = v.iter().map(|x| -x).collect();
        assert_eq!(plcc(&v, &v).unwrap(), 1.0);
        assert_eq!(plcc(&v, &neg).unwrap(), -1.0);
        // 3/sqrt(2 * 14/3) evaluated by hand
        let expected = 3.0 / (2.0f64 * 14.0 / 3.0).sqrt();
        assert!((plcc(&[1.0, 2.0, 3.0], &[1.0, 2.0, 4.0]).unwrap() - expected).abs() < 1e-15);
        assert!((expected - 0.98198).abs() < 1e-5);
    }

    #[test]
    fn srocc_cases() {
        let v = [0.3, -1.2, 2.5, 0.9];
        let e: Vec<f64> = v.iter().map(|x: &f64| x.exp()).collect();
        assert!((srocc(&v, &e).unwrap() - 1.0).abs() < 1e-15);
        let rev: Vec<f64> = v.iter().map(|x| -x).collect();
        assert!((srocc(&v, &rev).unwrap() + 1.0).abs() < 1e-15);
        let tie = srocc(&[1.0, 1.0, 2.0], &[1.0, 2.0, 3.0]).unwrap();
        assert!((tie - 3f64.sqrt() / 2.0).abs() < 1e-12);
    }

    #[test]
    fn average_ranks_split_ties() {
        assert_eq!(average_ranks(&[5.0, 1.0, 5.0, 3.0]), vec![3.5, 1.0, 3.5, 2.0]);
    }

    #[test]
    fn undefined_cases() {
        assert!(plcc(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0]).is_err());
        assert!(srocc(&[1.0, 2.0, 3.0], &[4.0, 4.0, 4.0]).is_err());
        assert!(plcc(&[1.0, 2.0], &[1.0, 2.0]).is_err());
        assert!(plcc(&[1.0, 2.0, 3.0], &[1.0, 2.0]).is_err());
        assert!(plcc(&[1.0, f64::NAN, 3.0], &[1.0, 2.0, 3.0]).is_err());
    }

    #[test]
    fn fisher_cases() {
        assert_eq!(fisher_z(0.0).unwrap(), 0.0);
        assert!((fisher_z(0.5).unwrap() - 0.5 * 3f64.ln()).abs() < 1e-15);
        assert!((fisher_z(0.5).unwrap() - 0.549306).abs() < 1e-6);
        assert_eq!(fisher_z(1.0).unwrap(), (1.0 - 1e-7f64).atanh());
        assert!(fisher_z(1.0).unwrap().is_finite());
        assert!(matches!(fisher_z(1.5), Err(Error::Domain(_))));
    }

    fn vec3plus() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
        (3usize..20).prop_flat_map(|n| {
            (
                prop::collection::vec(-100.0f64..100.0, n),
                prop::collection::vec(-100.0f64..100.0, n),
            )
        })
    }

    proptest! {
        #[test]
        fn bounded((x, y) in vec3plus()) {
            if let Ok(r) = plcc(&x, &y) { prop_assert!(r.abs() <= 1.0); }
            if let Ok(r) = srocc(&x, &y) { prop_assert!(r.abs() <= 1.0); }
        }

        #[test]
        fn plcc_affine_invariance((x, y) in vec3plus(), a in 0.1f64..10.0, b in -5.0f64..5.0) {
            if let Ok(r) = plcc(&x, &y) {
                let ax: Vec<f64> = x.iter().map(|v| a * v + b).collect();
                let nx: Vec<f64> = x.iter().map(|v| -a * v + b).collect();
                prop_assert!((plcc(&ax, &y).unwrap() - r).abs() < 1e-9);
                prop_assert!((plcc(&nx, &y).unwrap() + r).abs() < 1e-9);
            }
        }

        #[test]
        fn srocc_monotone_invariance((x, y) in vec3plus()) {
            if let Ok(r) = srocc(&x, &y) {
                let mx: Vec<f64> = x.iter().map(|v| v.powi(3) + 2.0 * v).collect();
                prop_assert!((srocc(&mx, &y).unwrap() - r).abs() < 1e-12);
            }
        }

        #[test]
        fn fisher_odd_and_increasing(r in -0.999f64..0.999, d in 1e-4f64..0.001) {
            prop_assert!((fisher_z(-r).unwrap() + fisher_z(r).unwrap()).abs() < 1e-12);
            prop_assert!(fisher_z(r + d).unwrap() > fisher_z(r).unwrap());
        }
    }
}
