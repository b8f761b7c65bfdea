//! Small statistics helpers.

use std::collections::BTreeMap;

use statrs::distribution::{ChiSquared, ContinuousCDF, Normal};

/// z for a two-sided 95% interval.
pub const Z95: f64 = 1.959_963_984_540_054;

/// Wilson score interval for a binomial proportion.
pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let centre = (p + z2 / (2.0 * n)) / (1.0 + z2 / n);
    let half = z / (1.0 + z2 / n) * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

/// Standard normal quantile.
pub fn normal_quantile(p: f64) -> f64 {
    Normal::new(0.0, 1.0).expect("standard normal").inverse_cdf(p)
}

pub fn chi_square_statistic(observed: &[u64], expected: &[f64]) -> f64 {
    observed.iter().zip(expected).map(|(&o, &e)| (o as f64 - e).powi(2) / e).sum()
}

/// Upper-tail probability of a chi-square statistic.
pub fn chi_square_p_value(stat: f64, df: f64) -> f64 {
    1.0 - ChiSquared::new(df).expect("positive df").cdf(stat)
}

pub fn mean_sd(xs: &[f64]) -> (f64, f64) {
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = if xs.len() > 1 { xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0) } else { 0.0 };
    (mean, var.sqrt())
}

/// Plug-in total variation distance between two empirical distributions.
pub fn total_variation<K: Ord>(a: &BTreeMap<K, u64>, b: &BTreeMap<K, u64>) -> f64 {
    let na: u64 = a.values().sum();
    let nb: u64 = b.values().sum();
    if na == 0 || nb == 0 {
        return if na == nb { 0.0 } else { 1.0 };
    }
    let mut diff = 0.0;
    for (k, &ca) in a {
        let cb = b.get(k).copied().unwrap_or(0);
        diff += (ca as f64 / na as f64 - cb as f64 / nb as f64).abs();
    }
    for (k, &cb) in b {
        if !a.contains_key(k) {
            diff += cb as f64 / nb as f64;
        }
    }
    diff / 2.0
}

pub fn histogram<K: Ord + Clone>(items: impl IntoIterator<Item = K>) -> BTreeMap<K, u64> {
    let mut h = BTreeMap::new();
    for k in items {
        *h.entry(k).or_insert(0) += 1;
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wilson_reference_values() {
        // 10/100 at 95%: (0.0552, 0.1744)
        let (lo, hi) = wilson_interval(10, 100, Z95);
        assert!((lo - 0.0552).abs() < 1e-3 && (hi - 0.1744).abs() < 1e-3);
        assert_eq!(wilson_interval(0, 0, Z95), (0.0, 1.0));
        assert_eq!(wilson_interval(0, 50, Z95).0, 0.0);
    }

    #[test]
    fn quantiles() {
        assert!((normal_quantile(0.975) - Z95).abs() < 1e-9);
        // chi-square(5) at the 0.01 upper tail is 15.086
        assert!((chi_square_p_value(15.086, 5.0) - 0.01).abs() < 1e-4);
    }

    #[test]
    fn tv_of_disjoint_and_equal() {
        let a = histogram([1, 1, 2]);
        let b = histogram([3]);
        assert_eq!(total_variation(&a, &b), 1.0);
        assert_eq!(total_variation(&a, &a.clone()), 0.0);
        let c = histogram([1, 2]);
        assert!((total_variation(&a, &c) - (2.0f64 / 3.0 - 0.5)).abs() < 1e-12);
    }
}
