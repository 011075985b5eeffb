//! Goodness-of-fit helpers for the statistical invariants.

/// Asymptotic Kolmogorov coefficient for α = 0.01.
pub const KS_COEFF_1PCT: f64 = 1.6276;

/// One-sample Kolmogorov–Smirnov statistic `sup |F_n − F|`.
pub fn ks_statistic<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> f64 {
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).max((i + 1) as f64 / n - f)
        })
        .fold(0.0, f64::max)
}

/// 1% critical value of the KS statistic for `n` samples (Stephens'
/// finite-sample correction of the asymptotic value).
pub fn ks_critical_1pct(n: usize) -> f64 {
    let s = (n as f64).sqrt();
    KS_COEFF_1PCT / (s + 0.12 + 0.11 / s)
}
