//! Two-sample Kolmogorov-Smirnov test with the asymptotic p-value.

/// Result of a two-sample comparison: the KS statistic, its asymptotic
/// p-value, the sample sizes, and the decision at the stated threshold.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TestReport {
    pub statistic: f64,
    pub p_value: f64,
    pub n_x: usize,
    pub n_y: usize,
    pub threshold: f64,
    /// True when the same-law hypothesis is NOT rejected (p > threshold).
    pub passed: bool,
}

/// Survival function of the Kolmogorov distribution,
/// `Q(lambda) = 2 sum_{k>=1} (-1)^(k-1) exp(-2 k^2 lambda^2)`, evaluated
/// through the dual theta series for small `lambda` where the alternating
/// series converges slowly.
pub fn kolmogorov_survival(lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 1.0;
    }
    if lambda < 1.18 {
        // Q = 1 - sqrt(2 pi)/lambda * sum exp(-(2k-1)^2 pi^2 / (8 lambda^2))
        let factor = (2.0 * std::f64::consts::PI).sqrt() / lambda;
        let base = (-std::f64::consts::PI.powi(2) / (8.0 * lambda * lambda)).exp();
        let sum = base + base.powi(9) + base.powi(25);
        (1.0 - factor * sum).clamp(0.0, 1.0)
    } else {
        let mut sum = 0.0;
        let mut sign = 1.0;
        for k in 1..=16 {
            let term = (-2.0 * (k as f64).powi(2) * lambda * lambda).exp();
            sum += sign * term;
            sign = -sign;
            if term < 1e-18 {
                break;
            }
        }
        (2.0 * sum).clamp(0.0, 1.0)
    }
}

/// Two-sample Kolmogorov-Smirnov test at significance `threshold`. The
/// p-value uses the finite-sample-corrected asymptotic formula with the
/// effective size `n m / (n + m)`.
pub fn ks_two_sample_at(xs: &[f64], ys: &[f64], threshold: f64) -> TestReport {
    assert!(!xs.is_empty() && !ys.is_empty(), "samples must be nonempty");
    let mut xs: Vec<f64> = xs.to_vec();
    let mut ys: Vec<f64> = ys.to_vec();
    xs.sort_by(f64::total_cmp);
    ys.sort_by(f64::total_cmp);
    let (n, m) = (xs.len(), ys.len());
    let (mut i, mut j) = (0usize, 0usize);
    let mut statistic = 0.0f64;
    while i < n && j < m {
        let x = xs[i];
        let y = ys[j];
        let v = x.min(y);
        while i < n && xs[i] <= v {
            i += 1;
        }
        while j < m && ys[j] <= v {
            j += 1;
        }
        let gap = (i as f64 / n as f64 - j as f64 / m as f64).abs();
        statistic = statistic.max(gap);
    }
    let effective = (n as f64 * m as f64) / (n as f64 + m as f64);
    let root = effective.sqrt();
    let lambda = (root + 0.12 + 0.11 / root) * statistic;
    let p_value = kolmogorov_survival(lambda);
    TestReport {
        statistic,
        p_value,
        n_x: n,
        n_y: m,
        threshold,
        passed: p_value > threshold,
    }
}

/// [`ks_two_sample_at`] with the default 0.01 threshold.
pub fn ks_two_sample(xs: &[f64], ys: &[f64]) -> TestReport {
    ks_two_sample_at(xs, ys, 0.01)
}
