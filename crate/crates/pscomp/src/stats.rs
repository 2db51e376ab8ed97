//! Statistics helpers for Monte Carlo verdicts.

use statrs::distribution::{Beta, ContinuousCDF};

/// One-sided upper Clopper–Pearson confidence bound: the probability that the
/// true success rate exceeds the returned value is at most `1 - conf`.
pub fn clopper_pearson_upper(successes: u64, trials: u64, conf: f64) -> f64 {
    assert!(trials > 0, "clopper_pearson_upper needs at least one trial");
    if successes >= trials {
        return 1.0;
    }
    let beta = Beta::new((successes + 1) as f64, (trials - successes) as f64)
        .expect("valid beta parameters");
    beta.inverse_cdf(conf)
}

/// One-sided lower Clopper–Pearson confidence bound.
pub fn clopper_pearson_lower(successes: u64, trials: u64, conf: f64) -> f64 {
    assert!(trials > 0);
    if successes == 0 {
        return 0.0;
    }
    let beta =
        Beta::new(successes as f64, (trials - successes + 1) as f64).expect("valid beta parameters");
    beta.inverse_cdf(1.0 - conf)
}

/// Kolmogorov–Smirnov distance between an empirical sample and a reference CDF.
/// Sorts the sample in place.
pub fn ks_distance<F: Fn(f64) -> f64>(samples: &mut [f64], cdf: F) -> f64 {
    assert!(!samples.is_empty());
    samples.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = samples.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in samples.iter().enumerate() {
        let f = cdf(x);
        let lo = i as f64 / n;
        let hi = (i + 1) as f64 / n;
        d = d.max((f - lo).abs()).max((hi - f).abs());
    }
    d
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Sample mean and (unbiased) standard deviation.
pub fn mean_and_std(xs: &[f64]) -> (f64, f64) {
    let m = mean(xs);
    if xs.len() < 2 {
        return (m, 0.0);
    }
    let var = xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (xs.len() as f64 - 1.0);
    (m, var.sqrt())
}

/// Half-width of a two-sided 99% normal-approximation confidence interval for
/// the mean of `n` samples with standard deviation `std`.
pub fn normal_ci99_halfwidth(std: f64, n: usize) -> f64 {
    2.575_829_303_548_901 * std / (n as f64).sqrt()
}
