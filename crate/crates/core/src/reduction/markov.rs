use serde::Serialize;

/// `1/2 - r / (2 (k - r))`: the lower bound on the probability that at
/// least `(k + r)/2` of `k` answers are correct when each fails with
/// probability at most 1/4.
pub fn markov_bound(k: usize, r: usize) -> f64 {
    0.5 - r as f64 / (2.0 * (k - r) as f64)
}

/// Empirical check of [`markov_bound`] from per-repeat correct counts.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MarkovCheck {
    pub k: usize,
    pub r: usize,
    pub repeats: usize,
    /// Repeats with at least `(k + r)/2` correct answers.
    pub hits: usize,
    pub fraction: f64,
    pub sigma_hat: f64,
    pub bound: f64,
    pub passes: bool,
}

impl MarkovCheck {
    pub fn from_counts(k: usize, r: usize, counts: &[usize]) -> Self {
        let repeats = counts.len();
        let hits = counts.iter().filter(|&&c| 2 * c >= k + r).count();
        let fraction = if repeats == 0 { 0.0 } else { hits as f64 / repeats as f64 };
        let sigma_hat = if repeats == 0 { 0.0 } else { (fraction * (1.0 - fraction) / repeats as f64).sqrt() };
        let bound = markov_bound(k, r);
        MarkovCheck { k, r, repeats, hits, fraction, sigma_hat, bound, passes: fraction >= bound - 3.0 * sigma_hat }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bound_values() {
        assert!((markov_bound(120, 12) - (0.5 - 12.0 / 216.0)).abs() < 1e-15);
        assert!(markov_bound(13, 12) < 0.0);
    }

    #[test]
    fn counts_threshold() {
        let c = MarkovCheck::from_counts(20, 4, &[12, 11, 20, 0]);
        assert_eq!(c.hits, 2);
        assert_eq!(c.fraction, 0.5);
        assert!(c.passes);
    }
}
