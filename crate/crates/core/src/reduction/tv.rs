//! Total-variation bounds between blended and purely random data.

use statrs::distribution::{Continuous, Normal};

/// `2 M eps`: distance between `N(0, ((1-eps) sigma)^2)^M` and
/// `N(0, sigma^2)^M`.
pub fn tv_bound_scale(m: usize, eps: f64) -> f64 {
    2.0 * m as f64 * eps
}

/// `||v||_1 / sigma`: distance between `prod_i N(v_i, sigma^2)` and
/// `N(0, sigma^2)^M`.
pub fn tv_bound_shift(v: &[f64], sigma: f64) -> f64 {
    v.iter().map(|x| x.abs()).sum::<f64>() / sigma
}

/// `(4 D^4 d N + 2 D^4 d N) eps`, the distance for blend parameters
/// `|t| <= eps` with target entries bounded by 1, each complex entry counted
/// as two real coordinates.
pub fn blend_tv_bound(bond: usize, d: usize, n: usize, eps: f64) -> f64 {
    let entries = bond.pow(4) * d * n;
    tv_bound_scale(2 * entries, eps) + tv_bound_shift(&vec![eps; 2 * entries], 1.0)
}

fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let n = panels + panels % 2;
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for i in 1..n {
        acc += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    acc * h / 3.0
}

/// `1/2 int |f - g|`, split at the given crossing points of `f - g` so each
/// piece is smooth.
fn tv_quadrature(f: impl Fn(f64) -> f64, g: impl Fn(f64) -> f64, lo: f64, hi: f64, mut cuts: Vec<f64>) -> f64 {
    cuts.retain(|c| *c > lo && *c < hi);
    cuts.sort_by(f64::total_cmp);
    let mut knots = vec![lo];
    knots.extend(cuts);
    knots.push(hi);
    let diff = |x: f64| (f(x) - g(x)).abs();
    0.5 * knots.windows(2).map(|w| simpson(diff, w[0], w[1], 20_000)).sum::<f64>()
}

/// One-dimensional TV between `N(0, ((1-eps) sigma)^2)` and `N(0, sigma^2)`
/// by quadrature.
pub fn tv_numeric_scale(eps: f64, sigma: f64) -> f64 {
    let (a, b) = ((1.0 - eps) * sigma, sigma);
    if eps == 0.0 {
        return 0.0;
    }
    let narrow = Normal::new(0.0, a).expect("positive width");
    let wide = Normal::new(0.0, b).expect("positive width");
    // densities cross where x^2 = 2 a^2 b^2 ln(b/a) / (b^2 - a^2)
    let x0 = (2.0 * a * a * b * b * (b / a).ln() / (b * b - a * a)).sqrt();
    let span = 40.0 * sigma;
    tv_quadrature(|x| narrow.pdf(x), |x| wide.pdf(x), -span, span, vec![-x0, x0])
}

/// One-dimensional TV between `N(v, sigma^2)` and `N(0, sigma^2)` by
/// quadrature.
pub fn tv_numeric_shift(v: f64, sigma: f64) -> f64 {
    let shifted = Normal::new(v, sigma).expect("positive width");
    let centered = Normal::new(0.0, sigma).expect("positive width");
    let span = 40.0 * sigma + v.abs();
    tv_quadrature(|x| shifted.pdf(x), |x| centered.pdf(x), -span, span, vec![v / 2.0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use statrs::distribution::ContinuousCDF;

    #[test]
    fn zero_shift() {
        assert_eq!(tv_bound_shift(&[0.0, 0.0], 1.0), 0.0);
        assert!(tv_numeric_shift(0.0, 1.0).abs() < 1e-12);
        assert_eq!(tv_numeric_scale(0.0, 1.0), 0.0);
    }

    #[test]
    fn quadrature_matches_closed_forms() {
        let std = Normal::new(0.0, 1.0).unwrap();
        for v in [0.01, 0.3, 1.0, 2.5] {
            // equal-width Gaussians: 2 Phi(|v| / 2) - 1
            let closed = 2.0 * std.cdf(v / 2.0) - 1.0;
            assert!((tv_numeric_shift(v, 1.0) - closed).abs() < 1e-10);
        }
        for eps in [0.1, 0.01] {
            let (a, b): (f64, f64) = (1.0 - eps, 1.0);
            let x0 = (2.0 * a * a * b * b * (b / a).ln() / (b * b - a * a)).sqrt();
            let closed = 2.0 * (std.cdf(x0 / a) - std.cdf(x0 / b));
            assert!((tv_numeric_scale(eps, 1.0) - closed).abs() < 1e-10);
        }
    }

    #[test]
    fn scale_example() {
        assert!(tv_numeric_scale(0.01, 1.0) <= 0.02);
        assert!(tv_numeric_scale(0.01, 3.0) <= tv_bound_scale(1, 0.01));
    }

    #[test]
    fn blend_bound_is_six_d4dn_eps() {
        for (bond, d, n) in [(2usize, 2usize, 9usize), (1, 1, 1), (3, 2, 4)] {
            let eps = 1e-6;
            let want = 6.0 * (bond.pow(4) * d * n) as f64 * eps;
            assert!((blend_tv_bound(bond, d, n, eps) - want).abs() < 1e-15 * want.max(1.0) * 10.0);
        }
    }
}
