//! Numerical checks of the analytic ingredients, each reported as a table
//! of `(value, bound)` pairs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::HarnessError;
use crate::arith::{ComplexRational, Rational};
use crate::interp::{
    paturi_bound, rakhmanov_bound, rakhmanov_node, rakhmanov_radius, vandermonde_interpolate, Magnitude, SampleSet,
};
use crate::reduction::{
    exact_value, repeat_rng, sample_peps_data, tv_bound_scale, tv_bound_shift, tv_numeric_scale, tv_numeric_shift,
    BlendPath, DistributionSpec, Quantity, ReductionConfig,
};
use crate::tensor::{build_cluster_peps, LatticeSpec, Limits, LocalObservable};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LemmaCheck {
    pub label: String,
    /// Measured quantity, as `log2` for the magnitude checks.
    pub value: f64,
    pub bound: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LemmaReport {
    pub lemma: String,
    pub checks: Vec<LemmaCheck>,
    pub pass: bool,
}

impl LemmaReport {
    fn new(lemma: &str, checks: Vec<LemmaCheck>) -> Self {
        let pass = checks.iter().all(|c| c.pass);
        LemmaReport { lemma: lemma.into(), checks, pass }
    }
}

fn check(label: String, value: f64, bound: f64) -> LemmaCheck {
    LemmaCheck { label, value, bound, pass: value <= bound }
}

/// Gaussian total-variation bounds against quadrature.
pub fn verify_gaussian_tv() -> LemmaReport {
    let mut checks = Vec::new();
    for sigma in [1.0, 3.0] {
        for eps in [0.1, 0.01, 0.001] {
            checks.push(check(format!("scale sigma={sigma} eps={eps}"), tv_numeric_scale(eps, sigma), tv_bound_scale(1, eps)));
        }
        for v in [0.01, 0.1, 0.5] {
            checks.push(check(format!("shift sigma={sigma} v={v}"), tv_numeric_shift(v, sigma), tv_bound_shift(&[v], sigma)));
        }
    }
    LemmaReport::new("gaussian-tv", checks)
}

/// Blend-path quantities are polynomials of degree at most `2N` in `t`:
/// `2N + 1` samples predict held-out points exactly.
pub fn verify_degree_bound(seed: u64) -> Result<LemmaReport, HarnessError> {
    let limits = Limits::default();
    let mut checks = Vec::new();
    for (w, h) in [(1, 2), (2, 2), (2, 3)] {
        let target = build_cluster_peps(LatticeSpec::new(w, h));
        let q = sample_peps_data(&target, &DistributionSpec::default(), &mut repeat_rng(seed, (w * 10 + h) as u64))?;
        let path = BlendPath::new(target.clone(), q)?;
        let r = ReductionConfig::degree(target.n());
        let obs = LocalObservable::diagonal(0, &[ComplexRational::one(), ComplexRational::from_int(-1)]);
        for (name, quantity) in [("norm", Quantity::Norm), ("uev", Quantity::Uev(&obs))] {
            let at = |t: i64| exact_value(&path.at(&ComplexRational::from_int(t)), quantity, &limits);
            let xs: Vec<ComplexRational> = (0..=r as i64).map(ComplexRational::from_int).collect();
            let ys = (0..=r as i64).map(at).collect::<Result<Vec<_>, _>>()?;
            let samples = SampleSet::from_xy(xs, ys).map_err(crate::reduction::ReductionError::from)?;
            let p = vandermonde_interpolate(&samples, r).map_err(crate::reduction::ReductionError::from)?;
            let mut misses = 0;
            for t in [r as i64 + 1, r as i64 + 5, -3] {
                misses += usize::from(p.eval(&ComplexRational::from_int(t)) != at(t)?);
            }
            checks.push(LemmaCheck {
                label: format!("{name} {w}x{h} r={r} held-out misses"),
                value: misses as f64,
                bound: 0.0,
                pass: misses == 0,
            });
        }
    }
    Ok(LemmaReport::new("degree-bound", checks))
}

/// Chebyshev `T_r(y)` exactly.
fn chebyshev(r: usize, y: &Rational) -> Rational {
    let two_y = &Rational::from_int(2) * y;
    let (mut prev, mut cur) = (Rational::one(), y.clone());
    if r == 0 {
        return prev;
    }
    for _ in 1..r {
        let next = &(&two_y * &cur) - &prev;
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}

/// The extremal polynomial `T_r(x / eps)` is bounded by 1 on `[-eps, eps]`;
/// its value at 1 must stay within the growth bound.
pub fn verify_paturi() -> Result<LemmaReport, HarnessError> {
    let mut checks = Vec::new();
    for r in [1usize, 2, 4, 8, 16] {
        for den in [2i64, 10, 100, 1000] {
            let eps = 1.0 / den as f64;
            let value = Magnitude::of_rational(&chebyshev(r, &Rational::from_int(den))).log2();
            let bound = paturi_bound(Magnitude::one(), r, eps).map_err(crate::reduction::ReductionError::from)?.log2();
            checks.push(check(format!("log2 T_{r}(1/eps) eps=1/{den}"), value, bound));
        }
    }
    Ok(LemmaReport::new("paturi", checks))
}

fn lagrange_basis_sum(nodes: &[f64], x: f64, vals: Option<&[f64]>) -> f64 {
    (0..nodes.len())
        .map(|i| {
            let li: f64 = (0..nodes.len()).filter(|&j| j != i).map(|j| (x - nodes[j]) / (nodes[i] - nodes[j])).product();
            match vals {
                Some(v) => v[i] * li,
                None => li.abs(),
            }
        })
        .sum()
}

/// Interpolation from equidistant nodes. Two families:
/// the Lebesgue function of `r + 1` nodes on `|x| <= R/2`, against the
/// bound with constant `c_square`; and random degree-`r` polynomials that
/// are at most 1 on `k > r + 1` nodes, against the bound with `c_general`.
pub fn verify_rakhmanov(seed: u64, c_square: f64, c_general: f64) -> Result<LemmaReport, HarnessError> {
    let err = |e| HarnessError::Reduction(crate::reduction::ReductionError::Interp(e));
    let mut checks = Vec::new();
    for r in 1..=12usize {
        let k = r + 1;
        let nodes: Vec<f64> = (0..k).map(|j| rakhmanov_node(k, j)).collect();
        let half = rakhmanov_radius(k, r) / 2.0;
        let mut worst = f64::NEG_INFINITY;
        for g in 0..=100 {
            let x = half * (-1.0 + g as f64 / 50.0);
            let ratio = lagrange_basis_sum(&nodes, x, None) / rakhmanov_bound(k, r, x, c_square).map_err(err)?.to_f64();
            worst = worst.max(ratio);
        }
        checks.push(check(format!("lebesgue / bound, k = r + 1 = {k}, |x| <= R/2"), worst, 1.0));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for r in 1..=6usize {
        for k in [r + 2, 2 * r + 1, 4 * r, 10 * r] {
            let nodes: Vec<f64> = (0..k).map(|j| rakhmanov_node(k, j)).collect();
            let radius = rakhmanov_radius(k, r);
            let picks: Vec<f64> = (0..=r).map(|i| nodes[i * (k - 1) / r]).collect();
            let mut worst = f64::NEG_INFINITY;
            for _ in 0..40 {
                let anchors: Vec<f64> = (0..=r).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let on_nodes = nodes.iter().map(|&x| lagrange_basis_sum(&picks, x, Some(&anchors)).abs()).fold(0.0, f64::max);
                for g in 0..200 {
                    let x = radius * (-1.0 + g as f64 / 100.0) * 0.999;
                    let val = lagrange_basis_sum(&picks, x, Some(&anchors)).abs() / on_nodes;
                    worst = worst.max(val / rakhmanov_bound(k, r, x, c_general).map_err(err)?.to_f64());
                }
            }
            checks.push(check(format!("random interpolant / bound, r = {r}, k = {k}"), worst, 1.0));
        }
    }
    Ok(LemmaReport::new("rakhmanov", checks))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chebyshev_values() {
        assert_eq!(chebyshev(0, &Rational::from_int(5)), Rational::one());
        assert_eq!(chebyshev(3, &Rational::from_int(2)), Rational::from_int(26));
        assert_eq!(chebyshev(4, &Rational::new(1, 2).unwrap()), Rational::new(-1, 2).unwrap());
    }

    #[test]
    fn all_lemmas_hold() {
        assert!(verify_gaussian_tv().pass);
        assert!(verify_paturi().unwrap().pass);
        let rak = verify_rakhmanov(4, 1.0, 1.5).unwrap();
        assert!(rak.pass, "{:?}", rak.checks.iter().filter(|c| !c.pass).collect::<Vec<_>>());
    }

    #[test]
    fn degree_bound_holds() {
        let rep = verify_degree_bound(1).unwrap();
        assert_eq!(rep.checks.len(), 6);
        assert!(rep.pass);
    }
}
