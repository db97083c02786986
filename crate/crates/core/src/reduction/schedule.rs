use serde::{Deserialize, Serialize};

use super::ReductionError;
use crate::arith::Rational;

/// `delta = 1/(12N)` and `eps = delta / (6 D^4 d N)`.
pub fn epsilon_for(bond: usize, d: usize, n: usize) -> (Rational, Rational) {
    let n = n.max(1) as i64;
    let delta = Rational::new(1, 12 * n).expect("nonzero");
    let scale = 6 * (bond as i64).pow(4) * d as i64 * n;
    let eps = &delta / &Rational::from_int(scale);
    (delta, eps)
}

/// Which points a reduction queries.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SamplePlan {
    /// `r + 1` equidistant points `i eps / r`, `i = 0..=r`.
    Noisy { r: usize },
    /// `k` points `i eps / k`, `i = 1..=k`; zero is skipped so every query
    /// mixes in the random data.
    Exact { k: usize },
}

impl SamplePlan {
    /// Integer abscissae `u_i` with `t_i = u_i * step`.
    pub fn abscissae(&self) -> Vec<u64> {
        match *self {
            SamplePlan::Noisy { r } => (0..=r as u64).collect(),
            SamplePlan::Exact { k } => (1..=k as u64).collect(),
        }
    }

    /// `h` with `t_i = u_i h`.
    pub fn step(&self, eps: &Rational) -> Rational {
        let parts = match *self {
            SamplePlan::Noisy { r } => r.max(1),
            SamplePlan::Exact { k } => k,
        };
        eps / &Rational::from_int(parts as i64)
    }
}

pub fn choose_sample_points(plan: SamplePlan, eps: &Rational) -> Vec<Rational> {
    let h = plan.step(eps);
    plan.abscissae().into_iter().map(|u| &h * &Rational::from_int(u as i64)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Exact,
    Noisy,
    Uev,
    Nev,
}

impl std::fmt::Display for Variant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Variant::Exact => "exact",
            Variant::Noisy => "noisy",
            Variant::Uev => "uev",
            Variant::Nev => "nev",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for Variant {
    type Err = ReductionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exact" => Ok(Variant::Exact),
            "noisy" => Ok(Variant::Noisy),
            "uev" => Ok(Variant::Uev),
            "nev" => Ok(Variant::Nev),
            other => Err(ReductionError::InvalidConfig(format!("unknown variant {other:?}"))),
        }
    }
}

/// Parameters of one reduction run. Unset fields take the defaults for the
/// instance: `k = 10r` (exact, uev), `k = 2r + 1` (nev), `r + 1` points
/// (noisy), `eps` from [`epsilon_for`], 25 repeats.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReductionConfig {
    pub variant: Variant,
    #[serde(default)]
    pub k: Option<usize>,
    #[serde(default)]
    pub eps: Option<Rational>,
    #[serde(default = "default_repeats")]
    pub repeats: usize,
    /// Stop voting once the leader cannot be overtaken.
    #[serde(default = "default_true")]
    pub early_stop: bool,
    /// Promised per-component oracle noise `2^-noise_bits` (noisy variant).
    #[serde(default)]
    pub noise_bits: Option<u32>,
    /// The unspecified constant in the equidistant-interpolation bound.
    #[serde(default = "default_c")]
    pub rakhmanov_c: f64,
}

fn default_repeats() -> usize {
    25
}

fn default_true() -> bool {
    true
}

fn default_c() -> f64 {
    1.0
}

impl ReductionConfig {
    pub fn new(variant: Variant) -> Self {
        ReductionConfig {
            variant,
            k: None,
            eps: None,
            repeats: default_repeats(),
            early_stop: true,
            noise_bits: None,
            rakhmanov_c: default_c(),
        }
    }

    /// Degree bound `r = 2N`.
    pub fn degree(n: usize) -> usize {
        2 * n
    }

    /// Checks the configuration against an instance size and fills in the
    /// defaults: returns `(plan, eps)`.
    pub fn resolve(&self, bond: usize, d: usize, n: usize) -> Result<(SamplePlan, Rational), ReductionError> {
        let r = Self::degree(n);
        let eps = match &self.eps {
            Some(e) if e.signum() <= 0 => return Err(ReductionError::InvalidConfig("eps must be positive".into())),
            Some(e) => e.clone(),
            None => epsilon_for(bond, d, n).1,
        };
        let plan = match self.variant {
            Variant::Exact | Variant::Uev => {
                let k = self.k.unwrap_or(10 * r);
                if k <= r {
                    return Err(ReductionError::InvalidConfig(format!("need k > r = {r}, got {k}")));
                }
                SamplePlan::Exact { k }
            }
            Variant::Nev => {
                let k = self.k.unwrap_or(2 * r + 1);
                if k < 2 * r + 1 {
                    return Err(ReductionError::InvalidConfig(format!("need k >= 4N + 1 = {}, got {k}", 2 * r + 1)));
                }
                SamplePlan::Exact { k }
            }
            Variant::Noisy => {
                if let Some(k) = self.k {
                    if k != r + 1 {
                        return Err(ReductionError::InvalidConfig(format!("noisy variant queries exactly r + 1 = {} points", r + 1)));
                    }
                }
                SamplePlan::Noisy { r }
            }
        };
        if self.repeats == 0 {
            return Err(ReductionError::InvalidConfig("repeats must be at least 1".into()));
        }
        if !(self.rakhmanov_c > 0.0) {
            return Err(ReductionError::InvalidConfig("rakhmanov_c must be positive".into()));
        }
        Ok((plan, eps))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    #[test]
    fn epsilon_examples() {
        assert_eq!(epsilon_for(2, 2, 9), (q(1, 108), q(1, 186624)));
        assert_eq!(epsilon_for(1, 1, 1), (q(1, 12), q(1, 72)));
        assert_eq!(epsilon_for(2, 2, 4).1, q(1, 36864));
    }

    #[test]
    fn sample_point_examples() {
        assert_eq!(choose_sample_points(SamplePlan::Noisy { r: 2 }, &q(1, 1)), vec![q(0, 1), q(1, 2), q(1, 1)]);
        assert_eq!(
            choose_sample_points(SamplePlan::Exact { k: 4 }, &q(1, 1)),
            vec![q(1, 4), q(1, 2), q(3, 4), q(1, 1)]
        );
    }

    #[test]
    fn config_defaults_and_checks() {
        let cfg = ReductionConfig::new(Variant::Exact);
        let (plan, eps) = cfg.resolve(2, 2, 6).unwrap();
        assert_eq!(plan, SamplePlan::Exact { k: 120 });
        assert_eq!(eps, epsilon_for(2, 2, 6).1);
        assert_eq!(ReductionConfig::new(Variant::Nev).resolve(2, 2, 4).unwrap().0, SamplePlan::Exact { k: 17 });
        assert_eq!(ReductionConfig::new(Variant::Noisy).resolve(2, 2, 4).unwrap().0, SamplePlan::Noisy { r: 8 });

        let bad = ReductionConfig { k: Some(12), ..ReductionConfig::new(Variant::Exact) };
        assert!(bad.resolve(2, 2, 6).is_err());
        let bad = ReductionConfig { k: Some(16), ..ReductionConfig::new(Variant::Nev) };
        assert!(bad.resolve(2, 2, 4).is_err());
        let bad = ReductionConfig { k: Some(12), ..ReductionConfig::new(Variant::Noisy) };
        assert!(bad.resolve(2, 2, 4).is_err());
        let bad = ReductionConfig { eps: Some(q(-1, 2)), ..ReductionConfig::new(Variant::Exact) };
        assert!(bad.resolve(2, 2, 4).is_err());
    }

    #[test]
    fn config_json_defaults() {
        let cfg: ReductionConfig = serde_json::from_str(r#"{"variant": "uev", "k": 50}"#).unwrap();
        assert_eq!(cfg.repeats, 25);
        assert_eq!(cfg.k, Some(50));
        assert_eq!("nev".parse::<Variant>().unwrap(), Variant::Nev);
        assert!("bogus".parse::<Variant>().is_err());
    }

    proptest! {
        #[test]
        fn epsilon_identity(bond in 1usize..5, d in 1usize..5, n in 1usize..40) {
            let (delta, eps) = epsilon_for(bond, d, n);
            let scale = Rational::from_int(6 * (bond as i64).pow(4) * d as i64 * n as i64);
            prop_assert_eq!(&eps * &scale, delta);
        }

        #[test]
        fn points_distinct_and_in_range(k in 1usize..200, num in 1i64..1000, den in 1i64..100000, noisy in any::<bool>()) {
            let eps = q(num, den);
            let plan = if noisy { SamplePlan::Noisy { r: k } } else { SamplePlan::Exact { k } };
            let pts = choose_sample_points(plan, &eps);
            prop_assert_eq!(pts.len(), if noisy { k + 1 } else { k });
            prop_assert!(pts.windows(2).all(|w| w[0] < w[1]));
            prop_assert!(pts.iter().all(|t| t.signum() >= 0 && *t <= eps));
        }
    }
}
