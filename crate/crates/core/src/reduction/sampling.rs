use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::ReductionError;
use crate::arith::{snap_to_dyadic, ComplexRational, Rational};
use crate::tensor::PepsData;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DistributionKind {
    Gaussian,
    Uniform,
}

/// Entry distribution for random PEPS-data. Real and imaginary parts are
/// drawn independently: `N(0, sigma^2)` each for the Gaussian kind, uniform
/// on `[-sigma, sigma]` for the uniform kind, then rounded to the nearest
/// multiple of `2^-bits`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistributionSpec {
    pub kind: DistributionKind,
    pub sigma: Rational,
    pub bits: u32,
    #[serde(default)]
    pub translation_invariant: bool,
}

impl Default for DistributionSpec {
    fn default() -> Self {
        DistributionSpec { kind: DistributionKind::Gaussian, sigma: Rational::one(), bits: 53, translation_invariant: false }
    }
}

impl DistributionSpec {
    pub fn validate(&self) -> Result<(), ReductionError> {
        if self.sigma.signum() <= 0 {
            return Err(ReductionError::InvalidConfig("sigma must be positive".into()));
        }
        if self.bits == 0 {
            return Err(ReductionError::InvalidConfig("bits must be at least 1".into()));
        }
        Ok(())
    }

    fn draw_real<R: Rng + ?Sized>(&self, sigma: f64, rng: &mut R) -> Rational {
        let x = match self.kind {
            DistributionKind::Gaussian => sigma * rng.sample::<f64, _>(StandardNormal),
            DistributionKind::Uniform => sigma * rng.gen_range(-1.0..=1.0),
        };
        snap_to_dyadic(x, self.bits).expect("finite sample, positive bits")
    }

    fn draw<R: Rng + ?Sized>(&self, sigma: f64, rng: &mut R) -> ComplexRational {
        let re = self.draw_real(sigma, rng);
        let im = self.draw_real(sigma, rng);
        ComplexRational::new(re, im)
    }
}

/// Random data with the shape of `shape`. Translation-invariant draws make
/// one tensor per vertex degree and reuse it at every vertex of that degree.
pub fn sample_peps_data<R: Rng + ?Sized>(
    shape: &PepsData<ComplexRational>,
    spec: &DistributionSpec,
    rng: &mut R,
) -> Result<PepsData<ComplexRational>, ReductionError> {
    spec.validate()?;
    let sigma = spec.sigma.to_f64();
    let (lat, d, bond) = (shape.lattice(), shape.d(), shape.bond());
    let size = |g: usize| d * bond.pow(g as u32);
    if spec.translation_invariant {
        let mut by_degree: [Vec<ComplexRational>; 5] = Default::default();
        for (g, slot) in by_degree.iter_mut().enumerate() {
            if (0..lat.n()).any(|v| lat.degree(v) == g) {
                *slot = (0..size(g)).map(|_| spec.draw(sigma, rng)).collect();
            }
        }
        return Ok(PepsData::translation_invariant(lat, d, bond, &by_degree)?);
    }
    let tensors = (0..lat.n())
        .map(|v| (0..size(lat.degree(v))).map(|_| spec.draw(sigma, rng)).collect())
        .collect();
    Ok(PepsData::new(lat, d, bond, tensors, false)?)
}

/// Independent generator for repeat `index` under a master seed.
pub fn repeat_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::{build_cluster_peps, LatticeSpec};

    fn shape() -> PepsData<ComplexRational> {
        build_cluster_peps(LatticeSpec::new(2, 3))
    }

    #[test]
    fn deterministic_per_seed() {
        let spec = DistributionSpec::default();
        let a = sample_peps_data(&shape(), &spec, &mut repeat_rng(9, 0)).unwrap();
        let b = sample_peps_data(&shape(), &spec, &mut repeat_rng(9, 0)).unwrap();
        let c = sample_peps_data(&shape(), &spec, &mut repeat_rng(9, 1)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn vanishing_width_gives_zero_tensors() {
        let spec = DistributionSpec { sigma: Rational::pow2(-80), bits: 8, ..Default::default() };
        let p = sample_peps_data(&shape(), &spec, &mut repeat_rng(1, 0)).unwrap();
        assert!(p.tensors().iter().flatten().all(|e| e == &ComplexRational::zero()));
    }

    #[test]
    fn entries_are_dyadic_and_bounded() {
        let spec = DistributionSpec { kind: DistributionKind::Uniform, sigma: Rational::new(3, 2).unwrap(), bits: 10, translation_invariant: false };
        let p = sample_peps_data(&shape(), &spec, &mut repeat_rng(2, 0)).unwrap();
        let limit = Rational::new(3, 2).unwrap();
        for e in p.tensors().iter().flatten() {
            for part in [&e.re, &e.im] {
                assert!(part.abs() <= limit);
                assert!(*part.denom() <= 1024);
            }
        }
    }

    #[test]
    fn translation_invariant_draws() {
        let spec = DistributionSpec { translation_invariant: true, ..Default::default() };
        let lat = LatticeSpec::new(3, 3);
        let p = sample_peps_data(&build_cluster_peps(lat), &spec, &mut repeat_rng(3, 0)).unwrap();
        assert!(p.is_translation_invariant());
        assert_eq!(p.tensor(0), p.tensor(8));
        assert_eq!(p.tensor(1), p.tensor(3));
        assert_ne!(p.tensor(0), &p.tensor(4)[..p.tensor(0).len()]);
    }

    #[test]
    fn rejects_bad_specs() {
        let zero = DistributionSpec { sigma: Rational::zero(), ..Default::default() };
        assert!(matches!(sample_peps_data(&shape(), &zero, &mut repeat_rng(0, 0)), Err(ReductionError::InvalidConfig(_))));
        let nobits = DistributionSpec { bits: 0, ..Default::default() };
        assert!(nobits.validate().is_err());
    }

    #[test]
    fn spec_json_roundtrip() {
        let spec = DistributionSpec { kind: DistributionKind::Uniform, sigma: Rational::new(1, 3).unwrap(), bits: 20, translation_invariant: true };
        let text = serde_json::to_string(&spec).unwrap();
        assert_eq!(serde_json::from_str::<DistributionSpec>(&text).unwrap(), spec);
        assert!(text.contains("\"uniform\""));
    }
}
