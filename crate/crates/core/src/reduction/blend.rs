use super::ReductionError;
use crate::arith::Field;
use crate::tensor::{PepsData, TensorError};

/// The line `R(t) = t P + (1 - t) Q` through PEPS-data space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlendPath<F> {
    target: PepsData<F>,
    random: PepsData<F>,
}

impl<F: Field> BlendPath<F> {
    pub fn new(target: PepsData<F>, random: PepsData<F>) -> Result<Self, ReductionError> {
        if !target.same_shape(&random) {
            return Err(TensorError::ShapeMismatch("target and random data differ in shape".into()).into());
        }
        if target.zero().kind() != random.zero().kind() {
            return Err(crate::arith::ArithError::MixedFields.into());
        }
        Ok(BlendPath { target, random })
    }

    pub fn target(&self) -> &PepsData<F> {
        &self.target
    }

    pub fn random(&self) -> &PepsData<F> {
        &self.random
    }

    /// `R(t)`. Translation invariance is kept when both endpoints have it.
    pub fn at(&self, t: &F) -> PepsData<F> {
        let s = t.one_like().minus(t);
        let tensors = self
            .target
            .tensors()
            .iter()
            .zip(self.random.tensors())
            .map(|(p, q)| p.iter().zip(q).map(|(a, b)| a.times(t).plus(&b.times(&s))).collect())
            .collect();
        let ti = self.target.is_translation_invariant() && self.random.is_translation_invariant();
        let lat = self.target.lattice();
        PepsData::new(lat, self.target.d(), self.target.bond(), tensors, ti).expect("blend preserves shape")
    }
}

pub fn blend<F: Field>(path: &BlendPath<F>, t: &F) -> PepsData<F> {
    path.at(t)
}
