use serde_json::{json, Value};

use super::{ExactPolynomial, InterpError, SampleSet};
use crate::arith::{nullspace, Field};

/// `numerator / denominator`, both of degree at most `r`, reduced by their
/// gcd and scaled so the lowest nonzero denominator coefficient is 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFunction<F> {
    numerator: ExactPolynomial<F>,
    denominator: ExactPolynomial<F>,
}

impl<F: Field> RationalFunction<F> {
    pub fn new(numerator: ExactPolynomial<F>, denominator: ExactPolynomial<F>) -> Result<Self, InterpError> {
        if denominator.is_zero() {
            return Err(InterpError::DegenerateSystem);
        }
        let g = numerator.gcd(&denominator);
        let (mut num, _) = numerator.divrem(&g).expect("gcd is nonzero");
        let (mut den, _) = denominator.divrem(&g).expect("gcd is nonzero");
        let low = den.coeffs().iter().find(|c| !c.is_zero()).expect("nonzero").clone();
        let inv = low.inverse().expect("nonzero");
        num = num.scale(&inv).with_bound(numerator.bound())?;
        den = den.scale(&inv).with_bound(denominator.bound())?;
        Ok(RationalFunction { numerator: num, denominator: den })
    }

    pub fn numerator(&self) -> &ExactPolynomial<F> {
        &self.numerator
    }

    pub fn denominator(&self) -> &ExactPolynomial<F> {
        &self.denominator
    }

    /// `None` at a pole.
    pub fn eval(&self, t: &F) -> Option<F> {
        self.numerator.eval(t).over(&self.denominator.eval(t))
    }

    pub fn to_json(&self) -> Value {
        json!({ "numerator": self.numerator.to_json(), "denominator": self.denominator.to_json() })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalReconstruction<F> {
    pub function: RationalFunction<F>,
    /// Dimension of the solution space of the cross-multiplied system. Above
    /// 1 the data admit several (equivalent) representations.
    pub kernel_dim: usize,
}

/// Finds `q/p` with `deg q, deg p <= r` and `q(t_i) = y_i p(t_i)` at every
/// sample. Needs `2r + 1` samples.
pub fn reconstruct_rational<F: Field>(samples: &SampleSet<F>, r: usize) -> Result<RationalReconstruction<F>, InterpError> {
    let needed = 2 * r + 1;
    if samples.len() < needed {
        return Err(InterpError::InsufficientSamples { needed, got: samples.len() });
    }
    let zero = samples.points()[0].0.zero_like();
    // unknowns q_0..q_r, p_0..p_r
    let rows: Vec<Vec<F>> = samples
        .points()
        .iter()
        .map(|(t, y)| {
            let mut pw = Vec::with_capacity(r + 1);
            let mut acc = t.one_like();
            for _ in 0..=r {
                pw.push(acc.clone());
                acc = acc.times(t);
            }
            let mut row = pw.clone();
            row.extend(pw.iter().map(|p| p.times(y).negate()));
            row
        })
        .collect();
    let basis = nullspace(&rows, 2 * r + 2, &zero);
    let Some(v) = basis.first() else {
        return Err(InterpError::DegenerateSystem);
    };
    let q = ExactPolynomial::new(v[..=r].to_vec(), r)?;
    let p = ExactPolynomial::new(v[r + 1..].to_vec(), r)?;
    if p.is_zero() {
        return Err(InterpError::DegenerateSystem);
    }
    Ok(RationalReconstruction { function: RationalFunction::new(q, p)?, kernel_dim: basis.len() })
}
