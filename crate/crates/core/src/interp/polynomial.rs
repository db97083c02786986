use std::collections::HashSet;

use serde_json::Value;

use super::InterpError;
use crate::arith::{ArithError, Field, FieldKind, FieldScalar};

/// Evaluation pairs `(t_i, y_i)` with pairwise-distinct abscissae, all in
/// one field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampleSet<F> {
    points: Vec<(F, F)>,
}

impl<F: Field> SampleSet<F> {
    pub fn new(points: Vec<(F, F)>) -> Result<Self, InterpError> {
        if let Some((x0, _)) = points.first() {
            if !points.iter().all(|(x, y)| x.same_field(x0) && y.same_field(x0)) {
                return Err(ArithError::MixedFields.into());
            }
        }
        let mut seen = HashSet::with_capacity(points.len());
        if !points.iter().all(|(x, _)| seen.insert(x)) {
            return Err(InterpError::DuplicateAbscissa);
        }
        Ok(SampleSet { points })
    }

    pub fn from_xy(xs: Vec<F>, ys: Vec<F>) -> Result<Self, InterpError> {
        if xs.len() != ys.len() {
            return Err(ArithError::DimensionMismatch(format!("{} abscissae, {} values", xs.len(), ys.len())).into());
        }
        SampleSet::new(xs.into_iter().zip(ys).collect())
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[(F, F)] {
        &self.points
    }

    pub fn xs(&self) -> Vec<F> {
        self.points.iter().map(|(x, _)| x.clone()).collect()
    }

    pub fn ys(&self) -> Vec<F> {
        self.points.iter().map(|(_, y)| y.clone()).collect()
    }

    /// Number of samples lying on `p`.
    pub fn agreements(&self, p: &ExactPolynomial<F>) -> usize {
        self.points.iter().filter(|(x, y)| p.eval(x) == *y).count()
    }
}

/// Dense polynomial, coefficients in ascending degree. Trailing zeros are
/// trimmed; the zero polynomial is stored as `[0]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactPolynomial<F> {
    coeffs: Vec<F>,
    bound: usize,
}

impl<F: Field> ExactPolynomial<F> {
    /// Fails if the trimmed degree exceeds `bound`.
    pub fn new(coeffs: Vec<F>, bound: usize) -> Result<Self, InterpError> {
        let p = Self::from_coeffs(coeffs)?;
        match p.degree() {
            Some(deg) if deg > bound => Err(InterpError::DegreeExceeded { degree: deg, bound }),
            _ => Ok(ExactPolynomial { bound, ..p }),
        }
    }

    /// Degree bound taken to be the actual degree.
    pub fn from_coeffs(mut coeffs: Vec<F>) -> Result<Self, InterpError> {
        let Some(first) = coeffs.first().cloned() else {
            return Err(ArithError::DimensionMismatch("polynomial needs at least one coefficient".into()).into());
        };
        if !coeffs.iter().all(|c| c.same_field(&first)) {
            return Err(ArithError::MixedFields.into());
        }
        while coeffs.len() > 1 && coeffs.last().is_some_and(Field::is_zero) {
            coeffs.pop();
        }
        let bound = coeffs.len() - 1;
        Ok(ExactPolynomial { coeffs, bound })
    }

    fn raw(coeffs: Vec<F>) -> Self {
        Self::from_coeffs(coeffs).expect("internal coefficients are nonempty and homogeneous")
    }

    pub fn zero(like: &F) -> Self {
        ExactPolynomial { coeffs: vec![like.zero_like()], bound: 0 }
    }

    pub fn constant(c: F) -> Self {
        Self::raw(vec![c])
    }

    /// `prod (x - r_i)`
    pub fn from_roots(roots: &[F], like: &F) -> Self {
        let mut p = Self::constant(like.one_like());
        for root in roots {
            p = p.mul(&Self::raw(vec![root.negate(), like.one_like()]));
        }
        p
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn with_bound(mut self, bound: usize) -> Result<Self, InterpError> {
        match self.degree() {
            Some(deg) if deg > bound => Err(InterpError::DegreeExceeded { degree: deg, bound }),
            _ => {
                self.bound = bound;
                Ok(self)
            }
        }
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.is_zero() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_zero()
    }

    pub fn leading(&self) -> &F {
        self.coeffs.last().expect("nonempty")
    }

    pub fn eval(&self, x: &F) -> F {
        let mut acc = self.leading().clone();
        for c in self.coeffs.iter().rev().skip(1) {
            acc = acc.times(x).plus(c);
        }
        acc
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let zero = self.coeffs[0].zero_like();
        let out = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).unwrap_or(&zero);
                let b = rhs.coeffs.get(i).unwrap_or(&zero);
                a.plus(b)
            })
            .collect();
        Self::raw(out)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.scale(&rhs.coeffs[0].one_like().negate()))
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let zero = self.coeffs[0].zero_like();
        let mut out = vec![zero; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j].mul_add_assign(a, b);
            }
        }
        Self::raw(out)
    }

    pub fn scale(&self, s: &F) -> Self {
        Self::raw(self.coeffs.iter().map(|c| c.times(s)).collect())
    }

    /// Monic multiple; `None` for the zero polynomial.
    pub fn monic(&self) -> Option<Self> {
        let inv = self.leading().inverse()?;
        Some(self.scale(&inv))
    }

    /// Euclidean division, `None` when dividing by zero.
    pub fn divrem(&self, divisor: &Self) -> Option<(Self, Self)> {
        let dd = divisor.degree()?;
        let inv = divisor.leading().inverse()?;
        let zero = self.coeffs[0].zero_like();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Some((Self::zero(&zero), self.clone()));
        }
        let mut quot = vec![zero; rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = rem[i + dd].times(&inv);
            if c.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[i + j] = rem[i + j].minus(&c.times(d));
            }
            quot[i] = c;
        }
        rem.truncate(dd.max(1));
        Some((Self::raw(quot), Self::raw(rem)))
    }

    /// Monic greatest common divisor (zero only if both inputs are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.divrem(&b).expect("b is nonzero");
            a = b;
            b = r;
        }
        a.monic().unwrap_or(a)
    }

    pub fn map_to<G: Field>(&self, f: impl Fn(&F) -> Option<G>) -> Option<ExactPolynomial<G>> {
        let coeffs = self.coeffs.iter().map(f).collect::<Option<Vec<_>>>()?;
        let p = ExactPolynomial::from_coeffs(coeffs).ok()?;
        Some(ExactPolynomial { bound: self.bound.max(p.bound), ..p })
    }

    pub fn to_scalars(&self) -> Vec<FieldScalar> {
        self.coeffs.iter().map(Field::to_scalar).collect()
    }

    /// JSON array of coefficients, ascending degree.
    pub fn to_json(&self) -> Value {
        Value::Array(self.coeffs.iter().map(|c| c.to_scalar().to_json()).collect())
    }

    pub fn from_json(v: &Value, kind: FieldKind) -> Result<Self, InterpError> {
        let arr = v
            .as_array()
            .ok_or_else(|| ArithError::Parse("polynomial must be a JSON array".into()))?;
        let coeffs = arr
            .iter()
            .map(|c| {
                let s = FieldScalar::from_json(c, kind)?;
                F::from_scalar(&s).ok_or_else(|| ArithError::Parse("coefficient is in the wrong field".into()))
            })
            .collect::<Result<Vec<F>, ArithError>>()?;
        Self::from_coeffs(coeffs)
    }
}

/// The unique polynomial of degree at most `r` through the first `r + 1`
/// samples, built from Newton divided differences.
pub fn vandermonde_interpolate<F: Field>(samples: &SampleSet<F>, r: usize) -> Result<ExactPolynomial<F>, InterpError> {
    if samples.len() < r + 1 {
        return Err(InterpError::InsufficientSamples { needed: r + 1, got: samples.len() });
    }
    let pts = &samples.points()[..=r];
    let xs: Vec<&F> = pts.iter().map(|(x, _)| x).collect();
    let mut dd: Vec<F> = pts.iter().map(|(_, y)| y.clone()).collect();
    for level in 1..=r {
        for i in (level..=r).rev() {
            let num = dd[i].minus(&dd[i - 1]);
            let den = xs[i].minus(xs[i - level]);
            dd[i] = num.over(&den).ok_or(InterpError::DuplicateAbscissa)?;
        }
    }
    let mut p = ExactPolynomial::constant(dd[r].clone());
    let one = dd[r].one_like();
    for i in (0..r).rev() {
        p = p.mul(&ExactPolynomial::raw(vec![xs[i].negate(), one.clone()]));
        p = p.add(&ExactPolynomial::constant(dd[i].clone()));
    }
    p.with_bound(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{ComplexRational, PrimeFieldElement, Rational};
    use proptest::prelude::*;

    fn q(v: i64) -> ComplexRational {
        ComplexRational::from_int(v)
    }

    fn f7(v: i64) -> PrimeFieldElement {
        PrimeFieldElement::from_i64(v, 7)
    }

    #[test]
    fn constant_samples() {
        let s = SampleSet::from_xy(vec![q(1), q(2), q(5)], vec![q(4); 3]).unwrap();
        let p = vandermonde_interpolate(&s, 2).unwrap();
        assert_eq!(p.coeffs(), &[q(4)]);
        assert_eq!(p.bound(), 2);
    }

    #[test]
    fn square_monomial() {
        let s = SampleSet::from_xy(vec![q(-1), q(3), q(7)], vec![q(1), q(9), q(49)]).unwrap();
        let p = vandermonde_interpolate(&s, 2).unwrap();
        assert_eq!(p.coeffs(), &[q(0), q(0), q(1)]);
    }

    #[test]
    fn rejects_bad_sample_sets() {
        let dup = SampleSet::from_xy(vec![q(1), q(1)], vec![q(0), q(1)]);
        assert_eq!(dup.unwrap_err(), InterpError::DuplicateAbscissa);
        let s = SampleSet::from_xy(vec![q(1), q(2)], vec![q(0), q(1)]).unwrap();
        assert!(matches!(vandermonde_interpolate(&s, 2), Err(InterpError::InsufficientSamples { needed: 3, got: 2 })));
        let mixed = SampleSet::new(vec![(f7(1), f7(2)), (PrimeFieldElement::new(1, 11), f7(1))]);
        assert!(matches!(mixed, Err(InterpError::Arith(ArithError::MixedFields))));
    }

    #[test]
    fn division_and_gcd() {
        let a = ExactPolynomial::from_roots(&[q(1), q(2), q(3)], &q(0));
        let b = ExactPolynomial::from_roots(&[q(2), q(5)], &q(0));
        let (quot, rem) = a.divrem(&b).unwrap();
        assert_eq!(quot.mul(&b).add(&rem), a);
        assert!(rem.degree().unwrap_or(0) < 2);
        assert_eq!(a.gcd(&b), ExactPolynomial::from_roots(&[q(2)], &q(0)));
        assert!(a.divrem(&ExactPolynomial::zero(&q(0))).is_none());
    }

    #[test]
    fn degree_bound_enforced() {
        assert!(matches!(
            ExactPolynomial::new(vec![q(1), q(0), q(2)], 1),
            Err(InterpError::DegreeExceeded { degree: 2, bound: 1 })
        ));
        let p = ExactPolynomial::new(vec![q(1), q(0), q(0)], 1).unwrap();
        assert_eq!(p.coeffs(), &[q(1)]);
    }

    #[test]
    fn json_roundtrip() {
        let half = ComplexRational::new(Rational::new(1, 2).unwrap(), Rational::new(-3, 4).unwrap());
        let p = ExactPolynomial::from_coeffs(vec![q(0), half, q(7)]).unwrap();
        let back = ExactPolynomial::<ComplexRational>::from_json(&p.to_json(), FieldKind::ComplexRational).unwrap();
        assert_eq!(back, p);

        let g = ExactPolynomial::from_coeffs(vec![f7(3), f7(6)]).unwrap();
        assert_eq!(g.to_json(), serde_json::json!(["3", "6"]));
        let back = ExactPolynomial::<PrimeFieldElement>::from_json(&g.to_json(), FieldKind::Prime { modulus: 7 }).unwrap();
        assert_eq!(back, g);
    }

    proptest! {
        #[test]
        fn interpolation_reproduces_polynomial(
            coeffs in prop::collection::vec(-1000i64..1000, 1..8),
            xs in prop::collection::hash_set(-50i64..50, 8..12),
        ) {
            let p = ExactPolynomial::from_coeffs(coeffs.iter().map(|&c| q(c)).collect()).unwrap();
            let r = coeffs.len() - 1;
            let xs: Vec<ComplexRational> = xs.into_iter().map(q).collect();
            let ys = xs.iter().map(|x| p.eval(x)).collect();
            let s = SampleSet::from_xy(xs, ys).unwrap();
            let got = vandermonde_interpolate(&s, r).unwrap();
            prop_assert_eq!(got.coeffs(), p.coeffs());
            prop_assert_eq!(s.agreements(&got), s.len());
        }

        #[test]
        fn divrem_identity(a in prop::collection::vec(0u64..101, 1..10), b in prop::collection::vec(0u64..101, 1..6)) {
            let pa = ExactPolynomial::from_coeffs(a.iter().map(|&v| PrimeFieldElement::new(v, 101)).collect()).unwrap();
            let pb = ExactPolynomial::from_coeffs(b.iter().map(|&v| PrimeFieldElement::new(v, 101)).collect()).unwrap();
            if let Some((quot, rem)) = pa.divrem(&pb) {
                prop_assert_eq!(quot.mul(&pb).add(&rem), pa);
                prop_assert!(rem.is_zero() || rem.degree() < pb.degree());
            } else {
                prop_assert!(pb.is_zero());
            }
        }
    }
}
