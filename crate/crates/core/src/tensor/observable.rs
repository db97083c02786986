use serde_json::{json, Map, Value};

use super::peps::field_kind_of;
use super::{PepsData, TensorError};
use crate::arith::{Field, FieldKind, FieldScalar};

/// Observable acting on one or two vertices. For two vertices the matrix
/// rows and columns are indexed `s[support[0]] * d + s[support[1]]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalObservable<F> {
    support: Vec<usize>,
    matrix: Vec<Vec<F>>,
}

impl<F: Field> LocalObservable<F> {
    pub fn new(support: Vec<usize>, matrix: Vec<Vec<F>>) -> Result<Self, TensorError> {
        if support.is_empty() || support.len() > 2 {
            return Err(TensorError::Invalid("observable support must have 1 or 2 vertices".into()));
        }
        if support.len() == 2 && support[0] == support[1] {
            return Err(TensorError::SupportOutOfRange(support[1]));
        }
        let n = matrix.len();
        if n == 0 || matrix.iter().any(|r| r.len() != n) {
            return Err(TensorError::Invalid("observable matrix must be square and non-empty".into()));
        }
        Ok(LocalObservable { support, matrix })
    }

    pub fn identity(v: usize, d: usize, like: &F) -> Self {
        LocalObservable::scalar(v, d, &like.one_like())
    }

    pub fn scalar(v: usize, d: usize, c: &F) -> Self {
        let matrix = (0..d)
            .map(|i| (0..d).map(|j| if i == j { c.clone() } else { c.zero_like() }).collect())
            .collect();
        LocalObservable { support: vec![v], matrix }
    }

    pub fn diagonal(v: usize, diag: &[F]) -> Self {
        let matrix = (0..diag.len())
            .map(|i| (0..diag.len()).map(|j| if i == j { diag[i].clone() } else { diag[i].zero_like() }).collect())
            .collect();
        LocalObservable { support: vec![v], matrix }
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn matrix(&self) -> &[Vec<F>] {
        &self.matrix
    }

    pub fn entry(&self, row: usize, col: usize) -> &F {
        &self.matrix[row][col]
    }

    /// Checks the support and matrix size against an instance.
    pub fn validate(&self, peps: &PepsData<F>) -> Result<(), TensorError> {
        for &v in &self.support {
            if v >= peps.n() {
                return Err(TensorError::SupportOutOfRange(v));
            }
        }
        let want = peps.d().pow(self.support.len() as u32);
        if self.matrix.len() != want {
            return Err(TensorError::ShapeMismatch(format!(
                "observable is {0}x{0}, expected {want}x{want}",
                self.matrix.len()
            )));
        }
        if !self.matrix.iter().flatten().all(|e| e.same_field(&peps.zero())) {
            return Err(crate::arith::ArithError::MixedFields.into());
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("support".into(), json!(self.support));
        if let FieldKind::Prime { modulus } = self.matrix[0][0].kind() {
            m.insert("modulus".into(), json!(modulus));
        }
        let rows = self
            .matrix
            .iter()
            .map(|r| Value::Array(r.iter().map(|e| e.to_scalar().to_json()).collect()))
            .collect();
        m.insert("matrix".into(), Value::Array(rows));
        Value::Object(m)
    }

    pub fn from_json(v: &Value) -> Result<Self, TensorError> {
        let kind = field_kind_of(v)?;
        let support = v
            .get("support")
            .and_then(Value::as_array)
            .ok_or_else(|| TensorError::Invalid("missing support".into()))?
            .iter()
            .map(|s| s.as_u64().map(|x| x as usize).ok_or_else(|| TensorError::Invalid("bad support index".into())))
            .collect::<Result<Vec<_>, _>>()?;
        let rows = v
            .get("matrix")
            .and_then(Value::as_array)
            .ok_or_else(|| TensorError::Invalid("missing matrix".into()))?;
        let mut matrix = Vec::with_capacity(rows.len());
        for r in rows {
            let arr = r.as_array().ok_or_else(|| TensorError::Invalid("matrix rows must be arrays".into()))?;
            let mut row = Vec::with_capacity(arr.len());
            for e in arr {
                let s = FieldScalar::from_json(e, kind)?;
                row.push(F::from_scalar(&s).ok_or_else(|| TensorError::Invalid("field does not match".into()))?);
            }
            matrix.push(row);
        }
        LocalObservable::new(support, matrix)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ComplexRational;

    #[test]
    fn json_round_trip() {
        let o = LocalObservable::diagonal(3, &[ComplexRational::from_int(1), ComplexRational::from_ints(0, -1)]);
        let back = LocalObservable::<ComplexRational>::from_json(&o.to_json()).unwrap();
        assert_eq!(back, o);
    }

    #[test]
    fn rejects_bad_support() {
        let m = vec![vec![ComplexRational::one(); 4]; 4];
        assert!(LocalObservable::new(vec![1, 1], m.clone()).is_err());
        assert!(LocalObservable::new(vec![], m).is_err());
    }
}
