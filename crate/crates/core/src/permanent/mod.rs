//! The matrix permanent and Lipton's random self-reduction over F_q.
//!
//! `perm(A) = sum over permutations s of prod_i A[i][s(i)]`. For uniform `B`
//! the line `E(t) = A + t B` is uniformly random at every `t != 0`, and
//! `t -> perm(E(t))` is a polynomial of degree at most `n`. Querying an
//! unreliable oracle at `k > n` nonzero points and decoding recovers
//! `perm(A)` as the value at `t = 0`.
//!
//! The PEPS reductions use the same decoder but put the target at `t = 1`
//! and the random instance at `t = 0`; here the target sits at `t = 0`.

mod lipton;

use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::arith::{ArithError, Field, FieldKind, FieldScalar};
use crate::interp::InterpError;
use crate::tensor::TensorError;

pub use lipton::{lipton_reduce, ExactPermanentOracle, LiptonConfig, LiptonReport, PermanentAnswer, PermanentOracle};

/// Largest dimension accepted by [`permanent_bruteforce`].
pub const BRUTEFORCE_CAP: usize = 9;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermanentError {
    #[error("matrix dimension {n} exceeds the brute-force cap of {cap}")]
    SizeCapExceeded { n: usize, cap: usize },
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("majority vote is tied")]
    MajorityTie,
    #[error("every repeat failed to decode")]
    AllRepeatsFailedDecoding,
    #[error(transparent)]
    Interp(#[from] InterpError),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquareMatrix<F> {
    n: usize,
    entries: Vec<Vec<F>>,
}

impl<F: Field> SquareMatrix<F> {
    pub fn new(entries: Vec<Vec<F>>) -> Result<Self, PermanentError> {
        let n = entries.len();
        if n == 0 {
            return Err(PermanentError::InvalidMatrix("empty matrix".into()));
        }
        if entries.iter().any(|row| row.len() != n) {
            return Err(PermanentError::InvalidMatrix("matrix is not square".into()));
        }
        let first = &entries[0][0];
        if entries.iter().flatten().any(|e| !e.same_field(first)) {
            return Err(PermanentError::Arith(ArithError::MixedFields));
        }
        Ok(SquareMatrix { n, entries })
    }

    pub fn from_fn(n: usize, like: &F, mut f: impl FnMut(usize, usize) -> F) -> Result<Self, PermanentError> {
        let entries = (0..n).map(|i| (0..n).map(|j| f(i, j)).collect()).collect();
        let m = Self::new(entries)?;
        if !m.entries[0][0].same_field(like) {
            return Err(PermanentError::Arith(ArithError::MixedFields));
        }
        Ok(m)
    }

    pub fn identity(n: usize, like: &F) -> Result<Self, PermanentError> {
        Self::from_fn(n, like, |i, j| if i == j { like.one_like() } else { like.zero_like() })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &F {
        &self.entries[i][j]
    }

    pub fn rows(&self) -> &[Vec<F>] {
        &self.entries
    }

    pub fn with_row(&self, i: usize, row: Vec<F>) -> Result<Self, PermanentError> {
        let mut entries = self.entries.clone();
        entries[i] = row;
        Self::new(entries)
    }

    /// `A[perm_rows[i]][perm_cols[j]]`.
    pub fn permuted(&self, perm_rows: &[usize], perm_cols: &[usize]) -> Self {
        let entries = perm_rows
            .iter()
            .map(|&i| perm_cols.iter().map(|&j| self.entries[i][j].clone()).collect())
            .collect();
        SquareMatrix { n: self.n, entries }
    }

    /// `self + t * other`.
    pub fn line(&self, other: &Self, t: &F) -> Result<Self, PermanentError> {
        if other.n != self.n {
            return Err(PermanentError::InvalidMatrix("dimension mismatch".into()));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x.plus(&t.times(y))).collect())
            .collect();
        Self::new(entries)
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("n".into(), json!(self.n));
        if let FieldKind::Prime { modulus } = self.entries[0][0].kind() {
            m.insert("modulus".into(), json!(modulus));
        }
        let rows = self
            .entries
            .iter()
            .map(|row| Value::Array(row.iter().map(|e| e.to_scalar().to_json()).collect()))
            .collect();
        m.insert("entries".into(), Value::Array(rows));
        Value::Object(m)
    }

    pub fn from_json(v: &Value) -> Result<Self, PermanentError> {
        let kind = crate::tensor::field_kind_of(v).map_err(|e| match e {
            TensorError::Invalid(s) => PermanentError::InvalidMatrix(s),
            other => PermanentError::InvalidMatrix(other.to_string()),
        })?;
        let rows = v
            .get("entries")
            .and_then(Value::as_array)
            .ok_or_else(|| PermanentError::InvalidMatrix("missing entries array".into()))?;
        let mut entries = Vec::with_capacity(rows.len());
        for row in rows {
            let row = row.as_array().ok_or_else(|| PermanentError::InvalidMatrix("row must be an array".into()))?;
            let mut out = Vec::with_capacity(row.len());
            for e in row {
                let s = FieldScalar::from_json(e, kind)?;
                out.push(F::from_scalar(&s).ok_or_else(|| PermanentError::InvalidMatrix("field does not match".into()))?);
            }
            entries.push(out);
        }
        let m = Self::new(entries)?;
        if let Some(n) = v.get("n").and_then(Value::as_u64) {
            if n as usize != m.n {
                return Err(PermanentError::InvalidMatrix(format!("declared n = {n} but found {} rows", m.n)));
            }
        }
        Ok(m)
    }
}

/// Exact permanent by summing over all of `S_n`, depth-first with partial
/// products so zero entries prune whole subtrees.
pub fn permanent_bruteforce<F: Field>(a: &SquareMatrix<F>) -> Result<F, PermanentError> {
    if a.n > BRUTEFORCE_CAP {
        return Err(PermanentError::SizeCapExceeded { n: a.n, cap: BRUTEFORCE_CAP });
    }
    fn walk<F: Field>(a: &SquareMatrix<F>, row: usize, used: u32, partial: &F, acc: &mut F) {
        if row == a.n {
            *acc = acc.plus(partial);
            return;
        }
        for col in 0..a.n {
            let e = &a.entries[row][col];
            if used & (1 << col) != 0 || e.is_zero() {
                continue;
            }
            walk(a, row + 1, used | (1 << col), &partial.times(e), acc);
        }
    }
    let like = &a.entries[0][0];
    let mut acc = like.zero_like();
    walk(a, 0, 0, &like.one_like(), &mut acc);
    Ok(acc)
}
