use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{solve_linear_system, ArithError, ComplexRational, Field, PrimeFieldElement};

/// Which field a computation lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldKind {
    ComplexRational,
    Prime { modulus: u64 },
}

/// A scalar of either supported field, checked dynamically. Use the typed
/// [`Field`] implementations for computation; this type sits at the I/O and
/// API boundary where the field is only known at runtime.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum FieldScalar {
    Complex(ComplexRational),
    Prime(PrimeFieldElement),
}

impl FieldScalar {
    pub fn kind(&self) -> FieldKind {
        match self {
            FieldScalar::Complex(_) => FieldKind::ComplexRational,
            FieldScalar::Prime(p) => FieldKind::Prime { modulus: p.modulus() },
        }
    }

    fn pair<'a>(&'a self, rhs: &'a Self) -> Result<Pair<'a>, ArithError> {
        match (self, rhs) {
            (FieldScalar::Complex(a), FieldScalar::Complex(b)) => Ok(Pair::Complex(a, b)),
            (FieldScalar::Prime(a), FieldScalar::Prime(b)) if a.modulus() == b.modulus() => {
                Ok(Pair::Prime(a, b))
            }
            _ => Err(ArithError::MixedFields),
        }
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self, ArithError> {
        Ok(match self.pair(rhs)? {
            Pair::Complex(a, b) => FieldScalar::Complex(a.plus(b)),
            Pair::Prime(a, b) => FieldScalar::Prime(a.plus(b)),
        })
    }

    pub fn try_sub(&self, rhs: &Self) -> Result<Self, ArithError> {
        Ok(match self.pair(rhs)? {
            Pair::Complex(a, b) => FieldScalar::Complex(a.minus(b)),
            Pair::Prime(a, b) => FieldScalar::Prime(a.minus(b)),
        })
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self, ArithError> {
        Ok(match self.pair(rhs)? {
            Pair::Complex(a, b) => FieldScalar::Complex(a.times(b)),
            Pair::Prime(a, b) => FieldScalar::Prime(a.times(b)),
        })
    }

    pub fn try_div(&self, rhs: &Self) -> Result<Self, ArithError> {
        Ok(match self.pair(rhs)? {
            Pair::Complex(a, b) => FieldScalar::Complex(a.over(b).ok_or(ArithError::DivisionByZero)?),
            Pair::Prime(a, b) => FieldScalar::Prime(a.over(b).ok_or(ArithError::DivisionByZero)?),
        })
    }

    pub fn as_complex(&self) -> Option<&ComplexRational> {
        match self {
            FieldScalar::Complex(c) => Some(c),
            FieldScalar::Prime(_) => None,
        }
    }

    pub fn as_prime(&self) -> Option<&PrimeFieldElement> {
        match self {
            FieldScalar::Prime(p) => Some(p),
            FieldScalar::Complex(_) => None,
        }
    }

    /// JSON encoding: Q(i) as `{"re": "+p/q", "im": "+p/q"}`, F_q as a
    /// decimal string (the modulus is declared by the enclosing document).
    pub fn to_json(&self) -> Value {
        match self {
            FieldScalar::Complex(c) => serde_json::to_value(c).expect("complex serializes"),
            FieldScalar::Prime(p) => Value::String(p.value().to_string()),
        }
    }

    pub fn from_json(v: &Value, kind: FieldKind) -> Result<Self, ArithError> {
        match kind {
            FieldKind::ComplexRational => serde_json::from_value::<ComplexRational>(v.clone())
                .map(FieldScalar::Complex)
                .map_err(|e| ArithError::Parse(e.to_string())),
            FieldKind::Prime { modulus } => {
                let text = match v {
                    Value::String(s) => s.clone(),
                    Value::Number(n) => n.to_string(),
                    other => return Err(ArithError::Parse(format!("expected F_q element, got {other}"))),
                };
                let value: u64 = text
                    .trim()
                    .parse()
                    .map_err(|_| ArithError::Parse(format!("invalid F_q element '{text}'")))?;
                if value >= modulus {
                    return Err(ArithError::Parse(format!("{value} is not reduced mod {modulus}")));
                }
                Ok(FieldScalar::Prime(PrimeFieldElement::new(value, modulus)))
            }
        }
    }
}

enum Pair<'a> {
    Complex(&'a ComplexRational, &'a ComplexRational),
    Prime(&'a PrimeFieldElement, &'a PrimeFieldElement),
}

impl fmt::Display for FieldScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldScalar::Complex(c) => write!(f, "{c}"),
            FieldScalar::Prime(p) => write!(f, "{p} (mod {})", p.modulus()),
        }
    }
}

impl fmt::Debug for FieldScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl From<ComplexRational> for FieldScalar {
    fn from(c: ComplexRational) -> Self {
        FieldScalar::Complex(c)
    }
}

impl From<PrimeFieldElement> for FieldScalar {
    fn from(p: PrimeFieldElement) -> Self {
        FieldScalar::Prime(p)
    }
}

/// Common field of a non-empty collection of scalars.
pub fn common_kind<'a>(items: impl IntoIterator<Item = &'a FieldScalar>) -> Result<Option<FieldKind>, ArithError> {
    let mut kind = None;
    for s in items {
        match kind {
            None => kind = Some(s.kind()),
            Some(k) if k != s.kind() => return Err(ArithError::MixedFields),
            _ => {}
        }
    }
    Ok(kind)
}

/// Solves a square system given as dynamically-typed scalars, rejecting
/// mixed fields before dispatching to the typed solver.
pub fn solve_scalar_system(matrix: &[Vec<FieldScalar>], rhs: &[FieldScalar]) -> Result<Vec<FieldScalar>, ArithError> {
    let kind = common_kind(matrix.iter().flatten().chain(rhs))?;
    match kind {
        None => solve_linear_system::<ComplexRational>(&[], &[]).map(|_| Vec::new()),
        Some(FieldKind::ComplexRational) => {
            let m: Vec<Vec<ComplexRational>> = matrix
                .iter()
                .map(|row| row.iter().map(|s| s.as_complex().cloned().expect("kind checked")).collect())
                .collect();
            let b: Vec<ComplexRational> = rhs.iter().map(|s| s.as_complex().cloned().expect("kind checked")).collect();
            Ok(solve_linear_system(&m, &b)?.into_iter().map(FieldScalar::Complex).collect())
        }
        Some(FieldKind::Prime { .. }) => {
            let m: Vec<Vec<PrimeFieldElement>> =
                matrix.iter().map(|row| row.iter().map(|s| *s.as_prime().expect("kind checked")).collect()).collect();
            let b: Vec<PrimeFieldElement> = rhs.iter().map(|s| *s.as_prime().expect("kind checked")).collect();
            Ok(solve_linear_system(&m, &b)?.into_iter().map(FieldScalar::Prime).collect())
        }
    }
}
