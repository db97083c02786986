use std::path::Path;

use serde_json::{json, Map, Value};

use super::{LatticeSpec, Leg, TensorError};
use crate::arith::{ComplexRational, Field, FieldKind, FieldScalar, PrimeFieldElement};

/// PEPS-data: one tensor per vertex of an open-boundary square lattice.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PepsData<F> {
    lattice: LatticeSpec,
    d: usize,
    bond: usize,
    translation_invariant: bool,
    tensors: Vec<Vec<F>>,
}

impl<F: Field> PepsData<F> {
    pub fn new(
        lattice: LatticeSpec,
        d: usize,
        bond: usize,
        tensors: Vec<Vec<F>>,
        translation_invariant: bool,
    ) -> Result<Self, TensorError> {
        if d == 0 || bond == 0 {
            return Err(TensorError::Invalid("d and D must be at least 1".into()));
        }
        if tensors.len() != lattice.n() {
            return Err(TensorError::ShapeMismatch(format!(
                "{} tensors for {} vertices",
                tensors.len(),
                lattice.n()
            )));
        }
        for (v, t) in tensors.iter().enumerate() {
            let want = d * bond.pow(lattice.degree(v) as u32);
            if t.len() != want {
                return Err(TensorError::ShapeMismatch(format!(
                    "vertex {v} has {} entries, expected {want}",
                    t.len()
                )));
            }
        }
        let first = &tensors[0][0];
        if !tensors.iter().flatten().all(|e| e.same_field(first)) {
            return Err(crate::arith::ArithError::MixedFields.into());
        }
        let peps = PepsData { lattice, d, bond, translation_invariant, tensors };
        if translation_invariant && !peps.degree_classes_identical() {
            return Err(TensorError::Invalid(
                "translation_invariant is set but tensors of equal degree differ".into(),
            ));
        }
        Ok(peps)
    }

    /// Builds translation-invariant data from one tensor per vertex degree
    /// (`by_degree[g]` is used for every vertex of degree `g`).
    pub fn translation_invariant(
        lattice: LatticeSpec,
        d: usize,
        bond: usize,
        by_degree: &[Vec<F>; 5],
    ) -> Result<Self, TensorError> {
        let tensors = (0..lattice.n()).map(|v| by_degree[lattice.degree(v)].clone()).collect();
        PepsData::new(lattice, d, bond, tensors, true)
    }

    pub fn lattice(&self) -> LatticeSpec {
        self.lattice
    }

    pub fn n(&self) -> usize {
        self.lattice.n()
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn bond(&self) -> usize {
        self.bond
    }

    pub fn is_translation_invariant(&self) -> bool {
        self.translation_invariant
    }

    pub fn tensor(&self, v: usize) -> &[F] {
        &self.tensors[v]
    }

    pub fn tensors(&self) -> &[Vec<F>] {
        &self.tensors
    }

    pub fn into_tensors(self) -> Vec<Vec<F>> {
        self.tensors
    }

    pub fn zero(&self) -> F {
        self.tensors[0][0].zero_like()
    }

    /// Dimensions of the four legs in normative order, 1 for absent legs.
    pub fn leg_dims(&self, v: usize) -> [usize; 4] {
        Leg::ALL.map(|l| if self.lattice.has_leg(v, l) { self.bond } else { 1 })
    }

    pub fn same_shape(&self, other: &PepsData<F>) -> bool {
        self.lattice == other.lattice && self.d == other.d && self.bond == other.bond
    }

    /// Same shape, new entries. The translation-invariance flag is kept and
    /// re-validated.
    pub fn with_tensors(&self, tensors: Vec<Vec<F>>) -> Result<Self, TensorError> {
        PepsData::new(self.lattice, self.d, self.bond, tensors, self.translation_invariant)
    }

    pub fn scale_vertex(&self, v: usize, lambda: &F) -> Self {
        let mut out = self.clone();
        for e in &mut out.tensors[v] {
            *e = e.times(lambda);
        }
        out.translation_invariant = self.translation_invariant && out.degree_classes_identical();
        out
    }

    pub fn degree_classes_identical(&self) -> bool {
        let mut seen: [Option<usize>; 5] = [None; 5];
        for v in 0..self.n() {
            let g = self.lattice.degree(v);
            match seen[g] {
                None => seen[g] = Some(v),
                Some(w) if self.tensors[w] != self.tensors[v] => return false,
                _ => {}
            }
        }
        true
    }

    /// Reflection across the main diagonal. Leg roles map up<->left and
    /// right<->down; scalar contractions are unchanged.
    pub fn transpose(&self) -> Self {
        let lat = self.lattice;
        let new_lat = lat.transposed();
        let mut tensors = vec![Vec::new(); self.n()];
        for v in 0..self.n() {
            let (x, y) = lat.coords(v);
            let w = new_lat.index(y, x);
            let [u, r, dn, l] = self.leg_dims(v);
            let old = &self.tensors[v];
            let mut t = old.clone();
            // new order: up' = l, right' = dn, down' = r, left' = u
            for p in 0..self.d {
                for iu in 0..u {
                    for ir in 0..r {
                        for id in 0..dn {
                            for il in 0..l {
                                let src = (((p * u + iu) * r + ir) * dn + id) * l + il;
                                let dst = (((p * l + il) * dn + id) * r + ir) * u + iu;
                                t[dst] = old[src].clone();
                            }
                        }
                    }
                }
            }
            tensors[w] = t;
        }
        PepsData { lattice: new_lat, d: self.d, bond: self.bond, translation_invariant: false, tensors }
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("lattice".into(), json!({"width": self.lattice.width, "height": self.lattice.height}));
        m.insert("d".into(), json!(self.d));
        m.insert("D".into(), json!(self.bond));
        m.insert("translation_invariant".into(), json!(self.translation_invariant));
        if let FieldKind::Prime { modulus } = self.zero().kind() {
            m.insert("modulus".into(), json!(modulus));
        }
        let tensors = self
            .tensors
            .iter()
            .map(|t| Value::Array(t.iter().map(|e| e.to_scalar().to_json()).collect()))
            .collect();
        m.insert("tensors".into(), Value::Array(tensors));
        Value::Object(m)
    }

    pub fn from_json(v: &Value) -> Result<Self, TensorError> {
        let kind = field_kind_of(v)?;
        let lattice: LatticeSpec = serde_json::from_value(v.get("lattice").cloned().unwrap_or(Value::Null))
            .map_err(|e| TensorError::Invalid(format!("lattice: {e}")))?;
        if lattice.width == 0 || lattice.height == 0 {
            return Err(TensorError::Invalid("lattice must be at least 1x1".into()));
        }
        let d = usize_field(v, "d")?;
        let bond = usize_field(v, "D")?;
        let ti = v.get("translation_invariant").and_then(Value::as_bool).unwrap_or(false);
        let raw = v
            .get("tensors")
            .and_then(Value::as_array)
            .ok_or_else(|| TensorError::Invalid("missing tensors array".into()))?;
        let mut tensors = Vec::with_capacity(raw.len());
        for t in raw {
            let arr = t.as_array().ok_or_else(|| TensorError::Invalid("tensor must be an array".into()))?;
            let mut out = Vec::with_capacity(arr.len());
            for e in arr {
                let s = FieldScalar::from_json(e, kind)?;
                out.push(F::from_scalar(&s).ok_or_else(|| TensorError::Invalid("field does not match".into()))?);
            }
            tensors.push(out);
        }
        if tensors.iter().any(Vec::is_empty) {
            return Err(TensorError::Invalid("empty tensor".into()));
        }
        PepsData::new(lattice, d, bond, tensors, ti)
    }
}

impl<F: Field> PepsData<F> {
    /// Applies `f` entrywise, vertex by vertex.
    pub fn map_entries<G: Field>(&self, mut f: impl FnMut(&F) -> G) -> PepsData<G> {
        let tensors = self.tensors.iter().map(|t| t.iter().map(&mut f).collect()).collect();
        let mut out = PepsData {
            lattice: self.lattice,
            d: self.d,
            bond: self.bond,
            translation_invariant: false,
            tensors,
        };
        out.translation_invariant = self.translation_invariant && out.degree_classes_identical();
        out
    }
}

pub(crate) fn field_kind_of(v: &Value) -> Result<FieldKind, TensorError> {
    match v.get("modulus") {
        None | Some(Value::Null) => Ok(FieldKind::ComplexRational),
        Some(m) => {
            let modulus = match m {
                Value::Number(n) => n.as_u64(),
                Value::String(s) => s.trim().parse().ok(),
                _ => None,
            }
            .ok_or_else(|| TensorError::Invalid("modulus must be a positive integer".into()))?;
            if !crate::arith::is_prime(modulus) {
                return Err(TensorError::Invalid(format!("modulus {modulus} is not prime")));
            }
            Ok(FieldKind::Prime { modulus })
        }
    }
}

fn usize_field(v: &Value, key: &str) -> Result<usize, TensorError> {
    v.get(key)
        .and_then(Value::as_u64)
        .map(|x| x as usize)
        .ok_or_else(|| TensorError::Invalid(format!("missing or invalid '{key}'")))
}

/// PEPS-data whose field is only known at runtime (JSON input).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AnyPeps {
    Complex(PepsData<ComplexRational>),
    Prime(PepsData<PrimeFieldElement>),
}

impl AnyPeps {
    pub fn from_json(v: &Value) -> Result<Self, TensorError> {
        match field_kind_of(v)? {
            FieldKind::ComplexRational => PepsData::from_json(v).map(AnyPeps::Complex),
            FieldKind::Prime { .. } => PepsData::from_json(v).map(AnyPeps::Prime),
        }
    }

    pub fn from_path(path: &Path) -> Result<Self, TensorError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| TensorError::Invalid(format!("{}: {e}", path.display())))?;
        let v: Value = serde_json::from_str(&text).map_err(|e| TensorError::Invalid(e.to_string()))?;
        AnyPeps::from_json(&v)
    }

    pub fn to_json(&self) -> Value {
        match self {
            AnyPeps::Complex(p) => p.to_json(),
            AnyPeps::Prime(p) => p.to_json(),
        }
    }
}
