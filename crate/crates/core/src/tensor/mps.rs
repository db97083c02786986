use super::{LatticeSpec, PepsData, TensorError};
use crate::arith::Field;

/// Translation-invariant open-boundary MPS with physical dimension 2:
/// amplitudes `<0| A[s_1] ... A[s_N] |0>`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MpsData<F> {
    pub n: usize,
    pub a: [Vec<Vec<F>>; 2],
}

impl<F: Field> MpsData<F> {
    pub fn new(n: usize, a0: Vec<Vec<F>>, a1: Vec<Vec<F>>) -> Result<Self, TensorError> {
        let dim = a0.len();
        let square = |m: &Vec<Vec<F>>| m.len() == dim && m.iter().all(|r| r.len() == dim);
        if n == 0 || dim == 0 || !square(&a0) || !square(&a1) {
            return Err(TensorError::ShapeMismatch("A0 and A1 must be square of equal size".into()));
        }
        Ok(MpsData { n, a: [a0, a1] })
    }

    /// `A[0] = diag(1, 0)`, `A[1] = diag(0, 1)`: the product state |0...0>.
    pub fn product_family(n: usize, like: &F) -> Self {
        let (z, o) = (like.zero_like(), like.one_like());
        MpsData::new(n, diag(&o, &z), diag(&z, &o)).expect("2x2")
    }

    /// `B[0] = diag(1, 0)`, `B[1] = diag(eta, 1)`.
    pub fn eta_family(n: usize, eta: &F) -> Self {
        let (z, o) = (eta.zero_like(), eta.one_like());
        MpsData::new(n, diag(&o, &z), diag(eta, &o)).expect("2x2")
    }

    pub fn bond(&self) -> usize {
        self.a[0].len()
    }
}

fn diag<F: Field>(a: &F, b: &F) -> Vec<Vec<F>> {
    vec![vec![a.clone(), a.zero_like()], vec![a.zero_like(), b.clone()]]
}

/// `<0| E^N |0>` with the transfer operator `E = sum_s A[s] (x) conj(A[s])`.
pub fn mps_transfer_norm<F: Field>(mps: &MpsData<F>) -> F {
    let dim = mps.bond();
    let zero = mps.a[0][0][0].zero_like();
    let mut v = vec![zero.clone(); dim * dim];
    v[0] = zero.one_like();
    for _ in 0..mps.n {
        let mut next = vec![zero.clone(); dim * dim];
        for (b, vb) in v.iter().enumerate() {
            if vb.is_zero() {
                continue;
            }
            let (b1, b2) = (b / dim, b % dim);
            for m in &mps.a {
                for a1 in 0..dim {
                    if m[a1][b1].is_zero() {
                        continue;
                    }
                    let x = m[a1][b1].times(vb);
                    for a2 in 0..dim {
                        if !m[a2][b2].is_zero() {
                            next[a1 * dim + a2].mul_add_assign(&x, &m[a2][b2].conj());
                        }
                    }
                }
            }
        }
        v = next;
    }
    v.swap_remove(0)
}

/// The same state as PEPS-data on a vertical `1 x N` chain. The boundary
/// vectors are absorbed into the end tensors.
pub fn mps_to_peps<F: Field>(mps: &MpsData<F>) -> PepsData<F> {
    let n = mps.n;
    let dim = mps.bond();
    let lattice = LatticeSpec::new(1, n);
    let tensors = (0..n)
        .map(|v| {
            let ups: Vec<usize> = if v > 0 { (0..dim).collect() } else { vec![0] };
            let downs: Vec<usize> = if v + 1 < n { (0..dim).collect() } else { vec![0] };
            let mut t = Vec::with_capacity(2 * ups.len() * downs.len());
            for m in &mps.a {
                for &u in &ups {
                    for &dn in &downs {
                        t.push(m[u][dn].clone());
                    }
                }
            }
            t
        })
        .collect();
    PepsData::new(lattice, 2, dim, tensors, false).expect("chain shapes are consistent")
}
