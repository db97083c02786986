//! Dense state vectors, used as the brute-force oracle for the contraction
//! engine at small sizes.

use super::contract::{zipper, Site};
use super::{Limits, LocalObservable, PepsData, TensorError};
use crate::arith::Field;

/// All `d^N` amplitudes, vertex 0 being the most significant digit.
pub fn build_state_vector<F: Field>(peps: &PepsData<F>, limits: &Limits) -> Result<Vec<F>, TensorError> {
    let size = (peps.d() as u128).checked_pow(peps.n() as u32).unwrap_or(u128::MAX);
    if size > limits.max_amplitudes as u128 {
        return Err(TensorError::SizeCapExceeded {
            what: "state vector length",
            size: usize::try_from(size).unwrap_or(usize::MAX),
            cap: limits.max_amplitudes,
        });
    }
    let like = peps.zero();
    let mut scale = like.one_like();
    let mut sites = Vec::with_capacity(peps.n());
    for v in 0..peps.n() {
        let (kt, s) = F::to_kernel(peps.tensor(v));
        scale = scale.times(&s);
        sites.push(Site { pd: peps.d(), dims: peps.leg_dims(v), data: kt });
    }
    let amps = zipper(peps.lattice(), &sites, limits.max_state)?;
    Ok(amps.iter().map(|k| F::from_kernel(k, &like).times(&scale)).collect())
}

/// `sum |a_s|^2`
pub fn dense_norm<F: Field>(amps: &[F]) -> F {
    let mut acc = amps[0].zero_like();
    for a in amps {
        acc.mul_add_assign(a, &a.conj());
    }
    acc
}

/// `<psi|A|psi>` directly on the amplitude vector.
pub fn dense_expectation<F: Field>(amps: &[F], n: usize, d: usize, obs: &LocalObservable<F>) -> F {
    let support = obs.support();
    let place = |v: usize| d.pow((n - 1 - v) as u32);
    let digit = |s: usize, v: usize| (s / place(v)) % d;
    let mut acc = amps[0].zero_like();
    for (s, psi) in amps.iter().enumerate() {
        if psi.is_zero() {
            continue;
        }
        let col = support.iter().fold(0, |c, &v| c * d + digit(s, v));
        let base = support.iter().fold(s, |b, &v| b - digit(s, v) * place(v));
        for row in 0..obs.matrix().len() {
            let a = obs.entry(row, col);
            if a.is_zero() {
                continue;
            }
            let mut rest = row;
            let mut target = base;
            for &v in support.iter().rev() {
                target += (rest % d) * place(v);
                rest /= d;
            }
            acc = acc.plus(&amps[target].conj().times(a).times(psi));
        }
    }
    acc
}
