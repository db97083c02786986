//! Row-by-row transfer contraction ("zipper") over the doubled bra-ket layer.
//!
//! The running state carries one open vertical bond per column plus the
//! horizontal bond to the right of the last absorbed vertex. Absorbing a
//! vertex sums over its up and left legs and opens its down and right legs,
//! so memory is exponential in the lattice width only.
//!
//! All arithmetic happens in the field's kernel ring (Gaussian integers for
//! Q(i)) after clearing denominators per vertex; the common scale is applied
//! once at the end.

use super::{LatticeSpec, LocalObservable, PepsData, TensorError};
use crate::arith::{Field, KernelScalar};

/// Explicit size caps. Exceeding one is an error, never a truncation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Maximum of the shorter lattice side; the engine sweeps along it.
    pub max_width: usize,
    /// Maximum number of entries in the running transfer state.
    pub max_state: usize,
    /// Maximum length of a dense amplitude vector, d^N.
    pub max_amplitudes: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_width: 6, max_state: 1 << 24, max_amplitudes: 1 << 22 }
    }
}

/// Vertex tensor with all four legs materialized (absent legs have
/// dimension 1), laid out as `[p][up][right][down][left]`.
pub(super) struct Site<K> {
    pub pd: usize,
    pub dims: [usize; 4],
    pub data: Vec<K>,
}

pub(super) fn zipper<K: KernelScalar>(
    lat: LatticeSpec,
    sites: &[Site<K>],
    max_state: usize,
) -> Result<Vec<K>, TensorError> {
    let w = lat.width;
    let zero = sites[0].data[0].kernel_zero();
    let mut slot = vec![1usize; w];
    let mut h = 1usize;
    let mut phys = 1usize;
    let mut state = vec![zero.kernel_one()];

    for (v, site) in sites.iter().enumerate() {
        let x = v % w;
        let [u_d, r_d, dn_d, l_d] = site.dims;
        debug_assert_eq!(u_d, slot[x]);
        debug_assert_eq!(l_d, h);
        let pd = site.pd;
        let pre_n: usize = slot[..x].iter().product();
        let post_n: usize = slot[x + 1..].iter().product();
        let new_len = [phys, pd, pre_n, dn_d, post_n, r_d]
            .iter()
            .try_fold(1usize, |a, &b| a.checked_mul(b))
            .filter(|&n| n <= max_state)
            .ok_or(TensorError::SizeCapExceeded {
                what: "transfer state",
                size: phys.saturating_mul(pd).saturating_mul(pre_n).saturating_mul(dn_d * post_n * r_d),
                cap: max_state,
            })?;
        let mut next = vec![zero.clone(); new_len];

        let mut old = 0usize;
        for big_p in 0..phys {
            for pre in 0..pre_n {
                for u in 0..u_d {
                    for post in 0..post_n {
                        for l in 0..l_d {
                            let s = &state[old];
                            old += 1;
                            if s.is_kernel_zero() {
                                continue;
                            }
                            for p in 0..pd {
                                for r in 0..r_d {
                                    for dn in 0..dn_d {
                                        let t = &site.data[(((p * u_d + u) * r_d + r) * dn_d + dn) * l_d + l];
                                        if t.is_kernel_zero() {
                                            continue;
                                        }
                                        let idx = ((((big_p * pd + p) * pre_n + pre) * dn_d + dn) * post_n + post)
                                            * r_d
                                            + r;
                                        next[idx].mul_add(s, t);
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        state = next;
        slot[x] = dn_d;
        h = r_d;
        phys *= pd;
    }
    Ok(state)
}

/// Builds `E[(u,u'),(r,r'),(dn,dn'),(l,l')] = sum_{p,p'} A[p'][p] T[p,..] conj(T[p',..'])`.
fn doubled_site<K: KernelScalar>(t: &[K], d: usize, dims: [usize; 4], op: Option<&[Vec<K>]>) -> Site<K> {
    let n_legs: usize = dims.iter().product();
    let zero = t[0].kernel_zero();
    let applied: Vec<K> = match op {
        None => t.to_vec(),
        Some(a) => {
            let mut out = vec![zero.clone(); t.len()];
            for (pb, row) in a.iter().enumerate() {
                for (pk, coef) in row.iter().enumerate() {
                    if coef.is_kernel_zero() {
                        continue;
                    }
                    for i in 0..n_legs {
                        out[pb * n_legs + i].mul_add(coef, &t[pk * n_legs + i]);
                    }
                }
            }
            out
        }
    };

    let [u, r, dn, l] = dims;
    let split: Vec<[usize; 4]> = (0..n_legs)
        .map(|i| [i / (r * dn * l), (i / (dn * l)) % r, (i / l) % dn, i % l])
        .collect();
    let dd = dims.map(|x| x * x);
    let mut data = vec![zero; n_legs * n_legs];
    for p in 0..d {
        let ket = &applied[p * n_legs..(p + 1) * n_legs];
        let bra = &t[p * n_legs..(p + 1) * n_legs];
        for (i, a) in ket.iter().enumerate() {
            if a.is_kernel_zero() {
                continue;
            }
            let [ku, kr, kd, kl] = split[i];
            for (j, b) in bra.iter().enumerate() {
                if b.is_kernel_zero() {
                    continue;
                }
                let [bu, br, bd, bl] = split[j];
                let idx = (((ku * u + bu) * dd[1] + (kr * r + br)) * dd[2] + (kd * dn + bd)) * dd[3] + (kl * l + bl);
                data[idx].mul_conj_add(a, b);
            }
        }
    }
    Site { pd: 1, dims: dd, data }
}

/// Contracts `<psi| (prod_v A_v) |psi>` for single-site operators `A_v`
/// given as `(vertex, d x d matrix)` with rows indexed by the bra.
pub fn contract_with_site_ops<F: Field>(
    peps: &PepsData<F>,
    ops: &[(usize, Vec<Vec<F>>)],
    limits: &Limits,
) -> Result<F, TensorError> {
    let lat = peps.lattice();
    if lat.width.min(lat.height) > limits.max_width {
        return Err(TensorError::SizeCapExceeded {
            what: "lattice width",
            size: lat.width.min(lat.height),
            cap: limits.max_width,
        });
    }
    for (i, (v, m)) in ops.iter().enumerate() {
        if *v >= peps.n() || ops[..i].iter().any(|(w, _)| w == v) {
            return Err(TensorError::SupportOutOfRange(*v));
        }
        if m.len() != peps.d() || m.iter().any(|r| r.len() != peps.d()) {
            return Err(TensorError::ShapeMismatch("site operator must be d x d".into()));
        }
    }

    // Sweep along the shorter side.
    let transposed;
    let (work, ops): (&PepsData<F>, Vec<(usize, &Vec<Vec<F>>)>) = if lat.width > lat.height {
        transposed = peps.transpose();
        let ops = ops
            .iter()
            .map(|(v, m)| {
                let (x, y) = lat.coords(*v);
                (x * lat.height + y, m)
            })
            .collect();
        (&transposed, ops)
    } else {
        (peps, ops.iter().map(|(v, m)| (*v, m)).collect())
    };

    let like = work.zero();
    let mut scale = like.one_like();
    let mut sites = Vec::with_capacity(work.n());
    for v in 0..work.n() {
        let (kt, s) = F::to_kernel(work.tensor(v));
        scale = scale.times(&s).times(&s.conj());
        let op = match ops.iter().find(|(w, _)| *w == v) {
            Some((_, m)) => {
                let flat: Vec<F> = m.iter().flatten().cloned().collect();
                let (ko, so) = F::to_kernel(&flat);
                scale = scale.times(&so);
                Some(ko.chunks(work.d()).map(<[_]>::to_vec).collect::<Vec<_>>())
            }
            None => None,
        };
        sites.push(doubled_site(&kt, work.d(), work.leg_dims(v), op.as_deref()));
    }
    let out = zipper(work.lattice(), &sites, limits.max_state)?;
    Ok(F::from_kernel(&out[0], &like).times(&scale))
}

/// `<psi|psi>`
pub fn contract_norm<F: Field>(peps: &PepsData<F>, limits: &Limits) -> Result<F, TensorError> {
    contract_with_site_ops(peps, &[], limits)
}

/// `<psi|A|psi>` for a one- or two-site observable.
pub fn contract_uev<F: Field>(
    peps: &PepsData<F>,
    obs: &LocalObservable<F>,
    limits: &Limits,
) -> Result<F, TensorError> {
    obs.validate(peps)?;
    let d = peps.d();
    let zero = peps.zero();
    match *obs.support() {
        [v] => contract_with_site_ops(peps, &[(v, obs.matrix().to_vec())], limits),
        [v, w] => {
            // A = sum_ij |i><j| (x) B_ij with B_ij[k][l] = A[(i,k),(j,l)]
            let mut acc = zero.clone();
            for i in 0..d {
                for j in 0..d {
                    let b: Vec<Vec<F>> = (0..d)
                        .map(|k| (0..d).map(|l| obs.entry(i * d + k, j * d + l).clone()).collect())
                        .collect();
                    if b.iter().flatten().all(Field::is_zero) {
                        continue;
                    }
                    let e: Vec<Vec<F>> = (0..d)
                        .map(|a| (0..d).map(|c| if a == i && c == j { zero.one_like() } else { zero.clone() }).collect())
                        .collect();
                    acc = acc.plus(&contract_with_site_ops(peps, &[(v, e), (w, b)], limits)?);
                }
            }
            Ok(acc)
        }
        _ => Err(TensorError::Invalid("observable support must have 1 or 2 vertices".into())),
    }
}

/// `<psi|A|psi> / <psi|psi>`
pub fn contract_nev<F: Field>(
    peps: &PepsData<F>,
    obs: &LocalObservable<F>,
    limits: &Limits,
) -> Result<F, TensorError> {
    let norm = contract_norm(peps, limits)?;
    if norm.is_zero() {
        return Err(TensorError::ZeroNorm);
    }
    let uev = contract_uev(peps, obs, limits)?;
    Ok(uev.over(&norm).expect("norm is nonzero"))
}
