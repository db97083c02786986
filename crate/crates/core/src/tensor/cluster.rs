use super::{LatticeSpec, Leg, PepsData};
use crate::arith::{ComplexRational, Field};

/// Cluster state `prod_e CZ_e |+>^N` (unnormalized, `|+> = |0> + |1>`) as
/// PEPS-data with `D = d = 2` and entries in {0, 1, -1}.
///
/// Each edge `(a, b)` with `a < b` is owned by `a`, which copies its qubit
/// onto the bond (`delta(bond, s_a)` on its right/down leg); `b` applies
/// the phase `(-1)^(bond * s_b)` on its up/left leg.
pub fn build_cluster_peps(lattice: LatticeSpec) -> PepsData<ComplexRational> {
    build_cluster_peps_in(lattice, &ComplexRational::zero())
}

pub fn build_cluster_peps_in<F: Field>(lattice: LatticeSpec, like: &F) -> PepsData<F> {
    let tensors = (0..lattice.n())
        .map(|v| {
            let legs = lattice.legs(v);
            let g = legs.len();
            let mut t = Vec::with_capacity(2 << g);
            for s in 0..2usize {
                for idx in 0..(1usize << g) {
                    let mut val = 1i64;
                    for (pos, leg) in legs.iter().enumerate() {
                        let b = (idx >> (g - 1 - pos)) & 1;
                        match leg {
                            Leg::Right | Leg::Down if b != s => val = 0,
                            Leg::Up | Leg::Left if b & s == 1 => val = -val,
                            _ => {}
                        }
                    }
                    t.push(like.from_i64_like(val));
                }
            }
            t
        })
        .collect();
    PepsData::new(lattice, 2, 2, tensors, false).expect("cluster shapes are consistent")
}
