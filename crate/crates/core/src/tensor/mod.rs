//! PEPS and MPS data models and the exact contraction engines.
//!
//! Tensors are stored flat and row-major with the physical index first and
//! the virtual legs in the order up, right, down, left, skipping legs that
//! fall off the open boundary. A vertex of degree `g` therefore holds
//! `d * D^g` entries.

mod cluster;
mod contract;
mod dense;
mod lattice;
mod mps;
mod observable;
mod peps;

use thiserror::Error;

use crate::arith::ArithError;

pub use cluster::{build_cluster_peps, build_cluster_peps_in};
pub use contract::{contract_norm, contract_nev, contract_uev, contract_with_site_ops, Limits};
pub use dense::{build_state_vector, dense_expectation, dense_norm};
pub use lattice::{LatticeSpec, Leg};
pub use mps::{mps_to_peps, mps_transfer_norm, MpsData};
pub use observable::LocalObservable;
pub use peps::{AnyPeps, PepsData};
pub(crate) use peps::field_kind_of;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TensorError {
    #[error("{what} of {size} exceeds the configured cap of {cap}")]
    SizeCapExceeded { what: &'static str, size: usize, cap: usize },
    #[error("observable support vertex {0} is outside the lattice or repeated")]
    SupportOutOfRange(usize),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("state has zero norm")]
    ZeroNorm,
    #[error("invalid instance: {0}")]
    Invalid(String),
    #[error(transparent)]
    Arith(#[from] ArithError),
}
