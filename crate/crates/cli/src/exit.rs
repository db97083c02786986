//! Process exit codes.
//!
//! 0 success, 1 a verification check failed, 2 bad input or configuration,
//! 3 decoding or majority-vote failure, 4 a size cap was hit.

use pepsavg_core::harness::HarnessError;
use pepsavg_core::interp::InterpError;
use pepsavg_core::permanent::PermanentError;
use pepsavg_core::reduction::ReductionError;
use pepsavg_core::tensor::TensorError;

pub const CHECK_FAILED: u8 = 1;
pub const CONFIG: u8 = 2;
pub const DECODE: u8 = 3;
pub const SIZE_CAP: u8 = 4;

fn tensor(e: &TensorError) -> u8 {
    match e {
        TensorError::SizeCapExceeded { .. } => SIZE_CAP,
        TensorError::ZeroNorm => DECODE,
        _ => CONFIG,
    }
}

fn interp(e: &InterpError) -> u8 {
    match e {
        InterpError::DecodingFailure | InterpError::DegenerateSystem => DECODE,
        _ => CONFIG,
    }
}

fn reduction(e: &ReductionError) -> u8 {
    match e {
        ReductionError::MajorityTie | ReductionError::AllRepeatsFailedDecoding | ReductionError::ZeroDenominatorAtOne => DECODE,
        ReductionError::Tensor(t) => tensor(t),
        ReductionError::Interp(i) => interp(i),
        ReductionError::InvalidConfig(_) | ReductionError::Arith(_) => CONFIG,
    }
}

fn permanent(e: &PermanentError) -> u8 {
    match e {
        PermanentError::SizeCapExceeded { .. } => SIZE_CAP,
        PermanentError::MajorityTie | PermanentError::AllRepeatsFailedDecoding => DECODE,
        PermanentError::Interp(i) => interp(i),
        _ => CONFIG,
    }
}

fn harness(e: &HarnessError) -> u8 {
    match e {
        HarnessError::Reduction(r) => reduction(r),
        HarnessError::Permanent(p) => permanent(p),
        HarnessError::Tensor(t) => tensor(t),
        HarnessError::ConfigInvalid(_) | HarnessError::Io(_) => CONFIG,
    }
}

/// Exit code for an error; unknown errors count as bad input.
pub fn code_for(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<HarnessError>() {
            return harness(e);
        }
        if let Some(e) = cause.downcast_ref::<ReductionError>() {
            return reduction(e);
        }
        if let Some(e) = cause.downcast_ref::<PermanentError>() {
            return permanent(e);
        }
        if let Some(e) = cause.downcast_ref::<TensorError>() {
            return tensor(e);
        }
        if let Some(e) = cause.downcast_ref::<InterpError>() {
            return interp(e);
        }
    }
    CONFIG
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nested_errors_classify() {
        let cap = TensorError::SizeCapExceeded { what: "state", size: 10, cap: 1 };
        assert_eq!(code_for(&HarnessError::Reduction(ReductionError::Tensor(cap)).into()), SIZE_CAP);
        assert_eq!(code_for(&PermanentError::SizeCapExceeded { n: 10, cap: 9 }.into()), SIZE_CAP);
        assert_eq!(code_for(&ReductionError::MajorityTie.into()), DECODE);
        assert_eq!(code_for(&ReductionError::Interp(InterpError::DecodingFailure).into()), DECODE);
        assert_eq!(code_for(&HarnessError::ConfigInvalid("x".into()).into()), CONFIG);
        assert_eq!(code_for(&anyhow::anyhow!("anything")), CONFIG);
    }
}
