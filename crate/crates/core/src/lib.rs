//! Model-order reduction for continuous-time LTI state-space systems.
//!
//! The crate provides three reducers:
//!
//! * [`sysaaa::reduce`]: adaptive block interpolation on the imaginary axis with
//!   real-coefficient state-space realizations, support points picked by
//!   L∞-norm bisection and weights from a Gramian eigenproblem.
//! * [`lowrank::reduce_lowrank`]: the same loop, but each support point only
//!   interpolates a truncated SVD of the sample, so the state dimension grows
//!   by one rank step at a time instead of by the number of outputs.
//! * [`balred::balanced_truncate`]: square-root balanced truncation, the usual
//!   baseline.
//!
//! Everything here is `no_std` + `alloc`; file formats and the command line
//! live in the companion `aaa-mor` crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod balred;
pub mod error;
pub mod lowrank;
pub mod norms;
pub mod numkernels;
pub mod report;
pub mod statespace;
pub mod sysaaa;

pub use error::{Error, Result};
pub use report::{IterationRecord, Method, ReduceOptions, ReductionReport, StepAction, Termination};
pub use statespace::{FrequencyResponse, FrequencySample, StateSpace};
pub use sysaaa::Interpolant;

/// Complex scalar used for frequency responses.
pub type Complex64 = nalgebra::Complex<f64>;
/// Dense real matrix.
pub type Mat = nalgebra::DMatrix<f64>;
/// Dense complex matrix.
pub type CMat = nalgebra::DMatrix<Complex64>;
