//! Options and per-iteration logs shared by the interpolation reducers.

use alloc::string::String;
use alloc::vec::Vec;

#[cfg(feature = "serde")]
use serde::Serialize;

/// Reduction method tag carried in reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(Serialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum Method {
    SysAaa,
    LowrankAaa,
    Balanced,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::SysAaa => "sys-aaa",
            Method::LowrankAaa => "lowrank-aaa",
            Method::Balanced => "balanced",
        }
    }
}

/// Stopping rules and numerical knobs for [`crate::sysaaa::reduce`] and
/// [`crate::lowrank::reduce_lowrank`].
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize))]
pub struct ReduceOptions {
    pub max_iterations: usize,
    /// Stop once the L∞ error drops to this value.
    pub target_linf: Option<f64>,
    /// Never exceed this many states.
    pub target_order: Option<usize>,
    /// Return the iterate with the smallest L∞ error rather than the last one.
    pub keep_best: bool,
    pub bisect_tol: f64,
    pub minreal_tol: f64,
    /// Largest acceptable condition number of the leading weight block.
    pub w0_condition_cap: f64,
    /// Relative distance under which the low-rank reducer grows an existing
    /// support point instead of adding a new one.
    pub min_dist: f64,
}

impl Default for ReduceOptions {
    fn default() -> Self {
        Self {
            max_iterations: 10,
            target_linf: None,
            target_order: None,
            keep_best: true,
            bisect_tol: crate::norms::DEFAULT_REL_TOL,
            minreal_tol: crate::statespace::DEFAULT_MINREAL_TOL,
            w0_condition_cap: 1e12,
            min_dist: crate::lowrank::DEFAULT_MIN_DIST,
        }
    }
}

/// What one iteration did to the support set.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "kebab-case"))]
pub enum StepAction {
    NewPoint { omega: f64 },
    GrowRank { index: usize, omega: f64, rank: usize },
}

impl StepAction {
    pub fn omega(&self) -> f64 {
        match *self {
            StepAction::NewPoint { omega } | StepAction::GrowRank { omega, .. } => omega,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize))]
pub struct IterationRecord {
    pub iteration: usize,
    pub action: StepAction,
    pub order: usize,
    pub linf_error: f64,
    /// Frequency of the L∞ error peak of this iterate (next candidate point).
    pub peak_omega: f64,
    /// `√|tr(C P Cᵀ)|` of the error system; `None` when its Lyapunov
    /// equation is ill-posed.
    pub h2_metric: Option<f64>,
    pub stable: bool,
    pub w0_condition: f64,
    /// Largest condition number over the per-point residue weights.
    pub wk_condition: f64,
    /// The selected eigenvalues of the weight problem were not pairwise distinct.
    pub degenerate_spectrum: bool,
}

/// Why the reduction loop stopped.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "kebab-case"))]
pub enum Termination {
    MaxIterations,
    TargetLinf,
    TargetOrder,
    /// The error vanished to rounding level.
    Converged,
    /// The error peak sits on an existing support point.
    DuplicateSupportPoint { omega: f64 },
    /// The error peak is next to a support point that is already full rank.
    Saturated { omega: f64 },
    /// The error peak is at ω = ∞, which the feedthrough already matches.
    PeakAtInfinity,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize))]
pub struct ReductionReport {
    pub method: Method,
    pub options: ReduceOptions,
    /// L∞ error of the static initial model `R = D`.
    pub initial_linf: f64,
    pub records: Vec<IterationRecord>,
    pub termination: Termination,
    /// Iteration whose interpolant was returned (0 = static initial model).
    pub selected_iteration: usize,
    /// The reduction ran on the dual system.
    pub dualized: bool,
    pub notes: Vec<String>,
}

impl ReductionReport {
    pub fn selected(&self) -> Option<&IterationRecord> {
        self.records.iter().find(|r| r.iteration == self.selected_iteration)
    }
}
