//! System-AAA: adaptive real-coefficient block interpolation on the imaginary axis.
//!
//! Each iteration picks the frequency of the current L∞ error peak as a new
//! support point, appends its `[N_k M_k]` realization, forms the error system
//! `H = 𝒩 − ℳG`, and chooses the weights `W` minimizing `tr(W X Wᵀ)` under
//! `W Wᵀ = I`, where `X` is the output Gramian of `H`. The interpolant is then
//! realized directly in state space.

mod block;
mod realize;
mod weights;

use alloc::format;
use alloc::vec::Vec;

pub use block::{build_block, coincides, snap_zero, BlockRealization, SupportPoint, DUPLICATE_REL, ZERO_SNAP};
pub use realize::{assemble_error_system, nm_system, realize_interpolant, residue_condition, residue_weights};
pub use weights::{compute_x, solve_weights, WeightMatrix};

use crate::norms::{h2_error_metric, linf_norm};
use crate::report::{IterationRecord, Method, ReduceOptions, ReductionReport, StepAction, Termination};
use crate::{Error, Result, StateSpace};

/// A reduced model together with the data it was built from.
#[derive(Debug, Clone, PartialEq)]
pub struct Interpolant {
    pub sys: StateSpace,
    pub support: Vec<SupportPoint>,
    /// Interpolated rank at each support point (`p` for full interpolation).
    pub ranks: Vec<usize>,
    /// `None` for the static initial model.
    pub weights: Option<WeightMatrix>,
    pub order: usize,
}

impl Interpolant {
    /// `R = D`, the starting point of every interpolation run.
    pub fn static_feedthrough(g: &StateSpace) -> Self {
        Self {
            sys: StateSpace::static_gain(g.d().clone()),
            support: Vec::new(),
            ranks: Vec::new(),
            weights: None,
            order: 0,
        }
    }
}

/// Result of one weight solve for a fixed set of blocks.
#[derive(Debug, Clone)]
pub struct Fit {
    pub sys: StateSpace,
    pub weights: WeightMatrix,
    pub wk_condition: f64,
}

/// Error system → Gramian → optimal weights → realization.
pub fn fit(blocks: &[BlockRealization], g: &StateSpace, opts: &ReduceOptions) -> Result<Fit> {
    let h = assemble_error_system(blocks, g, opts.minreal_tol)?;
    let x = compute_x(&h)?;
    let weights = solve_weights(&x, g.outputs())?;
    let sys = realize_interpolant(blocks, &weights, g.d(), opts.w0_condition_cap)?;
    let wk_condition = residue_condition(blocks, &weights);
    Ok(Fit { sys, weights, wk_condition })
}

pub(crate) enum Proposal {
    Step { action: StepAction, added_states: usize },
    Stop(Termination),
}

/// How a reducer turns error-peak frequencies into support-set updates.
pub(crate) trait SupportStrategy {
    fn propose(&self, omega: f64) -> Result<Proposal>;
    fn apply(&mut self, g: &StateSpace, action: &StepAction) -> Result<()>;
    fn blocks(&self) -> Result<Vec<BlockRealization>>;
    fn support(&self) -> (Vec<SupportPoint>, Vec<usize>);
}

pub(crate) fn validate(opts: &ReduceOptions) -> Result<()> {
    if !(opts.bisect_tol > 0.0) {
        return Err(Error::InvalidArgument("bisection tolerance must be positive"));
    }
    if !(opts.minreal_tol > 0.0) {
        return Err(Error::InvalidArgument("minreal tolerance must be positive"));
    }
    if !(opts.min_dist > 0.0) {
        return Err(Error::InvalidArgument("min_dist must be positive"));
    }
    if !(opts.w0_condition_cap >= 1.0) {
        return Err(Error::InvalidArgument("W0 condition cap must be at least 1"));
    }
    Ok(())
}

// Error vanished relative to the initial error.
const CONVERGED_REL: f64 = 1e-13;

/// Called with every new iterate, in iteration order.
pub type Observer<'a> = &'a mut dyn FnMut(&IterationRecord, &Interpolant);

pub(crate) fn drive<S: SupportStrategy>(
    g: &StateSpace,
    opts: &ReduceOptions,
    method: Method,
    strategy: &mut S,
    observer: Observer<'_>,
) -> Result<(Interpolant, ReductionReport)> {
    validate(opts)?;
    let mut current = Interpolant::static_feedthrough(g);
    let mut linf = linf_norm(&g.subtract(&current.sys)?, opts.bisect_tol)?;
    let initial_linf = linf.gamma;
    let mut best = (initial_linf, current.clone(), 0usize);
    let mut records = Vec::new();
    let mut notes = Vec::new();
    let mut termination = Termination::MaxIterations;

    for iteration in 1..=opts.max_iterations {
        if opts.target_linf.is_some_and(|t| linf.gamma <= t) {
            termination = Termination::TargetLinf;
            break;
        }
        if linf.gamma <= CONVERGED_REL * initial_linf || initial_linf == 0.0 {
            termination = Termination::Converged;
            break;
        }
        if linf.omega_peak.is_infinite() {
            notes.push(format!(
                "iteration {iteration}: error peak at infinity; feedthrough already matched, stopping"
            ));
            termination = Termination::PeakAtInfinity;
            break;
        }
        let (action, added) = match strategy.propose(snap_zero(linf.omega_peak))? {
            Proposal::Stop(t) => {
                termination = t;
                break;
            }
            Proposal::Step { action, added_states } => (action, added_states),
        };
        if opts.target_order.is_some_and(|t| current.order + added > t) {
            termination = Termination::TargetOrder;
            break;
        }
        strategy.apply(g, &action)?;
        let blocks = strategy.blocks()?;
        let fitted = fit(&blocks, g, opts)?;
        let err = g.subtract(&fitted.sys)?;
        linf = linf_norm(&err, opts.bisect_tol)?;
        let h2 = h2_error_metric(&err).ok();
        let stable = fitted.sys.is_stable()?;
        let order = fitted.sys.states();
        debug_assert_eq!(order, current.order + added);
        records.push(IterationRecord {
            iteration,
            action,
            order,
            linf_error: linf.gamma,
            peak_omega: linf.omega_peak,
            h2_metric: h2,
            stable,
            w0_condition: fitted.weights.w0_condition(),
            wk_condition: fitted.wk_condition,
            degenerate_spectrum: fitted.weights.degenerate,
        });
        if fitted.weights.degenerate {
            notes.push(format!("iteration {iteration}: selected eigenvalues are not distinct"));
        }
        let (support, ranks) = strategy.support();
        current = Interpolant { sys: fitted.sys, support, ranks, weights: Some(fitted.weights), order };
        observer(records.last().expect("record just pushed"), &current);
        if linf.gamma < best.0 {
            best = (linf.gamma, current.clone(), iteration);
        }
    }

    let (selected, selected_iteration) = if opts.keep_best {
        (best.1, best.2)
    } else {
        let last = records.last().map_or(0, |r| r.iteration);
        (current, last)
    };
    let report = ReductionReport {
        method,
        options: opts.clone(),
        initial_linf,
        records,
        termination,
        selected_iteration,
        dualized: false,
        notes,
    };
    Ok((selected, report))
}

struct FullInterpolation {
    points: Vec<SupportPoint>,
    p: usize,
}

impl SupportStrategy for FullInterpolation {
    fn propose(&self, omega: f64) -> Result<Proposal> {
        if self.points.iter().any(|pt| coincides(pt.omega, omega)) {
            return Ok(Proposal::Stop(Termination::DuplicateSupportPoint { omega }));
        }
        let added_states = if omega == 0.0 { self.p } else { 2 * self.p };
        Ok(Proposal::Step { action: StepAction::NewPoint { omega }, added_states })
    }

    fn apply(&mut self, g: &StateSpace, action: &StepAction) -> Result<()> {
        self.points.push(SupportPoint::sample(g, action.omega())?);
        Ok(())
    }

    fn blocks(&self) -> Result<Vec<BlockRealization>> {
        self.points.iter().map(build_block).collect()
    }

    fn support(&self) -> (Vec<SupportPoint>, Vec<usize>) {
        (self.points.clone(), alloc::vec![self.p; self.points.len()])
    }
}

/// Runs system-AAA on `g`.
///
/// The first model is the static feedthrough `R = D`; each iteration adds
/// the current L∞ error peak as a support point (`p` states at ω = 0, `2p`
/// otherwise). With `keep_best` the lowest-error iterate is returned, since
/// the error is not monotone in the order.
pub fn reduce(g: &StateSpace, opts: &ReduceOptions) -> Result<(Interpolant, ReductionReport)> {
    reduce_observed(g, opts, &mut |_, _| {})
}

/// [`reduce`], handing every iterate to `observer` as it is produced.
pub fn reduce_observed(
    g: &StateSpace,
    opts: &ReduceOptions,
    observer: Observer<'_>,
) -> Result<(Interpolant, ReductionReport)> {
    let mut strategy = FullInterpolation { points: Vec::new(), p: g.outputs() };
    drive(g, opts, Method::SysAaa, &mut strategy, observer)
}
