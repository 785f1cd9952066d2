//! `reduce`: one reduction run plus its reports.

use std::fmt::Write as _;

use aaa_mor_core::balred::Balancer;
use aaa_mor_core::lowrank::reduce_lowrank;
use aaa_mor_core::norms::{h2_error_metric, linf_norm};
use aaa_mor_core::numkernels::sigma_max;
use aaa_mor_core::sysaaa::reduce;
use aaa_mor_core::{Interpolant, Method, ReduceOptions, ReductionReport, StateSpace, StepAction, Termination};
use serde::Serialize;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Dims {
    pub states: usize,
    pub inputs: usize,
    pub outputs: usize,
}

impl Dims {
    pub fn of(g: &StateSpace) -> Self {
        Dims { states: g.states(), inputs: g.inputs(), outputs: g.outputs() }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SupportEntry {
    pub omega: f64,
    pub rank: usize,
    /// σ_max(R(jω) − G(jω)) of the returned model.
    pub interpolation_error: f64,
}

#[derive(Debug, Clone)]
pub struct AaaOutcome {
    pub model: Dims,
    pub interpolant: Interpolant,
    pub report: ReductionReport,
    pub support: Vec<SupportEntry>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BalancedOutcome {
    pub method: Method,
    pub model: Dims,
    pub order: usize,
    pub hankel_singular_values: Vec<f64>,
    pub linf_error: f64,
    /// Twice the sum of the discarded Hankel singular values.
    pub linf_bound: f64,
    pub h2_metric: Option<f64>,
    pub stable: bool,
    #[serde(skip)]
    pub sys: StateSpace,
}

#[derive(Debug, Clone)]
pub enum Outcome {
    Aaa(Box<AaaOutcome>),
    Balanced(BalancedOutcome),
}

#[derive(Serialize)]
struct AaaJson<'a> {
    method: Method,
    model: Dims,
    reduced_order: usize,
    frequency_unit: &'static str,
    support: &'a [SupportEntry],
    report: &'a ReductionReport,
}

pub fn balanced(g: &StateSpace, order: usize, tol: f64) -> Result<BalancedOutcome> {
    if order > g.states() {
        return Err(CliError::Usage(format!("--order {order} exceeds the model's {} states", g.states())));
    }
    let bal = Balancer::new(g)?;
    balanced_from(g, &bal, order, tol)
}

pub(crate) fn balanced_from(g: &StateSpace, bal: &Balancer, order: usize, tol: f64) -> Result<BalancedOutcome> {
    let sys = bal.truncate(order)?;
    let err = g.subtract(&sys)?;
    Ok(BalancedOutcome {
        method: Method::Balanced,
        model: Dims::of(g),
        order,
        hankel_singular_values: bal.hankel_singular_values().to_vec(),
        linf_error: linf_norm(&err, tol)?.gamma,
        linf_bound: bal.error_bound(order),
        h2_metric: h2_error_metric(&err).ok(),
        stable: sys.is_stable()?,
        sys,
    })
}

pub fn aaa(g: &StateSpace, method: Method, opts: &ReduceOptions) -> Result<AaaOutcome> {
    let (interpolant, report) = match method {
        Method::SysAaa => reduce(g, opts)?,
        Method::LowrankAaa => reduce_lowrank(g, opts)?,
        Method::Balanced => unreachable!("balanced truncation is not an interpolation method"),
    };
    let mut support = Vec::with_capacity(interpolant.support.len());
    for (pt, rank) in interpolant.support.iter().zip(&interpolant.ranks) {
        let gap = interpolant.sys.eval_freq(pt.omega)? - g.eval_freq(pt.omega)?;
        support.push(SupportEntry { omega: pt.omega, rank: *rank, interpolation_error: sigma_max(&gap) });
    }
    Ok(AaaOutcome { model: Dims::of(g), interpolant, report, support })
}

impl Outcome {
    pub fn reduced(&self) -> &StateSpace {
        match self {
            Outcome::Aaa(o) => &o.interpolant.sys,
            Outcome::Balanced(o) => &o.sys,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = match self {
            Outcome::Aaa(o) => serde_json::to_string_pretty(&AaaJson {
                method: o.report.method,
                model: o.model,
                reduced_order: o.interpolant.sys.states(),
                frequency_unit: "rad/s",
                support: &o.support,
                report: &o.report,
            }),
            Outcome::Balanced(o) => serde_json::to_string_pretty(o),
        }
        .expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_human(&self, hz: bool) -> String {
        match self {
            Outcome::Aaa(o) => human_aaa(o, hz),
            Outcome::Balanced(o) => human_balanced(o),
        }
    }
}

/// Formats a frequency given in rad/s for display.
pub fn freq(omega: f64, hz: bool) -> String {
    if omega.is_infinite() {
        return "inf".into();
    }
    let v = if hz { omega / std::f64::consts::TAU } else { omega };
    format!("{v:.6e}")
}

pub fn unit(hz: bool) -> &'static str {
    if hz {
        "Hz"
    } else {
        "rad/s"
    }
}

fn opt_e(v: Option<f64>) -> String {
    v.map_or_else(|| "-".into(), |x| format!("{x:.4e}"))
}

fn termination_text(t: &Termination, hz: bool) -> String {
    match t {
        Termination::MaxIterations => "iteration limit reached".into(),
        Termination::TargetLinf => "target L-inf error reached".into(),
        Termination::TargetOrder => "target order reached".into(),
        Termination::Converged => "error vanished to rounding level".into(),
        Termination::DuplicateSupportPoint { omega } => {
            format!("error peak at existing support point {} {}", freq(*omega, hz), unit(hz))
        }
        Termination::Saturated { omega } => {
            format!("error peak next to full-rank support point {} {}", freq(*omega, hz), unit(hz))
        }
        Termination::PeakAtInfinity => "error peak at infinite frequency".into(),
    }
}

fn human_aaa(o: &AaaOutcome, hz: bool) -> String {
    let r = &o.report;
    let u = unit(hz);
    let mut out = String::new();
    let _ = writeln!(
        out,
        "method {}: {} states, {} inputs, {} outputs",
        r.method.name(),
        o.model.states,
        o.model.inputs,
        o.model.outputs
    );
    let _ = writeln!(out, "initial L-inf error (R = D): {:.4e}", r.initial_linf);
    let _ = writeln!(
        out,
        "{:>4}  {:<40} {:>5}  {:>11}  {:>11}  {:>6}  {:>10}",
        "iter", "action", "order", "linf_error", "h2_metric", "stable", "w0_cond"
    );
    for rec in &r.records {
        let action = match &rec.action {
            StepAction::NewPoint { omega } => format!("new point at {} {u}", freq(*omega, hz)),
            StepAction::GrowRank { omega, rank, .. } => {
                format!("grow rank at {} {u} to {rank}", freq(*omega, hz))
            }
        };
        let _ = writeln!(
            out,
            "{:>4}  {:<40} {:>5}  {:>11.4e}  {:>11}  {:>6}  {:>10.3e}",
            rec.iteration,
            action,
            rec.order,
            rec.linf_error,
            opt_e(rec.h2_metric),
            if rec.stable { "yes" } else { "x" },
            rec.w0_condition
        );
    }
    let _ = writeln!(out, "stopped: {}", termination_text(&r.termination, hz));
    let _ = writeln!(
        out,
        "returned iteration {} with {} states",
        r.selected_iteration,
        o.interpolant.sys.states()
    );
    for s in &o.support {
        let _ = writeln!(
            out,
            "  support {} {u}  rank {}  interpolation error {:.3e}",
            freq(s.omega, hz),
            s.rank,
            s.interpolation_error
        );
    }
    for note in &r.notes {
        let _ = writeln!(out, "note: {note}");
    }
    out
}

fn human_balanced(o: &BalancedOutcome) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "method balanced: {} states, {} inputs, {} outputs",
        o.model.states, o.model.inputs, o.model.outputs
    );
    let hsv: Vec<String> = o.hankel_singular_values.iter().map(|s| format!("{s:.4e}")).collect();
    let _ = writeln!(out, "hankel singular values: {}", hsv.join(" "));
    let _ = writeln!(out, "order {}", o.order);
    let _ = writeln!(out, "linf_error {:.4e} (bound {:.4e})", o.linf_error, o.linf_bound);
    let _ = writeln!(out, "h2_metric {}", opt_e(o.h2_metric));
    let _ = writeln!(out, "stable {}", if o.stable { "yes" } else { "x" });
    out
}
