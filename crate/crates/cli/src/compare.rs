//! `compare`: error against order for several methods.

use std::fmt::Write as _;

use aaa_mor_core::balred::Balancer;
use aaa_mor_core::lowrank::reduce_lowrank_observed;
use aaa_mor_core::sysaaa::reduce_observed;
use aaa_mor_core::{IterationRecord, Interpolant, Method, ReduceOptions, StateSpace};
use serde::Serialize;

use crate::error::{CliError, Result};
use crate::reduce::balanced_from;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompareRow {
    pub method: Method,
    /// Interpolation iteration; `None` for balanced truncation.
    pub iteration: Option<usize>,
    pub order: usize,
    pub linf_error: f64,
    pub h2_metric: Option<f64>,
    /// `false` rows carry the `x` marker: the reduced model has a pole with
    /// nonnegative real part.
    pub stable: bool,
    #[serde(skip)]
    pub sys: StateSpace,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompareTable {
    pub max_order: usize,
    pub rows: Vec<CompareRow>,
    pub notes: Vec<String>,
}

struct Job {
    rows: Vec<CompareRow>,
    notes: Vec<String>,
}

fn aaa_job(g: &StateSpace, method: Method, max_order: usize, base: &ReduceOptions) -> Result<Job> {
    let opts = ReduceOptions {
        max_iterations: max_order,
        target_order: Some(max_order),
        target_linf: None,
        keep_best: false,
        ..base.clone()
    };
    let mut rows = Vec::new();
    let mut failure = None;
    let mut observe = |rec: &IterationRecord, it: &Interpolant| {
        if rec.order > max_order {
            return;
        }
        match it.sys.is_stable() {
            Ok(stable) => rows.push(CompareRow {
                method,
                iteration: Some(rec.iteration),
                order: rec.order,
                linf_error: rec.linf_error,
                h2_metric: rec.h2_metric,
                stable,
                sys: it.sys.clone(),
            }),
            Err(e) => failure = Some(e),
        }
    };
    let run = match method {
        Method::SysAaa => reduce_observed(g, &opts, &mut observe),
        Method::LowrankAaa => reduce_lowrank_observed(g, &opts, &mut observe),
        Method::Balanced => unreachable!(),
    };
    if let Some(e) = failure {
        return Err(e.into());
    }
    let mut notes = Vec::new();
    match run {
        Ok((_, report)) => notes.extend(report.notes.iter().map(|n| format!("{}: {n}", method.name()))),
        Err(e) => notes.push(format!("{}: stopped after {} iterates: {e}", method.name(), rows.len())),
    }
    Ok(Job { rows, notes })
}

fn balanced_job(g: &StateSpace, max_order: usize, tol: f64) -> Result<Job> {
    let bal = Balancer::new(g)?;
    let mut rows = Vec::new();
    let mut notes = Vec::new();
    for k in 1..=max_order {
        match balanced_from(g, &bal, k, tol) {
            Ok(o) => rows.push(CompareRow {
                method: Method::Balanced,
                iteration: None,
                order: k,
                linf_error: o.linf_error,
                h2_metric: o.h2_metric,
                stable: o.stable,
                sys: o.sys,
            }),
            Err(e) => {
                notes.push(format!("balanced: no truncation of order {k} or above: {e}"));
                break;
            }
        }
    }
    Ok(Job { rows, notes })
}

/// Runs each method on its own thread; the merged table is sorted by
/// (method, order, iteration) so it does not depend on scheduling.
pub fn compare(g: &StateSpace, methods: &[Method], max_order: usize, opts: &ReduceOptions) -> Result<CompareTable> {
    if max_order > g.states() {
        return Err(CliError::Usage(format!(
            "--max-order {max_order} exceeds the model's {} states",
            g.states()
        )));
    }
    let mut methods = methods.to_vec();
    methods.sort();
    methods.dedup();
    let jobs: Vec<Result<Job>> = std::thread::scope(|s| {
        let handles: Vec<_> = methods
            .iter()
            .map(|&m| {
                s.spawn(move || match m {
                    Method::Balanced => balanced_job(g, max_order, opts.bisect_tol),
                    _ => aaa_job(g, m, max_order, opts),
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("compare worker panicked")).collect()
    });
    let mut table = CompareTable { max_order, rows: Vec::new(), notes: Vec::new() };
    for job in jobs {
        let job = job?;
        table.rows.extend(job.rows);
        table.notes.extend(job.notes);
    }
    table.rows.sort_by(|a, b| (a.method, a.order, a.iteration).cmp(&(b.method, b.order, b.iteration)));
    Ok(table)
}

impl CompareTable {
    pub fn rows_for(&self, method: Method) -> impl Iterator<Item = &CompareRow> {
        self.rows.iter().filter(move |r| r.method == method)
    }

    pub fn to_human(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<12} {:>5}  {:>5}  {:>13}  {:>13}  {:>6}",
            "method", "iter", "order", "linf_error", "h2_metric", "stable"
        );
        for r in &self.rows {
            let iter = r.iteration.map_or_else(|| "-".into(), |i| i.to_string());
            let h2 = r.h2_metric.map_or_else(|| "-".into(), |v| format!("{v:.6e}"));
            let _ = writeln!(
                out,
                "{:<12} {:>5}  {:>5}  {:>13.6e}  {:>13}  {:>6}",
                r.method.name(),
                iter,
                r.order,
                r.linf_error,
                h2,
                if r.stable { "" } else { "x" }
            );
        }
        for n in &self.notes {
            let _ = writeln!(out, "note: {n}");
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("table serializes");
        s.push('\n');
        s
    }
}
