//! Low-rank adaptive interpolation.
//!
//! Instead of matching the whole sample `G(jω_k)`, a support point matches
//! only its rank-`r_k` SVD truncation `U_k Σ_k V_k*`. New points enter at rank
//! one and grow one rank at a time when the error peak returns close to them,
//! so the model grows by one state (ω = 0) or two states (ω ≠ 0) per
//! iteration regardless of the number of outputs.

use alloc::vec::Vec;

use crate::numkernels::{svd_truncate, svd_truncate_real, TruncatedSvd};
use crate::report::{IterationRecord, Method, ReduceOptions, ReductionReport, StepAction, Termination};
use crate::sysaaa::{build_block, drive, BlockRealization, Interpolant, Observer, Proposal, SupportPoint, SupportStrategy};
use crate::{CMat, Error, Mat, Result, StateSpace};

/// Default relative distance under which a candidate grows an existing point.
pub const DEFAULT_MIN_DIST: f64 = 0.02;
/// Singular values below this fraction of the largest are treated as zero.
const RANK_REL: f64 = 1e-12;

/// Support point with a truncated SVD of its sample.
#[derive(Debug, Clone, PartialEq)]
pub struct LowRankPoint {
    pub omega: f64,
    pub rank: usize,
    pub sample: CMat,
    pub factors: TruncatedSvd,
    /// Largest usable rank: numerical rank of the sample, at most `min(p, q)`.
    pub max_rank: usize,
}

impl LowRankPoint {
    pub fn new(omega: f64, sample: CMat, rank: usize) -> Result<Self> {
        let (p, q) = sample.shape();
        let full = if omega == 0.0 {
            if sample.iter().any(|z| z.im != 0.0) {
                return Err(Error::NonRealSampleAtZero);
            }
            svd_truncate_real(&sample.map(|z| z.re), p.min(q))?
        } else {
            svd_truncate(&sample, p.min(q))?
        };
        let top = full.s.first().copied().unwrap_or(0.0);
        let max_rank = full.s.iter().filter(|s| **s > RANK_REL * top && **s > 0.0).count();
        let mut pt = Self { omega, rank: 0, sample, factors: full, max_rank };
        pt.set_rank(rank)?;
        Ok(pt)
    }

    pub fn sample(g: &StateSpace, omega: f64, rank: usize) -> Result<Self> {
        let sp = SupportPoint::sample(g, omega)?;
        Self::new(sp.omega, sp.sample, rank)
    }

    /// Re-truncates the cached sample at `rank`.
    pub fn set_rank(&mut self, rank: usize) -> Result<()> {
        let (p, q) = self.sample.shape();
        self.factors = if self.omega == 0.0 {
            svd_truncate_real(&self.sample.map(|z| z.re), rank)?
        } else {
            svd_truncate(&self.sample, rank)?
        };
        debug_assert!(rank <= p.min(q));
        self.rank = rank;
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.omega == 0.0
    }
}

/// Realization of the low-rank `[N_k M_k]` block.
///
/// ω = 0: `A_k = 0_r`, `B_k1 = Σ Vᵀ`, `B_k2 = Uᵀ`.
/// ω ≠ 0: `A_k = [[0, ωI], [−ωI, 0]]`, `B_k1 = [Σ V_rᵀ; Σ V_iᵀ]`,
/// `B_k2 = [U_rᵀ; U_iᵀ]`.
///
/// At full row rank (`r = p`) the factorization `U = I`, `ΣV* = G(jω_k)` is
/// used instead of the SVD. It differs from the SVD block by the unitary
/// `U*` only, which leaves the interpolant unchanged, and it makes a
/// full-rank point numerically identical to the system-AAA block.
pub fn build_lowrank_block(pt: &LowRankPoint) -> Result<BlockRealization> {
    if pt.rank == pt.sample.nrows() && pt.rank == pt.max_rank {
        return build_block(&SupportPoint { omega: pt.omega, sample: pt.sample.clone(), is_zero: pt.is_zero() });
    }
    let f = &pt.factors;
    let r = f.rank();
    let top = f.s.first().copied().unwrap_or(0.0);
    if r == 0 || f.s.iter().any(|s| !(*s > RANK_REL * top) || *s <= 0.0) {
        return Err(Error::DegenerateFactors);
    }
    let sigma = f.sigma();
    let (vr, vi) = (f.v.map(|z| z.re), f.v.map(|z| z.im));
    let (ur, ui) = (f.u.map(|z| z.re), f.u.map(|z| z.im));
    if pt.is_zero() {
        return Ok(BlockRealization {
            omega: 0.0,
            a: Mat::zeros(r, r),
            b1: &sigma * vr.transpose(),
            b2: ur.transpose(),
        });
    }
    let (p, q) = pt.sample.shape();
    let mut b1 = Mat::zeros(2 * r, q);
    b1.rows_mut(0, r).copy_from(&(&sigma * vr.transpose()));
    b1.rows_mut(r, r).copy_from(&(&sigma * vi.transpose()));
    let mut b2 = Mat::zeros(2 * r, p);
    b2.rows_mut(0, r).copy_from(&ur.transpose());
    b2.rows_mut(r, r).copy_from(&ui.transpose());
    Ok(BlockRealization { omega: pt.omega, a: BlockRealization::rotation(pt.omega, r), b1, b2 })
}

/// Decision for a candidate frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GrowAction {
    NewPoint(f64),
    GrowRank(usize),
}

/// Grows the nearest support point when the candidate is within
/// `min_dist · max(1, ω_i)` of it, otherwise adds a new point.
///
/// Returns [`Error::Saturated`] when the nearby point is already at full rank.
pub fn select_or_grow(candidate: f64, points: &[LowRankPoint], min_dist: f64) -> Result<GrowAction> {
    if !(min_dist > 0.0) {
        return Err(Error::InvalidArgument("min_dist must be positive"));
    }
    let nearest = points
        .iter()
        .enumerate()
        .min_by(|(_, a), (_, b)| (a.omega - candidate).abs().total_cmp(&(b.omega - candidate).abs()));
    match nearest {
        Some((i, pt)) if (candidate - pt.omega).abs() < min_dist * pt.omega.max(1.0) => {
            if pt.rank < pt.max_rank {
                Ok(GrowAction::GrowRank(i))
            } else {
                Err(Error::Saturated { omega: candidate })
            }
        }
        _ => Ok(GrowAction::NewPoint(candidate)),
    }
}

struct LowRank {
    points: Vec<LowRankPoint>,
    min_dist: f64,
}

fn block_states(omega: f64) -> usize {
    if omega == 0.0 {
        1
    } else {
        2
    }
}

impl SupportStrategy for LowRank {
    fn propose(&self, omega: f64) -> Result<Proposal> {
        match select_or_grow(omega, &self.points, self.min_dist) {
            Ok(GrowAction::NewPoint(w)) => Ok(Proposal::Step {
                action: StepAction::NewPoint { omega: w },
                added_states: block_states(w),
            }),
            Ok(GrowAction::GrowRank(index)) => {
                let pt = &self.points[index];
                Ok(Proposal::Step {
                    action: StepAction::GrowRank { index, omega: pt.omega, rank: pt.rank + 1 },
                    added_states: block_states(pt.omega),
                })
            }
            Err(Error::Saturated { omega }) => Ok(Proposal::Stop(Termination::Saturated { omega })),
            Err(e) => Err(e),
        }
    }

    fn apply(&mut self, g: &StateSpace, action: &StepAction) -> Result<()> {
        match *action {
            StepAction::NewPoint { omega } => self.points.push(LowRankPoint::sample(g, omega, 1)?),
            StepAction::GrowRank { index, rank, .. } => self.points[index].set_rank(rank)?,
        }
        Ok(())
    }

    fn blocks(&self) -> Result<Vec<BlockRealization>> {
        self.points.iter().map(build_lowrank_block).collect()
    }

    fn support(&self) -> (Vec<SupportPoint>, Vec<usize>) {
        let support = self
            .points
            .iter()
            .map(|pt| SupportPoint { omega: pt.omega, sample: pt.sample.clone(), is_zero: pt.is_zero() })
            .collect();
        (support, self.points.iter().map(|pt| pt.rank).collect())
    }
}

/// Low-rank adaptive interpolation of `g`.
///
/// When `g` has more outputs than inputs the reduction runs on the dual
/// system and the result is dualized back; the support samples in the
/// returned interpolant refer to `g` itself, the weights to the dual problem.
pub fn reduce_lowrank(g: &StateSpace, opts: &ReduceOptions) -> Result<(Interpolant, ReductionReport)> {
    reduce_lowrank_observed(g, opts, &mut |_, _| {})
}

fn undual(interp: &mut Interpolant) {
    interp.sys = interp.sys.dual();
    for pt in &mut interp.support {
        pt.sample = pt.sample.transpose();
    }
}

/// [`reduce_lowrank`], handing every iterate (already dualized back) to `observer`.
pub fn reduce_lowrank_observed(
    g: &StateSpace,
    opts: &ReduceOptions,
    observer: Observer<'_>,
) -> Result<(Interpolant, ReductionReport)> {
    let dualize = g.outputs() > g.inputs();
    let work = if dualize { g.dual() } else { g.clone() };
    let mut strategy = LowRank { points: Vec::new(), min_dist: opts.min_dist };
    let mut forward = |rec: &IterationRecord, it: &Interpolant| {
        if dualize {
            let mut back = it.clone();
            undual(&mut back);
            observer(rec, &back);
        } else {
            observer(rec, it);
        }
    };
    let (mut interp, mut report) = drive(&work, opts, Method::LowrankAaa, &mut strategy, &mut forward)?;
    if dualize {
        undual(&mut interp);
        report.dualized = true;
        report.notes.insert(0, alloc::string::String::from("dualized: more outputs than inputs"));
    }
    Ok((interp, report))
}
