//! Sigma-plot data export.

use std::fmt::Write as _;

use aaa_mor_core::numkernels::sigma_max;
use aaa_mor_core::{Error as CoreError, FrequencyResponse, StateSpace};

use crate::error::Result;

pub const DEFAULT_POINTS: usize = 2000;
/// Decades covered by the exported grid.
pub const SPAN_DECADES: f64 = 4.0;

/// Log grid of `points` frequencies spanning four decades around the
/// geometric mean of the pole magnitudes of `g`.
pub fn frequency_grid(g: &StateSpace, points: usize) -> Result<Vec<f64>> {
    let mags: Vec<f64> = g.poles()?.iter().map(|z| z.norm()).filter(|m| *m > 0.0).collect();
    let centre = if mags.is_empty() {
        1.0
    } else {
        let lo = mags.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = mags.iter().copied().fold(0.0, f64::max);
        (lo * hi).sqrt()
    };
    let start = centre.log10() - SPAN_DECADES / 2.0;
    let step = if points > 1 { SPAN_DECADES / (points - 1) as f64 } else { 0.0 };
    Ok((0..points).map(|i| 10f64.powf(start + step * i as f64)).collect())
}

// A pole sitting exactly on a grid frequency shows as an infinite gain.
fn eval_or_inf(fr: &FrequencyResponse, omega: f64) -> Result<Option<aaa_mor_core::CMat>> {
    match fr.eval(omega) {
        Ok(v) => Ok(Some(v)),
        Err(CoreError::SingularAtFrequency { .. }) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

/// CSV with columns `omega_rad_s,sigma_max_G,sigma_max_R,sigma_max_error`.
pub fn sigma_csv(g: &StateSpace, r: &StateSpace, points: usize) -> Result<String> {
    let fg = FrequencyResponse::new(g);
    let fr = FrequencyResponse::new(r);
    let mut out = String::from("omega_rad_s,sigma_max_G,sigma_max_R,sigma_max_error\n");
    for w in frequency_grid(g, points)? {
        let vg = eval_or_inf(&fg, w)?;
        let vr = eval_or_inf(&fr, w)?;
        let sg = vg.as_ref().map_or(f64::INFINITY, sigma_max);
        let sr = vr.as_ref().map_or(f64::INFINITY, sigma_max);
        let se = match (&vg, &vr) {
            (Some(a), Some(b)) => sigma_max(&(a - b)),
            _ => f64::INFINITY,
        };
        let _ = writeln!(out, "{w:e},{sg:e},{sr:e},{se:e}");
    }
    Ok(out)
}
