use rayon::prelude::*;

use super::inference::{selective_ci, selective_pvalue};
use super::posi::PosiContext;
use super::{LinearModelData, DEFAULT_TOL};
use crate::error::{Error, Result};

/// One variable at one penalty value.
#[derive(Debug, Clone, PartialEq)]
pub struct PathRecord {
    pub variable: String,
    /// 1-based column index.
    pub index: usize,
    pub lambda: f64,
    pub selected: bool,
    pub beta_hat: f64,
    /// Selective p-value for `β_i = 0`.
    pub p_value: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    /// The active set here differs from the one at the previous grid value.
    pub active_set_change: bool,
}

/// `(selected, beta_hat, p, ci_lo, ci_hi)` for one variable at one penalty.
type Point = (bool, f64, f64, f64, f64);

/// Selective p-values and intervals for every variable along `grid`.
///
/// Records are grouped by variable, each group in grid order. Grid points
/// are evaluated in parallel; the output does not depend on scheduling.
pub fn lambda_path(data: &LinearModelData, grid: &[f64], level: f64) -> Result<Vec<PathRecord>> {
    if grid.is_empty() {
        return Err(Error::contract("lambda grid is empty"));
    }
    if grid.iter().any(|l| !(l.is_finite() && *l >= 0.0)) {
        return Err(Error::contract("lambda grid values must be finite and non-negative"));
    }
    if grid.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::contract("lambda grid must be sorted ascending"));
    }
    let per_lambda: Vec<Vec<Point>> = grid
        .par_iter()
        .map(|&lambda| {
            let ctx = PosiContext::new(data.x(), lambda, DEFAULT_TOL)?;
            ctx.quantities(data.y())?
                .iter()
                .map(|q| {
                    let p = selective_pvalue(q, data.sigma2(), 0.0)?;
                    let ci = selective_ci(q, data.sigma2(), level)?;
                    Ok((q.selected, q.beta_hat, p, ci.lo, ci.hi))
                })
                .collect()
        })
        .collect::<Result<_>>()?;

    let changed: Vec<bool> = (0..grid.len())
        .map(|k| {
            k > 0
                && per_lambda[k]
                    .iter()
                    .zip(&per_lambda[k - 1])
                    .any(|(now, before)| now.0 != before.0)
        })
        .collect();

    let mut out = Vec::with_capacity(grid.len() * data.m());
    for (j, name) in data.names().iter().enumerate() {
        for (k, &lambda) in grid.iter().enumerate() {
            let (selected, beta_hat, p_value, ci_lo, ci_hi) = per_lambda[k][j];
            out.push(PathRecord {
                variable: name.clone(),
                index: j + 1,
                lambda,
                selected,
                beta_hat,
                p_value,
                ci_lo,
                ci_hi,
                active_set_change: changed[k],
            });
        }
    }
    Ok(out)
}

/// Grid values at which the active set changed.
pub fn active_set_changes(records: &[PathRecord]) -> Vec<f64> {
    let mut out: Vec<f64> = records
        .iter()
        .filter(|r| r.index == 1 && r.active_set_change)
        .map(|r| r.lambda)
        .collect();
    out.sort_by(f64::total_cmp);
    out
}
