use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Upper bound on coordinate-descent sweeps.
pub const MAX_SWEEPS: usize = 100_000;

/// `sign(z) · max(|z| - λ, 0)`.
pub fn soft_threshold(z: f64, lambda: f64) -> f64 {
    if z > lambda {
        z - lambda
    } else if z < -lambda {
        z + lambda
    } else {
        0.0
    }
}

/// Largest violation of the lasso optimality conditions at `beta`:
/// `|X_jᵀr| ≤ λ` for zero coefficients, `X_jᵀr = λ sign(β_j)` otherwise,
/// with `r = y - Xβ`.
pub fn kkt_violation(x: &DMatrix<f64>, y: &DVector<f64>, beta: &DVector<f64>, lambda: f64) -> f64 {
    let r = y - x * beta;
    let g = x.tr_mul(&r);
    g.iter()
        .zip(beta.iter())
        .map(|(&gj, &bj)| {
            if bj == 0.0 {
                (gj.abs() - lambda).max(0.0)
            } else {
                (gj - lambda * bj.signum()).abs()
            }
        })
        .fold(0.0, f64::max)
}

/// Minimizes `½‖y - Xβ‖² + λ‖β‖₁` by cyclic coordinate descent from zero.
///
/// A sweep ends the search once the largest coefficient change is below
/// `tol·(1 + ‖β‖∞)` and the optimality conditions hold to `tol`.
pub fn lasso_fit(x: &DMatrix<f64>, y: &DVector<f64>, lambda: f64, tol: f64) -> Result<DVector<f64>> {
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(Error::contract(format!(
            "lambda must be finite and non-negative, got {lambda}"
        )));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::contract(format!("tolerance must be positive, got {tol}")));
    }
    if x.nrows() != y.len() {
        return Err(Error::contract("design rows and response length differ"));
    }
    let m = x.ncols();
    let mut beta = DVector::zeros(m);
    if m == 0 {
        return Ok(beta);
    }
    let norms: Vec<f64> = x.column_iter().map(|c| c.norm_squared()).collect();
    let mut resid = y.clone();
    let mut last_kkt = f64::INFINITY;
    for _ in 0..MAX_SWEEPS {
        let mut max_change: f64 = 0.0;
        for j in 0..m {
            if norms[j] == 0.0 {
                continue;
            }
            let col = x.column(j);
            let old = beta[j];
            let rho = col.dot(&resid) + norms[j] * old;
            let new = soft_threshold(rho, lambda) / norms[j];
            if new != old {
                resid.axpy(old - new, &col, 1.0);
                beta[j] = new;
                max_change = max_change.max((new - old).abs());
            }
        }
        if max_change < tol * (1.0 + beta.amax()) {
            // the running residual drifts; certify against a fresh one
            resid = y - x * &beta;
            last_kkt = kkt_violation(x, y, &beta, lambda);
            if last_kkt <= tol {
                return Ok(beta);
            }
        }
    }
    Err(Error::Numerical(format!(
        "lasso coordinate descent did not converge in {MAX_SWEEPS} sweeps \
         (lambda={lambda}, tol={tol}, last KKT violation {last_kkt:e})"
    )))
}
