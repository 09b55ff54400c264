use nalgebra::{DMatrix, DVector};

use super::fit::lasso_fit;
use super::truncnorm::TruncationRegion;
use super::{LinearModelData, DEFAULT_TOL};
use crate::error::{Error, Result};

/// Truncation bounds for one coefficient.
///
/// Variable `i` is in the lasso active set exactly when `beta_hat` lies
/// outside `(a, b)`. At `λ = 0` the interval collapses (`a = b`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PosiQuantities {
    /// 1-based variable index.
    pub i: usize,
    /// `η_iᵀy`, the least-squares coefficient.
    pub beta_hat: f64,
    /// `‖η_i‖² = [(XᵀX)⁻¹]_ii`.
    pub eta_norm2: f64,
    pub a: f64,
    pub b: f64,
    pub selected: bool,
}

impl PosiQuantities {
    /// Region `β̂_i` is known to lie in, given the selection outcome.
    pub fn region(&self) -> TruncationRegion {
        if self.selected {
            TruncationRegion::Outside { a: self.a, b: self.b }
        } else {
            TruncationRegion::Inside { a: self.a, b: self.b }
        }
    }

    /// Standard deviation of `β̂_i` under noise variance `sigma2`.
    pub fn sd(&self, sigma2: f64) -> f64 {
        (sigma2 * self.eta_norm2).sqrt()
    }
}

/// Everything about a design and penalty that does not depend on `y`.
#[derive(Debug, Clone)]
pub struct PosiContext {
    x: DMatrix<f64>,
    lambda: f64,
    tol: f64,
    eta: Vec<DVector<f64>>,
    eta_norm2: Vec<f64>,
    x_minus: Vec<DMatrix<f64>>,
}

impl PosiContext {
    pub fn new(x: &DMatrix<f64>, lambda: f64, tol: f64) -> Result<Self> {
        if !(lambda >= 0.0 && lambda.is_finite()) {
            return Err(Error::contract(format!(
                "lambda must be finite and non-negative, got {lambda}"
            )));
        }
        let m = x.ncols();
        let gram_inv = x
            .tr_mul(x)
            .cholesky()
            .ok_or_else(|| Error::contract("design does not have full column rank"))?
            .inverse();
        let eta: Vec<DVector<f64>> = (0..m).map(|k| x * gram_inv.column(k)).collect();
        let eta_norm2 = eta.iter().map(|e| e.norm_squared()).collect();
        let x_minus = (0..m).map(|k| x.clone().remove_column(k)).collect();
        Ok(PosiContext {
            x: x.clone(),
            lambda,
            tol,
            eta,
            eta_norm2,
            x_minus,
        })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Lasso fit of `y` on the full design.
    pub fn fit(&self, y: &DVector<f64>) -> Result<DVector<f64>> {
        lasso_fit(&self.x, y, self.lambda, self.tol)
    }

    /// Bounds for variable `k` (0-based), given whether it was selected.
    fn one(&self, y: &DVector<f64>, k: usize, selected: bool) -> Result<PosiQuantities> {
        let eta = &self.eta[k];
        let en = self.eta_norm2[k];
        let beta_hat = eta.dot(y);
        let v = y - eta * (beta_hat / en);
        let rest = lasso_fit(&self.x_minus[k], &v, self.lambda, self.tol)?;
        let r = &self.x_minus[k] * rest - v;
        let xr = self.x.column(k).dot(&r);
        Ok(PosiQuantities {
            i: k + 1,
            beta_hat,
            eta_norm2: en,
            a: en * (xr - self.lambda),
            b: en * (xr + self.lambda),
            selected,
        })
    }

    /// Quantities for every variable at response `y`.
    pub fn quantities(&self, y: &DVector<f64>) -> Result<Vec<PosiQuantities>> {
        if y.len() != self.x.nrows() {
            return Err(Error::contract("response length does not match the design"));
        }
        let full = self.fit(y)?;
        (0..self.x.ncols()).map(|k| self.one(y, k, full[k] != 0.0)).collect()
    }
}

/// Truncation bounds for variable `i` (1-based) of `data` at penalty `λ`.
pub fn posi_quantities(data: &LinearModelData, lambda: f64, i: usize) -> Result<PosiQuantities> {
    if i == 0 || i > data.m() {
        return Err(Error::contract(format!("variable {i} is outside 1..={}", data.m())));
    }
    let ctx = PosiContext::new(data.x(), lambda, DEFAULT_TOL)?;
    let full = ctx.fit(data.y())?;
    ctx.one(data.y(), i - 1, full[i - 1] != 0.0)
}

/// [`posi_quantities`] for every variable, sharing one full-design fit.
pub fn posi_all(data: &LinearModelData, lambda: f64) -> Result<Vec<PosiQuantities>> {
    PosiContext::new(data.x(), lambda, DEFAULT_TOL)?.quantities(data.y())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngStream;

    fn data(x: DMatrix<f64>, y: Vec<f64>) -> LinearModelData {
        LinearModelData::new(x, DVector::from_vec(y), 1.0).unwrap()
    }

    #[test]
    fn orthogonal_design_gives_symmetric_bounds() {
        let d = data(DMatrix::identity(2, 2), vec![1.7, -0.3]);
        let q = posi_quantities(&d, 1.0, 1).unwrap();
        assert!((q.a + 1.0).abs() < 1e-12 && (q.b - 1.0).abs() < 1e-12);
        assert_eq!(q.eta_norm2, 1.0);
        assert_eq!(q.beta_hat, 1.7);
        assert!(q.selected);
        let q = posi_quantities(&d, 1.0, 2).unwrap();
        assert!(!q.selected);
        assert!(q.a < q.beta_hat && q.beta_hat < q.b);
    }

    #[test]
    fn rank_deficient_design_is_rejected() {
        let x = DMatrix::from_row_slice(3, 2, &[1.0, 2.0, 2.0, 4.0, 3.0, 6.0]);
        let d = data(x, vec![1.0, 0.0, 1.0]);
        assert!(matches!(posi_quantities(&d, 0.1, 1), Err(Error::ContractViolation(_))));
    }

    #[test]
    fn bounds_do_not_depend_on_noise_level() {
        let mut s = RngStream::new(3, 0);
        let x = DMatrix::from_fn(10, 3, |_, _| s.standard_normal());
        let y: Vec<f64> = (0..10).map(|_| s.standard_normal()).collect();
        let d = data(x, y);
        let a = posi_all(&d, 0.5).unwrap();
        let b = posi_all(&d.with_sigma2(2.0).unwrap(), 0.5).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn selection_matches_truncation_region() {
        let mut s = RngStream::new(4, 0);
        let mut checked = 0;
        for k in 0..1000 {
            let (n, m) = if k % 2 == 0 { (2, 2) } else { (3, 3) };
            let x = DMatrix::from_fn(n, m, |_, _| s.standard_normal());
            let y: Vec<f64> = (0..n).map(|_| s.normal(0.0, 2.0)).collect();
            let d = data(x, y);
            let lambda = 0.05 + 2.0 * s.uniform01();
            let Ok(all) = posi_all(&d, lambda) else { continue };
            for q in all {
                assert!(q.a <= q.b);
                let outside = q.beta_hat <= q.a || q.beta_hat >= q.b;
                assert_eq!(q.selected, outside, "instance {k}: {q:?}");
                checked += 1;
            }
        }
        assert!(checked > 2000);
    }
}
