//! Inference for single lasso coefficients, conditional on whether the
//! variable was selected.
//!
//! The objective is `½‖y - Xβ‖² + λ‖β‖₁` with no `1/n` factor. Under that
//! convention variable `i` is selected exactly when `β̂_i = η_iᵀy` falls
//! outside an interval `(a_i, b_i)` that depends on `y` only through the
//! component orthogonal to `η_i`. Conditional on that component, `β̂_i` is a
//! normal variable truncated to the selection (or non-selection) region, and
//! p-values and confidence intervals follow from its CDF.

mod data;
mod fit;
mod inference;
mod path;
mod posi;
mod truncnorm;

pub use data::{load_regression_data, LambdaScale, LoadOptions};
pub use fit::{kkt_violation, lasso_fit, soft_threshold, MAX_SWEEPS};
pub use inference::{selective_ci, selective_pvalue, Interval};
pub use path::{active_set_changes, lambda_path, PathRecord};
pub use posi::{posi_all, posi_quantities, PosiContext, PosiQuantities};
pub use truncnorm::{truncnorm_cdf, truncnorm_sf, TruncatedNormalSpec, TruncationRegion};

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Tolerance used when a caller does not pick one.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Fixed-design linear model `y = Xβ + ε` with known noise variance.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearModelData {
    x: DMatrix<f64>,
    y: DVector<f64>,
    sigma2: f64,
    names: Vec<String>,
}

impl LinearModelData {
    pub fn new(x: DMatrix<f64>, y: DVector<f64>, sigma2: f64) -> Result<Self> {
        let names = (1..=x.ncols()).map(|j| format!("x{j}")).collect();
        Self::with_names(x, y, sigma2, names)
    }

    pub fn with_names(x: DMatrix<f64>, y: DVector<f64>, sigma2: f64, names: Vec<String>) -> Result<Self> {
        if x.nrows() != y.len() {
            return Err(Error::contract(format!(
                "design has {} rows but response has {} entries",
                x.nrows(),
                y.len()
            )));
        }
        if x.ncols() == 0 {
            return Err(Error::contract("design has no columns"));
        }
        if x.ncols() > x.nrows() {
            return Err(Error::contract(format!(
                "design has more columns ({}) than rows ({})",
                x.ncols(),
                x.nrows()
            )));
        }
        if names.len() != x.ncols() {
            return Err(Error::contract("one name per design column is required"));
        }
        if !(sigma2.is_finite() && sigma2 > 0.0) {
            return Err(Error::contract(format!(
                "noise variance must be positive, got {sigma2}"
            )));
        }
        if x.iter().chain(y.iter()).any(|v| !v.is_finite()) {
            return Err(Error::contract("design and response must be finite"));
        }
        Ok(LinearModelData { x, y, sigma2, names })
    }

    pub fn x(&self) -> &DMatrix<f64> {
        &self.x
    }

    pub fn y(&self) -> &DVector<f64> {
        &self.y
    }

    pub fn sigma2(&self) -> f64 {
        self.sigma2
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn n(&self) -> usize {
        self.x.nrows()
    }

    pub fn m(&self) -> usize {
        self.x.ncols()
    }

    /// Same design and noise level with a different response.
    pub fn with_response(&self, y: DVector<f64>) -> Result<Self> {
        Self::with_names(self.x.clone(), y, self.sigma2, self.names.clone())
    }

    pub fn with_sigma2(&self, sigma2: f64) -> Result<Self> {
        Self::with_names(self.x.clone(), self.y.clone(), sigma2, self.names.clone())
    }
}
