//! Standard normal distribution: CDF, survival, quantile and log-space tail
//! probabilities.
//!
//! Everything is built on the complementary error function so that far tails
//! keep their relative accuracy. The log-space helpers stay finite far beyond
//! the point where `Φ(z)` itself underflows, which the truncated-normal code in
//! [`crate::lasso`] depends on.

use std::f64::consts::{FRAC_1_SQRT_2, LN_2, PI, SQRT_2};

use libm::{erf, erfc};
use statrs::function::erf::erfc_inv;

use crate::error::{Error, Result};

/// Below this point `log Φ` switches to the asymptotic series.
const LOG_CDF_ASYMPTOTIC: f64 = -30.0;

/// Standard normal density.
pub fn normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * PI).sqrt()
}

/// `Φ(x)`.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x * FRAC_1_SQRT_2)
}

/// `1 - Φ(x)`, accurate in the upper tail.
pub fn normal_sf(x: f64) -> f64 {
    0.5 * erfc(x * FRAC_1_SQRT_2)
}

/// `log Φ(x)`; finite for every finite `x`.
pub fn log_normal_cdf(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    if x > 5.0 {
        return (-normal_sf(x)).ln_1p();
    }
    if x >= LOG_CDF_ASYMPTOTIC {
        return normal_cdf(x).ln();
    }
    // Φ(x) = φ(x)/|x| · (1 - 1/x² + 3/x⁴ - 15/x⁶ + ...)
    let x2 = x * x;
    let mut term = 1.0;
    let mut series = 1.0;
    for k in 1..12 {
        term *= -((2 * k - 1) as f64) / x2;
        series += term;
    }
    -0.5 * x2 - (-x).ln() - 0.5 * (2.0 * PI).ln() + series.ln()
}

/// `log(1 - Φ(x))`.
pub fn log_normal_sf(x: f64) -> f64 {
    log_normal_cdf(-x)
}

/// `log P(lo < Z ≤ hi)` for standard normal `Z`, without cancellation when
/// both endpoints sit in the same tail or straddle zero closely.
pub fn log_normal_interval(lo: f64, hi: f64) -> f64 {
    if lo.is_nan() || hi.is_nan() {
        return f64::NAN;
    }
    if lo >= hi {
        return f64::NEG_INFINITY;
    }
    if lo >= 0.0 {
        // upper tail: Q(lo) - Q(hi)
        let a = log_normal_sf(lo);
        let b = log_normal_sf(hi);
        a + log1m_exp(b - a)
    } else if hi <= 0.0 {
        let a = log_normal_cdf(hi);
        let b = log_normal_cdf(lo);
        a + log1m_exp(b - a)
    } else {
        // straddles zero: (Φ(hi) - ½) + (½ - Φ(lo)), both terms non-negative
        let p = 0.5 * (erf(hi * FRAC_1_SQRT_2) + erf(-lo * FRAC_1_SQRT_2));
        p.ln()
    }
}

/// `log(1 - exp(x))` for `x ≤ 0`.
pub(crate) fn log1m_exp(x: f64) -> f64 {
    if x > -LN_2 {
        (-x.exp_m1()).ln()
    } else {
        (-x.exp()).ln_1p()
    }
}

/// `log(exp(a) + exp(b))`.
pub(crate) fn log_add_exp(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if hi == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    hi + (lo - hi).exp().ln_1p()
}

/// `Φ⁻¹(p)` for `p ∈ (0, 1)`.
///
/// `p = 0` or `p = 1` would be `∓∞` and is reported as a contract violation.
pub fn normal_quantile(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::contract(format!(
            "normal quantile needs p in (0,1), got {p}; the result would be unbounded"
        )));
    }
    Ok(quantile_unchecked(p))
}

pub(crate) fn quantile_unchecked(p: f64) -> f64 {
    let mut x = -SQRT_2 * erfc_inv(2.0 * p);
    // Halley steps against whichever tail carries the precision.
    for _ in 0..2 {
        let pdf = normal_pdf(x);
        if !(pdf > 0.0 && x.is_finite()) {
            break;
        }
        let err = if x < 0.0 {
            normal_cdf(x) - p
        } else {
            (1.0 - p) - normal_sf(x)
        };
        let t = err / pdf;
        x -= t / (1.0 + 0.5 * x * t);
    }
    x
}

/// Upper critical value `z` with `1 - Φ(z) = alpha`.
pub fn upper_critical(alpha: f64) -> Result<f64> {
    Ok(-normal_quantile(alpha)?)
}
