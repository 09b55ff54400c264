use super::posi::PosiQuantities;
use super::truncnorm::TruncatedNormalSpec;
use crate::error::{Error, Result};

/// Confidence interval; either end may be infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn contains(&self, theta: f64) -> bool {
        self.lo <= theta && theta <= self.hi
    }

    pub fn is_bounded(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }
}

/// Endpoint searches give up, reporting an infinite endpoint, this many
/// standard deviations away from `β̂`.
const SEARCH_CAP_SD: f64 = 1e6;
const SEARCH_START_SD: f64 = 10.0;

fn spec_at(q: &PosiQuantities, sigma2: f64, mean: f64) -> Result<TruncatedNormalSpec> {
    if !(sigma2 > 0.0 && sigma2.is_finite()) {
        return Err(Error::contract(format!(
            "noise variance must be positive, got {sigma2}"
        )));
    }
    TruncatedNormalSpec::unchecked(mean, q.sd(sigma2), q.region())
}

/// Two-sided selective p-value `2 min(F, 1-F)` for `H: β_i = null_value`,
/// where `F` is the CDF of `β̂_i` truncated to its selection region.
pub fn selective_pvalue(q: &PosiQuantities, sigma2: f64, null_value: f64) -> Result<f64> {
    let spec = spec_at(q, sigma2, null_value)?;
    let (log_f, log_s) = spec.log_cdf_sf(q.beta_hat);
    if log_f.is_nan() || log_s.is_nan() {
        return Err(Error::Numerical(format!(
            "truncated-normal CDF is undefined for {q:?} at null {null_value}"
        )));
    }
    Ok((2.0 * log_f.min(log_s).exp()).min(1.0))
}

/// Finds the root of an increasing function starting at `start`, expanding
/// the bracket geometrically. Returns `±∞` when the root lies beyond
/// `start ± SEARCH_CAP_SD·scale`.
fn increasing_root(h: impl Fn(f64) -> f64, start: f64, scale: f64) -> Result<f64> {
    let at_start = h(start);
    if at_start.is_nan() {
        return Err(Error::Numerical(format!("interval search is undefined at {start}")));
    }
    let (mut lo, mut hi);
    let mut step = SEARCH_START_SD * scale;
    if at_start >= 0.0 {
        hi = start;
        loop {
            lo = start - step;
            let v = h(lo);
            if v.is_nan() {
                return Err(Error::Numerical(format!("interval search is undefined at {lo}")));
            }
            if v < 0.0 {
                break;
            }
            hi = lo;
            if step > SEARCH_CAP_SD * scale {
                return Ok(f64::NEG_INFINITY);
            }
            step *= 2.0;
        }
    } else {
        lo = start;
        loop {
            hi = start + step;
            let v = h(hi);
            if v.is_nan() {
                return Err(Error::Numerical(format!("interval search is undefined at {hi}")));
            }
            if v >= 0.0 {
                break;
            }
            lo = hi;
            if step > SEARCH_CAP_SD * scale {
                return Ok(f64::INFINITY);
            }
            step *= 2.0;
        }
    }
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || hi - lo <= 1e-13 * scale {
            break;
        }
        if h(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Equal-tailed selective confidence interval at `level`.
///
/// The lower end solves `F(β̂; θ) = 1 - α/2` and the upper end
/// `F(β̂; θ) = α/2`, using that `F` decreases in the mean `θ`.
pub fn selective_ci(q: &PosiQuantities, sigma2: f64, level: f64) -> Result<Interval> {
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::contract(format!(
            "confidence level must lie in (0,1), got {level}"
        )));
    }
    let scale = q.sd(sigma2);
    spec_at(q, sigma2, q.beta_hat)?;
    let log_half_alpha = ((1.0 - level) / 2.0).ln();
    let log_tails = |theta: f64| -> (f64, f64) {
        match spec_at(q, sigma2, theta) {
            Ok(spec) => spec.log_cdf_sf(q.beta_hat),
            Err(_) => (f64::NAN, f64::NAN),
        }
    };
    // 1 - F rises with θ; F falls with θ
    let lo = increasing_root(|t| log_tails(t).1 - log_half_alpha, q.beta_hat, scale)?;
    let hi = increasing_root(|t| log_half_alpha - log_tails(t).0, q.beta_hat, scale)?;
    Ok(Interval { lo, hi })
}
