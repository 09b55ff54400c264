//! Data splitting: one independent p-value per hypothesis drives selection,
//! a second one drives inference.
//!
//! Also the directional two-hypothesis example where closed testing at a
//! calibrated level `α' > α` uniformly improves on the conditional rule.

use crate::error::{Error, Result};
use crate::normal::{normal_cdf, upper_critical};
use crate::procedures::bonferroni;
use crate::types::{IndexSet, PVector};

fn check_unit_open(name: &str, x: f64) -> Result<()> {
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::contract(format!("{name} must lie in (0,1), got {x}")));
    }
    Ok(())
}

/// Selection-half and inference-half p-values for the same `n` hypotheses.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitPValues {
    p1: PVector,
    p2: PVector,
}

impl SplitPValues {
    pub fn new(p1: PVector, p2: PVector) -> Result<Self> {
        if p1.len() != p2.len() {
            return Err(Error::contract(format!(
                "split p-value halves differ in length ({} vs {})",
                p1.len(),
                p2.len()
            )));
        }
        Ok(SplitPValues { p1, p2 })
    }

    pub fn len(&self) -> usize {
        self.p1.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p1.is_empty()
    }

    pub fn selection(&self) -> &PVector {
        &self.p1
    }

    pub fn inference(&self) -> &PVector {
        &self.p2
    }
}

/// `{i : P_{1,i} ≤ λ}`.
pub fn split_select(sp: &SplitPValues, lambda: f64) -> Result<IndexSet> {
    check_unit_open("lambda", lambda)?;
    Ok(IndexSet::from_predicate(sp.len(), |i| sp.p1.get(i) <= lambda))
}

/// Conditional Bonferroni: `{i ∈ S : P_{2,i} ≤ α/|S|}`.
pub fn split_conditional_reject(sp: &SplitPValues, selected: &IndexSet, alpha: f64) -> Result<IndexSet> {
    check_unit_open("alpha", alpha)?;
    if selected.universe_size() != sp.len() {
        return Err(Error::contract(format!(
            "selected set lives in a universe of size {}, expected {}",
            selected.universe_size(),
            sp.len()
        )));
    }
    if selected.is_empty() {
        return Ok(IndexSet::empty(sp.len()));
    }
    let threshold = alpha / selected.len() as f64;
    IndexSet::new(sp.len(), selected.iter().filter(|&i| sp.p2.get(i) <= threshold))
}

/// `Q_i = λ P_{2,i}` if `P_{1,i} ≤ λ`, else `1`; a valid unconditional p-value.
pub fn q_values(sp: &SplitPValues, lambda: f64) -> Result<PVector> {
    check_unit_open("lambda", lambda)?;
    let q = sp
        .p1
        .as_slice()
        .iter()
        .zip(sp.p2.as_slice())
        .map(|(&a, &b)| if a <= lambda { lambda * b } else { 1.0 })
        .collect();
    PVector::new(q)
}

/// Bonferroni on the Q-values: `{i : Q_i ≤ α/n}`.
pub fn split_unconditional_reject(q: &PVector, alpha: f64) -> Result<IndexSet> {
    bonferroni(q, alpha)
}

/// Fisher combination of two independent p-values: the chi-square(4)
/// survival function at `-2 ln(p_a p_b)`, i.e. `p_a p_b (1 - ln(p_a p_b))`.
pub fn fisher_combine(p_a: f64, p_b: f64) -> Result<f64> {
    for p in [p_a, p_b] {
        if !(p > 0.0 && p <= 1.0) {
            if p == 0.0 {
                return Err(Error::degenerate("Fisher combination of a zero p-value"));
            }
            return Err(Error::contract(format!("p-value {p} is outside (0,1]")));
        }
    }
    let log_prod = p_a.ln() + p_b.ln();
    Ok((log_prod.exp() * (1.0 - log_prod)).min(1.0))
}

/// Parameters of the directional example, with the calibrated level solved
/// once at construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirectionalConfig {
    delta: f64,
    alpha: f64,
    alpha_prime: f64,
    z_alpha: f64,
    z_alpha_prime: f64,
}

impl DirectionalConfig {
    pub fn new(delta: f64, alpha: f64) -> Result<Self> {
        if !(delta.is_finite() && delta >= 0.0) {
            return Err(Error::contract(format!(
                "delta must be finite and non-negative, got {delta}"
            )));
        }
        check_unit_open("alpha", alpha)?;
        let alpha_prime = solve_alpha_prime(alpha, delta)?;
        Ok(DirectionalConfig {
            delta,
            alpha,
            alpha_prime,
            z_alpha: upper_critical(alpha)?,
            z_alpha_prime: upper_critical(alpha_prime)?,
        })
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn alpha_prime(&self) -> f64 {
        self.alpha_prime
    }
}

/// `S = {1}` if `x1 < 0`, else `{2}`; the selected hypothesis is rejected
/// when `x2` lies beyond `δ + z` in its direction.
fn directional_at(x1: f64, x2: f64, delta: f64, z: f64) -> IndexSet {
    let cut = delta + z;
    let rejected: &[usize] = if x1 < 0.0 {
        if x2 < -cut {
            &[1]
        } else {
            &[]
        }
    } else if x2 > cut {
        &[2]
    } else {
        &[]
    };
    IndexSet::new(2, rejected.iter().copied()).expect("labels are 1 and 2")
}

/// The conditional one-sided test of the selected hypothesis at level `α`.
pub fn directional_conditional(x1: f64, x2: f64, cfg: &DirectionalConfig) -> IndexSet {
    directional_at(x1, x2, cfg.delta, cfg.z_alpha)
}

/// Closed testing with all tests at `α'`: reject `H_12` when
/// `sign(x1)·x2 > δ + z_{α'}`, which then rejects the selected hypothesis.
pub fn directional_improved(x1: f64, x2: f64, cfg: &DirectionalConfig) -> IndexSet {
    directional_at(x1, x2, cfg.delta, cfg.z_alpha_prime)
}

fn calibration_gap(alpha_prime: f64, alpha: f64, delta: f64) -> f64 {
    let z = -crate::normal::quantile_unchecked(alpha_prime);
    let phi_d = normal_cdf(delta);
    alpha_prime * phi_d + normal_cdf(-2.0 * delta - z) * (1.0 - phi_d) - alpha
}

/// Root in `[α, 1)` of `α'Φ(δ) + Φ(-2δ - z_{α'})(1 - Φ(δ)) = α`, by bisection
/// to absolute tolerance `1e-10`.
pub fn solve_alpha_prime(alpha: f64, delta: f64) -> Result<f64> {
    check_unit_open("alpha", alpha)?;
    if !(delta.is_finite() && delta >= 0.0) {
        return Err(Error::contract(format!(
            "delta must be finite and non-negative, got {delta}"
        )));
    }
    if calibration_gap(alpha, alpha, delta) >= 0.0 {
        return Ok(alpha);
    }
    let (mut lo, mut hi) = (alpha, 1.0 - f64::EPSILON);
    if calibration_gap(hi, alpha, delta) <= 0.0 {
        return Err(Error::Numerical(format!(
            "no calibrated level in [{alpha}, 1) for delta={delta}"
        )));
    }
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if calibration_gap(mid, alpha, delta) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
