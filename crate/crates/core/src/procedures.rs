//! Classical multiple-testing procedures and the randomized wrappers that
//! uniformly improve conditional selective procedures.
//!
//! The two-hypothesis rules ([`hochberg2`], [`mabh2`], [`fixed_sequence_fdr2`])
//! are only defined for `n = 2`; no general-`n` extension is attempted.

use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::types::{IndexSet, PVector};

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::contract(format!("alpha must lie in (0,1), got {alpha}")));
    }
    Ok(())
}

/// Bonferroni on the full family: `{i : p_i ≤ α/n}`.
pub fn bonferroni(p: &PVector, alpha: f64) -> Result<IndexSet> {
    check_alpha(alpha)?;
    let threshold = alpha / p.len() as f64;
    Ok(IndexSet::from_predicate(p.len(), |i| p.get(i) <= threshold))
}

/// Benjamini–Hochberg step-up.
///
/// Rejects the `k` smallest p-values where `k = max{i : p_(i) ≤ iα/n}`.
/// Ties are ordered by index; the rejected set does not depend on that order.
pub fn bh(p: &PVector, alpha: f64) -> Result<IndexSet> {
    check_alpha(alpha)?;
    Ok(bh_raw(p.as_slice(), alpha))
}

pub(crate) fn bh_raw(p: &[f64], alpha: f64) -> IndexSet {
    let n = p.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| p[a].total_cmp(&p[b]));
    let k = order
        .iter()
        .enumerate()
        .rev()
        .find(|&(rank, &i)| p[i] <= (rank + 1) as f64 * alpha / n as f64)
        .map_or(0, |(rank, _)| rank + 1);
    // `order[..k]` holds 0-based positions; shift to labels
    IndexSet::new(n, order[..k].iter().map(|&i| i + 1)).expect("indices are in range")
}

/// Hochberg (equivalently Hommel) for two hypotheses: both if both are at most
/// `α`, otherwise each one at most `α/2`.
pub fn hochberg2(p1: f64, p2: f64, alpha: f64) -> Result<IndexSet> {
    check_alpha(alpha)?;
    let both = p1.max(p2) <= alpha;
    Ok(IndexSet::from_predicate(2, |i| both || [p1, p2][i - 1] <= alpha / 2.0))
}

/// Minimally adaptive BH for two hypotheses.
///
/// Rejects each `H_i` with `p_i ≤ α/2`; rejects both when both are at most
/// `α`, or when the smaller is at most `α/2` and the larger at most `2α`.
pub fn mabh2(p1: f64, p2: f64, alpha: f64) -> Result<IndexSet> {
    if !(alpha > 0.0 && alpha <= 0.5) {
        return Err(Error::contract(format!("MABH needs alpha in (0, 1/2], got {alpha}")));
    }
    let (lo, hi) = (p1.min(p2), p1.max(p2));
    let both = hi <= alpha || (lo <= alpha / 2.0 && hi <= 2.0 * alpha);
    Ok(IndexSet::from_predicate(2, |i| both || [p1, p2][i - 1] <= alpha / 2.0))
}

/// Fixed-sequence FDR rule: test the first hypothesis at `α`, and only if it
/// is rejected test the second at `2α`.
pub fn fixed_sequence_fdr2(p_first: f64, p_second: f64, alpha: f64) -> Result<IndexSet> {
    if !(alpha > 0.0 && alpha <= 0.5) {
        return Err(Error::contract(format!(
            "fixed-sequence rule needs alpha in (0, 1/2], got {alpha}"
        )));
    }
    let mut rejected = Vec::with_capacity(2);
    if p_first <= alpha {
        rejected.push(1);
        if p_second <= 2.0 * alpha {
            rejected.push(2);
        }
    }
    IndexSet::new(2, rejected)
}

/// Parameters of the randomized mixture `R' = R` w.p. `q`, else `fallback`.
#[derive(Debug, Clone, PartialEq)]
pub struct MixtureImprovementConfig {
    pub q: f64,
    pub fallback: IndexSet,
}

impl MixtureImprovementConfig {
    pub fn new(q: f64, fallback: IndexSet) -> Result<Self> {
        if !(0.0..=1.0).contains(&q) {
            return Err(Error::contract(format!("mixture weight q must lie in [0,1], got {q}")));
        }
        Ok(MixtureImprovementConfig { q, fallback })
    }
}

/// Returns `rejected` with probability `q` and the (larger) fallback set
/// otherwise. The fallback is typically the selected set `S`.
pub fn mixture_improvement(
    rejected: &IndexSet,
    cfg: &MixtureImprovementConfig,
    stream: &mut RngStream,
) -> Result<IndexSet> {
    if !rejected.is_subset(&cfg.fallback) {
        return Err(Error::contract(format!(
            "mixture needs R ⊆ fallback, got R={rejected}, fallback={}",
            cfg.fallback
        )));
    }
    if stream.bernoulli(cfg.q) {
        Ok(rejected.clone())
    } else {
        Ok(cfg.fallback.clone())
    }
}

/// Mixture weight that keeps the error rate at `α` when `S` contains no true
/// hypothesis with probability at least `δ`:
/// `q = (1-α-δ) / ((1-α)(1-δ))` for `δ < 1-α`, else `0`.
pub fn prop1_q(alpha: f64, delta: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::contract(format!("delta must lie in (0,1), got {delta}")));
    }
    if delta >= 1.0 - alpha {
        return Ok(0.0);
    }
    Ok((1.0 - alpha - delta) / ((1.0 - alpha) * (1.0 - delta)))
}

/// FWER recycling: when every selected hypothesis is rejected, expand to the
/// whole universe with ancillary probability `α`.
///
/// One uniform is always consumed so the stream position does not depend on
/// the data.
pub fn fwer_recycle(
    rejected: &IndexSet,
    selected: &IndexSet,
    universe_size: usize,
    alpha: f64,
    stream: &mut RngStream,
) -> Result<IndexSet> {
    check_alpha(alpha)?;
    if !rejected.is_subset(selected) {
        return Err(Error::contract(format!(
            "recycling needs R ⊆ S, got R={rejected}, S={selected}"
        )));
    }
    if selected.universe_size() != universe_size {
        return Err(Error::contract(format!(
            "S lives in a universe of size {}, expected {universe_size}",
            selected.universe_size()
        )));
    }
    let expand = stream.bernoulli(alpha);
    if rejected == selected && expand {
        Ok(IndexSet::full(universe_size))
    } else {
        Ok(rejected.clone())
    }
}
