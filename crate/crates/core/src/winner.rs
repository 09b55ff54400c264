//! Conditioning on the winner: only the hypothesis with the smallest p-value
//! is selected.
//!
//! Given `S = {i}`, a null `p_i / min_{j≠i} p_j` is uniform, and so is
//! `(p_j - p_i)/(1 - p_i)` for every other null `j`. Procedures A and B use
//! these adjusted p-values; C and D are unconditional comparators.

use std::fmt;

use crate::error::{Error, Result};
use crate::procedures::bh_raw;
use crate::types::{IndexSet, PVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WinnerProcedure {
    A,
    B,
    C,
    D,
}

impl WinnerProcedure {
    pub const ALL: [WinnerProcedure; 4] = [
        WinnerProcedure::A,
        WinnerProcedure::B,
        WinnerProcedure::C,
        WinnerProcedure::D,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            WinnerProcedure::A => "A",
            WinnerProcedure::B => "B",
            WinnerProcedure::C => "C",
            WinnerProcedure::D => "D",
        }
    }
}

impl fmt::Display for WinnerProcedure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WinnerResult {
    pub winner: usize,
    /// `p_winner / min_{j≠winner} p_j`.
    pub adjusted_p_winner: f64,
    pub rejected: IndexSet,
    pub procedure: WinnerProcedure,
}

fn check(p: &PVector, alpha: f64) -> Result<()> {
    if p.len() < 2 {
        return Err(Error::contract(format!(
            "conditioning on the winner needs at least two hypotheses, got {}",
            p.len()
        )));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::contract(format!("alpha must lie in (0,1), got {alpha}")));
    }
    Ok(())
}

/// Index of the smallest p-value; the lowest index wins ties.
pub fn winner_select(p: &PVector) -> Result<usize> {
    if p.len() < 2 {
        return Err(Error::contract(format!(
            "conditioning on the winner needs at least two hypotheses, got {}",
            p.len()
        )));
    }
    let mut best = 0;
    for (k, &v) in p.as_slice().iter().enumerate().skip(1) {
        if v < p.as_slice()[best] {
            best = k;
        }
    }
    Ok(best + 1)
}

/// `p_i / min_{j≠i} p_j` for the winner `i`.
///
/// When the runner-up also has p-value zero the ratio is `0/0` and is taken
/// to be `0`.
pub fn winner_adjust_selected(p: &PVector, i: usize) -> Result<f64> {
    if i == 0 || i > p.len() {
        return Err(Error::contract(format!("index {i} is outside 1..={}", p.len())));
    }
    let pi = p.get(i);
    let runner_up = (1..=p.len())
        .filter(|&j| j != i)
        .map(|j| p.get(j))
        .fold(f64::INFINITY, f64::min);
    if runner_up.is_infinite() {
        return Err(Error::contract(
            "conditioning on the winner needs at least two hypotheses",
        ));
    }
    if pi > runner_up {
        return Err(Error::contract(format!(
            "hypothesis {i} (p={pi}) is not the winner; another p-value is {runner_up}"
        )));
    }
    if runner_up == 0.0 {
        return Ok(0.0);
    }
    Ok(pi / runner_up)
}

/// `(p_j - p_i)/(1 - p_i)` for a non-selected `j`.
pub fn winner_adjust_nonselected(p_j: f64, p_i: f64) -> Result<f64> {
    if p_j < p_i {
        return Err(Error::contract(format!(
            "non-selected p-value {p_j} is below the winner's {p_i}"
        )));
    }
    if p_i >= 1.0 {
        return Err(Error::degenerate(
            "winner has p-value 1; the non-selected adjustment is 0/0",
        ));
    }
    Ok(((p_j - p_i) / (1.0 - p_i)).clamp(0.0, 1.0))
}

/// Rejects the winner when its adjusted p-value is at most `α`.
pub fn procedure_a(p: &PVector, alpha: f64) -> Result<WinnerResult> {
    check(p, alpha)?;
    let winner = winner_select(p)?;
    let adjusted = winner_adjust_selected(p, winner)?;
    let rejected = if adjusted <= alpha {
        IndexSet::singleton(p.len(), winner)?
    } else {
        IndexSet::empty(p.len())
    };
    Ok(WinnerResult {
        winner,
        adjusted_p_winner: adjusted,
        rejected,
        procedure: WinnerProcedure::A,
    })
}

/// Procedure A, continued (when it rejects) by BH at level `nα/(n-1)` on the
/// adjusted p-values of the other `n-1` hypotheses.
pub fn procedure_b(p: &PVector, alpha: f64) -> Result<WinnerResult> {
    check(p, alpha)?;
    let n = p.len();
    let level = n as f64 * alpha / (n - 1) as f64;
    if level >= 1.0 {
        return Err(Error::contract(format!(
            "second-stage level n·alpha/(n-1) = {level} must be below 1"
        )));
    }
    let first = procedure_a(p, alpha)?;
    if first.rejected.is_empty() {
        return Ok(WinnerResult {
            procedure: WinnerProcedure::B,
            ..first
        });
    }
    let winner = first.winner;
    let pi = p.get(winner);
    let others: Vec<usize> = (1..=n).filter(|&j| j != winner).collect();
    let adjusted = others
        .iter()
        .map(|&j| winner_adjust_nonselected(p.get(j), pi))
        .collect::<Result<Vec<f64>>>()?;
    let stage_two = bh_raw(&adjusted, level);
    let rejected = IndexSet::new(
        n,
        std::iter::once(winner).chain(stage_two.iter().map(|k| others[k - 1])),
    )?;
    Ok(WinnerResult {
        rejected,
        procedure: WinnerProcedure::B,
        ..first
    })
}

/// Per-test level `1-(1-α)^{1/n}` so that the winner's raw p-value is valid
/// under the global null.
pub fn procedure_c_threshold(n: usize, alpha: f64) -> f64 {
    -((-alpha).ln_1p() / n as f64).exp_m1()
}

/// Rejects the winner when its raw p-value is at most `1-(1-α)^{1/n}`.
pub fn procedure_c(p: &PVector, alpha: f64) -> Result<WinnerResult> {
    check(p, alpha)?;
    let winner = winner_select(p)?;
    let rejected = if p.get(winner) <= procedure_c_threshold(p.len(), alpha) {
        IndexSet::singleton(p.len(), winner)?
    } else {
        IndexSet::empty(p.len())
    };
    Ok(WinnerResult {
        winner,
        adjusted_p_winner: winner_adjust_selected(p, winner)?,
        rejected,
        procedure: WinnerProcedure::C,
    })
}

/// Plain BH on all `n` hypotheses.
pub fn procedure_d(p: &PVector, alpha: f64) -> Result<IndexSet> {
    crate::procedures::bh(p, alpha)
}

/// Rejection set of any of the four procedures.
pub fn run_procedure(procedure: WinnerProcedure, p: &PVector, alpha: f64) -> Result<IndexSet> {
    Ok(match procedure {
        WinnerProcedure::A => procedure_a(p, alpha)?.rejected,
        WinnerProcedure::B => procedure_b(p, alpha)?.rejected,
        WinnerProcedure::C => procedure_c(p, alpha)?.rejected,
        WinnerProcedure::D => procedure_d(p, alpha)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pv(v: &[f64]) -> PVector {
        PVector::new(v.to_vec()).unwrap()
    }

    fn set(n: usize, m: &[usize]) -> IndexSet {
        IndexSet::new(n, m.iter().copied()).unwrap()
    }

    #[test]
    fn select_examples() {
        assert_eq!(winner_select(&pv(&[0.5, 0.1, 0.9])).unwrap(), 2);
        assert_eq!(winner_select(&pv(&[0.2, 0.2])).unwrap(), 1);
        assert_eq!(winner_select(&pv(&[0.0, 1.0])).unwrap(), 1);
        assert!(winner_select(&pv(&[0.3])).is_err());
    }

    #[test]
    fn adjust_examples() {
        assert!((winner_adjust_selected(&pv(&[0.01, 0.5]), 1).unwrap() - 0.02).abs() < 1e-15);
        assert_eq!(winner_adjust_selected(&pv(&[0.3, 0.3, 0.9]), 1).unwrap(), 1.0);
        assert_eq!(winner_adjust_selected(&pv(&[0.0, 0.0, 0.9]), 1).unwrap(), 0.0);
        assert!(winner_adjust_selected(&pv(&[0.3, 0.1]), 1).is_err());

        let v = winner_adjust_nonselected(0.5, 0.01).unwrap();
        assert!((v - 0.49 / 0.99).abs() < 1e-15);
        assert_eq!(winner_adjust_nonselected(0.2, 0.2).unwrap(), 0.0);
        assert_eq!(winner_adjust_nonselected(1.0, 0.3).unwrap(), 1.0);
        assert!(matches!(winner_adjust_nonselected(1.0, 1.0), Err(Error::Degenerate(_))));
    }

    #[test]
    fn procedure_a_examples() {
        assert_eq!(procedure_a(&pv(&[0.01, 0.5]), 0.05).unwrap().rejected, set(2, &[1]));
        assert!(procedure_a(&pv(&[0.04, 0.05]), 0.05).unwrap().rejected.is_empty());
        assert_eq!(procedure_a(&pv(&[1e-300, 1.0]), 0.05).unwrap().rejected, set(2, &[1]));
    }

    #[test]
    fn procedure_b_examples() {
        assert_eq!(procedure_b(&pv(&[0.01, 0.5]), 0.05).unwrap().rejected, set(2, &[1]));
        assert!(procedure_b(&pv(&[0.01, 0.012]), 0.05).unwrap().rejected.is_empty());
        // second stage: adjusted (0.02903, 0.4995) against BH at level 0.075
        let r = procedure_b(&pv(&[0.001, 0.03, 0.5]), 0.05).unwrap();
        assert_eq!(r.rejected, set(3, &[1, 2]));
    }

    #[test]
    fn procedure_c_examples() {
        let t = procedure_c_threshold(2, 0.05);
        assert!((t - 0.025320565519103).abs() < 1e-12);
        assert_eq!(procedure_c(&pv(&[0.01, 0.5]), 0.05).unwrap().rejected, set(2, &[1]));
        assert!(procedure_c(&pv(&[0.03, 0.5]), 0.05).unwrap().rejected.is_empty());
        assert!(procedure_c(&pv(&[1e-3, 0.5]), 1e-9).unwrap().rejected.is_empty());
    }

    #[test]
    fn procedure_d_examples() {
        assert_eq!(procedure_d(&pv(&[0.01, 0.02, 0.5, 0.6]), 0.05).unwrap().len(), 2);
        assert!(procedure_d(&pv(&[1.0, 1.0]), 0.05).unwrap().is_empty());
        assert_eq!(procedure_d(&pv(&[0.02, 0.9]), 0.05).unwrap(), set(2, &[1]));
    }

    #[test]
    fn thresholds_with_pinned_losers() {
        // p_2..p_n = 1: A uses α, C uses 1-(1-α)^{1/n}, D uses α/n
        let n = 10;
        let alpha = 0.05;
        let c_cut = procedure_c_threshold(n, alpha);
        let with_first = |p1: f64| {
            let mut v = vec![1.0; n];
            v[0] = p1;
            pv(&v)
        };
        for (p1, a, c, d) in [
            (alpha, true, false, false),
            (alpha + 1e-12, false, false, false),
            (c_cut, true, true, false),
            (c_cut + 1e-12, true, false, false),
            (alpha / n as f64, true, true, true),
            (alpha / n as f64 + 1e-12, true, true, false),
        ] {
            let p = with_first(p1);
            assert_eq!(!procedure_a(&p, alpha).unwrap().rejected.is_empty(), a, "A at {p1}");
            assert_eq!(!procedure_c(&p, alpha).unwrap().rejected.is_empty(), c, "C at {p1}");
            assert_eq!(!procedure_d(&p, alpha).unwrap().is_empty(), d, "D at {p1}");
        }
    }

    proptest! {
        #[test]
        fn b_contains_a(p in proptest::collection::vec(0.0f64..=1.0, 2..30), alpha in 0.001f64..0.3) {
            let p = pv(&p);
            let a = procedure_a(&p, alpha).unwrap();
            let b = procedure_b(&p, alpha).unwrap();
            prop_assert!(a.rejected.is_subset(&b.rejected));
            prop_assert!(a.rejected.is_subset(&IndexSet::singleton(p.len(), a.winner).unwrap()));
            if !b.rejected.is_empty() {
                prop_assert!(b.rejected.contains(b.winner));
            }
        }

        #[test]
        fn adjusted_values_lie_in_unit_interval(p in proptest::collection::vec(0.0f64..=1.0, 2..10)) {
            let p = pv(&p);
            let w = winner_select(&p).unwrap();
            let a = winner_adjust_selected(&p, w).unwrap();
            prop_assert!((0.0..=1.0).contains(&a));
        }
    }
}
