//! The two-hypothesis toy model.
//!
//! Hypothesis `i` is selected when `p_i ≤ λ`. Conditionally on the selection
//! event, `p_i/λ` is uniform for a selected null and `(p_i-λ)/(1-λ)` for a
//! non-selected one. The variants below combine those adjusted p-values with
//! the two-hypothesis rules from [`crate::procedures`].

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::procedures::{fixed_sequence_fdr2, hochberg2, mabh2};
use crate::types::{IndexSet, PVector};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToyConfig {
    lambda: f64,
    alpha: f64,
}

impl ToyConfig {
    pub fn new(lambda: f64, alpha: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda < 1.0) {
            return Err(Error::contract(format!("lambda must lie in (0,1), got {lambda}")));
        }
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::contract(format!("alpha must lie in (0,1), got {alpha}")));
        }
        Ok(ToyConfig { lambda, alpha })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// `α' = α / (2λ - λ²)`, the level at which the selective improvement
    /// exhausts `α` under the global null.
    pub fn alpha_prime(&self) -> f64 {
        self.alpha / (2.0 * self.lambda - self.lambda * self.lambda)
    }

    fn check_variant(&self, variant: ToyVariant) -> Result<()> {
        if variant != ToyVariant::SelectiveImprovedFdr {
            return Ok(());
        }
        if self.lambda < 2.0 * self.alpha {
            return Err(Error::contract(format!(
                "the selective improvement needs lambda >= 2 alpha, got lambda={} alpha={}",
                self.lambda, self.alpha
            )));
        }
        let ap = self.alpha_prime();
        if !(ap > 0.0 && ap < 1.0) {
            return Err(Error::contract(format!("alpha' = {ap} is outside (0,1)")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ToyVariant {
    CondSelFwer,
    CondSelFdr,
    CondSelFcr,
    CondImprovedFdr,
    SelectiveImprovedFdr,
    Mabh,
}

impl ToyVariant {
    pub const ALL: [ToyVariant; 6] = [
        ToyVariant::CondSelFwer,
        ToyVariant::CondSelFdr,
        ToyVariant::CondSelFcr,
        ToyVariant::CondImprovedFdr,
        ToyVariant::SelectiveImprovedFdr,
        ToyVariant::Mabh,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            ToyVariant::CondSelFwer => "cond-sel-fwer",
            ToyVariant::CondSelFdr => "cond-sel-fdr",
            ToyVariant::CondSelFcr => "cond-sel-fcr",
            ToyVariant::CondImprovedFdr => "cond-improved-fdr",
            ToyVariant::SelectiveImprovedFdr => "selective-improved-fdr",
            ToyVariant::Mabh => "mabh",
        }
    }

    /// Whether the rule only ever rejects inside `S`.
    pub fn is_selective(&self) -> bool {
        matches!(
            self,
            ToyVariant::CondSelFwer
                | ToyVariant::CondSelFdr
                | ToyVariant::CondSelFcr
                | ToyVariant::SelectiveImprovedFdr
        )
    }

    /// Whether the rule's guarantee holds conditionally on every realized `S`.
    pub fn is_conditional(&self) -> bool {
        matches!(
            self,
            ToyVariant::CondSelFwer | ToyVariant::CondSelFdr | ToyVariant::CondSelFcr | ToyVariant::CondImprovedFdr
        )
    }
}

impl fmt::Display for ToyVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ToyVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.trim().to_ascii_lowercase().replace('_', "-");
        ToyVariant::ALL.into_iter().find(|v| v.name() == norm).ok_or_else(|| {
            let names: Vec<_> = ToyVariant::ALL.iter().map(|v| v.name()).collect();
            Error::contract(format!(
                "unknown toy variant '{s}'; expected one of {}",
                names.join(", ")
            ))
        })
    }
}

/// `{i : p_i ≤ λ}`.
pub fn toy_select(p: &PVector, lambda: f64) -> Result<IndexSet> {
    if p.len() != 2 {
        return Err(Error::contract(format!(
            "toy model has two hypotheses, got {}",
            p.len()
        )));
    }
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::contract(format!("lambda must lie in (0,1), got {lambda}")));
    }
    Ok(IndexSet::from_predicate(2, |i| p.get(i) <= lambda))
}

/// Selection-adjusted p-value: `p/λ` if selected, `(p-λ)/(1-λ)` otherwise.
pub fn toy_adjust(p: f64, lambda: f64, selected: bool) -> Result<f64> {
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::contract(format!("lambda must lie in (0,1), got {lambda}")));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::contract(format!("p-value {p} is outside [0,1]")));
    }
    if selected != (p <= lambda) {
        return Err(Error::contract(format!(
            "p={p} is inconsistent with selected={selected} at lambda={lambda}"
        )));
    }
    Ok(adjust(p, lambda))
}

fn adjust(p: f64, lambda: f64) -> f64 {
    if p <= lambda {
        p / lambda
    } else {
        (p - lambda) / (1.0 - lambda)
    }
}

/// Rejection set of `variant` at `(p1, p2)`.
pub fn toy_reject(p1: f64, p2: f64, cfg: &ToyConfig, variant: ToyVariant) -> Result<IndexSet> {
    let p = PVector::new(vec![p1, p2])?;
    cfg.check_variant(variant)?;
    let (lambda, alpha) = (cfg.lambda, cfg.alpha);
    let selected = toy_select(&p, lambda)?;
    let q = [adjust(p1, lambda), adjust(p2, lambda)];

    match variant {
        ToyVariant::Mabh => mabh2(p1, p2, alpha),
        ToyVariant::CondSelFwer | ToyVariant::CondSelFdr => match selected.members() {
            [] => Ok(IndexSet::empty(2)),
            [i] => Ok(if q[i - 1] <= alpha {
                IndexSet::singleton(2, *i)?
            } else {
                IndexSet::empty(2)
            }),
            _ if variant == ToyVariant::CondSelFwer => hochberg2(q[0], q[1], alpha),
            _ => mabh2(q[0], q[1], alpha),
        },
        ToyVariant::CondSelFcr => Ok(IndexSet::from_predicate(2, |i| {
            selected.contains(i) && q[i - 1] <= alpha
        })),
        ToyVariant::CondImprovedFdr => match selected.members() {
            [] | [_, _] => mabh2(q[0], q[1], alpha),
            [i] => {
                let (first, second) = (*i, 3 - *i);
                let r = fixed_sequence_fdr2(q[first - 1], q[second - 1], alpha)?;
                // position 1 of the fixed sequence is the selected hypothesis
                IndexSet::new(2, r.iter().map(|k| if k == 1 { first } else { second }))
            }
            _ => unreachable!("two hypotheses"),
        },
        ToyVariant::SelectiveImprovedFdr => Ok(selective_improved(p1, p2, lambda, alpha, cfg.alpha_prime())),
    }
}

fn selective_improved(p1: f64, p2: f64, lambda: f64, alpha: f64, alpha_prime: f64) -> IndexSet {
    // ties go to hypothesis 1
    let (small, large, p_small, p_large) = if p1 <= p2 { (1, 2, p1, p2) } else { (2, 1, p2, p1) };
    let cut = lambda * alpha_prime;
    let reject_small =
        p_small <= cut / 2.0 || (p_small <= cut && p_large <= cut) || (p_small <= cut && p_large > lambda);
    let mut rejected = Vec::with_capacity(2);
    if reject_small {
        rejected.push(small);
        if p_large <= 2.0 * alpha {
            rejected.push(large);
        }
    }
    IndexSet::new(2, rejected).expect("labels are 1 and 2")
}

/// Every p-value coordinate at which some variant's region has an edge.
/// Grid checks stay clear of these so that the closed-boundary convention
/// cannot decide a comparison.
pub fn region_thresholds(cfg: &ToyConfig) -> Vec<f64> {
    let (l, a) = (cfg.lambda, cfg.alpha);
    let ap = cfg.alpha_prime();
    let mut t = vec![l, a / 2.0, a, 2.0 * a, l * ap / 2.0, l * ap];
    for level in [a / 2.0, a, 2.0 * a] {
        t.push(l * level);
        t.push(l + (1.0 - l) * level);
    }
    t.retain(|x| (0.0..=1.0).contains(x));
    t.sort_by(f64::total_cmp);
    t.dedup();
    t
}

/// Outcome of the exhaustive grid comparison between the conditional rule
/// and its two improvements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct GridCheck {
    pub points_checked: usize,
    pub points_skipped: usize,
    /// Points where `R(cond-sel-fdr) ⊄ R(cond-improved-fdr)`.
    pub conditional_dominance_violations: usize,
    /// Points where `R(cond-sel-fdr) ⊄ R(selective-improved-fdr)`.
    pub selective_dominance_violations: usize,
    /// Hypotheses where membership in `R(cond-sel-fdr)` differs from
    /// membership in both improvements.
    pub intersection_violations: usize,
}

impl GridCheck {
    pub fn total_violations(&self) -> usize {
        self.conditional_dominance_violations + self.selective_dominance_violations + self.intersection_violations
    }
}

/// Cell midpoints `(2k+1)/(2n)` for `k = 0..n`.
pub fn grid_points(n: usize) -> impl Iterator<Item = f64> + Clone {
    (0..n).map(move |k| (2 * k + 1) as f64 / (2 * n) as f64)
}

/// Compares the conditional FDR rule with both improvements on an `n × n`
/// grid, skipping points within `margin` of any region edge.
pub fn grid_check(cfg: &ToyConfig, n: usize, margin: f64) -> Result<GridCheck> {
    let edges = region_thresholds(cfg);
    let near_edge = |x: f64| edges.iter().any(|t| (x - t).abs() <= margin);
    let mut out = GridCheck::default();
    for p1 in grid_points(n) {
        for p2 in grid_points(n) {
            if near_edge(p1) || near_edge(p2) {
                out.points_skipped += 1;
                continue;
            }
            out.points_checked += 1;
            let base = toy_reject(p1, p2, cfg, ToyVariant::CondSelFdr)?;
            let cond = toy_reject(p1, p2, cfg, ToyVariant::CondImprovedFdr)?;
            let sel = toy_reject(p1, p2, cfg, ToyVariant::SelectiveImprovedFdr)?;
            if !base.is_subset(&cond) {
                out.conditional_dominance_violations += 1;
            }
            if !base.is_subset(&sel) {
                out.selective_dominance_violations += 1;
            }
            out.intersection_violations += (1..=2)
                .filter(|&i| base.contains(i) != (cond.contains(i) && sel.contains(i)))
                .count();
        }
    }
    Ok(out)
}
