use super::{simulate, Cell, ErrorRateEstimate, ExperimentConfig, Mean, SuiteReport, Table, Violation};
use crate::datasplit::{q_values, split_conditional_reject, split_select, split_unconditional_reject, SplitPValues};
use crate::error::{Error, Result};
use crate::normal::normal_sf;
use crate::rates::false_rejections;
use crate::types::{PVector, TruthMask};

/// `n` hypotheses split into a selection and an inference half. The first
/// `alternatives` are false with effect `shift` in both halves.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DatasplitParams {
    pub n: usize,
    pub lambda: f64,
    pub alternatives: usize,
    pub shift: f64,
    /// Q-value validity is checked at `t = k/t_grid` for `k = 1..=t_grid`.
    pub t_grid: usize,
}

impl Default for DatasplitParams {
    fn default() -> Self {
        DatasplitParams {
            n: 20,
            lambda: 0.5,
            alternatives: 5,
            shift: 3.0,
            t_grid: 20,
        }
    }
}

/// `truth` is `global-null` or `mixed`; `t` is set only for Q-value rows.
#[derive(Debug, Clone, PartialEq)]
pub struct DatasplitRow {
    pub truth: &'static str,
    pub quantity: &'static str,
    pub t: Option<f64>,
    pub estimate: ErrorRateEstimate,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DatasplitReport {
    pub rows: Vec<DatasplitRow>,
    pub violations: Vec<Violation>,
}

impl DatasplitReport {
    /// Row by truth label and quantity, ignoring Q-value rows.
    pub fn get(&self, truth: &str, quantity: &str) -> Option<&ErrorRateEstimate> {
        self.rows
            .iter()
            .find(|r| r.truth == truth && r.quantity == quantity && r.t.is_none())
            .map(|r| &r.estimate)
    }

    /// Q-value rows `(t, P(Q_i ≤ t))` for one truth configuration.
    pub fn q_validity(&self, truth: &str) -> Vec<(f64, ErrorRateEstimate)> {
        self.rows
            .iter()
            .filter(|r| r.truth == truth)
            .filter_map(|r| r.t.map(|t| (t, r.estimate)))
            .collect()
    }
}

impl SuiteReport for DatasplitReport {
    fn table(&self) -> Table {
        let mut t = Table::new(&["truth", "quantity", "t", "value", "mc_se", "count"]);
        for r in &self.rows {
            t.push(vec![
                Cell::from(r.truth),
                Cell::from(r.quantity),
                r.t.map_or(Cell::Empty, Cell::Real),
                r.estimate.value.into(),
                r.estimate.mc_se.into(),
                r.estimate.replicates.into(),
            ]);
        }
        t
    }

    fn violations(&self) -> &[Violation] {
        &self.violations
    }
}

const QUANTITIES: [&str; 5] = [
    "fwer_conditional",
    "fwer_unconditional",
    "rejections_conditional",
    "rejections_unconditional",
    "selected",
];

struct Acc {
    // [truth][quantity], then [truth][t]
    means: [[Mean; 5]; 2],
    q: [Vec<Mean>; 2],
    violations: Vec<Violation>,
}

/// Conditional Bonferroni on the selected set against Bonferroni on the
/// Q-values, under the global null and under the mixed configuration.
///
/// Each replicate asserts that the unconditional rejections are contained
/// in the conditional ones when `|S| ≤ λn` and contain them otherwise. Null
/// Q-values are checked for validity, pooled over the null hypotheses of
/// each replicate.
pub fn run_datasplit_suite(cfg: &ExperimentConfig, params: &DatasplitParams) -> Result<DatasplitReport> {
    let DatasplitParams {
        n,
        lambda,
        alternatives,
        shift,
        t_grid,
    } = *params;
    if n == 0 || alternatives >= n || t_grid == 0 || !shift.is_finite() {
        return Err(Error::contract(format!(
            "need n ≥ 1, fewer than n alternatives, a non-empty t-grid and finite shift; got n={n}, alternatives={alternatives}, t_grid={t_grid}"
        )));
    }
    let truths = [
        ("global-null", TruthMask::all_null(n)),
        ("mixed", TruthMask::new((0..n).map(|j| j >= alternatives).collect())),
    ];
    let ts: Vec<f64> = (1..=t_grid).map(|k| k as f64 / t_grid as f64).collect();
    let budget = lambda * n as f64;

    let acc = simulate(
        cfg,
        || Acc {
            means: [[Mean::default(); 5]; 2],
            q: [vec![Mean::default(); t_grid], vec![Mean::default(); t_grid]],
            violations: Vec::new(),
        },
        |acc, r, s| {
            let u1: Vec<f64> = (0..n).map(|_| s.uniform_open01()).collect();
            let u2: Vec<f64> = (0..n).map(|_| s.uniform_open01()).collect();
            let z1: Vec<f64> = (0..alternatives)
                .map(|_| normal_sf(s.standard_normal() + shift))
                .collect();
            let z2: Vec<f64> = (0..alternatives)
                .map(|_| normal_sf(s.standard_normal() + shift))
                .collect();
            for (t, (label, mask)) in truths.iter().enumerate() {
                let pick = |u: &[f64], z: &[f64]| -> Vec<f64> {
                    (0..n).map(|j| if mask.is_null(j + 1) { u[j] } else { z[j] }).collect()
                };
                let sp = SplitPValues::new(PVector::new(pick(&u1, &z1))?, PVector::new(pick(&u2, &z2))?)?;
                let selected = split_select(&sp, lambda)?;
                let cond = split_conditional_reject(&sp, &selected, cfg.alpha)?;
                let q = q_values(&sp, lambda)?;
                let uncond = split_unconditional_reject(&q, cfg.alpha)?;

                let m = &mut acc.means[t];
                m[0].push_bool(false_rejections(&cond, mask) > 0);
                m[1].push_bool(false_rejections(&uncond, mask) > 0);
                m[2].push(cond.len() as f64);
                m[3].push(uncond.len() as f64);
                m[4].push(selected.len() as f64);

                let ok = if selected.len() as f64 <= budget {
                    uncond.is_subset(&cond)
                } else {
                    cond.is_subset(&uncond)
                };
                if !ok {
                    acc.violations.push(Violation::at(
                        r,
                        format!(
                            "{label}: |S|={}, conditional {cond}, unconditional {uncond}",
                            selected.len()
                        ),
                    ));
                }

                let nulls = mask.null_count() as f64;
                for (k, &tk) in ts.iter().enumerate() {
                    let hits = (1..=n).filter(|&i| mask.is_null(i) && q.get(i) <= tk).count();
                    acc.q[t][k].push(hits as f64 / nulls);
                }
            }
            Ok(())
        },
        |total, part| {
            for (a, b) in total.means.iter_mut().flatten().zip(part.means.iter().flatten()) {
                a.merge(b);
            }
            for (a, b) in total.q.iter_mut().flatten().zip(part.q.iter().flatten()) {
                a.merge(b);
            }
            total.violations.extend(part.violations);
        },
    )?;

    let mut rows = Vec::new();
    for (t, (label, _)) in truths.iter().enumerate() {
        for (k, quantity) in QUANTITIES.into_iter().enumerate() {
            rows.push(DatasplitRow {
                truth: label,
                quantity,
                t: None,
                estimate: acc.means[t][k].estimate(),
            });
        }
        for (k, &tk) in ts.iter().enumerate() {
            rows.push(DatasplitRow {
                truth: label,
                quantity: "null_q_at_most_t",
                t: Some(tk),
                estimate: acc.q[t][k].estimate(),
            });
        }
    }
    Ok(DatasplitReport {
        rows,
        violations: acc.violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_run() {
        let cfg = ExperimentConfig::new(4, 4000, 0.05).unwrap();
        let rep = run_datasplit_suite(&cfg, &DatasplitParams::default()).unwrap();
        assert!(rep.violations.is_empty());
        assert_eq!(rep.rows.len(), 2 * (5 + 20));
        assert!(rep.get("global-null", "fwer_unconditional").unwrap().at_most(0.05, 4.0));
        assert!(rep.get("mixed", "rejections_conditional").unwrap().value > 1.0);
        for (t, e) in rep.q_validity("global-null") {
            // P(Q ≤ t) = min(t, λ) for t < 1 under the null, and Q ≤ 1 always
            let want = if t >= 1.0 { 1.0 } else { t.min(0.5) };
            assert!((e.value - want).abs() <= 4.0 * e.mc_se + 1e-12, "t={t}: {e:?}");
        }
    }

    #[test]
    fn all_alternatives_is_rejected() {
        let cfg = ExperimentConfig::new(4, 10, 0.05).unwrap();
        let p = DatasplitParams {
            alternatives: 20,
            ..DatasplitParams::default()
        };
        assert!(run_datasplit_suite(&cfg, &p).is_err());
    }
}
