use super::{simulate, Cell, ErrorRateEstimate, ExperimentConfig, Mean, SuiteReport, Table, Violation};
use crate::error::Result;
use crate::normal::normal_sf;
use crate::rates::error_value;
use crate::toy::{grid_check, toy_reject, toy_select, GridCheck, ToyConfig, ToyVariant};
use crate::types::{ErrorRateKind, IndexSet, PVector, TruthMask};

/// Selection threshold, alternative shift and grid resolution for the toy
/// suite. The level comes from the experiment config.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToyParams {
    pub lambda: f64,
    pub shift: f64,
    pub grid_n: usize,
    pub grid_margin: f64,
}

impl Default for ToyParams {
    fn default() -> Self {
        ToyParams {
            lambda: 0.7,
            shift: 3.0,
            grid_n: 400,
            grid_margin: 1e-9,
        }
    }
}

/// The rate each variant is designed to control.
pub fn controlled_rate(variant: ToyVariant) -> ErrorRateKind {
    match variant {
        ToyVariant::CondSelFwer => ErrorRateKind::Fwer,
        ToyVariant::CondSelFcr => ErrorRateKind::FcrStyle,
        _ => ErrorRateKind::Fdr,
    }
}

/// `None` stands for the unconditional rate.
#[derive(Debug, Clone, PartialEq)]
pub struct ToyRow {
    pub variant: ToyVariant,
    pub nulls: IndexSet,
    pub event: Option<IndexSet>,
    pub rate: ErrorRateKind,
    pub estimate: ErrorRateEstimate,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ToyReport {
    pub rows: Vec<ToyRow>,
    pub grid: GridCheck,
    pub violations: Vec<Violation>,
}

impl ToyReport {
    pub fn get(&self, variant: ToyVariant, nulls: &IndexSet, event: Option<&IndexSet>) -> Option<&ErrorRateEstimate> {
        self.rows
            .iter()
            .find(|r| r.variant == variant && &r.nulls == nulls && r.event.as_ref() == event)
            .map(|r| &r.estimate)
    }
}

impl SuiteReport for ToyReport {
    fn table(&self) -> Table {
        let mut t = Table::new(&["variant", "nulls", "event", "rate", "value", "mc_se", "count"]);
        for r in &self.rows {
            let event = match &r.event {
                None => "all".to_string(),
                Some(s) => format!("S={s}"),
            };
            t.push(vec![
                Cell::from(r.variant.name()),
                r.nulls.to_string().into(),
                event.into(),
                r.rate.label().into(),
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

/// Subsets of `{1,2}` in the order `{}`, `{1}`, `{2}`, `{1,2}`.
fn subsets() -> [IndexSet; 4] {
    [
        IndexSet::empty(2),
        IndexSet::singleton(2, 1).expect("1 ∈ {1,2}"),
        IndexSet::singleton(2, 2).expect("2 ∈ {1,2}"),
        IndexSet::full(2),
    ]
}

fn subset_slot(s: &IndexSet) -> usize {
    s.contains(1) as usize + 2 * s.contains(2) as usize
}

// [truth][variant][event], event 0 is unconditional and 1 + slot otherwise
type Grid = [[[Mean; 5]; 6]; 4];

struct Acc {
    means: Box<Grid>,
    violations: Vec<Violation>,
}

/// Error rates of every toy variant under each of the four truth
/// configurations, unconditionally and given each realized selection, plus
/// the exhaustive grid comparison of the conditional rule with its
/// improvements. Null p-values are uniform; false nulls get
/// `1 - Φ(Z + shift)`. Each replicate asserts that both improvements reject
/// everything the conditional FDR rule rejects.
pub fn run_toy_suite(cfg: &ExperimentConfig, params: &ToyParams) -> Result<ToyReport> {
    let toy = ToyConfig::new(params.lambda, cfg.alpha)?;
    let truths = subsets();
    let masks: Vec<TruthMask> = truths
        .iter()
        .map(|n| TruthMask::new(vec![n.contains(1), n.contains(2)]))
        .collect();
    let shift = params.shift;

    let acc = simulate(
        cfg,
        || Acc {
            means: Box::new([[[Mean::default(); 5]; 6]; 4]),
            violations: Vec::new(),
        },
        |acc, r, s| {
            let u = [s.uniform_open01(), s.uniform_open01()];
            let alt = [
                normal_sf(s.standard_normal() + shift),
                normal_sf(s.standard_normal() + shift),
            ];
            for (t, mask) in masks.iter().enumerate() {
                let p = [0, 1].map(|i| if mask.is_null(i + 1) { u[i] } else { alt[i] });
                let selected = toy_select(&PVector::new(p.to_vec())?, toy.lambda())?;
                let event = 1 + subset_slot(&selected);
                let mut sets = Vec::with_capacity(6);
                for (v, variant) in ToyVariant::ALL.into_iter().enumerate() {
                    let rejected = toy_reject(p[0], p[1], &toy, variant)?;
                    let e = error_value(controlled_rate(variant), &rejected, &selected, mask)?;
                    acc.means[t][v][0].push(e);
                    acc.means[t][v][event].push(e);
                    sets.push(rejected);
                }
                let (base, cond, sel) = (&sets[1], &sets[3], &sets[4]);
                if !base.is_subset(cond) || !base.is_subset(sel) {
                    acc.violations.push(Violation::at(
                        r,
                        format!(
                            "p=({}, {}): cond-sel-fdr rejected {base}, improvements {cond} and {sel}",
                            p[0], p[1]
                        ),
                    ));
                }
            }
            Ok(())
        },
        |total, part| {
            for (a, b) in total
                .means
                .iter_mut()
                .flatten()
                .flatten()
                .zip(part.means.iter().flatten().flatten())
            {
                a.merge(b);
            }
            total.violations.extend(part.violations);
        },
    )?;

    let mut rows = Vec::new();
    for (t, nulls) in truths.iter().enumerate() {
        for (v, variant) in ToyVariant::ALL.into_iter().enumerate() {
            let rate = controlled_rate(variant);
            rows.push(ToyRow {
                variant,
                nulls: nulls.clone(),
                event: None,
                rate,
                estimate: acc.means[t][v][0].estimate(),
            });
            if variant.is_conditional() {
                for (k, event) in truths.iter().enumerate() {
                    rows.push(ToyRow {
                        variant,
                        nulls: nulls.clone(),
                        event: Some(event.clone()),
                        rate,
                        estimate: acc.means[t][v][1 + k].estimate(),
                    });
                }
            }
        }
    }

    let grid = grid_check(&toy, params.grid_n, params.grid_margin)?;
    let mut violations = acc.violations;
    if grid.total_violations() > 0 {
        violations.push(Violation {
            replicate: None,
            message: format!("grid check failed: {grid:?}"),
        });
    }
    Ok(ToyReport { rows, grid, violations })
}
