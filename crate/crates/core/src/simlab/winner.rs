use super::{simulate, Cell, ErrorRateEstimate, ExperimentConfig, Mean, SuiteReport, Table, Violation};
use crate::error::{Error, Result};
use crate::normal::normal_sf;
use crate::types::PVector;
use crate::winner::{run_procedure, WinnerProcedure};

/// `n` one-sided normal tests; the first `k` have mean `shift`, for every
/// `k` in `0..=max_alternatives`. All `k` share the same draws.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WinnerParams {
    pub n: usize,
    pub shift: f64,
    pub max_alternatives: usize,
}

impl Default for WinnerParams {
    fn default() -> Self {
        WinnerParams {
            n: 100,
            shift: 3.0,
            max_alternatives: 10,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WinnerRow {
    pub k_alternatives: usize,
    pub procedure: WinnerProcedure,
    pub rejections: ErrorRateEstimate,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WinnerReport {
    pub rows: Vec<WinnerRow>,
    pub violations: Vec<Violation>,
}

impl WinnerReport {
    pub fn get(&self, k: usize, procedure: WinnerProcedure) -> Option<&ErrorRateEstimate> {
        self.rows
            .iter()
            .find(|r| r.k_alternatives == k && r.procedure == procedure)
            .map(|r| &r.rejections)
    }
}

impl SuiteReport for WinnerReport {
    fn table(&self) -> Table {
        let mut t = Table::new(&["k_alternatives", "procedure", "mean_rejections", "mc_se"]);
        for r in &self.rows {
            t.push(vec![
                r.k_alternatives.into(),
                Cell::from(r.procedure.label()),
                r.rejections.value.into(),
                r.rejections.mc_se.into(),
            ]);
        }
        t
    }

    fn violations(&self) -> &[Violation] {
        &self.violations
    }
}

struct Acc {
    counts: Vec<[Mean; 4]>,
    violations: Vec<Violation>,
}

/// Mean number of rejections of procedures A to D as the number of false
/// nulls grows. Alternative p-values are `1 - Φ(Z + shift)`; null p-values
/// are uniform. Each replicate asserts `|R_B| ≥ |R_A|`.
pub fn run_winner_experiment(cfg: &ExperimentConfig, params: &WinnerParams) -> Result<WinnerReport> {
    let WinnerParams {
        n,
        shift,
        max_alternatives,
    } = *params;
    if n < 2 || max_alternatives > n || !shift.is_finite() {
        return Err(Error::contract(format!(
            "need n ≥ 2, finite shift and at most n alternatives, got n={n}, shift={shift}, k≤{max_alternatives}"
        )));
    }
    let ks = max_alternatives + 1;
    let acc = simulate(
        cfg,
        || Acc {
            counts: vec![[Mean::default(); 4]; ks],
            violations: Vec::new(),
        },
        |acc, r, s| {
            let null: Vec<f64> = (0..n).map(|_| s.uniform_open01()).collect();
            let alt: Vec<f64> = (0..max_alternatives)
                .map(|_| normal_sf(s.standard_normal() + shift))
                .collect();
            for k in 0..ks {
                let p: Vec<f64> = (0..n).map(|j| if j < k { alt[j] } else { null[j] }).collect();
                let p = PVector::new(p)?;
                let mut sizes = [0usize; 4];
                for (slot, proc) in WinnerProcedure::ALL.into_iter().enumerate() {
                    sizes[slot] = run_procedure(proc, &p, cfg.alpha)?.len();
                    acc.counts[k][slot].push(sizes[slot] as f64);
                }
                if sizes[1] < sizes[0] {
                    acc.violations.push(Violation::at(
                        r,
                        format!("k={k}: procedure B rejected {} but A rejected {}", sizes[1], sizes[0]),
                    ));
                }
            }
            Ok(())
        },
        |total, part| {
            for (t, p) in total.counts.iter_mut().zip(&part.counts) {
                for (a, b) in t.iter_mut().zip(p) {
                    a.merge(b);
                }
            }
            total.violations.extend(part.violations);
        },
    )?;
    let rows = (0..ks)
        .flat_map(|k| {
            let counts = &acc.counts;
            WinnerProcedure::ALL
                .into_iter()
                .enumerate()
                .map(move |(slot, procedure)| WinnerRow {
                    k_alternatives: k,
                    procedure,
                    rejections: counts[k][slot].estimate(),
                })
        })
        .collect();
    Ok(WinnerReport {
        rows,
        violations: acc.violations,
    })
}
