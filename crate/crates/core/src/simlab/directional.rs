use super::{simulate, Cell, ErrorRateEstimate, ExperimentConfig, Mean, SuiteReport, Table, Violation};
use crate::datasplit::{directional_conditional, directional_improved, DirectionalConfig};
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirectionalParams {
    pub delta: f64,
}

impl Default for DirectionalParams {
    fn default() -> Self {
        DirectionalParams { delta: 0.5 }
    }
}

/// Means are evaluated at `μ = mu_multiple · δ`.
pub const MU_MULTIPLES: [f64; 5] = [-2.0, -1.0, 0.0, 1.0, 2.0];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirectionalRow {
    pub mu: f64,
    /// `conditional` or `improved`.
    pub procedure: &'static str,
    pub fwer: ErrorRateEstimate,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DirectionalReport {
    pub alpha_prime: f64,
    pub rows: Vec<DirectionalRow>,
    pub violations: Vec<Violation>,
}

impl DirectionalReport {
    pub fn get(&self, mu: f64, procedure: &str) -> Option<&ErrorRateEstimate> {
        self.rows
            .iter()
            .find(|r| r.mu == mu && r.procedure == procedure)
            .map(|r| &r.fwer)
    }
}

impl SuiteReport for DirectionalReport {
    fn table(&self) -> Table {
        let mut t = Table::new(&["mu", "procedure", "fwer", "mc_se", "replicates"]);
        for r in &self.rows {
            t.push(vec![
                r.mu.into(),
                Cell::from(r.procedure),
                r.fwer.value.into(),
                r.fwer.mc_se.into(),
                r.fwer.replicates.into(),
            ]);
        }
        t
    }

    fn violations(&self) -> &[Violation] {
        &self.violations
    }
}

struct Acc {
    means: [[Mean; 2]; 5],
    violations: Vec<Violation>,
}

/// FWER of the conditional directional rule and of its calibrated closed
/// testing improvement, with `X_1, X_2` independent `N(μ, 1)`.
/// `H_1: μ ≥ -δ` and `H_2: μ ≤ δ`. Each replicate asserts that the
/// improvement rejects everything the conditional rule rejects.
pub fn run_directional_suite(cfg: &ExperimentConfig, params: &DirectionalParams) -> Result<DirectionalReport> {
    let dcfg = DirectionalConfig::new(params.delta, cfg.alpha)?;
    let delta = params.delta;
    let mus = MU_MULTIPLES.map(|k| k * delta);

    let acc = simulate(
        cfg,
        || Acc {
            means: [[Mean::default(); 2]; 5],
            violations: Vec::new(),
        },
        |acc, r, s| {
            let (z1, z2) = (s.standard_normal(), s.standard_normal());
            for (k, &mu) in mus.iter().enumerate() {
                let (x1, x2) = (mu + z1, mu + z2);
                let true_null = [mu >= -delta, mu <= delta];
                let cond = directional_conditional(x1, x2, &dcfg);
                let imp = directional_improved(x1, x2, &dcfg);
                for (slot, set) in [&cond, &imp].into_iter().enumerate() {
                    acc.means[k][slot].push_bool(set.iter().any(|i| true_null[i - 1]));
                }
                if !cond.is_subset(&imp) {
                    acc.violations.push(Violation::at(
                        r,
                        format!("mu={mu}: conditional rejected {cond}, improved {imp}"),
                    ));
                }
            }
            Ok(())
        },
        |total, part| {
            for (a, b) in total.means.iter_mut().flatten().zip(part.means.iter().flatten()) {
                a.merge(b);
            }
            total.violations.extend(part.violations);
        },
    )?;

    let mut rows = Vec::new();
    for (k, &mu) in mus.iter().enumerate() {
        for (slot, procedure) in ["conditional", "improved"].into_iter().enumerate() {
            rows.push(DirectionalRow {
                mu,
                procedure,
                fwer: acc.means[k][slot].estimate(),
            });
        }
    }
    Ok(DirectionalReport {
        alpha_prime: dcfg.alpha_prime(),
        rows,
        violations: acc.violations,
    })
}
