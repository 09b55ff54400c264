use nalgebra::{DMatrix, DVector};

use super::{simulate, Cell, ErrorRateEstimate, ExperimentConfig, Mean, SuiteReport, Table, Violation};
use crate::error::{Error, Result};
use crate::lasso::{selective_pvalue, PosiContext, DEFAULT_TOL};

/// Two unit-norm predictors with correlation `rho`, mean `μ = Xβ` and
/// intervals at confidence `level`. The error rate `α` of the experiment
/// config is ignored; the intervals use `1 - level`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LiuParams {
    pub rho: f64,
    pub beta: [f64; 2],
    pub sigma2: f64,
    pub lambda: f64,
    pub level: f64,
}

impl Default for LiuParams {
    fn default() -> Self {
        LiuParams {
            rho: 0.95,
            beta: [5.0, 5.0],
            sigma2: 1.0,
            lambda: 0.2,
            level: 0.9,
        }
    }
}

impl LiuParams {
    /// Columns `(√((1+ρ)/2), ∓√((1-ρ)/2))`.
    pub fn design(&self) -> DMatrix<f64> {
        let c = ((1.0 + self.rho) / 2.0).sqrt();
        let d = ((1.0 - self.rho) / 2.0).sqrt();
        DMatrix::from_row_slice(2, 2, &[c, c, -d, d])
    }
}

const NAMES: [&str; 13] = [
    "P(S={1})",
    "P(S={2})",
    "P(S={i})",
    "P(S={1,2})",
    "P(S={})",
    "coverage|S={i}",
    "coverage|S={1,2}",
    "coverage_1|1 in S",
    "coverage_2|2 in S",
    "fcr",
    "simultaneous_coverage_adjusted",
    "simultaneous_coverage_adjusted|S={1,2}",
    "truncation_consistency",
];

/// Named estimates in a fixed order; see [`LiuReport::get`].
#[derive(Debug, Clone, PartialEq)]
pub struct LiuReport {
    pub estimates: Vec<(&'static str, ErrorRateEstimate)>,
    pub violations: Vec<Violation>,
}

impl LiuReport {
    /// Estimate by name. Names are
    /// `P(S={1})`, `P(S={2})`, `P(S={i})` (the two pooled), `P(S={1,2})`,
    /// `P(S={})`, `coverage|S={i}`, `coverage|S={1,2}`, `coverage_1|1 in S`,
    /// `coverage_2|2 in S`, `fcr`, `simultaneous_coverage_adjusted` and
    /// `simultaneous_coverage_adjusted|S={1,2}`.
    pub fn get(&self, name: &str) -> Option<&ErrorRateEstimate> {
        self.estimates.iter().find(|(n, _)| *n == name).map(|(_, e)| e)
    }
}

impl SuiteReport for LiuReport {
    fn table(&self) -> Table {
        let mut t = Table::new(&["estimate", "value", "mc_se", "count"]);
        for (name, e) in &self.estimates {
            t.push(vec![
                Cell::from(*name),
                e.value.into(),
                e.mc_se.into(),
                e.replicates.into(),
            ]);
        }
        t
    }

    fn violations(&self) -> &[Violation] {
        &self.violations
    }
}

struct Acc {
    means: [Mean; 12],
    consistent: Mean,
    violations: Vec<Violation>,
}

/// Coverage and FCR of the selective intervals after lasso selection with
/// two correlated predictors.
///
/// An interval at level `1 - a` covers `β_i` exactly when the selective
/// p-value at `β_i` exceeds `a`, so coverage is read off p-values rather than
/// computed intervals. The simultaneous rate uses level `1 - α/|S|` for each
/// selected interval and counts an empty selection as covered.
pub fn run_liu_example(cfg: &ExperimentConfig, params: &LiuParams) -> Result<LiuReport> {
    let p = *params;
    if !(p.rho > -1.0 && p.rho < 1.0) {
        return Err(Error::contract(format!("rho must lie in (-1,1), got {}", p.rho)));
    }
    if !(p.level > 0.0 && p.level < 1.0)
        || p.sigma2.is_nan()
        || p.sigma2 <= 0.0
        || !p.beta.iter().all(|b| b.is_finite())
    {
        return Err(Error::contract(
            "level must lie in (0,1), sigma2 must be positive, beta finite",
        ));
    }
    let x = p.design();
    let ctx = PosiContext::new(&x, p.lambda, DEFAULT_TOL)?;
    let mu = &x * DVector::from_row_slice(&p.beta);
    let sd = p.sigma2.sqrt();
    let a = 1.0 - p.level;

    let acc = simulate(
        cfg,
        || Acc {
            means: [Mean::default(); 12],
            consistent: Mean::default(),
            violations: Vec::new(),
        },
        |acc, r, s| {
            let y = DVector::from_fn(2, |i, _| mu[i] + sd * s.standard_normal());
            let qs = ctx.quantities(&y)?;
            let mut pv = [f64::NAN; 2];
            for (i, q) in qs.iter().enumerate() {
                let outside = q.beta_hat <= q.a || q.beta_hat >= q.b;
                let ok = outside == q.selected;
                acc.consistent.push_bool(ok);
                if !ok {
                    acc.violations.push(Violation::at(
                        r,
                        format!("variable {}: selection disagrees with bounds {q:?}", i + 1),
                    ));
                }
                if q.selected {
                    pv[i] = selective_pvalue(q, p.sigma2, p.beta[i])?;
                }
            }
            let sel = [qs[0].selected, qs[1].selected];
            let size = sel.iter().filter(|&&b| b).count();
            let m = &mut acc.means;
            m[0].push_bool(sel == [true, false]);
            m[1].push_bool(sel == [false, true]);
            m[2].push(if size == 1 { 0.5 } else { 0.0 });
            m[3].push_bool(size == 2);
            m[4].push_bool(size == 0);
            let covered = |i: usize, a: f64| pv[i] > a;
            match size {
                1 => {
                    let i = if sel[0] { 0 } else { 1 };
                    m[5].push_bool(covered(i, a));
                }
                2 => m[6].push(0.5 * (covered(0, a) as u8 + covered(1, a) as u8) as f64),
                _ => {}
            }
            for i in 0..2 {
                if sel[i] {
                    m[7 + i].push_bool(covered(i, a));
                }
            }
            let missed = (0..2).filter(|&i| sel[i] && !covered(i, a)).count();
            m[9].push(missed as f64 / size.max(1) as f64);
            let adj = a / size.max(1) as f64;
            let all_covered = (0..2).all(|i| !sel[i] || covered(i, adj));
            m[10].push_bool(all_covered);
            if size == 2 {
                m[11].push_bool(all_covered);
            }
            Ok(())
        },
        |total, part| {
            for (t, q) in total.means.iter_mut().zip(&part.means) {
                t.merge(q);
            }
            total.consistent.merge(&part.consistent);
            total.violations.extend(part.violations);
        },
    )?;
    let mut estimates: Vec<(&'static str, ErrorRateEstimate)> = NAMES[..12]
        .iter()
        .zip(&acc.means)
        .map(|(n, m)| (*n, m.estimate()))
        .collect();
    estimates.push((NAMES[12], acc.consistent.estimate()));
    Ok(LiuReport {
        estimates,
        violations: acc.violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn design_has_unit_columns_and_correlation_rho() {
        let x = LiuParams::default().design();
        for c in x.column_iter() {
            assert!((c.norm() - 1.0).abs() < 1e-15);
        }
        assert!((x.column(0).dot(&x.column(1)) - 0.95).abs() < 1e-15);
        let mu = &x * DVector::from_row_slice(&[5.0, 5.0]);
        assert!((mu[0] - 5.0 * 2.0 * 0.975f64.sqrt()).abs() < 1e-12 && mu[1].abs() < 1e-15);
    }

    #[test]
    fn small_run_is_coherent() {
        let cfg = ExperimentConfig::new(2, 20_000, 0.1).unwrap();
        let rep = run_liu_example(&cfg, &LiuParams::default()).unwrap();
        assert!(rep.violations.is_empty());
        let g = |n: &str| rep.get(n).unwrap().value;
        let total = g("P(S={1})") + g("P(S={2})") + g("P(S={1,2})") + g("P(S={})");
        assert!((total - 1.0).abs() < 1e-12);
        assert!((g("P(S={i})") - 0.0609).abs() < 0.01);
        assert!((g("coverage_1|1 in S") - 0.9).abs() < 0.02);
        assert!(g("fcr") > 0.1);
    }
}
