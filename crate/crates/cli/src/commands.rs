use std::fmt;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use selinfer::datasplit::{
    q_values, solve_alpha_prime, split_conditional_reject, split_select, split_unconditional_reject, SplitPValues,
};
use selinfer::lasso::{lambda_path, load_regression_data, LambdaScale, LoadOptions};
use selinfer::simlab::{
    format_real, run_datasplit_suite, run_directional_suite, run_liu_example, run_toy_suite, run_winner_experiment,
    Cell, DatasplitParams, DirectionalParams, ExperimentConfig, LiuParams, SuiteReport, Table, ToyParams, Violation,
    WinnerParams,
};
use selinfer::toy::{grid_points, toy_reject, ToyConfig, ToyVariant};
use selinfer::winner::{run_procedure, winner_adjust_selected, winner_select, WinnerProcedure};
use selinfer::{Error, PVector};

use crate::{CalibrateArgs, DatasplitArgs, LassoArgs, ProcedureArg, ScaleArg, SimArgs, SuiteArg, ToyArgs, WinnerArgs};

/// Failure modes of a command, each with its own exit status.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Assertion(String),
    Data(String),
    Other(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Assertion(_) => 3,
            CliError::Data(_) => 4,
            CliError::Other(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Assertion(m) | CliError::Data(m) | CliError::Other(m) => f.write_str(m),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::ContractViolation(_) => CliError::Usage(e.to_string()),
            Error::Input { .. } | Error::Io(_) => CliError::Data(e.to_string()),
            _ => CliError::Other(e.to_string()),
        }
    }
}

fn io_error(path: &Path, e: io::Error) -> CliError {
    CliError::Data(format!("{}: {e}", path.display()))
}

/// Writes `table` to `out`, or to stdout when no file is given.
fn emit(table: &Table, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => {
            let file = File::create(path).map_err(|e| io_error(path, e))?;
            let mut w = BufWriter::new(file);
            table.write_csv(&mut w)?;
            w.flush().map_err(|e| io_error(path, e))
        }
        None => {
            let mut w = io::stdout().lock();
            table.write_csv(&mut w)?;
            w.flush().map_err(|e| CliError::Other(e.to_string()))
        }
    }
}

fn pvector(values: &[f64], flag: &str) -> Result<PVector, CliError> {
    PVector::new(values.to_vec()).map_err(|e| CliError::Usage(format!("--{flag}: {e}")))
}

fn unit_interval(value: f64, flag: &str) -> Result<(), CliError> {
    if value > 0.0 && value < 1.0 {
        Ok(())
    } else {
        Err(CliError::Usage(format!("--{flag} must lie in (0,1), got {value}")))
    }
}

pub fn toy(a: ToyArgs) -> Result<(), CliError> {
    let cfg = ToyConfig::new(a.lambda, a.alpha)?;
    if let Some(n) = a.grid {
        if n == 0 {
            return Err(CliError::Usage("--grid must be at least 1".into()));
        }
        let mut table = Table::new(&["p1", "p2", "variant", "rejected_set"]);
        for p1 in grid_points(n) {
            for p2 in grid_points(n) {
                for v in ToyVariant::ALL {
                    let r = toy_reject(p1, p2, &cfg, v)?;
                    table.push(vec![p1.into(), p2.into(), v.name().into(), r.to_string().into()]);
                }
            }
        }
        return emit(&table, a.out.as_deref());
    }
    let (Some(p1), Some(p2), Some(variant)) = (a.p1, a.p2, a.variant) else {
        return Err(CliError::Usage("--p1, --p2 and --variant are required together".into()));
    };
    let r = toy_reject(p1, p2, &cfg, variant)?;
    println!("R={r}");
    Ok(())
}

pub fn winner(a: WinnerArgs) -> Result<(), CliError> {
    let p = pvector(&a.p, "p")?;
    unit_interval(a.alpha, "alpha")?;
    if p.len() < 2 {
        return Err(CliError::Usage("--p needs at least two p-values".into()));
    }
    let single = match a.procedure {
        ProcedureArg::A => Some(WinnerProcedure::A),
        ProcedureArg::B => Some(WinnerProcedure::B),
        ProcedureArg::C => Some(WinnerProcedure::C),
        ProcedureArg::D => Some(WinnerProcedure::D),
        ProcedureArg::All => None,
    };
    match single {
        Some(proc) => println!("R={}", run_procedure(proc, &p, a.alpha)?),
        None => {
            let w = winner_select(&p)?;
            println!("winner={w} adjusted_p={}", format_real(winner_adjust_selected(&p, w)?));
            for proc in WinnerProcedure::ALL {
                println!("{proc}: R={}", run_procedure(proc, &p, a.alpha)?);
            }
        }
    }
    Ok(())
}

pub fn datasplit(a: DatasplitArgs) -> Result<(), CliError> {
    let p1 = pvector(&a.p1, "p1")?;
    let p2 = pvector(&a.p2, "p2")?;
    unit_interval(a.lambda, "lambda")?;
    unit_interval(a.alpha, "alpha")?;
    let sp = SplitPValues::new(p1, p2)?;
    let s = split_select(&sp, a.lambda)?;
    let conditional = split_conditional_reject(&sp, &s, a.alpha)?;
    let q = q_values(&sp, a.lambda)?;
    let unconditional = split_unconditional_reject(&q, a.alpha)?;
    let qs: Vec<String> = q.as_slice().iter().map(|&v| format_real(v)).collect();
    println!("S={s}");
    println!("R={conditional}");
    println!("Q={}", qs.join(","));
    println!("R'={unconditional}");
    Ok(())
}

fn lambda_grid(a: &LassoArgs) -> Result<Vec<f64>, CliError> {
    if let Some(l) = a.lambda {
        if !(l.is_finite() && l >= 0.0) {
            return Err(CliError::Usage(format!(
                "--lambda must be finite and non-negative, got {l}"
            )));
        }
        return Ok(vec![l]);
    }
    let path = a.path.as_deref().unwrap_or_default();
    let [lo, hi, steps] = path else {
        return Err(CliError::Usage("--path takes LMIN LMAX STEPS".into()));
    };
    let (lo, hi, steps) = (*lo, *hi, *steps);
    if !(lo.is_finite() && hi.is_finite() && lo >= 0.0 && hi >= lo) {
        return Err(CliError::Usage(format!(
            "--path needs 0 <= LMIN <= LMAX, got {lo} {hi}"
        )));
    }
    if !(steps >= 1.0 && steps.fract() == 0.0 && steps <= 1e6) {
        return Err(CliError::Usage(format!(
            "--path STEPS must be a positive integer, got {steps}"
        )));
    }
    let steps = steps as usize;
    if steps == 1 {
        return Ok(vec![lo]);
    }
    let width = (hi - lo) / (steps - 1) as f64;
    Ok((0..steps)
        .map(|k| if k + 1 == steps { hi } else { lo + k as f64 * width })
        .collect())
}

pub fn lasso(a: LassoArgs) -> Result<(), CliError> {
    let grid = lambda_grid(&a)?;
    unit_interval(a.level, "level")?;
    if let Some(s) = a.sigma2 {
        if !(s.is_finite() && s > 0.0) {
            return Err(CliError::Usage(format!("--sigma2 must be positive, got {s}")));
        }
    }
    let mut options = LoadOptions::new(a.response.clone());
    options.standardize = !a.no_standardize;
    options.sigma2 = a.sigma2;
    let data = load_regression_data(&a.data, &options).map_err(|e| CliError::Data(e.to_string()))?;

    let scale = match a.scale {
        ScaleArg::Glmnet => LambdaScale::Glmnet,
        ScaleArg::Objective => LambdaScale::Objective,
    };
    let objective: Vec<f64> = grid.iter().map(|&l| scale.to_objective(l, &data)).collect();
    let records = lambda_path(&data, &objective, a.level)?;

    let mut table = Table::new(&[
        "variable",
        "lambda",
        "selected",
        "beta_hat",
        "p_value",
        "ci_lo",
        "ci_hi",
        "active_set_change",
    ]);
    for (k, r) in records.iter().enumerate() {
        table.push(vec![
            r.variable.as_str().into(),
            grid[k % grid.len()].into(),
            r.selected.into(),
            r.beta_hat.into(),
            r.p_value.into(),
            r.ci_lo.into(),
            r.ci_hi.into(),
            r.active_set_change.into(),
        ]);
    }
    emit(&table, a.out.as_deref())?;
    if a.out.is_some() && grid.len() == 1 {
        let selected = records.iter().filter(|r| r.selected).count();
        println!("selected {selected} of {} variables", data.m());
    }
    Ok(())
}

fn set<T: Copy>(slot: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *slot = v;
    }
}

fn reject_flags(a: &SimArgs, flags: &[(&str, bool)]) -> Result<(), CliError> {
    let name = match a.suite {
        SuiteArg::Winner => "winner",
        SuiteArg::LiuExample => "liu-example",
        SuiteArg::Toy => "toy",
        SuiteArg::Datasplit => "datasplit",
        SuiteArg::Directional => "directional",
    };
    match flags.iter().find(|(_, given)| *given) {
        Some((flag, _)) => Err(CliError::Usage(format!("--{flag} does not apply to suite {name}"))),
        None => Ok(()),
    }
}

/// Human-readable lines: label columns, then `value ± mc_se`.
fn summary(table: &Table) -> Vec<String> {
    let Some(se) = table.columns.iter().position(|c| c == "mc_se") else {
        return Vec::new();
    };
    let text = |c: &Cell| match c {
        Cell::Text(s) => s.clone(),
        Cell::Int(i) => i.to_string(),
        Cell::Real(x) => format!("{x}"),
        Cell::Empty => String::new(),
    };
    table
        .rows
        .iter()
        .map(|row| {
            let labels: Vec<String> = table.columns[..se - 1]
                .iter()
                .zip(&row[..se - 1])
                .filter(|(_, c)| !matches!(c, Cell::Empty))
                .map(|(name, c)| format!("{name}={}", text(c)))
                .collect();
            let value = match row[se - 1] {
                Cell::Real(x) => format!("{x:.6}"),
                ref c => text(c),
            };
            let err = match row[se] {
                Cell::Real(x) => format!("{x:.6}"),
                ref c => text(c),
            };
            format!("{}  {value} ± {err}", labels.join(" "))
        })
        .collect()
}

fn check_violations(violations: &[Violation]) -> Result<(), CliError> {
    if violations.is_empty() {
        return Ok(());
    }
    const SHOWN: usize = 100;
    let mut replicates: Vec<u64> = violations.iter().filter_map(|v| v.replicate).collect();
    replicates.sort_unstable();
    replicates.dedup();
    for v in violations.iter().filter(|v| v.replicate.is_none()) {
        eprintln!("assertion failed: {}", v.message);
    }
    for v in violations.iter().filter(|v| v.replicate.is_some()).take(SHOWN) {
        eprintln!("assertion failed: {}", v.message);
    }
    let listed: Vec<String> = replicates.iter().take(SHOWN).map(u64::to_string).collect();
    let more = replicates.len().saturating_sub(SHOWN);
    let tail = if more > 0 {
        format!(" (and {more} more)")
    } else {
        String::new()
    };
    Err(CliError::Assertion(format!(
        "{} assertion failure(s); offending replicates: [{}]{tail}",
        violations.len(),
        listed.join(", ")
    )))
}

pub fn sim(a: SimArgs) -> Result<(), CliError> {
    let (default_reps, default_alpha) = match a.suite {
        SuiteArg::Winner => (10_000, 0.05),
        SuiteArg::LiuExample => (1_000_000, 0.1),
        SuiteArg::Toy => (100_000, 0.3),
        SuiteArg::Datasplit | SuiteArg::Directional => (100_000, 0.05),
    };
    let cfg = ExperimentConfig::new(a.seed, a.reps.unwrap_or(default_reps), a.alpha.unwrap_or(default_alpha))?;

    let report: Box<dyn SuiteReport> = match a.suite {
        SuiteArg::Winner => {
            reject_flags(
                &a,
                &[
                    ("lambda", a.lambda.is_some()),
                    ("delta", a.delta.is_some()),
                    ("grid", a.grid.is_some()),
                ],
            )?;
            let mut p = WinnerParams::default();
            set(&mut p.n, a.n);
            set(&mut p.shift, a.shift);
            set(&mut p.max_alternatives, a.alternatives);
            Box::new(run_winner_experiment(&cfg, &p)?)
        }
        SuiteArg::LiuExample => {
            reject_flags(
                &a,
                &[
                    ("shift", a.shift.is_some()),
                    ("n", a.n.is_some()),
                    ("alternatives", a.alternatives.is_some()),
                    ("delta", a.delta.is_some()),
                    ("grid", a.grid.is_some()),
                ],
            )?;
            let mut p = LiuParams::default();
            set(&mut p.lambda, a.lambda);
            p.level = 1.0 - cfg.alpha;
            Box::new(run_liu_example(&cfg, &p)?)
        }
        SuiteArg::Toy => {
            reject_flags(
                &a,
                &[
                    ("n", a.n.is_some()),
                    ("alternatives", a.alternatives.is_some()),
                    ("delta", a.delta.is_some()),
                ],
            )?;
            let mut p = ToyParams::default();
            set(&mut p.lambda, a.lambda);
            set(&mut p.shift, a.shift);
            set(&mut p.grid_n, a.grid);
            Box::new(run_toy_suite(&cfg, &p)?)
        }
        SuiteArg::Datasplit => {
            reject_flags(&a, &[("delta", a.delta.is_some()), ("grid", a.grid.is_some())])?;
            let mut p = DatasplitParams::default();
            set(&mut p.n, a.n);
            set(&mut p.lambda, a.lambda);
            set(&mut p.alternatives, a.alternatives);
            set(&mut p.shift, a.shift);
            Box::new(run_datasplit_suite(&cfg, &p)?)
        }
        SuiteArg::Directional => {
            reject_flags(
                &a,
                &[
                    ("shift", a.shift.is_some()),
                    ("n", a.n.is_some()),
                    ("alternatives", a.alternatives.is_some()),
                    ("lambda", a.lambda.is_some()),
                    ("grid", a.grid.is_some()),
                ],
            )?;
            let mut p = DirectionalParams::default();
            set(&mut p.delta, a.delta);
            Box::new(run_directional_suite(&cfg, &p)?)
        }
    };

    let table = report.table();
    emit(&table, a.out.as_deref())?;
    let lines = summary(&table);
    if a.out.is_some() {
        lines.iter().for_each(|l| println!("{l}"));
    } else {
        lines.iter().for_each(|l| eprintln!("{l}"));
    }
    check_violations(report.violations())
}

pub fn calibrate(a: CalibrateArgs) -> Result<(), CliError> {
    let value = solve_alpha_prime(a.alpha, a.delta)?;
    println!("{value:.6}");
    Ok(())
}
