//! Deterministic Monte Carlo experiments.
//!
//! Replicate `r` of an experiment draws from `RngStream::new(seed, r)`.
//! Replicates are processed in fixed-size chunks on the rayon pool and the
//! per-chunk accumulators are merged in chunk order, so results are
//! bit-identical whatever the number of threads.

mod datasplit;
mod directional;
mod liu;
mod table;
mod toy;
mod winner;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::rng::RngStream;

pub use datasplit::{run_datasplit_suite, DatasplitParams, DatasplitReport, DatasplitRow};
pub use directional::{run_directional_suite, DirectionalParams, DirectionalReport, DirectionalRow};
pub use liu::{run_liu_example, LiuParams, LiuReport};
pub use table::{format_real, Cell, Table};
pub use toy::{run_toy_suite, ToyParams, ToyReport, ToyRow};
pub use winner::{run_winner_experiment, WinnerParams, WinnerReport, WinnerRow};

const CHUNK: u64 = 4096;

/// Settings shared by every experiment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub replicates: u64,
    pub alpha: f64,
}

impl ExperimentConfig {
    pub fn new(seed: u64, replicates: u64, alpha: f64) -> Result<Self> {
        let cfg = ExperimentConfig {
            seed,
            replicates,
            alpha,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub(crate) fn validate(&self) -> Result<()> {
        if self.replicates == 0 {
            return Err(Error::contract("at least one replicate is required"));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::contract(format!("alpha must lie in (0,1), got {}", self.alpha)));
        }
        Ok(())
    }
}

/// A Monte Carlo mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorRateEstimate {
    pub value: f64,
    /// Sample standard deviation over `√replicates`.
    pub mc_se: f64,
    /// Number of observations averaged, which for conditional estimates is
    /// the number of replicates where the event occurred.
    pub replicates: u64,
}

impl ErrorRateEstimate {
    /// `value ≤ bound + k·mc_se`.
    pub fn at_most(&self, bound: f64, k: f64) -> bool {
        self.value <= bound + k * self.mc_se
    }

    /// `|value - target| ≤ k·mc_se`.
    pub fn within(&self, target: f64, k: f64) -> bool {
        (self.value - target).abs() <= k * self.mc_se
    }
}

/// Running count, sum and sum of squares.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Mean {
    n: u64,
    sum: f64,
    sumsq: f64,
}

impl Mean {
    pub fn push(&mut self, x: f64) {
        self.n += 1;
        self.sum += x;
        self.sumsq += x * x;
    }

    pub fn push_bool(&mut self, b: bool) {
        self.push(if b { 1.0 } else { 0.0 });
    }

    pub fn merge(&mut self, other: &Mean) {
        self.n += other.n;
        self.sum += other.sum;
        self.sumsq += other.sumsq;
    }

    pub fn count(&self) -> u64 {
        self.n
    }

    pub fn estimate(&self) -> ErrorRateEstimate {
        let n = self.n as f64;
        let value = if self.n == 0 { f64::NAN } else { self.sum / n };
        let mc_se = if self.n < 2 {
            f64::NAN
        } else {
            let var = ((self.sumsq - self.sum * value) / (n - 1.0)).max(0.0);
            (var / n).sqrt()
        };
        ErrorRateEstimate {
            value,
            mc_se,
            replicates: self.n,
        }
    }
}

/// A per-replicate assertion that failed, or a failed exhaustive check when
/// `replicate` is `None`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub replicate: Option<u64>,
    pub message: String,
}

impl Violation {
    pub(crate) fn at(replicate: u64, message: impl Into<String>) -> Self {
        Violation {
            replicate: Some(replicate),
            message: message.into(),
        }
    }
}

/// Common surface of the suite reports.
pub trait SuiteReport {
    fn table(&self) -> Table;
    fn violations(&self) -> &[Violation];
}

/// Runs `step` once per replicate and folds the results.
///
/// `step` receives the replicate index and that replicate's stream. Chunk
/// accumulators are merged left to right in replicate order.
pub(crate) fn simulate<A, I, S, M>(cfg: &ExperimentConfig, init: I, step: S, merge: M) -> Result<A>
where
    A: Send,
    I: Fn() -> A + Sync,
    S: Fn(&mut A, u64, &mut RngStream) -> Result<()> + Sync,
    M: Fn(&mut A, A),
{
    cfg.validate()?;
    let chunks = cfg.replicates.div_ceil(CHUNK);
    let parts: Vec<A> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut acc = init();
            for r in c * CHUNK..((c + 1) * CHUNK).min(cfg.replicates) {
                let mut stream = RngStream::new(cfg.seed, r);
                step(&mut acc, r, &mut stream)?;
            }
            Ok(acc)
        })
        .collect::<Result<_>>()?;
    let mut total = init();
    for part in parts {
        merge(&mut total, part);
    }
    Ok(total)
}
