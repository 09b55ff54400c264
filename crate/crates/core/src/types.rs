//! Domain types shared by every procedure: p-value vectors, index sets over
//! the hypothesis universe, truth masks, and error-rate kinds.
//!
//! Hypotheses are numbered `1..=n` at every public boundary. Internally an
//! [`IndexSet`] stores the same 1-based labels in sorted order.

use std::fmt;

use crate::error::{Error, Result};

/// An ordered, fixed-length collection of p-values in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PVector(Vec<f64>);

impl PVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::contract("p-value vector must be non-empty"));
        }
        if let Some((i, p)) = values
            .iter()
            .enumerate()
            .find(|(_, p)| !(p.is_finite() && (0.0..=1.0).contains(*p)))
        {
            return Err(Error::contract(format!(
                "p-value {} (index {}) is outside [0, 1]",
                p,
                i + 1
            )));
        }
        Ok(PVector(values))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    /// The p-value of hypothesis `index` (1-based).
    pub fn get(&self, index: usize) -> f64 {
        self.0[index - 1]
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl AsRef<[f64]> for PVector {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

impl TryFrom<Vec<f64>> for PVector {
    type Error = Error;

    fn try_from(values: Vec<f64>) -> Result<Self> {
        PVector::new(values)
    }
}

/// A subset of the universe `{1..n}`: a selection `S`, a rejection set `R`,
/// the true nulls, or the universe itself.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IndexSet {
    members: Vec<usize>,
    universe_size: usize,
}

impl IndexSet {
    /// Builds a set from arbitrary 1-based labels; duplicates are removed.
    pub fn new(universe_size: usize, members: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut members: Vec<usize> = members.into_iter().collect();
        if let Some(&bad) = members.iter().find(|&&m| m == 0 || m > universe_size) {
            return Err(Error::contract(format!(
                "index {bad} is outside the universe 1..={universe_size}"
            )));
        }
        members.sort_unstable();
        members.dedup();
        Ok(IndexSet { members, universe_size })
    }

    pub fn empty(universe_size: usize) -> Self {
        IndexSet {
            members: Vec::new(),
            universe_size,
        }
    }

    pub fn full(universe_size: usize) -> Self {
        IndexSet {
            members: (1..=universe_size).collect(),
            universe_size,
        }
    }

    pub fn singleton(universe_size: usize, index: usize) -> Result<Self> {
        IndexSet::new(universe_size, [index])
    }

    /// Collects the 1-based labels of every position where `pred` holds.
    pub fn from_predicate(universe_size: usize, mut pred: impl FnMut(usize) -> bool) -> Self {
        IndexSet {
            members: (1..=universe_size).filter(|&i| pred(i)).collect(),
            universe_size,
        }
    }

    pub fn universe_size(&self) -> usize {
        self.universe_size
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.members.len() == self.universe_size
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().copied()
    }

    pub fn contains(&self, index: usize) -> bool {
        self.members.binary_search(&index).is_ok()
    }

    pub fn is_subset(&self, other: &IndexSet) -> bool {
        self.universe_size == other.universe_size && self.iter().all(|i| other.contains(i))
    }

    pub fn union(&self, other: &IndexSet) -> Result<IndexSet> {
        self.check_same_universe(other)?;
        IndexSet::new(self.universe_size, self.iter().chain(other.iter()))
    }

    pub fn intersection(&self, other: &IndexSet) -> Result<IndexSet> {
        self.check_same_universe(other)?;
        Ok(IndexSet {
            members: self.iter().filter(|&i| other.contains(i)).collect(),
            universe_size: self.universe_size,
        })
    }

    fn check_same_universe(&self, other: &IndexSet) -> Result<()> {
        if self.universe_size != other.universe_size {
            return Err(Error::contract(format!(
                "universe sizes differ ({} vs {})",
                self.universe_size, other.universe_size
            )));
        }
        Ok(())
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, m) in self.members.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{m}")?;
        }
        f.write_str("}")
    }
}

/// Which hypotheses are true (null) under the data-generating distribution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruthMask {
    is_null: Vec<bool>,
}

impl TruthMask {
    pub fn new(is_null: Vec<bool>) -> Self {
        TruthMask { is_null }
    }

    pub fn all_null(n: usize) -> Self {
        TruthMask::new(vec![true; n])
    }

    /// Marks the listed 1-based indices as null, everything else as false.
    pub fn from_nulls(n: usize, nulls: &[usize]) -> Result<Self> {
        let set = IndexSet::new(n, nulls.iter().copied())?;
        Ok(TruthMask::new((1..=n).map(|i| set.contains(i)).collect()))
    }

    pub fn len(&self) -> usize {
        self.is_null.len()
    }

    pub fn is_empty(&self) -> bool {
        self.is_null.is_empty()
    }

    pub fn is_null(&self, index: usize) -> bool {
        self.is_null[index - 1]
    }

    pub fn nulls(&self) -> IndexSet {
        IndexSet::from_predicate(self.len(), |i| self.is_null(i))
    }

    pub fn null_count(&self) -> usize {
        self.is_null.iter().filter(|&&b| b).count()
    }
}

/// The error functional whose expectation a procedure bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ErrorRateKind {
    Fdr,
    Fwer,
    /// Exceedance of the false discovery proportion over `gamma`.
    Fdx {
        gamma: f64,
    },
    /// False rejections over the size of the selected set.
    FcrStyle,
}

impl ErrorRateKind {
    pub fn fdx(gamma: f64) -> Result<Self> {
        if !(gamma > 0.0 && gamma < 1.0) {
            return Err(Error::contract(format!("FDX gamma must lie in (0,1), got {gamma}")));
        }
        Ok(ErrorRateKind::Fdx { gamma })
    }

    pub fn label(&self) -> String {
        match self {
            ErrorRateKind::Fdr => "FDR".into(),
            ErrorRateKind::Fwer => "FWER".into(),
            ErrorRateKind::Fdx { gamma } => format!("FDX({gamma})"),
            ErrorRateKind::FcrStyle => "FCR_STYLE".into(),
        }
    }
}
