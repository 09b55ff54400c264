//! Shared inputs for the benchmarks.

use nalgebra::{DMatrix, DVector};
use selinfer::lasso::LinearModelData;
use selinfer::normal::normal_sf;
use selinfer::{PVector, RngStream};

/// `n` p-values, the first `alternatives` drawn as `1 - Φ(Z + shift)`.
pub fn pvalues(seed: u64, n: usize, alternatives: usize, shift: f64) -> PVector {
    let mut s = RngStream::new(seed, 0);
    let values = (0..n)
        .map(|j| {
            if j < alternatives {
                normal_sf(s.standard_normal() + shift)
            } else {
                s.uniform_open01()
            }
        })
        .collect();
    PVector::new(values).expect("draws lie in (0,1)")
}

/// Gaussian design with a sparse signal and unit noise.
pub fn regression(seed: u64, n: usize, m: usize, nonzero: usize) -> LinearModelData {
    let mut s = RngStream::new(seed, 0);
    let x = DMatrix::from_fn(n, m, |_, _| s.standard_normal());
    let beta = DVector::from_fn(m, |j, _| if j < nonzero { 2.0 } else { 0.0 });
    let noise = DVector::from_fn(n, |_, _| s.standard_normal());
    let y = &x * beta + noise;
    LinearModelData::new(x, y, 1.0).expect("random design has full column rank")
}

/// The prostate data shipped with the repository.
pub fn prostate() -> LinearModelData {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/prostate.csv");
    selinfer::lasso::load_regression_data(path, &selinfer::lasso::LoadOptions::new("lpsa")).expect("bundled data loads")
}
