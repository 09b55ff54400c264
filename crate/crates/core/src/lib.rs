//! Selective inference for multiple testing.
//!
//! The crate covers selection-adjusted p-values and the procedures built on
//! them: conditional and selective rules for a two-hypothesis toy model,
//! conditioning on the winner, data splitting, and truncated-normal inference
//! after lasso selection. [`simlab`] holds a deterministic Monte Carlo engine
//! that checks each procedure's error-rate guarantees.
//!
//! Hypotheses are labelled `1..=n` everywhere in the public API.

pub mod datasplit;
pub mod error;
pub mod lasso;
pub mod normal;
pub mod procedures;
pub mod rates;
pub mod rng;
pub mod simlab;
pub mod toy;
pub mod types;
pub mod winner;

pub use error::{Error, Result};
pub use normal::{normal_cdf, normal_quantile, normal_sf};
pub use rates::{error_value, fdp};
pub use rng::{uniform01, RngStream};
pub use types::{ErrorRateKind, IndexSet, PVector, TruthMask};
