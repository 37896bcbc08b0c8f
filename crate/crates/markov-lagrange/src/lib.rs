//! Exact and rigorous tools for bounding Hausdorff dimensions of the
//! Markov and Lagrange spectra below 4.5 and near their intersection.

pub mod cf;
pub mod cover;
pub mod decimal;
pub mod error;
pub mod interval;
pub mod jp;
pub mod report;
pub mod surd;
pub mod symbolic;

pub use cf::{compare_cf, continuant, continuants, cylinder, CfExpansion, ContinuantMatrix, Digit, Word};
pub use decimal::DecimalInterval;
pub use error::{Error, Result};
pub use interval::Interval;
pub use surd::{approx, eval_periodic, Enclose, Surd, SurdSum};
