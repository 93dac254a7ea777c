//! The Cesàro operator on weighted Bergman spaces of the unit disk, and on
//! their Fréchet intersections and (LB) unions.
//!
//! - [`series`]: truncated Taylor series and the operator in coefficient space;
//! - [`norms`] and [`quadrature`]: weighted Bergman norms, exact at `p = 2`;
//! - [`spectra`]: closed-form spectral sets and a step-union cross-check;
//! - [`scans`]: truncation-norm experiments and their [`classify`]ication;
//! - [`selftest`]: the invariant suite used by the command-line tool.

pub mod classify;
pub mod error;
pub mod norms;
pub mod quadrature;
pub mod scans;
pub mod selftest;
pub mod series;
pub mod special;
pub mod spectra;

pub use classify::{Classification, ClassifierConfig, NormScan};
pub use error::{NormError, ScanError, SeriesError, SpectraError};
pub use norms::{SpaceKind, SpaceSpec};
pub use quadrature::QuadratureConfig;
pub use series::TaylorTruncation;
