//! Exact truncated q-series characters of Feigin-Stoyanovsky type subspaces
//! for the affine algebra of sl(3) and its higher-rank analogues.
//!
//! The brute-force combinatorial character lives in [`admissible`]; the closed
//! fermionic formula in [`fermionic`]; the recurrence system both must satisfy
//! in [`recurrence`]; and comparisons with two older one-variable formulas in
//! [`specialize`].

pub mod admissible;
pub mod charseries;
pub mod error;
pub mod fermionic;
pub mod qseries;
pub mod recurrence;
pub mod report;
pub mod specialize;

pub use admissible::{character_oracle, HighestWeight};
pub use charseries::{CharSeries, SpecializedSeries, Window};
pub use error::{Error, Result};
pub use fermionic::character_fermionic;
pub use qseries::QSeries;
pub use report::Report;
