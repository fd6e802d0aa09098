//! Low-discrepancy point sets in the unit cube.
//!
//! The crate builds Kronecker, Fibonacci and Sobol' point sets, computes their
//! exact L∞ star discrepancy together with the box that attains it, and searches
//! for Kronecker parameters with low discrepancy, either for a single set size
//! ([`optimize`]) or for a whole range of sizes ([`tune`]). The [`bench`] module
//! holds published reference values and the report generators built on top of
//! everything else.

pub mod bench;
pub mod cli;
pub mod discrepancy;
mod error;
pub mod optimize;
pub mod pointset;
pub mod tune;

pub use discrepancy::{
    local_discrepancy, star_discrepancy_exact, star_discrepancy_oracle, DiscrepancyResult, Side,
};
pub use error::{Error, Result};
pub use pointset::{
    fibonacci_set, kronecker_set, kronecker_with_unit_first, sobol_set, sobol_set_from,
    KroneckerParams, PointSet,
};
