//! Exact symbolic verification of R-matrix, reflection-equation and
//! twisted-Yangian identities at small rank.
//!
//! Everything is computed in exact arithmetic: scalars in Q(i, √2),
//! rational functions in the spectral parameters and symbolic evaluation
//! points, truncated u^-1-series where quotient algebras require
//! normalizers. Checks either pass identically or report the first
//! offending matrix entry with its nonzero residual.

pub mod scalars;
pub mod poly;
pub mod ratfunc;
pub mod series;
pub mod tensor;
pub mod rkmat;
pub mod reps;
pub mod twist;
pub mod isomaps;
pub mod drinfeld;
pub mod dsl;
pub mod report;
pub mod suites;

pub use ratfunc::RatFunc;
pub use report::{CaseRecord, CheckOutcome};
// pub use rkmat::PairType; // restored when rkmat lands
pub use scalars::FieldElem;
pub use series::TruncSeries;
pub use tensor::{Isometry, Leg, MatRF, Theta};
