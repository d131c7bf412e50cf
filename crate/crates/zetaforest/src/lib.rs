//! zetaforest: exact reduction of conical, tree, arborified and
//! Mordell-Tornheim zeta values to rational linear combinations of multiple
//! zeta values, verified by a truncated-series numerical oracle.
//!
//! The reduction pipeline for a decorated cone runs
//!
//! ```text
//!   cone --(row poset / Hasse diagram)--> decorated rooted forest
//!        --(branched binarisation)-----> {x,y}-decorated forest
//!        --(flattening / shuffle)------> sum of convergent words
//!        --(binarisation inverse)------> exact MZV combination
//! ```
//!
//! and every step is exact over arbitrary-precision rationals. The `numeric`
//! module independently evaluates both ends of the pipeline as truncated
//! series and cross-checks them.
//!
//! # Example
//!
//! ```
//! use zetaforest::forests::parse_nat_forest;
//! use zetaforest::reduction::reduce_forest;
//!
//! let forest = parse_nat_forest("2(1,1)").unwrap();
//! let combination = reduce_forest(&forest).unwrap();
//! assert_eq!(combination.to_string(), "2*zeta(2,1,1)");
//! ```

// Matrix and poset code indexes by (i, j) throughout; iterator rewrites would
// obscure the relations being computed.
#![allow(clippy::needless_range_loop)]

pub mod cli;
pub mod cones;
pub mod error;
pub mod forests;
pub mod formal_sum;
pub mod mordell_tornheim;
pub mod numeric;
pub mod reduction;
pub mod words;

pub use error::{Error, ReasonCode, Result};
