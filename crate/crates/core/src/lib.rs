//! Numerical toolkit for generalized Orlicz (Musielak–Orlicz) Φ-functions.
//!
//! [`phi_core`] represents `φ(x, t)` as piecewise power sums with x-dependent
//! coefficients and exponents. [`conditions`] estimates the constants of the
//! standard growth and regularity conditions on sample lattices, and
//! [`transforms`] builds modified Φ-functions from them. [`norms`] and
//! [`maximal`] work on uniform grids: modulars, Luxemburg norms and a
//! discretized non-centered maximal operator. [`gallery`] ties these into
//! versioned JSON report bundles, which the `orlicz` binary writes to disk.
//!
//! ```
//! use genorlicz::phi_core::PhiFunction;
//!
//! let phi = PhiFunction::example_3_4(2);
//! assert_eq!(phi.eval(&[0.0, 0.0], 1.0).unwrap().to_f64(), 2.0);
//! ```

// Validation is written as `!(x > 0.0)` throughout so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod extended;
pub mod geometry;
pub mod json;

pub mod phi_core;
pub mod conditions;
pub mod transforms;

pub mod grid;
pub mod norms;
pub mod maximal;

pub mod gallery;

pub use error::{Error, Result};
pub use extended::Extended;
