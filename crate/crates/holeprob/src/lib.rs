//! Hole probabilities, equilibrium energies and fluctuation variances for
//! the Mittag-Leffler family of determinantal point processes in the plane.

// `!(x > 0.0)` style guards are meant to reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod fekete;
pub mod fit;
pub mod fluctuations;
pub mod gram;
pub mod potential;
pub mod quad;
pub mod radial;
pub mod region;
pub mod specfun;

pub use error::{Error, Result};
