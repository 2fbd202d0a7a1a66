//! Desk-scale workbench for the ternary equation `[p1^c] + [p2^c] + [p3^c] = N`
//! with the first prime restricted to the form `p = x^2 + y^2 + 1`.
//!
//! The crate counts solutions exactly with fixed-point weights, evaluates the
//! analytic main term (singular series, gamma factor, singular integral),
//! mechanizes the van der Corput exponent-pair calculus together with the
//! rational constraint system that pins the admissible exponent window, and
//! numerically probes the exponential sums and divisor statistics that the
//! counting theory rests on.

pub mod arith;
pub mod counter;
pub mod divstat;
pub mod error;
pub mod expair;
pub mod expsum;
pub mod hiprec;
pub mod model;
pub mod quad;
pub mod report;

pub use error::{Error, Result};
