//! Event-driven shadow-wave front tracking for one-dimensional pressureless gas dynamics.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod entropy;
pub mod error;
pub mod interactions;
pub mod numeric;
pub mod riemann;
pub mod sdw;
pub mod states;
pub mod tracker;

pub use error::{Result, SdwError};

/// Numerical tolerances shared by the tracker and the diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Simultaneity window for clustering crossings (time and position).
    pub cluster: f64,
    /// Relative time tolerance for crossing roots.
    pub root_rel: f64,
    /// Absolute tolerance for adaptive quadrature.
    pub quad_abs: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { cluster: 1e-9, root_rel: 1e-12, quad_abs: 1e-10 }
    }
}
