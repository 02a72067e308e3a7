//! Hardy spaces defined by subharmonic exhaustions of the unit disk.
//!
//! Exhaustions `u`, their Demailly level measures `μ_{c,u}`, the boundary
//! weight `V`, `H^p_u` norms by three independent routes, and the
//! `u`-inner factorization.

pub mod error;
pub mod exhaustion;
pub mod factorization;
pub mod geometry;
pub mod hardy;
pub mod potential;
pub mod scalar;

pub use error::{PshError, Result};

/// Quadrature result over `f64`.
pub type Quadrature = geometry::QuadratureResult<f64>;
/// Tolerance over `f64`.
pub type Tol = geometry::Tolerance<f64>;
