//! Domain representation and the quadrature engine.

pub mod disk;
pub mod quadrature;

pub use disk::{
    integrate_boundary_arc, integrate_disk_area, AreaNormalization, ConformalMap, DiskDomain,
    Singularities,
};
pub use quadrature::{
    gauss_legendre, integrate, integrate_graded, integrate_periodic, integrate_pieces,
    integrate_with_endpoints, GradingOptions, QuadratureResult, Status, Tolerance,
};
