//! Kernels, Riesz measures, Green potentials and harmonic extension.

pub mod dirichlet;
pub mod kernels;
pub mod profile;
pub mod riesz;
pub mod slab;

pub use dirichlet::{ClosedCurve, HarmonicExtension};
pub use kernels::{
    green_function, green_gradient, green_unchecked, poisson_kernel, poisson_kernel_angle,
};
pub use profile::{AngleFn, BoundaryProfile};
pub use riesz::{sigma_mass_exact, Atom, DensityTerm, Mass, PotentialValue, RieszMeasure};
pub use slab::Slab;
