//! Exhaustion functions, their level sets and Demailly measures.

pub mod demailly;
pub mod examples;
pub mod level;
pub mod spec;

pub use demailly::{
    density_uc, djl_both_sides, harmext_pairing, level_pairing, region_measure, sandwich_check,
    DemaillyMeasure, DjlReport, ExplicitSubharmonic, MassRoute, SandwichReport, Subharmonic,
};
pub use examples::{phi, phi_laplacian, riesz_for, v_m, ExampleKind};
pub use level::{infimum, Grading, Grid, LevelSet, DEFAULT_RESOLUTION};
pub use spec::{ExhaustionKind, ExhaustionSpec};
