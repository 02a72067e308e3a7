//! Boundary weights, `H^p_u` norms, membership verdicts and comparisons.

pub mod approx;
pub mod compare;
pub mod norm;
pub mod weight;

pub use approx::{polynomial_approximation, taylor_coefficients, ApproxEntry, ApproxReport};
pub use compare::{
    comparison_checks, green_domination, point_bound_check, ComparisonEntry, ComparisonReport,
    ComparisonStatus, GreenDominationReport, PointBoundEntry, PointBoundReport,
};
pub use norm::{
    analytic_divergence, conformal_pullback_norm, hardy_norm, least_harmonic_majorant,
    membership_verdict, power_modulus_laplacian, HarmonicMajorant, LadderRung, LevelLadder,
    MembershipEvidence, NormOptions, NormReport, Route, RouteStatus, Verdict, ROUTE_AGREEMENT,
};
pub use weight::{weight_at, weight_exponent, BoundaryWeight, Normalization};
