//! Norm comparisons between exhaustions: ordering under `b·v ≤ u`, the point
//! bound and domination by the Green exhaustion.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::Result;
use crate::exhaustion::ExhaustionSpec;
use crate::factorization::AnalyticExpr;
use crate::hardy::norm::{hardy_norm, NormOptions};
use crate::hardy::weight::BoundaryWeight;
use crate::potential::green_unchecked;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ComparisonStatus {
    Pass,
    Fail,
    HypothesisFailed,
}

#[derive(Clone, Debug, Serialize)]
pub struct ComparisonEntry {
    pub function: String,
    pub p: f64,
    /// `‖|f|^p‖_u`.
    pub norm_u: Option<f64>,
    /// `‖|f|^p‖_v`.
    pub norm_v: Option<f64>,
    /// Right side of the asserted inequality.
    pub bound: Option<f64>,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ComparisonReport {
    pub u: String,
    pub v: String,
    pub b: f64,
    pub k_radius: f64,
    /// `min (u − b·v)` over the sample grid outside `K`.
    pub hypothesis_margin: f64,
    pub entries: Vec<ComparisonEntry>,
    pub status: ComparisonStatus,
}

/// Polar grid on `k_radius ≤ |z| ≤ 0.995`.
fn annulus_grid(k_radius: f64, rings: usize, spokes: usize) -> Vec<Complex64> {
    let mut pts = Vec::with_capacity(rings * spokes);
    for i in 0..rings {
        let r = k_radius + (0.995 - k_radius) * i as f64 / (rings - 1).max(1) as f64;
        for j in 0..spokes {
            pts.push(Complex64::from_polar(
                r,
                TAU * (j as f64 + 0.5) / spokes as f64,
            ));
        }
    }
    pts
}

fn phi_norm(
    f: &AnalyticExpr,
    p: f64,
    u: &ExhaustionSpec,
    opts: &NormOptions,
) -> Result<Option<f64>> {
    Ok(hardy_norm(f, p, u, opts)?.value())
}

/// Checks `‖φ‖_u ≤ b‖φ‖_v` for `φ = |f|^p` after verifying `b·v ≤ u` outside
/// the disk `|z| < k_radius`.
pub fn comparison_checks(
    u: &ExhaustionSpec,
    v: &ExhaustionSpec,
    b: f64,
    k_radius: f64,
    battery: &[(AnalyticExpr, f64)],
    opts: &NormOptions,
) -> Result<ComparisonReport> {
    let margin = annulus_grid(k_radius, 24, 48)
        .into_iter()
        .map(|z| u.evaluate(z) - b * v.evaluate(z))
        .fold(f64::INFINITY, f64::min);
    let mut report = ComparisonReport {
        u: u.canonical(),
        v: v.canonical(),
        b,
        k_radius,
        hypothesis_margin: margin,
        entries: Vec::new(),
        status: ComparisonStatus::Pass,
    };
    if margin < -1e-12 {
        report.status = ComparisonStatus::HypothesisFailed;
        return Ok(report);
    }
    let slack = 10.0 * opts.tol.rel;
    for (f, p) in battery {
        let nu = phi_norm(f, *p, u, opts)?;
        let nv = phi_norm(f, *p, v, opts)?;
        let bound = nv.map(|x| b * x);
        let holds = match (nu, bound) {
            (Some(a), Some(c)) => a <= c * (1.0 + slack),
            (None, None) => true,
            (Some(_), None) => true,
            (None, Some(_)) => false,
        };
        report.entries.push(ComparisonEntry {
            function: f.canonical(),
            p: *p,
            norm_u: nu,
            norm_v: nv,
            bound,
            holds,
        });
    }
    if report.entries.iter().any(|e| !e.holds) {
        report.status = ComparisonStatus::Fail;
    }
    Ok(report)
}

#[derive(Clone, Debug, Serialize)]
pub struct PointBoundEntry {
    pub function: String,
    pub value_at_w: f64,
    /// `‖φ‖_v` in the raw-Laplacian convention.
    pub norm_paper: f64,
    /// `(s/2π)‖φ‖_v`.
    pub bound: f64,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct PointBoundReport {
    pub v: String,
    pub w: [f64; 2],
    /// Largest `s` with `v ≤ s·g(·, w)` on the grid outside `K`.
    pub s: f64,
    pub entries: Vec<PointBoundEntry>,
    pub status: ComparisonStatus,
}

/// `φ(w) ≤ (s/2π)‖φ‖_v` for `φ = |f|^p`, with `s` read off the grid.
pub fn point_bound_check(
    v: &ExhaustionSpec,
    w: Complex64,
    k_radius: f64,
    battery: &[(AnalyticExpr, f64)],
    opts: &NormOptions,
) -> Result<PointBoundReport> {
    let s = annulus_grid(k_radius.max(w.norm() + 1e-3), 24, 48)
        .into_iter()
        .map(|z| v.evaluate(z) / green_unchecked(z, w))
        .filter(|r| r.is_finite())
        .fold(f64::INFINITY, f64::min);
    let mut entries = Vec::new();
    for (f, p) in battery {
        let n = phi_norm(f, *p, v, opts)?.unwrap_or(f64::INFINITY) * TAU;
        let val = f.eval(w).norm().powf(*p);
        let bound = s / TAU * n;
        entries.push(PointBoundEntry {
            function: f.canonical(),
            value_at_w: val,
            norm_paper: n,
            bound,
            holds: val <= bound * (1.0 + 10.0 * opts.tol.rel),
        });
    }
    let status = if !(s > 0.0) {
        ComparisonStatus::HypothesisFailed
    } else if entries.iter().all(|e| e.holds) {
        ComparisonStatus::Pass
    } else {
        ComparisonStatus::Fail
    };
    Ok(PointBoundReport {
        v: v.canonical(),
        w: [w.re, w.im],
        s,
        entries,
        status,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct GreenDominationReport {
    pub u: String,
    pub w: [f64; 2],
    /// Constant fixed from the weight samples: `max V_g / V_u`.
    pub c: f64,
    /// Largest ratio `‖φ‖_g / ‖φ‖_u` over the fitting functions.
    pub fitted_ratio: f64,
    pub entries: Vec<ComparisonEntry>,
    pub status: ComparisonStatus,
}

/// `‖φ‖_{g(·,w)} ≤ c‖φ‖_u`: `c` is fixed from the sampled weights and the
/// fitting battery, then re-tested on the held-out battery.
pub fn green_domination(
    u: &ExhaustionSpec,
    w: Complex64,
    fit: &[(AnalyticExpr, f64)],
    held_out: &[(AnalyticExpr, f64)],
    opts: &NormOptions,
) -> Result<GreenDominationReport> {
    let g = ExhaustionSpec::green(w)?;
    let wu = BoundaryWeight::compute(u, 1024)?;
    let wg = BoundaryWeight::compute(&g, 1024)?;
    let c_weight = wg
        .profile
        .samples
        .iter()
        .zip(&wu.profile.samples)
        .map(|(a, b)| a / b)
        .filter(|r| r.is_finite())
        .fold(0.0, f64::max);
    let mut fitted: f64 = 0.0;
    let mut entries = Vec::new();
    let mut push = |f: &AnalyticExpr, p: f64, c: Option<f64>| -> Result<f64> {
        let nu = phi_norm(f, p, u, opts)?;
        let ng = phi_norm(f, p, &g, opts)?;
        let ratio = match (ng, nu) {
            (Some(a), Some(b)) if b > 0.0 => a / b,
            _ => f64::INFINITY,
        };
        if let Some(c) = c {
            entries.push(ComparisonEntry {
                function: f.canonical(),
                p,
                norm_u: nu,
                norm_v: ng,
                bound: nu.map(|x| c * x),
                holds: ratio <= c * (1.0 + 10.0 * opts.tol.rel),
            });
        }
        Ok(ratio)
    };
    for (f, p) in fit {
        fitted = fitted.max(push(f, *p, None)?);
    }
    let c = c_weight.max(fitted);
    for (f, p) in fit.iter().chain(held_out) {
        push(f, *p, Some(c))?;
    }
    let status = if entries.iter().all(|e| e.holds) {
        ComparisonStatus::Pass
    } else {
        ComparisonStatus::Fail
    };
    Ok(GreenDominationReport {
        u: u.canonical(),
        w: [w.re, w.im],
        c,
        fitted_ratio: fitted,
        entries,
        status,
    })
}
