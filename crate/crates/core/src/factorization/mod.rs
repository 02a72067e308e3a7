//! Blaschke products, outer functions, the `f = B h^{2/p}` factorization and
//! `u`-inner functions.

pub mod expr;
pub mod outer;

use std::f64::consts::TAU;
use std::io::Write;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::Serialize;

use crate::error::{PshError, Result};
use crate::exhaustion::ExhaustionSpec;
use crate::hardy::{
    hardy_norm, weight_at, weight_exponent, BoundaryWeight, NormOptions, NormReport,
    ROUTE_AGREEMENT,
};
use crate::potential::{BoundaryProfile, Mass};

pub use expr::{blaschke_factor, poly_roots, AnalyticExpr};
pub use outer::OuterFunction;

/// Finite Blaschke product with the given zeros.
pub fn blaschke(zeros: &[Complex64]) -> Result<AnalyticExpr> {
    AnalyticExpr::blaschke(zeros.to_vec())
}

/// Outer function with boundary modulus `exp(logModulus)`.
pub fn outer_function(log_modulus: BoundaryProfile) -> Result<AnalyticExpr> {
    Ok(AnalyticExpr::Outer(Arc::new(OuterFunction::new(
        log_modulus,
    )?)))
}

fn relative_gap(a: f64, b: f64) -> f64 {
    let s = a.abs().max(b.abs());
    if s == 0.0 {
        0.0
    } else {
        (a - b).abs() / s
    }
}

/// Route-by-route comparison of two norm reports.
#[derive(Clone, Debug, Serialize)]
pub struct IsometryComparison {
    pub left: NormReport,
    pub right: NormReport,
    /// Largest relative gap over routes finite in both reports.
    pub residual: f64,
    pub passes: bool,
}

impl IsometryComparison {
    pub fn new(left: NormReport, right: NormReport) -> Self {
        let pairs = [
            (&left.route_level_sup, &right.route_level_sup),
            (&left.route_bulk, &right.route_bulk),
            (&left.route_boundary, &right.route_boundary),
        ];
        let gaps: Vec<f64> = pairs
            .iter()
            .filter_map(|(a, b)| Some(relative_gap(a.finite()?, b.finite()?)))
            .collect();
        let residual = gaps.iter().copied().fold(0.0, f64::max);
        let passes = !gaps.is_empty() && residual <= ROUTE_AGREEMENT;
        IsometryComparison {
            left,
            right,
            residual,
            passes,
        }
    }
}

/// Result of `divideByBlaschke`.
#[derive(Clone, Debug, Serialize)]
pub struct FactorReport {
    pub function: String,
    pub p: f64,
    pub zeros: Vec<[f64; 2]>,
    pub blaschke: String,
    pub h: String,
    /// `max ||f| − |B||h|^{2/p}|` on interior sample points.
    pub factorization_residual: f64,
    /// `‖f‖_{p,u}` against `‖h^{2/p}‖_{p,u}`.
    pub isometry: IsometryComparison,
}

/// `f = B·h^{2/p}` with `B` the Blaschke product of the zeros of `f` and
/// `h = (f/B)^{p/2}` zero-free.
pub fn divide_by_blaschke(
    f: &AnalyticExpr,
    p: f64,
    u: &ExhaustionSpec,
    opts: &NormOptions,
) -> Result<(AnalyticExpr, AnalyticExpr, FactorReport)> {
    let zeros = f.zeros()?;
    let b = AnalyticExpr::blaschke(zeros.clone())?;
    let h = f.clone().over(b.clone()).pow(p / 2.0);
    let h_root = h.clone().pow(2.0 / p);
    let mut residual: f64 = 0.0;
    for i in 1..8 {
        for j in 0..16 {
            let z = Complex64::from_polar(0.12 * i as f64, TAU * (j as f64 + 0.3) / 16.0);
            let lhs = f.eval(z).norm();
            let rhs = b.eval(z).norm() * h.eval(z).norm().powf(2.0 / p);
            if rhs.is_finite() {
                residual = residual.max((lhs - rhs).abs() / lhs.max(1.0));
            }
        }
    }
    let left = hardy_norm(f, p, u, opts)?;
    let right = hardy_norm(&h_root, p, u, opts)?;
    let report = FactorReport {
        function: f.canonical(),
        p,
        zeros: zeros.iter().map(|z| [z.re, z.im]).collect(),
        blaschke: b.canonical(),
        h: h.canonical(),
        factorization_residual: residual,
        isometry: IsometryComparison::new(left, right),
    };
    Ok((b, h, report))
}

/// `φ = outer(−½ log V)` with its boundary defect.
#[derive(Clone)]
pub struct UInnerCandidate {
    /// `φ` as an expression: closed-form factors `(1 − e^{−iθ_k}z)^{−α_k/2}`
    /// at weight singularities `V ≍ |θ − θ_k|^{α_k}` times the outer part.
    pub phi: AnalyticExpr,
    pub outer_part: Arc<OuterFunction>,
    /// Extracted singular factors `(θ_k, α_k)`.
    pub singular_factors: Vec<(f64, f64)>,
    pub weight: BoundaryWeight,
    /// Sample angles and `φ*` there (radial limit of the series).
    pub samples: Vec<(f64, Complex64, f64)>,
    /// `sup ||φ*|²V − 1|` over the samples.
    pub defect: f64,
    pub excluded_arc: f64,
}

impl std::fmt::Debug for UInnerCandidate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("UInnerCandidate")
            .field("singular_factors", &self.singular_factors)
            .field("defect", &self.defect)
            .finish()
    }
}

/// Options for `uInner`.
#[derive(Clone, Copy, Debug)]
pub struct UInnerOptions {
    /// FFT length for the outer part.
    pub fft_len: usize,
    /// Number of defect samples.
    pub samples: usize,
    /// Half-width of the arc around each weight singularity left out of the
    /// defect.
    pub exclude: f64,
}

impl Default for UInnerOptions {
    fn default() -> Self {
        UInnerOptions {
            fft_len: 1 << 16,
            samples: 2048,
            exclude: 1e-3,
        }
    }
}

fn angle_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

/// `u`-inner candidate `φ` with `|φ*|²V = 1`.
pub fn u_inner(u: &ExhaustionSpec, opts: &UInnerOptions) -> Result<UInnerCandidate> {
    let weight = BoundaryWeight::compute(u, opts.fft_len)?;
    if !matches!(weight.mass_of_laplacian, Mass::Finite(_)) || !weight.log_integrable {
        return Err(PshError::NotLogIntegrable);
    }
    let singular_factors: Vec<(f64, f64)> = u
        .singular_boundary_angles()
        .into_iter()
        .filter_map(|t| weight_exponent(u, t).filter(|a| *a != 0.0).map(|a| (t, a)))
        .collect();
    let factors = singular_factors.clone();
    let correction = move |t: f64| -> f64 {
        factors
            .iter()
            .map(|&(tk, a)| {
                0.5 * a
                    * (Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, t - tk))
                        .norm()
                        .ln()
            })
            .sum()
    };
    let spec = u.clone();
    let corr = correction.clone();
    let eval = Arc::new(move |t: f64| -0.5 * weight_at(&spec, t).ln() + corr(t));
    let n = weight.profile.len();
    let samples: Vec<f64> = (0..n)
        .map(|j| {
            let t = weight.profile.theta(j);
            let v = -0.5 * weight.profile.samples[j].ln() + correction(t);
            if v.is_finite() {
                v
            } else {
                let d = 1e-6 * TAU / n as f64;
                0.5 * (eval(t - d) + eval(t + d))
            }
        })
        .collect();
    let profile = BoundaryProfile {
        samples,
        evaluator: Some(eval),
        singular_points: weight.profile.singular_points.clone(),
    };
    let outer = Arc::new(OuterFunction::new(profile)?);
    let mut phi = AnalyticExpr::Outer(outer.clone());
    for &(tk, a) in &singular_factors {
        let base = AnalyticExpr::Sub(
            Box::new(AnalyticExpr::constant(1.0)),
            Box::new(AnalyticExpr::Mul(
                Box::new(AnalyticExpr::Const(Complex64::from_polar(1.0, -tk))),
                Box::new(AnalyticExpr::Z),
            )),
        );
        phi = base.pow(-0.5 * a).times(phi);
    }
    let mut samples = Vec::with_capacity(opts.samples);
    let mut defect: f64 = 0.0;
    for j in 0..opts.samples {
        let t = TAU * (j as f64 + 1.0 / 3.0) / opts.samples as f64;
        let zeta = Complex64::from_polar(1.0, t);
        let mut trace = outer.series_trace(t);
        for &(tk, a) in &singular_factors {
            trace *=
                (Complex64::new(1.0, 0.0) - zeta * Complex64::from_polar(1.0, -tk)).powf(-0.5 * a);
        }
        let v = weight_at(u, t);
        let d = trace.norm_sqr() * v - 1.0;
        let excluded = singular_factors
            .iter()
            .map(|f| f.0)
            .chain(weight.profile.singular_points.iter().copied())
            .any(|tk| angle_distance(t, tk) < opts.exclude);
        if !excluded {
            defect = defect.max(d.abs());
        }
        samples.push((t, trace, trace.norm_sqr() * v));
    }
    Ok(UInnerCandidate {
        phi,
        outer_part: outer,
        singular_factors,
        weight,
        samples,
        defect,
        excluded_arc: opts.exclude,
    })
}

impl UInnerCandidate {
    /// CSV `theta,Re φ*,Im φ*,|φ*|²V`.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record(["theta", "re_phi", "im_phi", "phi2V"])?;
        for (t, z, d) in &self.samples {
            wr.write_record([
                format!("{t:.17e}"),
                format!("{:.17e}", z.re),
                format!("{:.17e}", z.im),
                format!("{d:.17e}"),
            ])?;
        }
        wr.flush()?;
        Ok(())
    }

    /// DFT of the `|φ*|²V` samples: `(ĉ_0, max_{k≠0} |ĉ_k|)`.
    pub fn fourier_flatness(&self) -> (f64, f64) {
        let n = self.samples.len();
        let mut buf: Vec<Complex64> = self
            .samples
            .iter()
            .map(|s| Complex64::new(s.2, 0.0))
            .collect();
        FftPlanner::new().plan_fft_forward(n).process(&mut buf);
        let c0 = buf[0].re / n as f64;
        let other = buf[1..]
            .iter()
            .map(|c| c.norm() / n as f64)
            .fold(0.0, f64::max);
        (c0, other)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BeurlingEntry {
    pub g: String,
    /// `‖g‖²_{H²}`.
    pub classical: f64,
    /// `‖φg‖²_{2,u}` by route.
    pub report: NormReport,
    /// Largest relative gap of a finite route from `‖g‖²_{H²}`.
    pub gap: f64,
    pub passes: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct BeurlingReport {
    pub entries: Vec<BeurlingEntry>,
    #[serde(rename = "fourierZero")]
    pub fourier_zero: f64,
    #[serde(rename = "fourierMaxOther")]
    pub fourier_max_other: f64,
    pub defect: f64,
    pub passes: bool,
}

/// `‖g‖²_{H²}`: coefficient `ℓ²` norm for polynomials, else the boundary
/// mean of `|g*|²`.
pub fn classical_h2(g: &AnalyticExpr) -> f64 {
    match g.poly_coeffs() {
        Some(c) => c.iter().map(|a| a.norm_sqr()).sum(),
        None => {
            crate::geometry::integrate_boundary_arc(
                |t| g.boundary_modulus(t).powi(2),
                &crate::geometry::Tolerance::new(1e-12, 1e-10),
                &g.boundary_singular_angles(),
            )
            .value
        }
    }
}

/// Checks `‖φg‖_{2,u} = ‖g‖_{H²}` on the test functions and the Fourier
/// flatness of `|φ*|²V`.
pub fn beurling_isometry_check(
    cand: &UInnerCandidate,
    u: &ExhaustionSpec,
    test_fns: &[AnalyticExpr],
    opts: &NormOptions,
) -> Result<BeurlingReport> {
    let mut entries = Vec::new();
    for g in test_fns {
        let classical = classical_h2(g);
        let report = hardy_norm(&cand.phi.clone().times(g.clone()), 2.0, u, opts)?;
        let gap = [
            &report.route_level_sup,
            &report.route_bulk,
            &report.route_boundary,
        ]
        .iter()
        .filter_map(|r| r.finite())
        .map(|v| relative_gap(v, classical))
        .fold(0.0, f64::max);
        entries.push(BeurlingEntry {
            g: g.canonical(),
            classical,
            passes: report.value().is_some() && gap <= ROUTE_AGREEMENT,
            report,
            gap,
        });
    }
    let (c0, other) = cand.fourier_flatness();
    let passes = entries.iter().all(|e| e.passes) && (c0 - 1.0).abs() <= 1e-3 && other <= 1e-3;
    Ok(BeurlingReport {
        entries,
        fourier_zero: c0,
        fourier_max_other: other,
        defect: cand.defect,
        passes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_inner_is_one() {
        let c = u_inner(
            &ExhaustionSpec::log(),
            &UInnerOptions {
                fft_len: 1024,
                samples: 256,
                exclude: 1e-3,
            },
        )
        .unwrap();
        assert!(c.defect < 1e-13);
        assert!((c.phi.eval(Complex64::new(0.3, 0.1)) - 1.0).norm() < 1e-13);
    }

    #[test]
    fn radial_inner_is_constant() {
        let u = ExhaustionSpec::radial(1.0 / std::f64::consts::PI, 1.0).unwrap();
        let c = u_inner(
            &u,
            &UInnerOptions {
                fft_len: 1024,
                samples: 256,
                exclude: 1e-3,
            },
        )
        .unwrap();
        let k = c.weight.profile.samples[0];
        assert!((c.phi.eval(Complex64::new(-0.2, 0.5)) - k.powf(-0.5)).norm() < 1e-10);
    }

    #[test]
    fn zero_free_factor() {
        let f = AnalyticExpr::parse("2-z").unwrap();
        let opts = NormOptions::boundary_only();
        let (b, h, r) = divide_by_blaschke(&f, 2.0, &ExhaustionSpec::log(), &opts).unwrap();
        assert!((b.eval(Complex64::new(0.4, 0.0)) - 1.0).norm() < 1e-15);
        assert!((h.eval(Complex64::new(0.4, 0.0)) - 1.6).norm() < 1e-14);
        assert!(r.factorization_residual < 1e-14 && r.isometry.passes);
    }
}
