//! Empirical polynomial approximation in `H^p_u`.

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::Serialize;

use crate::exhaustion::ExhaustionSpec;
use crate::factorization::AnalyticExpr;
use crate::geometry::{integrate_boundary_arc, Status};
use crate::hardy::norm::NormOptions;
use crate::hardy::weight::weight_at;
use crate::{PshError, Result};

/// Boundary samples used for the Taylor coefficients.
pub const TAYLOR_SAMPLES: usize = 1 << 12;

#[derive(Clone, Debug, Serialize)]
pub struct ApproxEntry {
    pub degree: usize,
    /// `‖f − F_n f‖_{p,u} / ‖f‖_{p,u}` on the boundary route.
    pub residual: f64,
    pub status: Status,
}

#[derive(Clone, Debug, Serialize)]
pub struct ApproxReport {
    pub function: String,
    pub exhaustion: String,
    pub p: f64,
    pub entries: Vec<ApproxEntry>,
    /// Whether residuals decrease with the degree.
    pub decreasing: bool,
}

/// Taylor coefficients `a_0..a_{n−1}` from an FFT of the boundary trace.
pub fn taylor_coefficients(f: &AnalyticExpr, n: usize) -> Vec<Complex64> {
    let m = TAYLOR_SAMPLES.max(4 * n.next_power_of_two());
    let mut buf: Vec<Complex64> = (0..m)
        .map(|j| f.boundary_trace(std::f64::consts::TAU * j as f64 / m as f64))
        .collect();
    FftPlanner::new().plan_fft_forward(m).process(&mut buf);
    buf.iter().take(n).map(|c| c / m as f64).collect()
}

fn fejer(coeffs: &[Complex64], degree: usize, z: Complex64) -> Complex64 {
    let w = (degree + 1) as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for k in (0..=degree.min(coeffs.len() - 1)).rev() {
        acc = acc * z + coeffs[k] * ((w - k as f64) / w);
    }
    acc
}

/// Relative `H^p_u` distance from `f` to its Fejér means of each degree.
pub fn polynomial_approximation(
    f: &AnalyticExpr,
    p: f64,
    u: &ExhaustionSpec,
    degrees: &[usize],
    opts: &NormOptions,
) -> Result<ApproxReport> {
    if !(p > 0.0 && p.is_finite()) {
        return Err(PshError::InvalidParameter(format!(
            "p = {p} must be positive"
        )));
    }
    let top = degrees.iter().copied().max().unwrap_or(0);
    let coeffs = taylor_coefficients(f, top + 1);
    let mut angles = f.boundary_singular_angles();
    angles.extend(u.singular_boundary_angles());
    let weighted = |g: &dyn Fn(f64) -> f64| {
        integrate_boundary_arc(
            |t| {
                let m = g(t);
                if m == 0.0 {
                    0.0
                } else {
                    m * weight_at(u, t)
                }
            },
            &opts.tol,
            &angles,
        )
    };
    let base = weighted(&|t| f.boundary_modulus(t).powf(p));
    if base.is_divergent() || !(base.value > 0.0) {
        return Err(PshError::InvalidParameter(format!(
            "{} has no finite nonzero boundary norm under {}",
            f.canonical(),
            u.canonical()
        )));
    }
    let mut entries = Vec::new();
    for &d in degrees {
        let r = weighted(&|t| {
            let zeta = Complex64::from_polar(1.0, t);
            (f.boundary_trace(t) - fejer(&coeffs, d, zeta))
                .norm()
                .powf(p)
        });
        entries.push(ApproxEntry {
            degree: d,
            residual: (r.value / base.value).powf(1.0 / p),
            status: r.status.combine(base.status),
        });
    }
    let decreasing = entries.windows(2).all(|w| w[1].residual <= w[0].residual);
    Ok(ApproxReport {
        function: f.canonical(),
        exhaustion: u.canonical(),
        p,
        entries,
        decreasing,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_its_own_taylor_series() {
        let f = AnalyticExpr::parse("1+2*z-z*z").unwrap();
        let a = taylor_coefficients(&f, 4);
        assert!((a[0] - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        assert!((a[1] - Complex64::new(2.0, 0.0)).norm() < 1e-12);
        assert!((a[2] - Complex64::new(-1.0, 0.0)).norm() < 1e-12);
        assert!(a[3].norm() < 1e-12);
    }

    #[test]
    fn fejer_weights() {
        let c = vec![Complex64::new(1.0, 0.0); 3];
        let z = Complex64::new(1.0, 0.0);
        assert!((fejer(&c, 2, z).re - 2.0).abs() < 1e-15);
    }
}
