//! Outer functions `O = exp(H[log|O*|])` from sampled boundary log-moduli.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{PshError, Result};
use crate::geometry::Tolerance;
use crate::potential::BoundaryProfile;

/// `O(z) = exp(∫ (ζ+z)/(ζ−z) L(ζ) dν(ζ))` for a log-modulus profile `L`.
///
/// The Herglotz integral is the power series `Σ c_k z^k` with `c_0 = L̂_0`
/// and `c_k = 2L̂_k`, truncated at the Nyquist frequency of the samples.
pub struct OuterFunction {
    pub log_modulus: BoundaryProfile,
    coeffs: Vec<Complex64>,
    /// Boundary values of the Herglotz exponent at the sample nodes.
    boundary: Vec<Complex64>,
}

impl OuterFunction {
    pub fn new(log_modulus: BoundaryProfile) -> Result<Self> {
        let n = log_modulus.len();
        if log_modulus.samples.iter().any(|v| !v.is_finite()) {
            return Err(PshError::NotLogIntegrable);
        }
        let l1 = match &log_modulus.evaluator {
            Some(f) => crate::geometry::integrate_boundary_arc(
                |t| f(t).abs(),
                &Tolerance::new(1e-8, 1e-6),
                &log_modulus.singular_points,
            ),
            None => crate::geometry::QuadratureResult::exact(
                log_modulus.samples.iter().map(|v| v.abs()).sum::<f64>() / n as f64,
            ),
        };
        if l1.is_divergent() || !l1.value.is_finite() {
            return Err(PshError::NotLogIntegrable);
        }
        let hat = log_modulus.fourier_coefficients();
        let half = n / 2;
        let mut coeffs = Vec::with_capacity(half + 1);
        coeffs.push(hat[0]);
        for k in 1..half {
            coeffs.push(hat[k] * 2.0);
        }
        coeffs.push(hat[half]);
        let mut spectrum = vec![Complex64::new(0.0, 0.0); n];
        spectrum[..=half].copy_from_slice(&coeffs);
        FftPlanner::new().plan_fft_inverse(n).process(&mut spectrum);
        Ok(OuterFunction {
            log_modulus,
            coeffs,
            boundary: spectrum,
        })
    }

    /// Outer function with `|O*| = exp(L)`, `L` given by an exact evaluator.
    pub fn from_log_modulus(
        n: usize,
        l: impl Fn(f64) -> f64 + Send + Sync + 'static,
        singular_points: Vec<f64>,
    ) -> Result<Self> {
        Self::new(BoundaryProfile::from_fn(
            n,
            std::sync::Arc::new(l),
            singular_points,
        )?)
    }

    pub fn len(&self) -> usize {
        self.log_modulus.len()
    }

    pub fn is_empty(&self) -> bool {
        self.log_modulus.is_empty()
    }

    pub fn singular_points(&self) -> Vec<f64> {
        self.log_modulus.singular_points.clone()
    }

    /// Herglotz series coefficients `c_k`.
    pub fn coefficients(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn eval_with_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let r = z.norm();
        let k = if r < 1.0 {
            ((-40.0 / r.ln()).ceil() as usize).clamp(1, self.coeffs.len())
        } else {
            self.coeffs.len()
        };
        let (e, de) = self.coeffs[..k].iter().rev().fold(
            (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)),
            |(v, d), &c| (v * z + c, d * z + v),
        );
        let o = e.exp();
        (o, o * de)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.eval_with_derivative(z).0
    }

    /// Trace at node `j`: `exp(L_j + i H[L]_j)`.
    pub fn node_trace(&self, j: usize) -> Complex64 {
        let e = self.boundary[j % self.boundary.len()];
        Complex64::new(self.log_modulus.samples[j % self.boundary.len()], e.im).exp()
    }

    /// `|O*(e^{iθ})| = exp(L(θ))`.
    pub fn boundary_modulus(&self, theta: f64) -> f64 {
        self.log_modulus.value_at(theta).exp()
    }

    /// `exp(Σ c_k e^{ikθ})`: the series on the circle, i.e. the radial limit
    /// of the truncated outer function.
    pub fn series_trace(&self, theta: f64) -> Complex64 {
        let zeta = Complex64::from_polar(1.0, theta);
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |v, &c| v * zeta + c)
            .exp()
    }

    /// Trace with modulus `exp(L(θ))` and phase from the trigonometric
    /// interpolant of the conjugate function.
    pub fn boundary_trace(&self, theta: f64) -> Complex64 {
        let n = self.len();
        let u = theta.rem_euclid(TAU) / TAU * n as f64;
        if (u - u.round()).abs() < 1e-12 {
            let j = u.round() as usize % n;
            let m = self.boundary_modulus(theta);
            return Complex64::from_polar(m, self.boundary[j].im);
        }
        let zeta = Complex64::from_polar(1.0, theta);
        let phase = self
            .coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |v, &c| v * zeta + c)
            .im;
        Complex64::from_polar(self.boundary_modulus(theta), phase)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_data() {
        let o = OuterFunction::from_log_modulus(256, |_| 2f64.ln(), vec![]).unwrap();
        for z in [Complex64::new(0.0, 0.0), Complex64::new(0.5, -0.6)] {
            assert!((o.eval(z) - 2.0).norm() < 1e-14);
        }
        let o = OuterFunction::from_log_modulus(256, |_| 0.0, vec![]).unwrap();
        assert!((o.eval(Complex64::new(0.3, 0.3)) - 1.0).norm() < 1e-15);
    }

    #[test]
    fn reconstructs_one_minus_z() {
        let o = OuterFunction::from_log_modulus(
            1 << 14,
            |t| {
                0.5 * (Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, t))
                    .norm_sqr()
                    .ln()
            },
            vec![0.0],
        )
        .unwrap();
        for z in [
            Complex64::new(0.0, 0.0),
            Complex64::new(0.4, 0.3),
            Complex64::new(-0.8, 0.1),
        ] {
            let want = 1.0 - z;
            assert!(
                (o.eval(z) - want).norm() < 1e-3 * want.norm(),
                "{z}: {}",
                o.eval(z)
            );
        }
        for j in (1..(1 << 14)).step_by(97) {
            let t = TAU * j as f64 / (1 << 14) as f64;
            let want = (1.0 - Complex64::from_polar(1.0, t)).norm();
            assert!((o.node_trace(j).norm() - want).abs() < 1e-4 * want.max(1e-3));
        }
    }

    #[test]
    fn rejects_infinite_log() {
        let p = BoundaryProfile::from_samples(vec![f64::NEG_INFINITY; 256]).unwrap();
        assert!(matches!(
            OuterFunction::new(p),
            Err(PshError::NotLogIntegrable)
        ));
    }
}
