//! Sampled boundary data on the unit circle and its Poisson extension.

use std::f64::consts::TAU;
use std::fmt;
use std::io::{Read, Write};
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{PshError, Result};
use crate::geometry::{
    integrate_boundary_arc, integrate_with_endpoints, GradingOptions, QuadratureResult, Tolerance,
};
use crate::potential::kernels::poisson_kernel_angle;

pub type AngleFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Values of a function on `∂𝔻` at `θ_j = 2πj/N`, optionally backed by an
/// exact evaluator.
#[derive(Clone)]
pub struct BoundaryProfile {
    pub samples: Vec<f64>,
    pub evaluator: Option<AngleFn>,
    pub singular_points: Vec<f64>,
}

impl fmt::Debug for BoundaryProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BoundaryProfile")
            .field("samples", &self.samples.len())
            .field("exact", &self.evaluator.is_some())
            .field("singular_points", &self.singular_points)
            .finish()
    }
}

fn check_len(n: usize) -> Result<()> {
    if n >= 256 && n.is_power_of_two() {
        Ok(())
    } else {
        Err(PshError::InvalidParameter(format!(
            "sample count {n} must be a power of two ≥ 256"
        )))
    }
}

/// Angle of node `j` on an `n`-point uniform grid.
pub fn grid_angle(j: usize, n: usize) -> f64 {
    TAU * j as f64 / n as f64
}

impl BoundaryProfile {
    /// Samples `f` on the grid. Nodes where `f` is not finite receive the cell
    /// average `(N/2π)∫ f` over the cell, integrated with grading.
    pub fn from_fn(n: usize, f: AngleFn, singular_points: Vec<f64>) -> Result<Self> {
        check_len(n)?;
        let h = TAU / n as f64;
        let mut samples = Vec::with_capacity(n);
        for j in 0..n {
            let t = grid_angle(j, n);
            let v = f(t);
            let v = if v.is_finite() {
                v
            } else {
                let tol = Tolerance::new(1e-10, 1e-8);
                let g = |d: f64| f(t + d) + f(t - d);
                let r = integrate_with_endpoints(
                    g,
                    0.0,
                    0.5 * h,
                    (true, false),
                    &tol,
                    &GradingOptions::default(),
                );
                if r.is_divergent() {
                    f64::INFINITY
                } else {
                    r.value / h
                }
            };
            samples.push(v);
        }
        Ok(BoundaryProfile {
            samples,
            evaluator: Some(f),
            singular_points,
        })
    }

    pub fn from_samples(samples: Vec<f64>) -> Result<Self> {
        check_len(samples.len())?;
        Ok(BoundaryProfile {
            samples,
            evaluator: None,
            singular_points: Vec::new(),
        })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn theta(&self, j: usize) -> f64 {
        grid_angle(j, self.len())
    }

    /// Value at `θ`: exact when an evaluator is present, else periodic linear
    /// interpolation of the samples.
    pub fn value_at(&self, theta: f64) -> f64 {
        if let Some(f) = &self.evaluator {
            return f(theta);
        }
        let n = self.len();
        let u = theta.rem_euclid(TAU) / TAU * n as f64;
        let j = (u.floor() as usize) % n;
        let frac = u - u.floor();
        (1.0 - frac) * self.samples[j] + frac * self.samples[(j + 1) % n]
    }

    /// Exact evaluator agrees with the stored samples at finite nodes.
    pub fn check_consistency(&self, rel: f64) -> bool {
        match &self.evaluator {
            None => true,
            Some(f) => self.samples.iter().enumerate().all(|(j, &s)| {
                let v = f(self.theta(j));
                !v.is_finite() || (v - s).abs() <= rel * (1.0 + v.abs())
            }),
        }
    }

    /// `∫ b dν`.
    pub fn mean(&self, tol: &Tolerance<f64>) -> QuadratureResult<f64> {
        match &self.evaluator {
            Some(f) => integrate_boundary_arc(|t| f(t), tol, &self.singular_points),
            None => QuadratureResult::exact(self.samples.iter().sum::<f64>() / self.len() as f64),
        }
    }

    /// Discrete Fourier coefficients `ĉ_k = N⁻¹ Σ b_j e^{−ikθ_j}` in FFT order.
    pub fn fourier_coefficients(&self) -> Vec<Complex64> {
        let n = self.len();
        let mut buf: Vec<Complex64> = self
            .samples
            .iter()
            .map(|&v| Complex64::new(v, 0.0))
            .collect();
        FftPlanner::new().plan_fft_forward(n).process(&mut buf);
        let inv = 1.0 / n as f64;
        buf.iter_mut().for_each(|c| *c *= inv);
        buf
    }

    /// Harmonic extension `∫ P(z, ζ) b(ζ) dν(ζ)`.
    pub fn poisson_integral(&self, z: Complex64, tol: &Tolerance<f64>) -> QuadratureResult<f64> {
        match &self.evaluator {
            Some(f) => {
                let mut angles = self.singular_points.clone();
                if z.norm() > 0.9 {
                    angles.push(z.im.atan2(z.re));
                }
                integrate_boundary_arc(|t| poisson_kernel_angle(z, t) * f(t), tol, &angles)
            }
            None => QuadratureResult::exact(self.poisson_from_samples(z)),
        }
    }

    /// Harmonic extension of the trigonometric interpolant of the samples.
    pub fn poisson_from_samples(&self, z: Complex64) -> f64 {
        let c = self.fourier_coefficients();
        let n = c.len();
        let r = z.norm();
        let phi = z.im.atan2(z.re);
        let mut acc = c[0].re;
        for k in 1..n / 2 {
            let rk = r.powi(k as i32);
            if rk < 1e-18 {
                break;
            }
            acc += 2.0 * rk * (c[k] * Complex64::from_polar(1.0, k as f64 * phi)).re;
        }
        acc
    }

    /// CSV with header `theta,value`.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record(["theta", "value"])?;
        for (j, v) in self.samples.iter().enumerate() {
            wr.write_record([format!("{:.17e}", self.theta(j)), format!("{:.17e}", v)])?;
        }
        wr.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(r: R) -> Result<Self> {
        let mut rd = csv::Reader::from_reader(r);
        let headers = rd.headers()?.clone();
        if headers.iter().collect::<Vec<_>>() != ["theta", "value"] {
            return Err(PshError::Io(format!("unexpected header {headers:?}")));
        }
        let mut samples = Vec::new();
        for rec in rd.records() {
            let rec = rec?;
            let v: f64 = rec[1]
                .trim()
                .parse()
                .map_err(|e| PshError::Io(format!("bad value {:?}: {e}", &rec[1])))?;
            samples.push(v);
        }
        Self::from_samples(samples)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_profile_extends_to_constant() {
        let b = BoundaryProfile::from_fn(256, Arc::new(|_| 1.0), vec![]).unwrap();
        let v = b.poisson_integral(Complex64::new(0.3, 0.6), &Tolerance::default());
        assert!((v.value - 1.0).abs() < 1e-9);
        assert!((b.poisson_from_samples(Complex64::new(0.3, 0.6)) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cosine_extends_to_real_part() {
        let b = BoundaryProfile::from_fn(256, Arc::new(f64::cos), vec![]).unwrap();
        let z = Complex64::new(0.5, -0.7);
        assert!((b.poisson_integral(z, &Tolerance::new(1e-10, 1e-10)).value - z.re).abs() < 1e-8);
        assert!((b.poisson_from_samples(z) - z.re).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_lengths() {
        assert!(BoundaryProfile::from_samples(vec![0.0; 100]).is_err());
        assert!(BoundaryProfile::from_samples(vec![0.0; 128]).is_err());
    }

    #[test]
    fn singular_node_gets_cell_average() {
        let b = BoundaryProfile::from_fn(
            256,
            Arc::new(|t: f64| (2.0 * (0.5 * t).sin()).abs().powf(-0.5)),
            vec![0.0],
        )
        .unwrap();
        assert!(b.samples[0].is_finite() && b.samples[0] > b.samples[1]);
        assert!(b.check_consistency(1e-12));
    }

    #[test]
    fn csv_round_trip() {
        let b = BoundaryProfile::from_fn(256, Arc::new(|t: f64| t.sin() + 2.0), vec![]).unwrap();
        let mut buf = Vec::new();
        b.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("theta,value\n"));
        let back = BoundaryProfile::read_csv(&buf[..]).unwrap();
        assert_eq!(back.samples, b.samples);
    }
}
