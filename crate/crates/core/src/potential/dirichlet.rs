//! Dirichlet problem inside a smooth Jordan curve by a double-layer Nyström
//! method on a periodic parametrization.

use std::f64::consts::TAU;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{PshError, Result};

/// A closed curve sampled at `t_j = 2πj/N` with first and second derivatives.
#[derive(Clone, Debug, PartialEq)]
pub struct ClosedCurve {
    pub points: Vec<Complex64>,
    pub d1: Vec<Complex64>,
    pub d2: Vec<Complex64>,
}

/// Spectral derivative of periodic samples.
fn spectral_derivative(v: &[Complex64], order: u32) -> Vec<Complex64> {
    let n = v.len();
    let mut planner = FftPlanner::new();
    let mut buf = v.to_vec();
    planner.plan_fft_forward(n).process(&mut buf);
    for (k, c) in buf.iter_mut().enumerate() {
        let kk = if k < n / 2 {
            k as f64
        } else if k == n / 2 && n % 2 == 0 {
            0.0
        } else {
            k as f64 - n as f64
        };
        *c *= Complex64::new(0.0, kk).powu(order);
    }
    planner.plan_fft_inverse(n).process(&mut buf);
    let inv = 1.0 / n as f64;
    buf.iter_mut().for_each(|c| *c *= inv);
    buf
}

impl ClosedCurve {
    /// Curve from samples only; derivatives are taken spectrally.
    pub fn from_points(points: Vec<Complex64>) -> Result<Self> {
        if points.len() < 16 {
            return Err(PshError::InvalidParameter(
                "closed curve needs at least 16 nodes".into(),
            ));
        }
        let d1 = spectral_derivative(&points, 1);
        let d2 = spectral_derivative(&points, 2);
        Ok(ClosedCurve { points, d1, d2 })
    }

    /// Curve from an exact parametrization on `[0, 2π)`.
    pub fn from_parametrization(
        n: usize,
        z: impl Fn(f64) -> Complex64,
        dz: impl Fn(f64) -> Complex64,
        ddz: impl Fn(f64) -> Complex64,
    ) -> Self {
        let ts: Vec<f64> = (0..n).map(|j| TAU * j as f64 / n as f64).collect();
        ClosedCurve {
            points: ts.iter().map(|&t| z(t)).collect(),
            d1: ts.iter().map(|&t| dz(t)).collect(),
            d2: ts.iter().map(|&t| ddz(t)).collect(),
        }
    }

    pub fn circle(center: Complex64, radius: f64, n: usize) -> Self {
        Self::from_parametrization(
            n,
            |t| center + Complex64::from_polar(radius, t),
            |t| Complex64::new(0.0, 1.0) * Complex64::from_polar(radius, t),
            |t| -Complex64::from_polar(radius, t),
        )
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Total length by the periodic trapezoid rule.
    pub fn length(&self) -> f64 {
        TAU / self.len() as f64 * self.d1.iter().map(|d| d.norm()).sum::<f64>()
    }

    /// Signed area; positive for counterclockwise orientation.
    pub fn signed_area(&self) -> f64 {
        let h = TAU / self.len() as f64;
        0.5 * h
            * self
                .points
                .iter()
                .zip(&self.d1)
                .map(|(z, d)| (z.conj() * d).im)
                .sum::<f64>()
    }

    /// Winding number of the curve around `x`.
    pub fn winding_number(&self, x: Complex64) -> f64 {
        let h = TAU / self.len() as f64;
        h / TAU
            * self
                .points
                .iter()
                .zip(&self.d1)
                .map(|(z, d)| (d / (z - x)).im)
                .sum::<f64>()
    }

    fn nearest(&self, x: Complex64) -> usize {
        self.points
            .iter()
            .enumerate()
            .min_by(|a, b| {
                (a.1 - x)
                    .norm_sqr()
                    .partial_cmp(&(b.1 - x).norm_sqr())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
            .map(|(i, _)| i)
            .unwrap_or(0)
    }
}

/// Double-layer density solving the interior Dirichlet problem.
#[derive(Clone, Debug)]
pub struct HarmonicExtension {
    pub curve: ClosedCurve,
    pub density: Vec<f64>,
}

impl HarmonicExtension {
    /// Solves `φ + 2Kφ = 2f` with the double-layer kernel
    /// `(1/2π) Im[z′(t)/(z(t) − x)]`. The curve must be counterclockwise.
    pub fn solve(curve: &ClosedCurve, data: &[f64]) -> Result<Self> {
        let n = curve.len();
        if data.len() != n {
            return Err(PshError::InvalidParameter(
                "boundary data length differs from curve".into(),
            ));
        }
        if curve.signed_area() <= 0.0 {
            return Err(PshError::UnsupportedRegion(
                "curve is not counterclockwise".into(),
            ));
        }
        let w = 1.0 / n as f64;
        let mut a = DMatrix::<f64>::identity(n, n);
        for i in 0..n {
            let zi = curve.points[i];
            for j in 0..n {
                let k = if i == j {
                    let d1 = curve.d1[j];
                    (d1.conj() * curve.d2[j]).im / (2.0 * d1.norm_sqr()) * w
                } else {
                    let dz = curve.points[j] - zi;
                    (curve.d1[j] * dz.conj()).im / dz.norm_sqr() * w
                };
                a[(i, j)] += 2.0 * k;
            }
        }
        let rhs = DVector::from_iterator(n, data.iter().map(|v| 2.0 * v));
        let sol = a
            .lu()
            .solve(&rhs)
            .ok_or_else(|| PshError::UnsupportedRegion("singular Nyström system".into()))?;
        Ok(HarmonicExtension {
            curve: curve.clone(),
            density: sol.iter().copied().collect(),
        })
    }

    /// Value at an interior point, with singularity subtraction.
    pub fn eval(&self, x: Complex64) -> f64 {
        let n = self.curve.len();
        let j0 = self.curve.nearest(x);
        let base = self.density[j0];
        let w = 1.0 / n as f64;
        let mut acc = 0.0;
        for j in 0..n {
            let dz = self.curve.points[j] - x;
            let k = (self.curve.d1[j] * dz.conj()).im / dz.norm_sqr() * w;
            acc += (self.density[j] - base) * k;
        }
        base + acc
    }
}

/// Discrete double-layer integral of the constant 1; equals 1 inside the curve.
pub fn double_layer_total(curve: &ClosedCurve, x: Complex64) -> f64 {
    let n = curve.len();
    curve
        .points
        .iter()
        .zip(&curve.d1)
        .map(|(z, d)| (d * (z - x).conj()).im / (z - x).norm_sqr())
        .sum::<f64>()
        / n as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_constant_and_linear_data() {
        let c = ClosedCurve::circle(Complex64::new(0.1, -0.2), 0.5, 128);
        let ones = vec![1.0; 128];
        let h = HarmonicExtension::solve(&c, &ones).unwrap();
        assert!((h.eval(Complex64::new(0.2, -0.1)) - 1.0).abs() < 1e-12);
        let lin: Vec<f64> = c.points.iter().map(|z| z.re).collect();
        let h = HarmonicExtension::solve(&c, &lin).unwrap();
        let x = Complex64::new(0.4, -0.3);
        assert!((h.eval(x) - x.re).abs() < 1e-10);
    }

    #[test]
    fn ellipse_quadratic_harmonic() {
        // x² − y² is harmonic
        let c = ClosedCurve::from_parametrization(
            256,
            |t| Complex64::new(0.6 * t.cos(), 0.3 * t.sin()),
            |t| Complex64::new(-0.6 * t.sin(), 0.3 * t.cos()),
            |t| Complex64::new(-0.6 * t.cos(), -0.3 * t.sin()),
        );
        let data: Vec<f64> = c.points.iter().map(|z| z.re * z.re - z.im * z.im).collect();
        let h = HarmonicExtension::solve(&c, &data).unwrap();
        for x in [
            Complex64::new(0.1, 0.1),
            Complex64::new(0.55, 0.0),
            Complex64::new(0.0, 0.28),
        ] {
            assert!(
                (h.eval(x) - (x.re * x.re - x.im * x.im)).abs() < 1e-6,
                "{x} {}",
                h.eval(x) - (x.re * x.re - x.im * x.im)
            );
        }
    }

    #[test]
    fn spectral_points_match_exact_derivatives() {
        let c = ClosedCurve::circle(Complex64::new(0.0, 0.0), 0.7, 64);
        let s = ClosedCurve::from_points(c.points.clone()).unwrap();
        for j in 0..64 {
            assert!((s.d1[j] - c.d1[j]).norm() < 1e-12 && (s.d2[j] - c.d2[j]).norm() < 1e-12);
        }
        assert!((s.length() - TAU * 0.7).abs() < 1e-12);
        assert!((s.winding_number(Complex64::new(0.1, 0.1)) - 1.0).abs() < 1e-12);
        assert!((double_layer_total(&s, Complex64::new(0.1, 0.1)) - 1.0).abs() < 1e-12);
    }
}
