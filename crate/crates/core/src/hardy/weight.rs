//! The boundary weight `V(ζ) = ∫ P(z, ζ) dΛu(z)`.

use std::f64::consts::TAU;
use std::io::Write;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{PshError, Result};
use crate::exhaustion::{ExhaustionKind, ExhaustionSpec};
use crate::geometry::{integrate_boundary_arc, QuadratureResult, Tolerance};
use crate::potential::{BoundaryProfile, Mass};

/// Reporting convention for masses, weights and norms.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Normalization {
    /// `Λ = Δ/2π`, `ν(∂𝔻) = 1`.
    #[default]
    Normalized,
    /// Raw Laplacian `Δu`: scalars are `2π` times the normalized ones.
    Paper2pi,
}

impl Normalization {
    pub fn factor(self) -> f64 {
        match self {
            Normalization::Normalized => 1.0,
            Normalization::Paper2pi => TAU,
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "normalized" => Ok(Normalization::Normalized),
            "paper-2pi" => Ok(Normalization::Paper2pi),
            _ => Err(PshError::InvalidParameter(format!(
                "normalization must be 'normalized' or 'paper-2pi', got '{s}'"
            ))),
        }
    }

    pub fn scale_mass(self, m: Mass) -> Mass {
        m.scale(self.factor())
    }
}

/// Sampled `V` with its mass and log-integrability.
#[derive(Clone, Debug)]
pub struct BoundaryWeight {
    pub profile: BoundaryProfile,
    pub mass_of_laplacian: Mass,
    /// `∫ V dν`.
    pub mean: QuadratureResult<f64>,
    pub log_integrable: bool,
    /// Angles where `V` diverges.
    pub divergent_points: Vec<f64>,
}

/// `V` at one angle, `+∞` where the Poisson integral diverges.
pub fn weight_at(u: &ExhaustionSpec, theta: f64) -> f64 {
    match u.boundary_weight(theta) {
        Ok(r) if r.is_divergent() => f64::INFINITY,
        Ok(r) => r.value,
        Err(_) => f64::NAN,
    }
}

/// Exponent `α` with `V(e^{iθ}) ≍ |θ − θ₀|^α` near `θ₀`, when known in closed
/// form.
pub fn weight_exponent(u: &ExhaustionSpec, theta0: f64) -> Option<f64> {
    let near_one = theta0.rem_euclid(TAU).min(TAU - theta0.rem_euclid(TAU)) < 1e-12;
    match &u.kind {
        ExhaustionKind::RadialLog | ExhaustionKind::RadialSmooth { .. } => Some(0.0),
        ExhaustionKind::ExampleUm(m) => Some(if near_one { 2.0 * m - 2.0 } else { 0.0 }),
        ExhaustionKind::GreenPotential(mu) if mu.terms.is_empty() => Some(0.0),
        ExhaustionKind::Scaled(_, inner) => weight_exponent(inner, theta0),
        ExhaustionKind::Pullback(map, inner) => {
            let w = map.forward(num_complex::Complex64::from_polar(1.0, theta0));
            weight_exponent(inner, w.im.atan2(w.re))
        }
        _ => None,
    }
}

impl BoundaryWeight {
    pub fn compute(u: &ExhaustionSpec, samples: usize) -> Result<Self> {
        u.boundary_weight(0.5)?;
        let spec = u.clone();
        let eval: Arc<dyn Fn(f64) -> f64 + Send + Sync> = Arc::new(move |t| weight_at(&spec, t));
        let sing = u.singular_boundary_angles();
        let profile = BoundaryProfile::from_fn(samples, eval.clone(), sing.clone())?;
        if let Some(v) = profile.samples.iter().find(|v| v.is_nan() || **v < 0.0) {
            return Err(PshError::InvalidParameter(format!(
                "boundary weight sample {v} is not ≥ 0"
            )));
        }
        let divergent_points: Vec<f64> = profile
            .samples
            .iter()
            .enumerate()
            .filter(|(_, v)| v.is_infinite())
            .map(|(j, _)| profile.theta(j))
            .collect();
        let tol = Tolerance::new(1e-9, 1e-6);
        let mean = integrate_boundary_arc(|t| eval(t), &tol, &sing);
        let log_l1 = integrate_boundary_arc(|t| eval(t).ln().abs(), &tol, &sing);
        let log_integrable = !log_l1.is_divergent() && log_l1.value.is_finite();
        Ok(BoundaryWeight {
            profile,
            mass_of_laplacian: u.mass()?,
            mean,
            log_integrable,
            divergent_points,
        })
    }

    pub fn value_at(&self, theta: f64) -> f64 {
        self.profile.value_at(theta)
    }

    /// `stddev / mean` of the samples.
    pub fn relative_spread(&self) -> f64 {
        let s = &self.profile.samples;
        let n = s.len() as f64;
        let mean = s.iter().sum::<f64>() / n;
        let var = s.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
        var.sqrt() / mean.abs()
    }

    /// Relative gap in `∫ V dν = Λu(𝔻)`, `None` if either side is infinite.
    pub fn fubini_gap(&self) -> Option<f64> {
        let m = self.mass_of_laplacian.finite()?;
        let v = self.mean.finite()?;
        Some((v - m).abs() / m.abs().max(f64::MIN_POSITIVE))
    }

    /// `μ̃_u` of the arc `|θ − θ₀| < δ`.
    pub fn arc_measure(&self, theta0: f64, delta: f64) -> QuadratureResult<f64> {
        let eval = self.profile.evaluator.clone();
        match eval {
            Some(f) => {
                let tol = Tolerance::new(1e-12, 1e-8);
                crate::geometry::integrate_with_endpoints(
                    |t| f(t),
                    theta0 - delta,
                    theta0 + delta,
                    (true, true),
                    &tol,
                    &Default::default(),
                )
                .scale(1.0 / TAU)
            }
            None => QuadratureResult::exact(f64::NAN),
        }
    }

    /// CSV `theta,V`, scaled by the normalization factor.
    pub fn write_csv<W: Write>(&self, w: W, norm: Normalization) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record(["theta", "V"])?;
        for (j, v) in self.profile.samples.iter().enumerate() {
            wr.write_record([
                format!("{:.17e}", self.profile.theta(j)),
                format!("{:.17e}", v * norm.factor()),
            ])?;
        }
        wr.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_weight_is_one() {
        let w = BoundaryWeight::compute(&ExhaustionSpec::log(), 256).unwrap();
        assert!(w.profile.samples.iter().all(|v| *v == 1.0));
        assert_eq!(w.fubini_gap(), Some(0.0));
        assert!(w.log_integrable);
    }

    #[test]
    fn green_weight_is_poisson_kernel() {
        let a = num_complex::Complex64::new(0.4, -0.2);
        let w = BoundaryWeight::compute(&ExhaustionSpec::green(a).unwrap(), 256).unwrap();
        for j in (0..256).step_by(17) {
            let t = w.profile.theta(j);
            let p = crate::potential::poisson_kernel_angle(a, t);
            assert!((w.profile.samples[j] - p).abs() < 1e-12 * p);
        }
        assert!(w.fubini_gap().unwrap() < 1e-7);
    }

    #[test]
    fn normalization_parse() {
        assert_eq!(Normalization::parse("paper-2pi").unwrap().factor(), TAU);
        assert!(Normalization::parse("2pi").is_err());
    }
}
