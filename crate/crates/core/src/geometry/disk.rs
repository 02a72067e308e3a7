//! The unit disk, conformal self-maps, and area/arc integration on it.

use std::cell::Cell;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::quadrature::{
    integrate, integrate_graded, integrate_periodic, GradingOptions, QuadratureResult, Status,
    Tolerance,
};
use crate::error::{PshError, Result};
use crate::scalar::{Cx, Real};

/// The unit disk, optionally viewed through a conformal map onto it.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct DiskDomain {
    pub conformal_map: Option<ConformalMap>,
}

impl DiskDomain {
    pub fn contains(&self, z: Complex64) -> bool {
        z.norm_sqr() < 1.0
    }
}

/// Conformal self-maps of the disk used for transported computations.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum ConformalMap {
    Identity,
    /// `z ↦ e^{iα} z`
    Rotation {
        alpha: f64,
    },
    /// `z ↦ e^{iα} (z − a) / (1 − ā z)`
    Automorphism {
        a: Complex64,
        alpha: f64,
    },
}

impl ConformalMap {
    pub fn automorphism(a: Complex64) -> Result<Self> {
        if a.norm() >= 1.0 {
            return Err(PshError::InvalidMap(format!("|a| = {} ≥ 1", a.norm())));
        }
        Ok(ConformalMap::Automorphism { a, alpha: 0.0 })
    }

    pub fn forward(&self, z: Complex64) -> Complex64 {
        match *self {
            ConformalMap::Identity => z,
            ConformalMap::Rotation { alpha } => Complex64::from_polar(1.0, alpha) * z,
            ConformalMap::Automorphism { a, alpha } => {
                Complex64::from_polar(1.0, alpha) * (z - a) / (1.0 - a.conj() * z)
            }
        }
    }

    pub fn inverse(&self, w: Complex64) -> Complex64 {
        match *self {
            ConformalMap::Identity => w,
            ConformalMap::Rotation { alpha } => Complex64::from_polar(1.0, -alpha) * w,
            ConformalMap::Automorphism { a, alpha } => {
                let v = Complex64::from_polar(1.0, -alpha) * w;
                (v + a) / (1.0 + a.conj() * v)
            }
        }
    }

    pub fn derivative(&self, z: Complex64) -> Complex64 {
        match *self {
            ConformalMap::Identity => Complex64::new(1.0, 0.0),
            ConformalMap::Rotation { alpha } => Complex64::from_polar(1.0, alpha),
            ConformalMap::Automorphism { a, alpha } => {
                let d = 1.0 - a.conj() * z;
                Complex64::from_polar(1.0, alpha) * (1.0 - a.norm_sqr()) / (d * d)
            }
        }
    }

    /// Constants `0 < m ≤ |φ'|² ≤ M` on the closed disk.
    pub fn derivative_bounds(&self) -> (f64, f64) {
        match *self {
            ConformalMap::Identity | ConformalMap::Rotation { .. } => (1.0, 1.0),
            ConformalMap::Automorphism { a, .. } => {
                let r = a.norm();
                let lo = (1.0 - r) / (1.0 + r);
                let hi = (1.0 + r) / (1.0 - r);
                (lo * lo, hi * hi)
            }
        }
    }

    /// Checks the composition and derivative-bound invariants on a polar grid.
    pub fn validate(&self) -> Result<()> {
        let (m, big_m) = self.derivative_bounds();
        if !(m > 0.0 && m <= big_m && big_m.is_finite()) {
            return Err(PshError::InvalidMap(format!("bounds m={m}, M={big_m}")));
        }
        for i in 0..12 {
            let r = 0.95 * i as f64 / 11.0;
            for j in 0..16 {
                let z = Complex64::from_polar(r, std::f64::consts::TAU * j as f64 / 16.0);
                let back = self.forward(self.inverse(z));
                if (back - z).norm() > 1e-10 {
                    return Err(PshError::InvalidMap(format!(
                        "forward∘inverse off by {}",
                        (back - z).norm()
                    )));
                }
                let d2 = self.derivative(z).norm_sqr();
                if d2 < m * (1.0 - 1e-12) || d2 > big_m * (1.0 + 1e-12) {
                    return Err(PshError::InvalidMap(format!(
                        "|φ'|² = {d2} outside [{m}, {big_m}]"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Whether an area integral is taken against Lebesgue measure or against
/// area normalized so the disk has mass one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum AreaNormalization {
    #[default]
    Lebesgue,
    Normalized,
}

/// Declared singular structure of an integrand on the disk.
#[derive(Clone, Debug, PartialEq)]
pub struct Singularities<T> {
    /// Interior points; the first one becomes the center of the polar grid.
    pub interior: Vec<Cx<T>>,
    /// Boundary angles `θ` of singular points `e^{iθ}`.
    pub boundary: Vec<T>,
    /// Grade every ray toward the unit circle (integrand blows up or has a
    /// boundary layer along the whole circle).
    pub boundary_layer: bool,
}

impl<T> Default for Singularities<T> {
    fn default() -> Self {
        Singularities {
            interior: Vec::new(),
            boundary: Vec::new(),
            boundary_layer: false,
        }
    }
}

impl<T: Real> Singularities<T> {
    pub fn none() -> Self {
        Self::default()
    }

    pub fn boundary_points(angles: &[T]) -> Self {
        Singularities {
            boundary: angles.to_vec(),
            ..Self::default()
        }
    }
}

/// Distance from `center` to the unit circle along direction `ψ`.
fn exit_radius<T: Real>(center: Cx<T>, psi: T) -> T {
    let b = center.re * psi.cos() + center.im * psi.sin();
    let c = T::one() - center.norm_sqr();
    -b + (b * b + c).sqrt()
}

/// `∫_𝔻 density dA` on a polar tensor grid centered at the first declared
/// interior singularity (or the origin).
pub fn integrate_disk_area<T: Real, F: Fn(Cx<T>) -> T>(
    density: F,
    tol: &Tolerance<T>,
    sing: &Singularities<T>,
    normalization: AreaNormalization,
) -> QuadratureResult<T> {
    let center = sing
        .interior
        .first()
        .copied()
        .unwrap_or_else(|| Cx::new(T::zero(), T::zero()));
    let center_singular = !sing.interior.is_empty();
    let opts = GradingOptions::default();
    let worst = Cell::new(Status::Converged);
    let used = Cell::new(0usize);
    let inner_tol = Tolerance {
        abs: tol.abs * T::lit(0.02),
        rel: tol.rel * T::lit(0.1),
        budget: (tol.budget / 256).max(4096),
    };
    let ray = |psi: T| -> T {
        if used.get() > tol.budget {
            worst.set(worst.get().combine(Status::Inconclusive));
            return T::zero();
        }
        let dir = Cx::new(psi.cos(), psi.sin());
        let r_exit = exit_radius(center, psi);
        let f = |rho: T| density(center + dir * rho) * rho;
        let half = r_exit * T::lit(0.5);
        let inner_lo = if center_singular {
            integrate_graded(|d| f(d), half, &inner_tol, &opts)
        } else {
            integrate(|r| f(r), T::zero(), half, &inner_tol)
        };
        let inner_hi = if sing.boundary_layer {
            integrate_graded(|d| f(r_exit - d), r_exit - half, &inner_tol, &opts)
        } else {
            integrate(|r| f(r), half, r_exit, &inner_tol)
        };
        let r = inner_lo + inner_hi;
        used.set(used.get() + r.evaluations);
        worst.set(worst.get().combine(r.status));
        r.value
    };
    let psi_sing: Vec<T> = sing
        .boundary
        .iter()
        .map(|&t| {
            let d = Cx::new(t.cos(), t.sin()) - center;
            d.im.atan2(d.re)
        })
        .collect();
    let mut res = integrate_periodic(ray, &psi_sing, tol, &opts);
    res.status = res.status.combine(worst.get());
    res.evaluations += used.get();
    match normalization {
        AreaNormalization::Lebesgue => res,
        AreaNormalization::Normalized => res.scale(T::one() / T::PI()),
    }
}

/// `∫_{∂𝔻} density dν` with `ν` the normalized arclength, grading toward the
/// declared singular angles.
pub fn integrate_boundary_arc<T: Real, F: Fn(T) -> T>(
    density: F,
    tol: &Tolerance<T>,
    singular_angles: &[T],
) -> QuadratureResult<T> {
    let two_pi = T::TAU();
    let raw_tol = Tolerance {
        abs: tol.abs * two_pi,
        rel: tol.rel,
        budget: tol.budget,
    };
    integrate_periodic(
        density,
        singular_angles,
        &raw_tol,
        &GradingOptions::default(),
    )
    .scale(T::one() / two_pi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn constant_density_has_unit_normalized_mass() {
        let r = integrate_disk_area(
            |_z: Cx<f64>| 1.0,
            &Tolerance::default(),
            &Singularities::none(),
            AreaNormalization::Normalized,
        );
        assert!(r.is_converged());
        assert!((r.value - 1.0).abs() < 1e-10);
    }

    #[test]
    fn off_center_polar_grid() {
        let sing = Singularities {
            interior: vec![Cx::new(0.4, -0.3)],
            ..Singularities::default()
        };
        // ∫ |z|² dA = π/2
        let r = integrate_disk_area(
            |z: Cx<f64>| z.norm_sqr(),
            &Tolerance::new(1e-11, 1e-11),
            &sing,
            AreaNormalization::Lebesgue,
        );
        assert!((r.value - PI / 2.0).abs() < 1e-8, "{}", r.value);
        // integrable point singularity |z − a|^{-1}
        let a = Cx::new(0.4, -0.3);
        let r = integrate_disk_area(
            |z: Cx<f64>| 1.0 / (z - a).norm(),
            &Tolerance::new(1e-8, 1e-8),
            &sing,
            AreaNormalization::Lebesgue,
        );
        assert!(r.is_converged(), "{r:?}");
        // oracle: ∫_0^{2π} R(ψ) dψ
        let oracle = integrate(
            |p: f64| exit_radius(a, p),
            0.0,
            2.0 * PI,
            &Tolerance::new(1e-12, 1e-12),
        );
        assert!(
            (r.value - oracle.value).abs() < 1e-6,
            "{} vs {}",
            r.value,
            oracle.value
        );
    }

    #[test]
    fn boundary_arc_examples() {
        let one = integrate_boundary_arc(|_t: f64| 1.0, &Tolerance::default(), &[]);
        assert!((one.value - 1.0).abs() < 1e-12);
        let cos = integrate_boundary_arc(|t: f64| t.cos(), &Tolerance::default(), &[]);
        assert!(cos.value.abs() < 1e-10);
    }

    #[test]
    fn automorphism_round_trip_and_bounds() {
        let m = ConformalMap::automorphism(Complex64::new(0.3, 0.0)).unwrap();
        m.validate().unwrap();
        assert!(ConformalMap::automorphism(Complex64::new(1.0, 0.0)).is_err());
        let (lo, hi) = m.derivative_bounds();
        assert!(
            (lo - (0.7f64 / 1.3).powi(2)).abs() < 1e-15
                && (hi - (1.3f64 / 0.7).powi(2)).abs() < 1e-12
        );
    }
}
