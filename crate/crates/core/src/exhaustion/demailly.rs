//! Demailly level measures `μ_{c,u}`, the density `U_c`, and the
//! Demailly–Lelong–Jensen identity.

use std::f64::consts::TAU;
use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{PshError, Result};
use crate::exhaustion::examples::phi;
use crate::exhaustion::level::LevelSet;
use crate::exhaustion::spec::{ExhaustionKind, ExhaustionSpec};
use crate::geometry::{QuadratureResult, Status, Tolerance};
use crate::potential::{HarmonicExtension, RieszMeasure};

/// A subharmonic test function with its Riesz density `Λv`.
pub trait Subharmonic: Send + Sync {
    fn value(&self, z: Complex64) -> f64;
    /// Area density of `Λv = Δv/2π`.
    fn laplacian(&self, z: Complex64) -> f64;
    fn label(&self) -> String;
}

type PointFn = Arc<dyn Fn(Complex64) -> f64 + Send + Sync>;

/// Test function given by closures.
#[derive(Clone)]
pub struct ExplicitSubharmonic {
    pub value: PointFn,
    pub laplacian: PointFn,
    pub label: String,
}

impl ExplicitSubharmonic {
    /// `|z|²`, with `Λ|z|² = 2/π`.
    pub fn modulus_squared() -> Self {
        ExplicitSubharmonic {
            value: Arc::new(|z| z.norm_sqr()),
            laplacian: Arc::new(|_| 2.0 / std::f64::consts::PI),
            label: "|z|^2".into(),
        }
    }

    /// A harmonic function (zero Laplacian).
    pub fn harmonic(label: &str, f: impl Fn(Complex64) -> f64 + Send + Sync + 'static) -> Self {
        ExplicitSubharmonic {
            value: Arc::new(f),
            laplacian: Arc::new(|_| 0.0),
            label: label.into(),
        }
    }
}

impl Subharmonic for ExplicitSubharmonic {
    fn value(&self, z: Complex64) -> f64 {
        (self.value)(z)
    }
    fn laplacian(&self, z: Complex64) -> f64 {
        (self.laplacian)(z)
    }
    fn label(&self) -> String {
        self.label.clone()
    }
}

/// How the total mass of `μ_{c,u}` was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MassRoute {
    /// Closed form for radial or point-mass measures.
    Exact,
    /// Area quadrature of `Λu` over `B_c`.
    Area,
    /// Flux `(1/2π)∮ ∂_n u ds` (used when `Λu` is implicit).
    Flux,
}

/// Discretized `μ_{c,u}` on a traced level curve.
#[derive(Clone, Debug, Serialize)]
pub struct DemaillyMeasure {
    pub c: f64,
    #[serde(rename = "totalMass")]
    pub total_mass: f64,
    #[serde(rename = "massStatus")]
    pub mass_status: Status,
    #[serde(rename = "massRoute")]
    pub mass_route: MassRoute,
    /// Quadrature atoms `[x, y, weight]` on the curve.
    pub atoms: Vec<[f64; 3]>,
    /// `U_c` at the curve nodes.
    #[serde(rename = "Uc")]
    pub uc: Vec<f64>,
    /// `∫ U_c dν_c`.
    #[serde(rename = "UcMass")]
    pub uc_mass: f64,
    #[serde(skip)]
    pub level: Arc<LevelSet>,
}

/// `U_c = |∇u|/2π` at the curve nodes.
pub fn density_uc(u: &ExhaustionSpec, level: &LevelSet) -> Vec<f64> {
    level
        .curve
        .points
        .iter()
        .map(|&z| u.gradient(z).norm() / TAU)
        .collect()
}

/// `∫ φ dμ_{c,u}` by `U_c ν_c` sampling, and whether the level is an exact
/// circle.
pub fn level_pairing(
    u: &ExhaustionSpec,
    c: f64,
    resolution: usize,
    phi: &dyn Fn(Complex64) -> f64,
) -> Result<(f64, bool)> {
    let level = LevelSet::trace(u, c, resolution)?;
    let h = TAU / level.len() as f64;
    let v = level
        .curve
        .points
        .iter()
        .zip(&level.curve.d1)
        .map(|(&z, d)| {
            let w = phi(z);
            if w == 0.0 {
                0.0
            } else {
                w * u.gradient(z).norm() / TAU * d.norm() * h
            }
        })
        .sum();
    Ok((v, level.circle.is_some()))
}

/// `∫_{B_c} h dΛu` for an exhaustion with an explicit Riesz measure.
pub fn region_measure(
    u: &ExhaustionSpec,
    level: &LevelSet,
    h: &dyn Fn(Complex64) -> f64,
    tol: &Tolerance<f64>,
) -> Result<QuadratureResult<f64>> {
    let atoms: f64 = u
        .atoms()?
        .iter()
        .filter(|a| level.contains(a.point))
        .map(|a| a.mass * h(a.point))
        .sum();
    let area = if has_density(u) {
        level.integrate_region(
            &|z| {
                let d = u.laplacian_density(z).unwrap_or(0.0);
                if d == 0.0 {
                    0.0
                } else {
                    d * h(z)
                }
            },
            &|a, b| u.density_breaks(a, b),
            tol,
        )
    } else {
        QuadratureResult::exact(0.0)
    };
    Ok(area.map_value(|v| v + atoms))
}

fn has_density(u: &ExhaustionSpec) -> bool {
    match &u.kind {
        ExhaustionKind::RadialLog => false,
        ExhaustionKind::GreenPotential(mu) => !mu.terms.is_empty(),
        ExhaustionKind::Scaled(_, inner) | ExhaustionKind::Pullback(_, inner) => has_density(inner),
        _ => true,
    }
}

fn radial_mass(u: &ExhaustionSpec, radius: f64) -> Option<f64> {
    match &u.kind {
        ExhaustionKind::RadialLog => Some(1.0),
        ExhaustionKind::RadialSmooth { coeff, power } => {
            let k2 = power + 2.0;
            Some(TAU * coeff * radius.powf(k2) / k2)
        }
        ExhaustionKind::Scaled(a, inner) => radial_mass(inner, radius).map(|m| a * m),
        ExhaustionKind::Pullback(map, inner) if map.derivative_bounds() == (1.0, 1.0) => {
            radial_mass(inner, radius)
        }
        _ => None,
    }
}

impl DemaillyMeasure {
    pub fn compute(
        u: &ExhaustionSpec,
        c: f64,
        resolution: usize,
        tol: &Tolerance<f64>,
    ) -> Result<Self> {
        let level = LevelSet::trace(u, c, resolution)?;
        let uc = density_uc(u, &level);
        let n = level.len();
        let h = TAU / n as f64;
        let atoms: Vec<[f64; 3]> = level
            .curve
            .points
            .iter()
            .zip(&level.curve.d1)
            .zip(&uc)
            .map(|((z, d), w)| [z.re, z.im, w * d.norm() * h])
            .collect();
        let uc_mass = atoms.iter().map(|a| a[2]).sum::<f64>();
        let radial = level
            .circle
            .filter(|(o, _)| o.norm() == 0.0 && u.is_radial())
            .and_then(|(_, r)| radial_mass(u, r));
        let (total, route) = if let Some(m) = radial {
            (QuadratureResult::exact(m), MassRoute::Exact)
        } else {
            match region_measure(u, &level, &|_| 1.0, tol) {
                Ok(r) => (
                    r,
                    if has_density(u) {
                        MassRoute::Area
                    } else {
                        MassRoute::Exact
                    },
                ),
                Err(PshError::Unsupported(_)) => {
                    (QuadratureResult::exact(uc_mass), MassRoute::Flux)
                }
                Err(e) => return Err(e),
            }
        };
        Ok(DemaillyMeasure {
            c,
            total_mass: total.value,
            mass_status: total.status,
            mass_route: route,
            atoms,
            uc,
            uc_mass,
            level,
        })
    }

    /// `∫ φ dμ_{c,u}` by `U_c ν_c` sampling.
    pub fn pairing(&self, phi: &dyn Fn(Complex64) -> f64) -> f64 {
        self.atoms
            .iter()
            .map(|a| a[2] * phi(Complex64::new(a[0], a[1])))
            .sum()
    }

    /// Relative gap between `∫ U_c dν_c` and the total mass.
    pub fn mass_balance(&self) -> f64 {
        (self.uc_mass - self.total_mass).abs() / self.total_mass.abs().max(f64::MIN_POSITIVE)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).unwrap_or(serde_json::Value::Null)
    }
}

/// `∫ φ dμ_{c,u}` as `∫_{B_c} H[φ] dΛu` with `H[φ]` the harmonic extension of
/// `φ|_{S_c}` into `B_c`.
pub fn harmext_pairing(
    u: &ExhaustionSpec,
    level: &LevelSet,
    phi: &dyn Fn(Complex64) -> f64,
    tol: &Tolerance<f64>,
) -> Result<QuadratureResult<f64>> {
    let data: Vec<f64> = level.curve.points.iter().map(|&z| phi(z)).collect();
    let ext = HarmonicExtension::solve(&level.curve, &data)?;
    region_measure(u, level, &|z| ext.eval(z), tol)
}

/// Both sides of `∫_{S_c} v dμ_c = ∫_{B_c} v dΛu − ∫_{B_c} u Λv + c ∫_{B_c} Λv`.
#[derive(Clone, Debug, Serialize)]
pub struct DjlReport {
    pub c: f64,
    pub test_function: String,
    /// Left side by `U_c` sampling.
    pub lhs: f64,
    /// Left side through the harmonic-extension pairing.
    pub lhs_harmext: Option<f64>,
    pub rhs: f64,
    pub rhs_status: Status,
    /// `|lhs − rhs| / max(|rhs|, 1e-300)`.
    pub residual: f64,
}

pub fn djl_both_sides(
    u: &ExhaustionSpec,
    v: &dyn Subharmonic,
    c: f64,
    resolution: usize,
    tol: &Tolerance<f64>,
) -> Result<DjlReport> {
    let mu = DemaillyMeasure::compute(u, c, resolution, tol)?;
    let level = mu.level.clone();
    let lhs = mu.pairing(&|z| v.value(z));
    let lhs_harmext = harmext_pairing(u, &level, &|z| v.value(z), tol)
        .ok()
        .map(|r| r.value);
    let bulk_v = region_measure(u, &level, &|z| v.value(z), tol);
    let bulk_v = match bulk_v {
        Ok(r) => r,
        Err(PshError::Unsupported(_)) => {
            // Λu implicit: ∫_B v dΛu = ∫_S v dμ_c + ∫_B (u − c) Λv
            return Err(PshError::Unsupported(format!(
                "right side needs Λu explicitly for {}",
                u.canonical()
            )));
        }
        Err(e) => return Err(e),
    };
    let cross = level.integrate_region(
        &|z| {
            let lv = v.laplacian(z);
            if lv == 0.0 {
                0.0
            } else {
                (c - u.evaluate(z)) * lv
            }
        },
        &|_, _| Vec::new(),
        tol,
    );
    let rhs = bulk_v.value + cross.value;
    Ok(DjlReport {
        c,
        test_function: v.label(),
        lhs,
        lhs_harmext,
        rhs,
        rhs_status: bulk_v.status.combine(cross.status),
        residual: (lhs - rhs).abs() / rhs.abs().max(1e-300),
    })
}

/// Largest violations of `φ_m ≤ Gφ_m ≤ Gσ_m` and `φ_m ≤ v_m ≤ Gσ_m` on a
/// polar grid (positive numbers are violations).
#[derive(Clone, Debug, Serialize)]
pub struct SandwichReport {
    pub m: f64,
    pub points: usize,
    pub phi_le_gphi: f64,
    pub gphi_le_gsigma: f64,
    pub phi_le_vm: f64,
    pub vm_le_um: f64,
}

pub fn sandwich_check(m: f64, rings: usize, spokes: usize) -> Result<SandwichReport> {
    let gphi = RieszMeasure::phi_laplacian(m)?;
    let um = ExhaustionSpec::um(m)?;
    let vm = ExhaustionSpec::vm(m)?;
    let tol = um.tol;
    let mut rep = SandwichReport {
        m,
        points: 0,
        phi_le_gphi: f64::NEG_INFINITY,
        gphi_le_gsigma: f64::NEG_INFINITY,
        phi_le_vm: f64::NEG_INFINITY,
        vm_le_um: f64::NEG_INFINITY,
    };
    for i in 1..=rings {
        let r = 0.97 * i as f64 / rings as f64;
        for j in 0..spokes {
            let z = Complex64::from_polar(r, TAU * j as f64 / spokes as f64 + 0.1);
            let p = phi(m, z);
            let g = gphi.potential_result(z, &tol)?.value;
            let s = um.evaluate(z);
            let v = vm.evaluate(z);
            rep.phi_le_gphi = rep.phi_le_gphi.max(p - g);
            rep.gphi_le_gsigma = rep.gphi_le_gsigma.max(g - s);
            rep.phi_le_vm = rep.phi_le_vm.max(p - v);
            rep.vm_le_um = rep.vm_le_um.max(v - s);
            rep.points += 1;
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_measure_is_uniform_unit_mass() {
        let u = ExhaustionSpec::log();
        let mu = DemaillyMeasure::compute(&u, -1.0, 256, &Tolerance::new(1e-10, 1e-10)).unwrap();
        assert_eq!(mu.mass_route, MassRoute::Exact);
        assert!((mu.total_mass - 1.0).abs() < 1e-15);
        assert!((mu.uc_mass - 1.0).abs() < 1e-12);
        let u0 = mu.uc[0];
        assert!(mu.uc.iter().all(|v| (v - u0).abs() < 1e-12));
    }

    #[test]
    fn djl_log_modulus_squared() {
        let u = ExhaustionSpec::log();
        let v = ExplicitSubharmonic::modulus_squared();
        let r = djl_both_sides(&u, &v, -0.5, 128, &Tolerance::new(1e-12, 1e-10)).unwrap();
        let e = (-1.0f64).exp();
        assert!(
            (r.lhs - e).abs() < 1e-10 && (r.rhs - e).abs() < 1e-9,
            "{r:?}"
        );
        assert!((r.lhs_harmext.unwrap() - e).abs() < 1e-9, "{r:?}");
    }

    #[test]
    fn green_mass_balance() {
        let u = ExhaustionSpec::green(Complex64::new(0.3, 0.0)).unwrap();
        let mu = DemaillyMeasure::compute(&u, -0.5, 256, &Tolerance::new(1e-10, 1e-10)).unwrap();
        assert!((mu.total_mass - 1.0).abs() < 1e-15);
        assert!(mu.mass_balance() < 1e-10, "{}", mu.mass_balance());
    }

    #[test]
    fn scaled_measure_scales() {
        let u = ExhaustionSpec::green(Complex64::new(0.2, 0.1)).unwrap();
        let s = ExhaustionSpec::scaled(2.0, u.clone()).unwrap();
        let tol = Tolerance::new(1e-10, 1e-10);
        let a = DemaillyMeasure::compute(&u, -0.4, 128, &tol).unwrap();
        let b = DemaillyMeasure::compute(&s, -0.8, 128, &tol).unwrap();
        assert!((b.total_mass - 2.0 * a.total_mass).abs() < 1e-12);
        let f = |z: Complex64| z.re + z.norm_sqr();
        assert!((b.pairing(&f) - 2.0 * a.pairing(&f)).abs() < 1e-10);
    }
}
