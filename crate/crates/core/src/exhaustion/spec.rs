//! Exhaustion functions: evaluation, gradients, Riesz data and boundary weights.

use std::f64::consts::TAU;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{PshError, Result};
use crate::exhaustion::examples::{check_m, v_m};
use crate::geometry::{ConformalMap, QuadratureResult, Status, Tolerance};
use crate::potential::{green_gradient, green_unchecked, Atom, Mass, RieszMeasure};
use crate::scalar::{format_complex, parse_complex};

/// The supported families of negative subharmonic exhaustions of 𝔻.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum ExhaustionKind {
    /// `log|z|`.
    RadialLog,
    /// Green potential of the radial density `Λu = coeff · |z|^power`.
    RadialSmooth { coeff: f64, power: f64 },
    /// Green potential of an explicit Riesz measure.
    GreenPotential(RieszMeasure),
    /// `φ_m` glued to its harmonic extension off the lens.
    ExampleVm(f64),
    /// Green potential of `σ_m`.
    ExampleUm(f64),
    /// `a · u`.
    Scaled(f64, Box<ExhaustionSpec>),
    /// `u ∘ φ` for a disk automorphism `φ`.
    Pullback(ConformalMap, Box<ExhaustionSpec>),
}

/// A negative subharmonic exhaustion with the tolerance used to evaluate it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExhaustionSpec {
    pub kind: ExhaustionKind,
    pub tol: Tolerance<f64>,
}

/// Pointwise evaluation tolerance. The budget is small because strip
/// integrands lose a few digits very close to `z = 1`.
fn default_eval_tol() -> Tolerance<f64> {
    Tolerance::new(1e-13, 1e-9).with_budget(1 << 14)
}

impl ExhaustionSpec {
    pub fn new(kind: ExhaustionKind) -> Result<Self> {
        match &kind {
            ExhaustionKind::ExampleUm(m) | ExhaustionKind::ExampleVm(m) => {
                check_m(*m)?;
                if *m == 1.0 {
                    return Err(PshError::InvalidParameter(
                        "m = 1 gives the zero measure, which is not an exhaustion".into(),
                    ));
                }
            }
            ExhaustionKind::RadialSmooth { coeff, power } => {
                if !(*coeff > 0.0) || !(*power > -2.0) {
                    return Err(PshError::InvalidParameter(format!(
                        "radial density {coeff}·r^{power} needs coeff > 0 and power > −2"
                    )));
                }
            }
            ExhaustionKind::GreenPotential(mu) => {
                if mu.atoms.is_empty() && mu.terms.is_empty() {
                    return Err(PshError::InvalidParameter("zero measure".into()));
                }
            }
            ExhaustionKind::Scaled(a, _) => {
                if !(*a > 0.0) {
                    return Err(PshError::InvalidParameter(format!(
                        "scale {a} must be positive"
                    )));
                }
            }
            ExhaustionKind::Pullback(map, _) => map.validate()?,
            ExhaustionKind::RadialLog => {}
        }
        Ok(ExhaustionSpec {
            kind,
            tol: default_eval_tol(),
        })
    }

    pub fn log() -> Self {
        ExhaustionSpec {
            kind: ExhaustionKind::RadialLog,
            tol: default_eval_tol(),
        }
    }

    pub fn um(m: f64) -> Result<Self> {
        Self::new(ExhaustionKind::ExampleUm(m))
    }

    pub fn vm(m: f64) -> Result<Self> {
        Self::new(ExhaustionKind::ExampleVm(m))
    }

    pub fn green(w: Complex64) -> Result<Self> {
        Self::new(ExhaustionKind::GreenPotential(RieszMeasure::point_mass(
            w, 1.0,
        )?))
    }

    pub fn radial(coeff: f64, power: f64) -> Result<Self> {
        Self::new(ExhaustionKind::RadialSmooth { coeff, power })
    }

    pub fn scaled(a: f64, inner: ExhaustionSpec) -> Result<Self> {
        Self::new(ExhaustionKind::Scaled(a, Box::new(inner)))
    }

    pub fn pullback(map: ConformalMap, inner: ExhaustionSpec) -> Result<Self> {
        Self::new(ExhaustionKind::Pullback(map, Box::new(inner)))
    }

    pub fn with_tolerance(mut self, tol: Tolerance<f64>) -> Self {
        self.tol = tol;
        self.kind = match self.kind {
            ExhaustionKind::Scaled(a, inner) => {
                ExhaustionKind::Scaled(a, Box::new(inner.with_tolerance(tol)))
            }
            ExhaustionKind::Pullback(map, inner) => {
                ExhaustionKind::Pullback(map, Box::new(inner.with_tolerance(tol)))
            }
            kind => kind,
        };
        self
    }

    /// Product of the outer `Scaled` factors.
    pub fn scale_factor(&self) -> f64 {
        match &self.kind {
            ExhaustionKind::Scaled(a, inner) => a * inner.scale_factor(),
            _ => 1.0,
        }
    }

    /// Continuous near every level curve; true for all supported families.
    pub fn lipschitz_on_compacts(&self) -> bool {
        true
    }

    /// Radially symmetric about the origin.
    pub fn is_radial(&self) -> bool {
        match &self.kind {
            ExhaustionKind::RadialLog | ExhaustionKind::RadialSmooth { .. } => true,
            ExhaustionKind::Scaled(_, inner) => inner.is_radial(),
            ExhaustionKind::Pullback(
                ConformalMap::Identity | ConformalMap::Rotation { .. },
                inner,
            ) => inner.is_radial(),
            ExhaustionKind::GreenPotential(mu) => {
                mu.terms
                    .iter()
                    .all(|t| matches!(t, crate::potential::DensityTerm::RadialPower { .. }))
                    && mu.atoms.iter().all(|a| a.point == Complex64::new(0.0, 0.0))
            }
            _ => false,
        }
    }

    /// `u(z)`; `−∞` at atoms.
    pub fn evaluate(&self, z: Complex64) -> f64 {
        self.evaluate_result(z).value
    }

    pub fn evaluate_result(&self, z: Complex64) -> QuadratureResult<f64> {
        match &self.kind {
            ExhaustionKind::RadialLog => QuadratureResult::exact(z.norm().ln()),
            ExhaustionKind::RadialSmooth { coeff, power } => {
                crate::potential::DensityTerm::RadialPower {
                    coeff: *coeff,
                    power: *power,
                }
                .potential(z, &self.tol)
            }
            ExhaustionKind::GreenPotential(mu) => match mu.potential_result(z, &self.tol) {
                Ok(r) => r,
                Err(_) => QuadratureResult::exact(f64::NEG_INFINITY),
            },
            ExhaustionKind::ExampleUm(m) => RieszMeasure::sigma(*m)
                .and_then(|mu| mu.potential_result(z, &self.tol))
                .unwrap_or_else(|_| QuadratureResult::exact(f64::NAN)),
            ExhaustionKind::ExampleVm(m) => QuadratureResult::exact(v_m(*m, z, &self.tol)),
            ExhaustionKind::Scaled(a, inner) => inner.evaluate_result(z).scale(*a),
            ExhaustionKind::Pullback(map, inner) => inner.evaluate_result(map.forward(z)),
        }
    }

    /// Complex gradient `∂_x u + i ∂_y u`.
    pub fn gradient(&self, z: Complex64) -> Complex64 {
        match &self.kind {
            ExhaustionKind::RadialLog => z / z.norm_sqr(),
            ExhaustionKind::RadialSmooth { coeff, power } => {
                crate::potential::DensityTerm::RadialPower {
                    coeff: *coeff,
                    power: *power,
                }
                .gradient(z, &self.tol)
                .0
            }
            ExhaustionKind::GreenPotential(mu) => mu.gradient(z, &self.tol).0,
            ExhaustionKind::ExampleUm(m) => match RieszMeasure::sigma(*m) {
                Ok(mu) => mu.gradient(z, &self.tol).0,
                Err(_) => Complex64::new(f64::NAN, f64::NAN),
            },
            ExhaustionKind::ExampleVm(_) => {
                let h = 1e-6;
                let dx = (self.evaluate(z + h) - self.evaluate(z - h)) / (2.0 * h);
                let i = Complex64::new(0.0, h);
                let dy = (self.evaluate(z + i) - self.evaluate(z - i)) / (2.0 * h);
                Complex64::new(dx, dy)
            }
            ExhaustionKind::Scaled(a, inner) => inner.gradient(z) * *a,
            ExhaustionKind::Pullback(map, inner) => {
                inner.gradient(map.forward(z)) * map.derivative(z).conj()
            }
        }
    }

    /// Riesz measure `Λu` when it has an explicit representation.
    pub fn riesz_measure(&self) -> Result<RieszMeasure> {
        match &self.kind {
            ExhaustionKind::RadialLog => RieszMeasure::point_mass(Complex64::new(0.0, 0.0), 1.0),
            ExhaustionKind::RadialSmooth { coeff, power } => RieszMeasure::radial(*coeff, *power),
            ExhaustionKind::GreenPotential(mu) => Ok(mu.clone()),
            ExhaustionKind::ExampleUm(m) => RieszMeasure::sigma(*m),
            ExhaustionKind::ExampleVm(_) => Err(PshError::Unsupported(
                "the Riesz measure of v_m carries an implicit charge on the lens boundary".into(),
            )),
            ExhaustionKind::Scaled(a, inner) => Ok(inner.riesz_measure()?.scaled(*a)),
            ExhaustionKind::Pullback(..) => Err(PshError::Unsupported(
                "pulled-back measures are handled through the map".into(),
            )),
        }
    }

    fn unsupported_vm(&self) -> Result<()> {
        match &self.kind {
            ExhaustionKind::ExampleVm(_) => Err(PshError::Unsupported(
                "v_m is available through evaluation and level sets only".into(),
            )),
            ExhaustionKind::Scaled(_, inner) | ExhaustionKind::Pullback(_, inner) => {
                inner.unsupported_vm()
            }
            _ => Ok(()),
        }
    }

    /// Area density of `Λu` (atoms excluded).
    pub fn laplacian_density(&self, z: Complex64) -> Result<f64> {
        self.unsupported_vm()?;
        Ok(match &self.kind {
            ExhaustionKind::Pullback(map, inner) => {
                map.derivative(z).norm_sqr() * inner.laplacian_density(map.forward(z))?
            }
            ExhaustionKind::Scaled(a, inner) => a * inner.laplacian_density(z)?,
            _ => self.riesz_measure()?.density(z),
        })
    }

    pub fn atoms(&self) -> Result<Vec<Atom>> {
        self.unsupported_vm()?;
        Ok(match &self.kind {
            ExhaustionKind::Pullback(map, inner) => inner
                .atoms()?
                .into_iter()
                .map(|a| Atom {
                    point: map.inverse(a.point),
                    mass: a.mass,
                })
                .collect(),
            _ => self.riesz_measure()?.atoms,
        })
    }

    /// Boundary angles where `Λu` accumulates.
    pub fn singular_boundary_angles(&self) -> Vec<f64> {
        match &self.kind {
            ExhaustionKind::ExampleUm(_) | ExhaustionKind::ExampleVm(_) => vec![0.0],
            ExhaustionKind::Scaled(_, inner) => inner.singular_boundary_angles(),
            ExhaustionKind::Pullback(map, inner) => inner
                .singular_boundary_angles()
                .into_iter()
                .map(|t| {
                    let z = map.inverse(Complex64::from_polar(1.0, t));
                    z.im.atan2(z.re).rem_euclid(TAU)
                })
                .collect(),
            _ => self
                .riesz_measure()
                .map(|m| m.boundary_singular_angles())
                .unwrap_or_default(),
        }
    }

    /// `Λu(𝔻)` with its quadrature verdict.
    pub fn total_mass(&self) -> Result<QuadratureResult<f64>> {
        self.unsupported_vm()?;
        let tol = Tolerance::new(1e-12, 1e-10);
        Ok(match &self.kind {
            ExhaustionKind::Pullback(_, inner) => inner.total_mass()?,
            _ => self.riesz_measure()?.total_mass(&tol),
        })
    }

    pub fn mass(&self) -> Result<Mass> {
        let r = self.total_mass()?;
        Ok(if r.is_divergent() {
            Mass::Infinite
        } else {
            Mass::Finite(r.value)
        })
    }

    /// Boundary weight `V(e^{iθ}) = ∫ P(z, e^{iθ}) dΛu(z)`.
    pub fn boundary_weight(&self, theta: f64) -> Result<QuadratureResult<f64>> {
        self.unsupported_vm()?;
        let tol = Tolerance::new(1e-12, 1e-10);
        Ok(match &self.kind {
            ExhaustionKind::RadialLog => QuadratureResult::exact(1.0),
            ExhaustionKind::Pullback(map, inner) => {
                let zeta = Complex64::from_polar(1.0, theta);
                let image = map.forward(zeta);
                let scale = map.derivative(zeta).norm();
                inner
                    .boundary_weight(image.im.atan2(image.re))?
                    .scale(scale)
            }
            ExhaustionKind::Scaled(a, inner) => inner.boundary_weight(theta)?.scale(*a),
            _ => self.riesz_measure()?.poisson_weight(theta, &tol),
        })
    }

    /// `∫ h dΛu` over the disk.
    pub fn integrate_measure(
        &self,
        h: &dyn Fn(Complex64) -> f64,
        tol: &Tolerance<f64>,
    ) -> Result<QuadratureResult<f64>> {
        self.unsupported_vm()?;
        Ok(match &self.kind {
            ExhaustionKind::Pullback(map, inner) => {
                let m = *map;
                inner.integrate_measure(&|xi| h(m.inverse(xi)), tol)?
            }
            _ => self.riesz_measure()?.integrate(h, tol),
        })
    }

    /// Quadrature status of a value evaluation at `z` (diagnostic).
    pub fn evaluation_status(&self, z: Complex64) -> Status {
        self.evaluate_result(z).status
    }

    /// Pointwise value of the atom-free Green part (used in sandwich checks).
    pub fn green_of_atoms(&self, z: Complex64) -> Result<f64> {
        Ok(self
            .atoms()?
            .iter()
            .map(|a| a.mass * green_unchecked(z, a.point))
            .sum())
    }

    /// Gradient contribution of the atoms only.
    pub fn gradient_of_atoms(&self, z: Complex64) -> Result<Complex64> {
        Ok(self
            .atoms()?
            .iter()
            .map(|a| green_gradient(z, a.point) * a.mass)
            .sum())
    }

    /// Canonical spec string, e.g. `log`, `um:0.75`, `green:0.3+0i`.
    pub fn canonical(&self) -> String {
        match &self.kind {
            ExhaustionKind::RadialLog => "log".into(),
            ExhaustionKind::RadialSmooth { coeff, power } => {
                format!("radial-density:{coeff},{power}")
            }
            ExhaustionKind::GreenPotential(mu) if mu.terms.is_empty() => {
                let parts: Vec<String> = mu
                    .atoms
                    .iter()
                    .map(|a| {
                        if a.mass == 1.0 {
                            format_complex(a.point)
                        } else {
                            format!("{}*{}", format_complex(a.point), a.mass)
                        }
                    })
                    .collect();
                format!("green:{}", parts.join(";"))
            }
            ExhaustionKind::GreenPotential(mu) => {
                format!("measure:{}", serde_json::to_string(mu).unwrap_or_default())
            }
            ExhaustionKind::ExampleUm(m) => format!("um:{m}"),
            ExhaustionKind::ExampleVm(m) => format!("vm:{m}"),
            ExhaustionKind::Scaled(a, inner) => format!("scaled:{a}:{}", inner.canonical()),
            ExhaustionKind::Pullback(map, inner) => {
                let m = match map {
                    ConformalMap::Identity => "id".to_string(),
                    ConformalMap::Rotation { alpha } => format!("rot({alpha})"),
                    ConformalMap::Automorphism { a, alpha } if *alpha == 0.0 => {
                        format!("aut({})", format_complex(*a))
                    }
                    ConformalMap::Automorphism { a, alpha } => {
                        format!("aut({},{alpha})", format_complex(*a))
                    }
                };
                format!("pullback:{m}:{}", inner.canonical())
            }
        }
    }

    /// Parses a spec string; inverse of [`canonical`](Self::canonical).
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let err = |msg: &str| PshError::Parse {
            pos: 0,
            msg: format!("{msg} in exhaustion spec {s:?}"),
        };
        let num = |t: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| err(&format!("bad number {t:?}")))
        };
        if s == "log" {
            return Ok(Self::log());
        }
        let (head, rest) = s.split_once(':').ok_or_else(|| err("unknown form"))?;
        match head {
            "um" => Self::um(num(rest)?),
            "vm" => Self::vm(num(rest)?),
            "radial-density" => {
                let (a, k) = rest
                    .split_once(',')
                    .ok_or_else(|| err("expected coeff,power"))?;
                Self::radial(num(a)?, num(k)?)
            }
            "green" => {
                let mut atoms = Vec::new();
                for part in rest.split(';') {
                    let (p, mass) = match part.split_once('*') {
                        Some((p, m)) => (p, num(m)?),
                        None => (part, 1.0),
                    };
                    let point = parse_complex(p).ok_or_else(|| err(&format!("bad point {p:?}")))?;
                    atoms.push(Atom { point, mass });
                }
                Self::new(ExhaustionKind::GreenPotential(RieszMeasure::new(
                    atoms,
                    Vec::new(),
                )?))
            }
            "measure" => {
                let mu: RieszMeasure =
                    serde_json::from_str(rest).map_err(|e| err(&e.to_string()))?;
                Self::new(ExhaustionKind::GreenPotential(RieszMeasure::new(
                    mu.atoms, mu.terms,
                )?))
            }
            "scaled" => {
                let (a, inner) = rest
                    .split_once(':')
                    .ok_or_else(|| err("expected scaled:a:inner"))?;
                Self::scaled(num(a)?, Self::parse(inner)?)
            }
            "pullback" => {
                let close = if rest.starts_with("id") {
                    2
                } else {
                    rest.find(')').ok_or_else(|| err("unterminated map"))? + 1
                };
                let (map_s, inner) = rest.split_at(close);
                let inner = inner
                    .strip_prefix(':')
                    .ok_or_else(|| err("expected pullback:map:inner"))?;
                let map = if map_s == "id" {
                    ConformalMap::Identity
                } else if let Some(b) = map_s.strip_prefix("rot(").and_then(|b| b.strip_suffix(')'))
                {
                    ConformalMap::Rotation { alpha: num(b)? }
                } else if let Some(b) = map_s.strip_prefix("aut(").and_then(|b| b.strip_suffix(')'))
                {
                    let (a, alpha) = match b.split_once(',') {
                        Some((a, al)) => (a, num(al)?),
                        None => (b, 0.0),
                    };
                    let a = parse_complex(a).ok_or_else(|| err(&format!("bad point {a:?}")))?;
                    if a.norm() >= 1.0 {
                        return Err(PshError::InvalidMap(format!("|a| = {} ≥ 1", a.norm())));
                    }
                    ConformalMap::Automorphism { a, alpha }
                } else {
                    return Err(err(&format!("unknown map {map_s:?}")));
                };
                Self::pullback(map, Self::parse(inner)?)
            }
            _ => Err(err(&format!("unknown family {head:?}"))),
        }
    }
}

impl fmt::Display for ExhaustionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_round_trip() {
        for s in [
            "log",
            "um:0.75",
            "vm:0.6",
            "green:0.3+0i",
            "green:0.1-0.2i;0+0.5i*2",
            "radial-density:2,1",
            "scaled:2:log",
            "pullback:aut(0.3+0i):log",
            "pullback:rot(0.5):um:0.75",
            "pullback:id:log",
        ] {
            let spec = ExhaustionSpec::parse(s).unwrap();
            assert_eq!(spec.canonical(), s);
            assert_eq!(ExhaustionSpec::parse(&spec.canonical()).unwrap(), spec);
        }
    }

    #[test]
    fn parse_errors() {
        assert!(ExhaustionSpec::parse("um:1.5").is_err());
        assert!(ExhaustionSpec::parse("foo:1").is_err());
        assert!(ExhaustionSpec::parse("pullback:aut(1+0i):log").is_err());
        assert!(ExhaustionSpec::parse("green:2+0i").is_err());
    }

    #[test]
    fn scaled_and_pullback_evaluate() {
        let z = Complex64::new(0.2, 0.3);
        let s = ExhaustionSpec::parse("scaled:2:log").unwrap();
        assert!((s.evaluate(z) - 2.0 * z.norm().ln()).abs() < 1e-15);
        let p = ExhaustionSpec::parse("pullback:aut(0.3+0i):log").unwrap();
        let g = ExhaustionSpec::green(Complex64::new(0.3, 0.0)).unwrap();
        assert!((p.evaluate(z) - g.evaluate(z)).abs() < 1e-14);
        let gp = p.gradient(z);
        let gg = g.gradient(z);
        assert!((gp - gg).norm() < 1e-12);
    }
}
