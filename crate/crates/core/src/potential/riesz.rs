//! Riesz measures: atoms plus area densities, with Green potentials,
//! gradients and boundary weights.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{PshError, Result};
use crate::geometry::{
    integrate, integrate_disk_area, integrate_with_endpoints, AreaNormalization, GradingOptions,
    QuadratureResult, Singularities, Status, Tolerance,
};
use crate::potential::kernels::{green_gradient, green_unchecked, poisson_kernel_angle};
use crate::potential::slab::{green_derivative_strip, green_strip, poisson_strip, Slab};

/// Total mass of a positive measure.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Mass {
    Finite(f64),
    Infinite,
}

impl Mass {
    pub fn finite(&self) -> Option<f64> {
        match self {
            Mass::Finite(v) => Some(*v),
            Mass::Infinite => None,
        }
    }

    pub fn scale(self, a: f64) -> Mass {
        match self {
            Mass::Finite(v) => Mass::Finite(a * v),
            Mass::Infinite => Mass::Infinite,
        }
    }
}

/// Value of a Green potential, with `−∞` kept as a flag.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum PotentialValue {
    Finite(f64),
    NegInfinite,
}

impl PotentialValue {
    pub fn finite(&self) -> Option<f64> {
        match self {
            PotentialValue::Finite(v) => Some(*v),
            PotentialValue::NegInfinite => None,
        }
    }
}

/// A point charge.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub point: Complex64,
    pub mass: f64,
}

/// Area density of a Riesz measure, against Lebesgue area.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum DensityTerm {
    /// `coeff · (1 − x)^exponent` on the slab region.
    EdgePower {
        slab: Slab,
        coeff: f64,
        exponent: f64,
    },
    /// `coeff · |z|^power` on the disk.
    RadialPower { coeff: f64, power: f64 },
}

fn grading() -> GradingOptions<f64> {
    GradingOptions::default()
}

impl DensityTerm {
    pub fn value(&self, z: Complex64) -> f64 {
        match *self {
            DensityTerm::EdgePower {
                slab,
                coeff,
                exponent,
            } => {
                if slab.contains(z) {
                    coeff * (1.0 - z.re).powf(exponent)
                } else {
                    0.0
                }
            }
            DensityTerm::RadialPower { coeff, power } => {
                if z.norm_sqr() < 1.0 {
                    coeff * z.norm().powf(power)
                } else {
                    0.0
                }
            }
        }
    }

    /// Boundary angles where the density accumulates.
    pub fn boundary_singular_angles(&self) -> Vec<f64> {
        match self {
            DensityTerm::EdgePower { .. } => vec![0.0],
            DensityTerm::RadialPower { .. } => Vec::new(),
        }
    }

    /// `coeff ∫_0^{s_max} s^e f(s) ds` split at the given interior breakpoints.
    fn slab_integral<F: FnMut(f64) -> f64>(
        slab: Slab,
        coeff: f64,
        exponent: f64,
        breakpoints: &[f64],
        mut f: F,
        tol: &Tolerance<f64>,
    ) -> QuadratureResult<f64> {
        let s_max = slab.s_max();
        let mut pts = vec![0.0];
        let mut extra: Vec<f64> = breakpoints
            .iter()
            .copied()
            .filter(|&b| b > 0.0 && b < s_max * (1.0 - 1e-14))
            .collect();
        extra.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
        extra.dedup_by(|a, b| (*a - *b).abs() <= 1e-14 * a.abs());
        pts.extend(extra);
        pts.push(s_max);
        let n = pts.len() - 1;
        let piece_tol = Tolerance {
            abs: tol.abs / n as f64,
            rel: tol.rel,
            budget: tol.budget / n,
        };
        let mut total = QuadratureResult::exact(0.0);
        for (i, w) in pts.windows(2).enumerate() {
            let ends = (i == 0, i + 1 == n);
            let r = integrate_with_endpoints(
                |s: f64| {
                    if s <= 0.0 {
                        0.0
                    } else {
                        s.powf(exponent) * f(s)
                    }
                },
                w[0],
                w[1],
                ends,
                &piece_tol,
                &grading(),
            );
            total = total + r;
            if total.is_divergent() {
                break;
            }
        }
        total.scale(coeff)
    }

    /// Mass against Lebesgue area.
    pub fn mass(&self, tol: &Tolerance<f64>) -> QuadratureResult<f64> {
        match *self {
            DensityTerm::EdgePower {
                slab,
                coeff,
                exponent,
            } => Self::slab_integral(
                slab,
                coeff,
                exponent,
                &[],
                |s| 2.0 * slab.half_width(s),
                tol,
            ),
            DensityTerm::RadialPower { coeff, power } => {
                if power > -2.0 {
                    QuadratureResult::exact(TAU * coeff / (power + 2.0))
                } else {
                    QuadratureResult::divergent(f64::INFINITY)
                }
            }
        }
    }

    pub fn potential(&self, z: Complex64, tol: &Tolerance<f64>) -> QuadratureResult<f64> {
        match *self {
            DensityTerm::EdgePower {
                slab,
                coeff,
                exponent,
            } => Self::slab_integral(
                slab,
                coeff,
                exponent,
                &[1.0 - z.re],
                |s| green_strip(z, s, slab.half_width(s)),
                tol,
            ),
            DensityTerm::RadialPower { coeff, power } => {
                if power <= -2.0 {
                    return QuadratureResult::divergent(f64::NEG_INFINITY);
                }
                let k2 = power + 2.0;
                let r = z.norm();
                let tail = if r > 0.0 {
                    -1.0 / (k2 * k2) - r.powf(k2) * (r.ln() / k2 - 1.0 / (k2 * k2))
                } else {
                    -1.0 / (k2 * k2)
                };
                let inner = if r > 0.0 {
                    r.ln() * TAU * coeff * r.powf(k2) / k2
                } else {
                    0.0
                };
                QuadratureResult::exact(inner + TAU * coeff * tail)
            }
        }
    }

    /// Complex gradient `∂_x + i ∂_y` of the potential.
    pub fn gradient(&self, z: Complex64, tol: &Tolerance<f64>) -> (Complex64, Status) {
        match *self {
            DensityTerm::EdgePower {
                slab,
                coeff,
                exponent,
            } => {
                let bp = [1.0 - z.re];
                let re = Self::slab_integral(
                    slab,
                    coeff,
                    exponent,
                    &bp,
                    |s| green_derivative_strip(z, s, slab.half_width(s)).re,
                    tol,
                );
                let im = Self::slab_integral(
                    slab,
                    coeff,
                    exponent,
                    &bp,
                    |s| green_derivative_strip(z, s, slab.half_width(s)).im,
                    tol,
                );
                (
                    Complex64::new(re.value, -im.value),
                    re.status.combine(im.status),
                )
            }
            DensityTerm::RadialPower { coeff, power } => {
                let r = z.norm();
                if r == 0.0 {
                    return (Complex64::new(0.0, 0.0), Status::Converged);
                }
                let m = TAU * coeff * r.powf(power + 2.0) / (power + 2.0);
                (z / r * (m / r), Status::Converged)
            }
        }
    }

    /// `∫ P(w, e^{iθ}) density(w) dA(w)`.
    pub fn poisson_weight(&self, theta: f64, tol: &Tolerance<f64>) -> QuadratureResult<f64> {
        match *self {
            DensityTerm::EdgePower {
                slab,
                coeff,
                exponent,
            } => {
                let t = theta.rem_euclid(TAU);
                if (t == 0.0 || t == TAU) && exponent <= -1.0 && coeff > 0.0 {
                    return QuadratureResult::divergent(f64::INFINITY);
                }
                let s_theta = 2.0 * (0.5 * theta).sin().powi(2);
                let s_max = slab.s_max();
                let mut breaks = vec![s_theta];
                let mut b = s_theta * 4.0;
                while b > 0.0 && b < s_max {
                    breaks.push(b);
                    b *= 4.0;
                }
                Self::slab_integral(
                    slab,
                    coeff,
                    exponent,
                    &breaks,
                    |s| poisson_strip(theta, s, slab.half_width(s)),
                    tol,
                )
            }
            DensityTerm::RadialPower { .. } => self.mass(tol),
        }
    }

    /// `∫ h · density dA` over the disk.
    pub fn integrate<H: Fn(Complex64) -> f64>(
        &self,
        h: H,
        tol: &Tolerance<f64>,
    ) -> QuadratureResult<f64> {
        match *self {
            DensityTerm::EdgePower {
                slab,
                coeff,
                exponent,
            } => {
                let inner_tol = Tolerance {
                    abs: tol.abs * 0.01,
                    rel: tol.rel * 0.1,
                    budget: (tol.budget / 256).max(4096),
                };
                let status = std::cell::Cell::new(Status::Converged);
                let r = Self::slab_integral(
                    slab,
                    coeff,
                    exponent,
                    &[],
                    |s| {
                        let y = slab.half_width(s);
                        let x = 1.0 - s;
                        let r = integrate(|t: f64| h(Complex64::new(x, t)), -y, y, &inner_tol);
                        status.set(status.get().combine(r.status));
                        r.value
                    },
                    tol,
                );
                QuadratureResult {
                    status: r.status.combine(status.get()),
                    ..r
                }
            }
            DensityTerm::RadialPower { coeff, power } => {
                let sing = if power < 0.0 {
                    Singularities {
                        interior: vec![Complex64::new(0.0, 0.0)],
                        ..Singularities::default()
                    }
                } else {
                    Singularities::none()
                };
                integrate_disk_area(
                    |z| h(z) * coeff * z.norm().powf(power),
                    tol,
                    &sing,
                    AreaNormalization::Lebesgue,
                )
            }
        }
    }
}

/// Positive measure `Λu = (1/2π)Δu`: atoms plus density terms.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RieszMeasure {
    pub atoms: Vec<Atom>,
    pub terms: Vec<DensityTerm>,
    pub total_mass_hint: Option<Mass>,
}

impl RieszMeasure {
    pub fn new(atoms: Vec<Atom>, terms: Vec<DensityTerm>) -> Result<Self> {
        for a in &atoms {
            if !(a.mass > 0.0) || !(a.point.norm() < 1.0) {
                return Err(PshError::InvalidParameter(format!(
                    "atom at {} with mass {} must be interior with positive mass",
                    a.point, a.mass
                )));
            }
        }
        for t in &terms {
            let c = match t {
                DensityTerm::EdgePower { coeff, .. } | DensityTerm::RadialPower { coeff, .. } => {
                    *coeff
                }
            };
            if !(c >= 0.0) {
                return Err(PshError::InvalidParameter(format!(
                    "negative density coefficient {c}"
                )));
            }
        }
        Ok(RieszMeasure {
            atoms,
            terms,
            total_mass_hint: None,
        })
    }

    pub fn point_mass(w: Complex64, mass: f64) -> Result<Self> {
        Self::new(vec![Atom { point: w, mass }], Vec::new())
    }

    /// Restriction of `Λφ_m` to the lens `(x − ½)² + y² < ¼`.
    pub fn sigma(m: f64) -> Result<Self> {
        check_m(m)?;
        let mut r = Self::new(
            Vec::new(),
            vec![DensityTerm::EdgePower {
                slab: Slab::Lens,
                coeff: m * (1.0 - m) / TAU,
                exponent: m - 2.0,
            }],
        )?;
        r.total_mass_hint = Some(sigma_mass_exact(m));
        Ok(r)
    }

    /// `Λφ_m` on the whole disk.
    pub fn phi_laplacian(m: f64) -> Result<Self> {
        check_m(m)?;
        Self::new(
            Vec::new(),
            vec![DensityTerm::EdgePower {
                slab: Slab::Disk,
                coeff: m * (1.0 - m) / TAU,
                exponent: m - 2.0,
            }],
        )
    }

    pub fn radial(coeff: f64, power: f64) -> Result<Self> {
        Self::new(Vec::new(), vec![DensityTerm::RadialPower { coeff, power }])
    }

    pub fn scaled(&self, a: f64) -> Self {
        RieszMeasure {
            atoms: self
                .atoms
                .iter()
                .map(|x| Atom {
                    point: x.point,
                    mass: a * x.mass,
                })
                .collect(),
            terms: self
                .terms
                .iter()
                .map(|t| match *t {
                    DensityTerm::EdgePower {
                        slab,
                        coeff,
                        exponent,
                    } => DensityTerm::EdgePower {
                        slab,
                        coeff: a * coeff,
                        exponent,
                    },
                    DensityTerm::RadialPower { coeff, power } => DensityTerm::RadialPower {
                        coeff: a * coeff,
                        power,
                    },
                })
                .collect(),
            total_mass_hint: self.total_mass_hint.map(|m| m.scale(a)),
        }
    }

    pub fn density(&self, z: Complex64) -> f64 {
        self.terms.iter().map(|t| t.value(z)).sum()
    }

    pub fn boundary_singular_angles(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self
            .terms
            .iter()
            .flat_map(|t| t.boundary_singular_angles())
            .collect();
        v.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
        v.dedup();
        v
    }

    pub fn total_mass(&self, tol: &Tolerance<f64>) -> QuadratureResult<f64> {
        let atoms: f64 = self.atoms.iter().map(|a| a.mass).sum();
        let n = self.terms.len().max(1) as f64;
        let t = Tolerance {
            abs: tol.abs / n,
            ..*tol
        };
        self.terms
            .iter()
            .map(|d| d.mass(&t))
            .sum::<QuadratureResult<f64>>()
            .map_value(|v| v + atoms)
    }

    pub fn mass(&self, tol: &Tolerance<f64>) -> Mass {
        let r = self.total_mass(tol);
        if r.is_divergent() {
            Mass::Infinite
        } else {
            Mass::Finite(r.value)
        }
    }

    /// Green potential with its quadrature bookkeeping.
    pub fn potential_result(
        &self,
        z: Complex64,
        tol: &Tolerance<f64>,
    ) -> Result<QuadratureResult<f64>> {
        let mut acc = QuadratureResult::exact(0.0);
        for a in &self.atoms {
            if a.point == z {
                return Err(PshError::Singularity(format!(
                    "potential evaluated at atom {z}"
                )));
            }
            acc = acc + QuadratureResult::exact(a.mass * green_unchecked(z, a.point));
        }
        for t in &self.terms {
            acc = acc + t.potential(z, tol);
        }
        Ok(acc)
    }

    pub fn potential(&self, z: Complex64, tol: &Tolerance<f64>) -> Result<PotentialValue> {
        let r = self.potential_result(z, tol)?;
        Ok(if r.is_divergent() || r.value == f64::NEG_INFINITY {
            PotentialValue::NegInfinite
        } else {
            PotentialValue::Finite(r.value)
        })
    }

    pub fn gradient(&self, z: Complex64, tol: &Tolerance<f64>) -> (Complex64, Status) {
        let mut g = Complex64::new(0.0, 0.0);
        let mut st = Status::Converged;
        for a in &self.atoms {
            g += green_gradient(z, a.point) * a.mass;
        }
        for t in &self.terms {
            let (v, s) = t.gradient(z, tol);
            g += v;
            st = st.combine(s);
        }
        (g, st)
    }

    /// Boundary weight `V(e^{iθ}) = ∫ P(w, e^{iθ}) dΛu(w)`.
    pub fn poisson_weight(&self, theta: f64, tol: &Tolerance<f64>) -> QuadratureResult<f64> {
        let atoms: f64 = self
            .atoms
            .iter()
            .map(|a| a.mass * poisson_kernel_angle(a.point, theta))
            .sum();
        self.terms
            .iter()
            .map(|t| t.poisson_weight(theta, tol))
            .sum::<QuadratureResult<f64>>()
            .map_value(|v| v + atoms)
    }

    /// `∫ h dΛu` over the disk.
    pub fn integrate<H: Fn(Complex64) -> f64>(
        &self,
        h: H,
        tol: &Tolerance<f64>,
    ) -> QuadratureResult<f64> {
        let atoms: f64 = self.atoms.iter().map(|a| a.mass * h(a.point)).sum();
        self.terms
            .iter()
            .map(|t| t.integrate(&h, tol))
            .sum::<QuadratureResult<f64>>()
            .map_value(|v| v + atoms)
    }
}

fn check_m(m: f64) -> Result<()> {
    if m > 0.0 && m <= 1.0 {
        Ok(())
    } else {
        Err(PshError::InvalidParameter(format!(
            "m = {m} must lie in (0, 1]"
        )))
    }
}

/// Closed-form mass of the lens measure: `2m(1−m)B(3/2, m−½)/(2π)`.
pub fn sigma_mass_exact(m: f64) -> Mass {
    if m == 1.0 {
        Mass::Finite(0.0)
    } else if m > 0.5 {
        Mass::Finite(2.0 * m * (1.0 - m) * statrs::function::beta::beta(1.5, m - 0.5) / (2.0 * PI))
    } else {
        Mass::Infinite
    }
}
