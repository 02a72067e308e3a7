//! The edge-power family `φ_m`, `σ_m`, `v_m`, `u_m`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{PshError, Result};
use crate::geometry::{integrate, Tolerance};
use crate::potential::{RieszMeasure, Slab};

/// `φ_m(z) = −(1 − x)^m`.
pub fn phi(m: f64, z: Complex64) -> f64 {
    -(1.0 - z.re).max(0.0).powf(m)
}

/// Area density of `Λφ_m = m(1−m)(1−x)^{m−2}/(2π)`.
pub fn phi_laplacian(m: f64, z: Complex64) -> f64 {
    m * (1.0 - m) * (1.0 - z.re).powf(m - 2.0) / (2.0 * PI)
}

pub fn check_m(m: f64) -> Result<()> {
    if m > 0.0 && m <= 1.0 {
        Ok(())
    } else {
        Err(PshError::InvalidParameter(format!(
            "m = {m} must lie in (0, 1]"
        )))
    }
}

/// Which member of the family `makeExample` should build.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExampleKind {
    PhiM,
    SigmaM,
    VM,
    UM,
}

/// `φ_m` on the closed lens, harmonic in the complement with zero boundary
/// values on the unit circle.
///
/// The Cayley map `w = (1 + z)/(1 − z)` sends the complement of the lens to
/// the strip `0 < Re w < 1`, with the lens boundary on `Re w = 1` at the
/// points `z = iτ/(2 + iτ)`, where `1 − x = 4/(4 + τ²)`.
pub fn v_m(m: f64, z: Complex64, tol: &Tolerance<f64>) -> f64 {
    if Slab::Lens.contains(z) || (z.re - 0.5).hypot(z.im) <= 0.5 {
        return phi(m, z);
    }
    if z.norm_sqr() >= 1.0 {
        return 0.0;
    }
    let one = Complex64::new(1.0, 0.0);
    let w = (one + z) / (one - z);
    let den = (one - z).norm_sqr();
    // 1 − Re w, exact near the lens boundary
    let eps = (2.0 * (z.norm_sqr() - z.re) / den).clamp(0.0, 1.0);
    let eta = w.im;
    let sx = (PI * eps).sin();
    let se = (0.5 * PI * eps).sin();
    let kernel = |t: f64| {
        let sh = (0.5 * PI * t).sinh();
        0.25 * sx / (sh * sh + se * se)
    };
    let data = |tau: f64| -(4.0 / (4.0 + tau * tau)).powf(m);
    let span = 40.0 / PI;
    let width = eps.max(1e-12);
    let mut pts = vec![0.0];
    let mut b = width;
    while b < span {
        pts.push(b);
        b *= 4.0;
    }
    pts.push(span);
    let piece = Tolerance {
        abs: tol.abs / (2 * pts.len()) as f64,
        ..*tol
    };
    let mut acc = 0.0;
    for wdw in pts.windows(2) {
        acc += integrate(
            |t| kernel(t) * (data(eta + t) + data(eta - t)),
            wdw[0],
            wdw[1],
            &piece,
        )
        .value;
    }
    acc
}

/// Riesz measure or density Laplacian for the family member.
pub fn riesz_for(kind: ExampleKind, m: f64) -> Result<RieszMeasure> {
    check_m(m)?;
    match kind {
        ExampleKind::PhiM => RieszMeasure::phi_laplacian(m),
        ExampleKind::SigmaM | ExampleKind::UM => RieszMeasure::sigma(m),
        ExampleKind::VM => Err(PshError::Unsupported(
            "the Riesz measure of v_m carries an implicit charge on the lens boundary".into(),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn v_m_is_continuous_across_the_lens_boundary() {
        let tol = Tolerance::new(1e-12, 1e-10);
        for t in [0.4f64, 1.2, 2.5] {
            let on = Complex64::new(0.5 + 0.5 * t.cos(), 0.5 * t.sin());
            let out = on + (on - Complex64::new(0.5, 0.0)) * 1e-6;
            assert!((v_m(0.75, out, &tol) - phi(0.75, on)).abs() < 1e-4, "{t}");
        }
    }

    #[test]
    fn v_m_vanishes_toward_the_circle() {
        let tol = Tolerance::new(1e-12, 1e-10);
        let z = Complex64::from_polar(1.0 - 1e-6, 2.0);
        assert!(v_m(0.75, z, &tol).abs() < 1e-5);
    }

    #[test]
    fn v_m_harmonic_in_complement() {
        let tol = Tolerance::new(1e-13, 1e-12);
        let z = Complex64::new(-0.3, 0.4);
        let h = 1e-3;
        let lap = v_m(0.75, z + h, &tol)
            + v_m(0.75, z - h, &tol)
            + v_m(0.75, z + Complex64::new(0.0, h), &tol)
            + v_m(0.75, z - Complex64::new(0.0, h), &tol)
            - 4.0 * v_m(0.75, z, &tol);
        assert!(lap.abs() / (h * h) < 1e-4, "{}", lap / (h * h));
    }
}
