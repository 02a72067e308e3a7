//! Vertical-strip integrals for densities supported on regions touching the
//! boundary point `1`.
//!
//! Points are written `w = (1 − s) + i y`; a region is a family of strips
//! `|y| < Y(s)`. For each strip the `y`-integrals of the Green function, its
//! gradient and the Poisson kernel are available in closed form, so area
//! integrals reduce to one graded integral in `s`.

use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::geometry::gauss_legendre;
use crate::potential::kernels::green_with_defect;

/// Region described by strips in `s = 1 − x`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Slab {
    /// The disk `(x − ½)² + y² < ¼`, tangent to the unit circle at `1`.
    Lens,
    /// The whole unit disk.
    Disk,
}

impl Slab {
    pub fn s_max(&self) -> f64 {
        match self {
            Slab::Lens => 1.0,
            Slab::Disk => 2.0,
        }
    }

    pub fn half_width(&self, s: f64) -> f64 {
        let v = match self {
            Slab::Lens => s * (1.0 - s),
            Slab::Disk => s * (2.0 - s),
        };
        v.max(0.0).sqrt()
    }

    pub fn contains(&self, z: Complex64) -> bool {
        let s = 1.0 - z.re;
        s > 0.0 && s < self.s_max() && z.im.abs() < self.half_width(s)
    }
}

/// `1 − |w|²` for `w = 1 − s + iy` without cancellation.
#[inline]
pub fn one_minus_modulus_sq(s: f64, y: f64) -> f64 {
    s * (2.0 - s) - y * y
}

fn gl16() -> &'static (Vec<f64>, Vec<f64>) {
    static NODES: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    NODES.get_or_init(|| gauss_legendre(16))
}

/// `∫_{-Y}^{Y} f(y) dy` by 16-point Gauss-Legendre.
#[inline]
fn gl_strip<F: FnMut(f64) -> f64>(y_half: f64, mut f: F) -> f64 {
    let (x, w) = gl16();
    let mut acc = 0.0;
    for (xi, wi) in x.iter().zip(w) {
        acc += wi * f(y_half * xi);
    }
    acc * y_half
}

#[inline]
fn gl_strip_complex<F: FnMut(f64) -> Complex64>(y_half: f64, mut f: F) -> Complex64 {
    let (x, w) = gl16();
    let mut acc = Complex64::new(0.0, 0.0);
    for (xi, wi) in x.iter().zip(w) {
        acc += f(y_half * xi) * *wi;
    }
    acc * y_half
}

/// Distance from `p` to the segment `{x} × [−Y, Y]`.
#[inline]
fn segment_distance(p: Complex64, x: f64, y_half: f64) -> f64 {
    let dy = if p.im > y_half {
        p.im - y_half
    } else if p.im < -y_half {
        p.im + y_half
    } else {
        0.0
    };
    (p.re - x).hypot(dy)
}

/// Antiderivative of `log(t² + q²)` in `t`.
#[inline]
fn log_antiderivative(t: f64, q: f64) -> f64 {
    let aq = q.abs();
    if aq == 0.0 {
        if t == 0.0 {
            0.0
        } else {
            t * (t * t).ln() - 2.0 * t
        }
    } else {
        t * (t * t + q * q).ln() - 2.0 * t + 2.0 * aq * (t / aq).atan()
    }
}

/// `∫_{-Y}^{Y} log((y − p)² + q²) dy`.
#[inline]
fn log_strip(p: f64, q: f64, y_half: f64) -> f64 {
    log_antiderivative(y_half - p, q) - log_antiderivative(-y_half - p, q)
}

/// `∫_{-Y}^{Y} g(z, 1 − s + iy) dy`.
pub fn green_strip(z: Complex64, s: f64, y_half: f64) -> f64 {
    if y_half <= 0.0 {
        return 0.0;
    }
    let x = 1.0 - s;
    let mirror = if z.norm_sqr() > 0.0 {
        1.0 / z.conj()
    } else {
        Complex64::new(f64::INFINITY, 0.0)
    };
    let near = segment_distance(z, x, y_half).min(segment_distance(mirror, x, y_half));
    if near >= 2.0 * y_half {
        return gl_strip(y_half, |y| {
            green_with_defect(z, Complex64::new(x, y), one_minus_modulus_sq(s, y))
        });
    }
    let direct = log_strip(z.im, x - z.re, y_half);
    let reflected = if z.norm() < 0.25 {
        gl_strip(y_half, |y| {
            (Complex64::new(1.0, 0.0) - z * Complex64::new(x, -y))
                .norm_sqr()
                .ln()
        })
    } else {
        let c0 = Complex64::new(0.0, 1.0) * (Complex64::new(1.0, 0.0) - z * x) / z;
        2.0 * y_half * z.norm_sqr().ln() + log_strip(c0.re, c0.im, y_half)
    };
    0.5 * (direct - reflected)
}

/// `∫_{-Y}^{Y} [1/(z − w) + w̄/(1 − z w̄)] dy`; the conjugate of this is the
/// strip contribution to the complex gradient of the Green potential.
pub fn green_derivative_strip(z: Complex64, s: f64, y_half: f64) -> Complex64 {
    let zero = Complex64::new(0.0, 0.0);
    if y_half <= 0.0 {
        return zero;
    }
    let one = Complex64::new(1.0, 0.0);
    let x = 1.0 - s;
    let kernel = |y: f64| {
        let w = Complex64::new(x, y);
        one / (z - w) + w.conj() / (one - z * w.conj())
    };
    let mirror = if z.norm_sqr() > 0.0 {
        1.0 / z.conj()
    } else {
        Complex64::new(f64::INFINITY, 0.0)
    };
    let near = segment_distance(z, x, y_half).min(segment_distance(mirror, x, y_half));
    if near >= 2.0 * y_half {
        return gl_strip_complex(y_half, kernel);
    }
    let d = z.re - x;
    let b = z.im;
    let a_part = Complex64::new(
        (2.0 * d * y_half).atan2(d * d + b * b - y_half * y_half),
        -0.5 * ((d * d + (b + y_half).powi(2)).ln() - (d * d + (b - y_half).powi(2)).ln()),
    );
    let b_part = if z.norm() < 0.25 {
        gl_strip_complex(y_half, |y| {
            let wb = Complex64::new(x, -y);
            wb / (one - z * wb)
        })
    } else {
        let alpha = one - z * x;
        let beta = Complex64::new(0.0, 1.0) * z;
        let logs = (alpha + beta * y_half).ln() - (alpha - beta * y_half).ln();
        (logs / beta - 2.0 * y_half) / z
    };
    a_part + b_part
}

/// `∫_{-Y}^{Y} P(1 − s + iy, e^{iθ}) dy`.
pub fn poisson_strip(theta: f64, s: f64, y_half: f64) -> f64 {
    if y_half <= 0.0 {
        return 0.0;
    }
    let x = 1.0 - s;
    let (sn, cs) = theta.sin_cos();
    let zeta = Complex64::new(cs, sn);
    if segment_distance(zeta, x, y_half) >= 2.0 * y_half {
        return gl_strip(y_half, |y| {
            one_minus_modulus_sq(s, y) / (zeta - Complex64::new(x, y)).norm_sqr()
        });
    }
    let half_sin = (0.5 * theta).sin();
    let a = 2.0 * half_sin * half_sin - s;
    let b = sn;
    let atan_part = (2.0 * a * y_half).atan2(a * a + b * b - y_half * y_half);
    let log_part = ((y_half - b).powi(2) + a * a).ln() - ((y_half + b).powi(2) + a * a).ln();
    -2.0 * y_half - 2.0 * cs * atan_part - b * log_part
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{integrate, Tolerance};
    use crate::potential::kernels::{green_unchecked, poisson_kernel};

    fn brute<F: Fn(f64) -> f64>(f: F, y_half: f64, cut: Option<f64>) -> f64 {
        let tol = Tolerance::new(1e-13, 1e-13);
        match cut {
            Some(c) if c.abs() < y_half => {
                integrate(&f, -y_half, c, &tol).value + integrate(&f, c, y_half, &tol).value
            }
            _ => integrate(&f, -y_half, y_half, &tol).value,
        }
    }

    #[test]
    fn green_strip_matches_brute_force() {
        for &(z, s) in &[
            (Complex64::new(0.3, 0.1), 0.2),
            (Complex64::new(0.8, 0.05), 0.25),
            (Complex64::new(0.1, -0.05), 0.5),
            (Complex64::new(-0.6, 0.5), 0.9),
            (Complex64::new(0.7, 0.0), 0.3),
            (Complex64::new(0.95, 0.2), 1e-3),
        ] {
            let y = Slab::Lens.half_width(s);
            let exact = brute(
                |t| green_unchecked(z, Complex64::new(1.0 - s, t)),
                y,
                Some(z.im),
            );
            let got = green_strip(z, s, y);
            assert!(
                (got - exact).abs() < 1e-10 * (1.0 + exact.abs()),
                "{z} {s}: {got} vs {exact}"
            );
        }
    }

    #[test]
    fn derivative_strip_matches_brute_force() {
        let one = Complex64::new(1.0, 0.0);
        for &(z, s) in &[
            (Complex64::new(0.3, 0.3), 0.2),
            (Complex64::new(0.1, 0.05), 0.5),
            (Complex64::new(0.5, 0.45), 0.7),
            (Complex64::new(-0.2, 0.1), 0.9),
        ] {
            let y = Slab::Lens.half_width(s);
            let k = |t: f64| {
                let w = Complex64::new(1.0 - s, t);
                one / (z - w) + w.conj() / (one - z * w.conj())
            };
            let re = brute(|t| k(t).re, y, None);
            let im = brute(|t| k(t).im, y, None);
            let got = green_derivative_strip(z, s, y);
            assert!(
                (got.re - re).abs() < 1e-9 && (got.im - im).abs() < 1e-9,
                "{z} {s}: {got} vs {re} {im}"
            );
        }
    }

    #[test]
    fn poisson_strip_matches_brute_force() {
        for &(theta, s) in &[
            (0.3, 0.1),
            (0.05, 0.01),
            (2.0, 0.5),
            (0.01, 1e-4),
            (-0.4, 0.08),
        ] {
            let y = Slab::Lens.half_width(s);
            let zeta = Complex64::new(f64::cos(theta), f64::sin(theta));
            let exact = brute(
                |t| poisson_kernel(Complex64::new(1.0 - s, t), zeta),
                y,
                None,
            );
            let got = poisson_strip(theta, s, y);
            assert!(
                (got - exact).abs() < 1e-9 * (1.0 + exact.abs()),
                "{theta} {s}: {got} vs {exact}"
            );
        }
    }
}
