//! Green function and Poisson kernel of the unit disk.

use crate::error::{PshError, Result};
use crate::scalar::{Cx, Real};

/// `g(z, w) = log|z − w| − log|1 − z w̄|`, the (negative) Green function.
pub fn green_function<T: Real>(z: Cx<T>, w: Cx<T>) -> Result<T> {
    if z == w {
        return Err(PshError::Singularity(format!("z = w = {z}")));
    }
    Ok(green_unchecked(z, w))
}

/// Green function without the coincidence check; returns `-inf` at `z = w`.
pub fn green_unchecked<T: Real>(z: Cx<T>, w: Cx<T>) -> T {
    let one = T::one();
    let half = T::lit(0.5);
    let den = (Cx::new(one, T::zero()) - z * w.conj()).norm_sqr();
    let t = (one - z.norm_sqr()) * (one - w.norm_sqr()) / den;
    if t < half {
        // |z − w|²/|1 − z w̄|² = 1 − t, accurate near the boundary.
        half * (-t).ln_1p()
    } else {
        half * ((z - w).norm_sqr().ln() - den.ln())
    }
}

/// Green function with `1 − |w|²` supplied exactly by the caller.
pub fn green_with_defect<T: Real>(z: Cx<T>, w: Cx<T>, one_minus_w2: T) -> T {
    let one = T::one();
    let half = T::lit(0.5);
    let den = (Cx::new(one, T::zero()) - z * w.conj()).norm_sqr();
    let t = (one - z.norm_sqr()) * one_minus_w2 / den;
    if t < half {
        half * (-t).ln_1p()
    } else {
        half * ((z - w).norm_sqr().ln() - den.ln())
    }
}

/// Complex gradient `∂_x g + i ∂_y g` of `g(·, w)` at `z`.
pub fn green_gradient<T: Real>(z: Cx<T>, w: Cx<T>) -> Cx<T> {
    let one = Cx::new(T::one(), T::zero());
    let h = one / (z - w) + w.conj() / (one - z * w.conj());
    h.conj()
}

/// `P(z, ζ) = (1 − |z|²) / |ζ − z|²`; integrates to one against normalized arclength.
pub fn poisson_kernel<T: Real>(z: Cx<T>, zeta: Cx<T>) -> T {
    (T::one() - z.norm_sqr()) / (zeta - z).norm_sqr()
}

/// Poisson kernel at the boundary angle `θ`.
pub fn poisson_kernel_angle<T: Real>(z: Cx<T>, theta: T) -> T {
    poisson_kernel(z, Cx::new(theta.cos(), theta.sin()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn green_at_origin_is_log_modulus() {
        let g = green_function(Cx::new(0.5, 0.0), Cx::new(0.0, 0.0)).unwrap();
        assert!((g - 0.5f64.ln()).abs() < 1e-15);
        let g32 = green_function(Cx::new(0.5f32, 0.0), Cx::new(0.0, 0.0)).unwrap();
        assert!((g32 - 0.5f32.ln()).abs() < 1e-6);
    }

    #[test]
    fn green_reference_value() {
        let g = green_function(Cx::new(0.5, 0.0), Cx::new(0.25, 0.0)).unwrap();
        assert!((g - (0.25f64 / 0.875).ln()).abs() < 1e-15);
    }

    #[test]
    fn coincident_points_are_singular() {
        let z = Cx::new(0.1, 0.2);
        assert!(matches!(
            green_function(z, z),
            Err(PshError::Singularity(_))
        ));
    }

    #[test]
    fn poisson_reference_values() {
        assert!((poisson_kernel::<f64>(Cx::new(0.5, 0.0), Cx::new(1.0, 0.0)) - 3.0).abs() < 1e-15);
        assert!((poisson_kernel_angle::<f64>(Cx::new(0.0, 0.0), 1.234) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let z: Cx<f64> = Cx::new(0.3, -0.4);
        let w: Cx<f64> = Cx::new(-0.2, 0.5);
        let h = 1e-6;
        let gx = (green_unchecked(z + Cx::new(h, 0.0), w)
            - green_unchecked(z - Cx::new(h, 0.0), w))
            / (2.0 * h);
        let gy = (green_unchecked(z + Cx::new(0.0, h), w)
            - green_unchecked(z - Cx::new(0.0, h), w))
            / (2.0 * h);
        let g = green_gradient(z, w);
        assert!((g.re - gx).abs() < 1e-8 && (g.im - gy).abs() < 1e-8);
    }
}
