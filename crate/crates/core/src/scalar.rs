//! Scalar abstraction for the kernel and quadrature layers.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive};

/// Real floating point scalar: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Lossy conversion from an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).unwrap_or_else(Self::nan)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Complex number over a [`Real`] scalar.
pub type Cx<T> = num_complex::Complex<T>;

/// Formats `z` as `a+bi` / `a-bi` with shortest round-trip decimals.
pub fn format_complex(z: num_complex::Complex64) -> String {
    if z.im < 0.0 || (z.im == 0.0 && z.im.is_sign_negative()) {
        format!("{}-{}i", z.re, -z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

/// Parses `a`, `bi`, `a+bi`, `a-bi` (also `i`, `-i`).
pub fn parse_complex(s: &str) -> Option<num_complex::Complex64> {
    use num_complex::Complex64;
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return None;
    }
    if let Some(body) = s.strip_suffix('i') {
        // split at the last sign that is not part of an exponent
        let bytes = body.as_bytes();
        let mut split = None;
        for k in (1..bytes.len()).rev() {
            if (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E') {
                split = Some(k);
                break;
            }
        }
        let (re_part, im_part) = match split {
            Some(k) => (&body[..k], &body[k..]),
            None => ("0", body),
        };
        let im = match im_part {
            "" | "+" => 1.0,
            "-" => -1.0,
            t => t.parse::<f64>().ok()?,
        };
        let re = re_part.parse::<f64>().ok()?;
        Some(Complex64::new(re, im))
    } else {
        s.parse::<f64>().ok().map(|re| Complex64::new(re, 0.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn complex_round_trip() {
        for z in [
            Complex64::new(0.3, 0.0),
            Complex64::new(-0.5, 0.25),
            Complex64::new(0.0, -1e-3),
            Complex64::new(1e-20, 2.5e10),
        ] {
            assert_eq!(parse_complex(&format_complex(z)), Some(z));
        }
        assert_eq!(parse_complex("i"), Some(Complex64::new(0.0, 1.0)));
        assert_eq!(parse_complex("0.3i"), Some(Complex64::new(0.0, 0.3)));
        assert_eq!(parse_complex("2"), Some(Complex64::new(2.0, 0.0)));
        assert_eq!(
            parse_complex("1e-3-2e-3i"),
            Some(Complex64::new(1e-3, -2e-3))
        );
        assert_eq!(parse_complex("abc"), None);
    }
}
