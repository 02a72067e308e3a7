//! Analytic expressions on the disk: a small closed-form family with exact
//! derivatives, boundary traces and zero sets.

use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{PshError, Result};
use crate::factorization::outer::OuterFunction;
use crate::geometry::ConformalMap;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
/// Roots this close to the unit circle count as boundary points.
const CIRCLE_SLACK: f64 = 1e-9;

/// Analytic function built from `z`, constants, `+ − * /`, principal powers,
/// finite Blaschke products and outer functions.
#[derive(Clone)]
pub enum AnalyticExpr {
    Const(Complex64),
    Z,
    Neg(Box<AnalyticExpr>),
    Add(Box<AnalyticExpr>, Box<AnalyticExpr>),
    Sub(Box<AnalyticExpr>, Box<AnalyticExpr>),
    Mul(Box<AnalyticExpr>, Box<AnalyticExpr>),
    Div(Box<AnalyticExpr>, Box<AnalyticExpr>),
    /// `w^β = exp(β Log w)`, principal branch.
    Pow(Box<AnalyticExpr>, f64),
    Blaschke(Vec<Complex64>),
    Outer(Arc<OuterFunction>),
    /// `f ∘ φ` for a disk map `φ`.
    Compose(Box<AnalyticExpr>, ConformalMap),
}

impl fmt::Debug for AnalyticExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AnalyticExpr({self})")
    }
}

/// Single Blaschke factor `(|a|/a)(a − z)/(1 − āz)` (or `z` for `a = 0`) and
/// its derivative.
pub fn blaschke_factor(a: Complex64, z: Complex64) -> (Complex64, Complex64) {
    if a == ZERO {
        return (z, ONE);
    }
    let u = a.norm() / a;
    let den = ONE - a.conj() * z;
    let v = u * (a - z) / den;
    let d = u * (a.norm_sqr() - 1.0) / (den * den);
    (v, d)
}

impl AnalyticExpr {
    pub fn constant(c: impl Into<Complex64>) -> Self {
        AnalyticExpr::Const(c.into())
    }

    /// Polynomial `Σ c_k z^k` in Horner form.
    pub fn poly(coeffs: &[Complex64]) -> Self {
        let mut it = coeffs.iter().rev();
        let mut e = AnalyticExpr::Const(it.next().copied().unwrap_or(ZERO));
        for &c in it {
            e = AnalyticExpr::Add(
                Box::new(AnalyticExpr::Const(c)),
                Box::new(AnalyticExpr::Mul(Box::new(AnalyticExpr::Z), Box::new(e))),
            );
        }
        e
    }

    /// `[a(1 − z)]^β`.
    pub fn power(a: Complex64, beta: f64) -> Self {
        let base = AnalyticExpr::Mul(
            Box::new(AnalyticExpr::Const(a)),
            Box::new(AnalyticExpr::Sub(
                Box::new(AnalyticExpr::Const(ONE)),
                Box::new(AnalyticExpr::Z),
            )),
        );
        AnalyticExpr::Pow(Box::new(base), beta)
    }

    /// `z^k`.
    pub fn monomial(k: u32) -> Self {
        if k == 0 {
            AnalyticExpr::Const(ONE)
        } else {
            AnalyticExpr::Pow(Box::new(AnalyticExpr::Z), k as f64)
        }
    }

    /// Finite Blaschke product with the given zeros.
    pub fn blaschke(zeros: Vec<Complex64>) -> Result<Self> {
        if let Some(a) = zeros.iter().find(|a| !(a.norm() < 1.0)) {
            return Err(PshError::InvalidZero(format!(
                "Blaschke zero {a} is not inside the disk"
            )));
        }
        Ok(AnalyticExpr::Blaschke(zeros))
    }

    pub fn times(self, other: AnalyticExpr) -> Self {
        AnalyticExpr::Mul(Box::new(self), Box::new(other))
    }

    pub fn over(self, other: AnalyticExpr) -> Self {
        AnalyticExpr::Div(Box::new(self), Box::new(other))
    }

    pub fn pow(self, beta: f64) -> Self {
        AnalyticExpr::Pow(Box::new(self), beta)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.eval_with_derivative(z).0
    }

    pub fn derivative(&self, z: Complex64) -> Complex64 {
        self.eval_with_derivative(z).1
    }

    /// Value and derivative by forward-mode differentiation.
    pub fn eval_with_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        use AnalyticExpr::*;
        match self {
            Const(c) => (*c, ZERO),
            Z => (z, ONE),
            Neg(e) => {
                let (v, d) = e.eval_with_derivative(z);
                (-v, -d)
            }
            Add(a, b) => {
                let (u, du) = a.eval_with_derivative(z);
                let (v, dv) = b.eval_with_derivative(z);
                (u + v, du + dv)
            }
            Sub(a, b) => {
                let (u, du) = a.eval_with_derivative(z);
                let (v, dv) = b.eval_with_derivative(z);
                (u - v, du - dv)
            }
            Mul(a, b) => {
                let (u, du) = a.eval_with_derivative(z);
                let (v, dv) = b.eval_with_derivative(z);
                (u * v, du * v + u * dv)
            }
            Div(a, b) => {
                let (u, du) = a.eval_with_derivative(z);
                let (v, dv) = b.eval_with_derivative(z);
                (u / v, (du * v - u * dv) / (v * v))
            }
            Pow(e, beta) => {
                let (w, dw) = e.eval_with_derivative(z);
                let k = *beta;
                if k.fract() == 0.0 && k.abs() <= 64.0 {
                    let n = k as i32;
                    let v = w.powi(n);
                    let d = if n == 0 { ZERO } else { w.powi(n - 1) * k * dw };
                    return (v, d);
                }
                if w == ZERO {
                    let v = if k > 0.0 {
                        ZERO
                    } else {
                        Complex64::new(f64::INFINITY, 0.0)
                    };
                    let d = if k > 1.0 {
                        ZERO
                    } else {
                        Complex64::new(f64::INFINITY, 0.0)
                    };
                    return (v, d);
                }
                let v = (w.ln() * k).exp();
                (v, v / w * k * dw)
            }
            Blaschke(zs) => zs.iter().fold((ONE, ZERO), |(v, d), &a| {
                let (b, db) = blaschke_factor(a, z);
                (v * b, d * b + v * db)
            }),
            Outer(o) => o.eval_with_derivative(z),
            Compose(e, map) => {
                let (v, d) = e.eval_with_derivative(map.forward(z));
                (v, d * map.derivative(z))
            }
        }
    }

    /// Boundary trace `f*(e^{iθ})`: the closed form evaluated on the circle,
    /// with the outer-function trace taken from its boundary data.
    pub fn boundary_trace(&self, theta: f64) -> Complex64 {
        use AnalyticExpr::*;
        let zeta = Complex64::from_polar(1.0, theta);
        match self {
            Outer(o) => o.boundary_trace(theta),
            Compose(e, map) => e.boundary_trace(arg(map.forward(zeta))),
            Neg(e) => -e.boundary_trace(theta),
            Add(a, b) => a.boundary_trace(theta) + b.boundary_trace(theta),
            Sub(a, b) => a.boundary_trace(theta) - b.boundary_trace(theta),
            Mul(a, b) => a.boundary_trace(theta) * b.boundary_trace(theta),
            Div(a, b) => a.boundary_trace(theta) / b.boundary_trace(theta),
            Pow(e, beta) if self.contains_outer() => {
                let w = e.boundary_trace(theta);
                if w == ZERO {
                    return if *beta > 0.0 {
                        ZERO
                    } else {
                        Complex64::new(f64::INFINITY, 0.0)
                    };
                }
                (w.ln() * *beta).exp()
            }
            _ => self.eval(zeta),
        }
    }

    /// `|f*(e^{iθ})|`.
    pub fn boundary_modulus(&self, theta: f64) -> f64 {
        use AnalyticExpr::*;
        match self {
            Outer(o) => o.boundary_modulus(theta),
            Compose(e, map) => {
                e.boundary_modulus(arg(map.forward(Complex64::from_polar(1.0, theta))))
            }
            Mul(a, b) => a.boundary_modulus(theta) * b.boundary_modulus(theta),
            Div(a, b) => a.boundary_modulus(theta) / b.boundary_modulus(theta),
            Pow(e, beta) => e.boundary_modulus(theta).powf(*beta),
            Neg(e) => e.boundary_modulus(theta),
            Blaschke(_) => 1.0,
            _ => self.boundary_trace(theta).norm(),
        }
    }

    fn contains_outer(&self) -> bool {
        use AnalyticExpr::*;
        match self {
            Outer(_) => true,
            Neg(e) | Pow(e, _) | Compose(e, _) => e.contains_outer(),
            Add(a, b) | Sub(a, b) | Mul(a, b) | Div(a, b) => {
                a.contains_outer() || b.contains_outer()
            }
            _ => false,
        }
    }

    /// Coefficients when the expression is a polynomial in `z`.
    pub fn poly_coeffs(&self) -> Option<Vec<Complex64>> {
        use AnalyticExpr::*;
        fn add(a: Vec<Complex64>, b: Vec<Complex64>, sign: f64) -> Vec<Complex64> {
            let n = a.len().max(b.len());
            (0..n)
                .map(|k| {
                    a.get(k).copied().unwrap_or(ZERO) + b.get(k).copied().unwrap_or(ZERO) * sign
                })
                .collect()
        }
        fn mul(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
            let mut out = vec![ZERO; a.len() + b.len() - 1];
            for (i, x) in a.iter().enumerate() {
                for (j, y) in b.iter().enumerate() {
                    out[i + j] += x * y;
                }
            }
            out
        }
        Some(match self {
            Const(c) => vec![*c],
            Z => vec![ZERO, ONE],
            Neg(e) => e.poly_coeffs()?.into_iter().map(|c| -c).collect(),
            Add(a, b) => add(a.poly_coeffs()?, b.poly_coeffs()?, 1.0),
            Sub(a, b) => add(a.poly_coeffs()?, b.poly_coeffs()?, -1.0),
            Mul(a, b) => mul(&a.poly_coeffs()?, &b.poly_coeffs()?),
            Pow(e, k) if *k >= 0.0 && k.fract() == 0.0 && *k <= 64.0 => {
                let base = e.poly_coeffs()?;
                (0..*k as usize).fold(vec![ONE], |acc, _| mul(&acc, &base))
            }
            _ => return None,
        })
    }

    /// Zeros in the open disk, with multiplicity.
    pub fn zeros(&self) -> Result<Vec<Complex64>> {
        use AnalyticExpr::*;
        if let Some(c) = self.poly_coeffs() {
            return Ok(poly_roots(&c)?
                .into_iter()
                .filter(|r| r.norm() < 1.0 - CIRCLE_SLACK)
                .collect());
        }
        Ok(match self {
            Neg(e) => e.zeros()?,
            Mul(a, b) => {
                let mut z = a.zeros()?;
                z.extend(b.zeros()?);
                z
            }
            Div(a, b) => {
                let mut num = a.zeros()?;
                for p in b.zeros()? {
                    match num.iter().position(|q| (q - p).norm() < 1e-10) {
                        Some(i) => {
                            num.swap_remove(i);
                        }
                        None => {
                            return Err(PshError::Unsupported(format!(
                                "pole at {p} inside the disk"
                            )))
                        }
                    }
                }
                num
            }
            Pow(e, k) => {
                let z = e.zeros()?;
                if z.is_empty() {
                    z
                } else if *k > 0.0 && k.fract() == 0.0 {
                    z.iter()
                        .cycle()
                        .take(z.len() * *k as usize)
                        .copied()
                        .collect()
                } else {
                    return Err(PshError::Unsupported(format!(
                        "non-integer power {k} of a function with zeros inside the disk"
                    )));
                }
            }
            Blaschke(zs) => zs.clone(),
            Outer(_) => Vec::new(),
            Compose(e, map) => e.zeros()?.into_iter().map(|a| map.inverse(a)).collect(),
            Const(_) | Z => unreachable!(),
            Add(..) | Sub(..) => {
                return Err(PshError::Unsupported(
                    "zeros of a non-polynomial sum are not available".into(),
                ))
            }
        })
    }

    /// Points `e^{iθ}` where the boundary trace vanishes or blows up.
    pub fn boundary_singular_angles(&self) -> Vec<f64> {
        let mut out = Vec::new();
        self.collect_boundary_points(&mut out);
        out.sort_by(f64::total_cmp);
        out.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
        out
    }

    fn collect_boundary_points(&self, out: &mut Vec<f64>) {
        use AnalyticExpr::*;
        if let Some(c) = self.poly_coeffs() {
            if let Ok(roots) = poly_roots(&c) {
                out.extend(
                    roots
                        .iter()
                        .filter(|r| (r.norm() - 1.0).abs() <= CIRCLE_SLACK)
                        .map(|r| arg(*r)),
                );
            }
            return;
        }
        match self {
            Neg(e) | Pow(e, _) => e.collect_boundary_points(out),
            Add(a, b) | Sub(a, b) | Mul(a, b) | Div(a, b) => {
                a.collect_boundary_points(out);
                b.collect_boundary_points(out);
            }
            Outer(o) => out.extend(o.singular_points()),
            Compose(e, map) => out.extend(
                e.boundary_singular_angles()
                    .into_iter()
                    .map(|t| arg(map.inverse(Complex64::from_polar(1.0, t)))),
            ),
            _ => {}
        }
    }

    /// Exponent `α` with `|f*(e^{iθ})| ≍ |θ − θ₀|^α` near a boundary point, when
    /// it can be read off the closed form.
    pub fn boundary_exponent(&self, theta0: f64) -> Option<f64> {
        use AnalyticExpr::*;
        let zeta = Complex64::from_polar(1.0, theta0);
        if let Some(c) = self.poly_coeffs() {
            let roots = poly_roots(&c).ok()?;
            return Some(roots.iter().filter(|r| (**r - zeta).norm() < 1e-7).count() as f64);
        }
        match self {
            Neg(e) => e.boundary_exponent(theta0),
            Mul(a, b) => Some(a.boundary_exponent(theta0)? + b.boundary_exponent(theta0)?),
            Div(a, b) => Some(a.boundary_exponent(theta0)? - b.boundary_exponent(theta0)?),
            Pow(e, k) => Some(k * e.boundary_exponent(theta0)?),
            Blaschke(_) => Some(0.0),
            Compose(e, map) => e.boundary_exponent(arg(map.forward(zeta))),
            _ => None,
        }
    }

    /// Canonical grammar string; parses back to an equal expression.
    pub fn canonical(&self) -> String {
        self.to_string()
    }

    pub fn parse(s: &str) -> Result<Self> {
        Parser::new(s).parse_all()
    }
}

fn arg(z: Complex64) -> f64 {
    z.im.atan2(z.re).rem_euclid(std::f64::consts::TAU)
}

fn fmt_complex(c: Complex64) -> String {
    crate::scalar::format_complex(c)
}

impl fmt::Display for AnalyticExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use AnalyticExpr::*;
        match self {
            Const(c) if c.im == 0.0 && c.re >= 0.0 => write!(f, "{}", c.re),
            Const(c) => write!(f, "({})", fmt_complex(*c)),
            Z => write!(f, "z"),
            Neg(e) => write!(f, "(-{e})"),
            Add(a, b) => write!(f, "({a}+{b})"),
            Sub(a, b) => write!(f, "({a}-{b})"),
            Mul(a, b) => write!(f, "{a}*{b}"),
            Div(a, b) => write!(f, "{a}/({b})"),
            Pow(e, k) => write!(f, "pow({e},{k})"),
            Blaschke(zs) => {
                let parts: Vec<String> = zs.iter().map(|z| fmt_complex(*z)).collect();
                write!(f, "blaschke([{}])", parts.join(","))
            }
            Outer(o) => write!(f, "outer[{}]", o.len()),
            Compose(e, map) => write!(f, "compose({e},{map:?})"),
        }
    }
}

impl PartialEq for AnalyticExpr {
    fn eq(&self, other: &Self) -> bool {
        use AnalyticExpr::*;
        match (self, other) {
            (Const(a), Const(b)) => a == b,
            (Z, Z) => true,
            (Neg(a), Neg(b)) => a == b,
            (Add(a, b), Add(c, d))
            | (Sub(a, b), Sub(c, d))
            | (Mul(a, b), Mul(c, d))
            | (Div(a, b), Div(c, d)) => a == c && b == d,
            (Pow(a, k), Pow(b, l)) => a == b && k == l,
            (Blaschke(a), Blaschke(b)) => a == b,
            (Outer(a), Outer(b)) => Arc::ptr_eq(a, b),
            (Compose(a, m), Compose(b, n)) => a == b && m == n,
            _ => false,
        }
    }
}

/// All roots of `Σ c_k z^k` from the companion matrix, polished by Newton.
pub fn poly_roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let mut c: Vec<Complex64> = coeffs.to_vec();
    while c.last().is_some_and(|x| *x == ZERO) {
        c.pop();
    }
    if c.is_empty() {
        return Err(PshError::InvalidZero(
            "the function vanishes identically".into(),
        ));
    }
    let zeros_at_origin = c.iter().take_while(|x| **x == ZERO).count();
    c.drain(..zeros_at_origin);
    let mut roots = vec![ZERO; zeros_at_origin];
    let n = c.len() - 1;
    if n == 0 {
        return Ok(roots);
    }
    let lead = c[n];
    let mut m = DMatrix::<Complex64>::zeros(n, n);
    for i in 1..n {
        m[(i, i - 1)] = ONE;
    }
    for i in 0..n {
        m[(i, n - 1)] = -c[i] / lead;
    }
    let eig = nalgebra::linalg::Schur::try_new(m, f64::EPSILON, 200 * n)
        .and_then(|s| s.eigenvalues())
        .ok_or_else(|| PshError::Unsupported("companion eigenvalues did not converge".into()))?;
    let horner = |z: Complex64| {
        c.iter()
            .rev()
            .fold((ZERO, ZERO), |(v, d), &a| (v * z + a, d * z + v))
    };
    roots.extend(eig.iter().map(|&r0| {
        let mut r = r0;
        for _ in 0..3 {
            let (v, d) = horner(r);
            if d == ZERO {
                break;
            }
            let step = v / d;
            if !step.is_finite() || step.norm() > 1e-3 * (1.0 + r.norm()) {
                break;
            }
            r -= step;
        }
        r
    }));
    Ok(roots)
}

/// Binary node with constant folding, so complex literals parse to constants.
fn fold(a: AnalyticExpr, b: AnalyticExpr, op: char) -> AnalyticExpr {
    use AnalyticExpr::*;
    match (a, b) {
        (Const(x), Const(y)) => Const(match op {
            '+' => x + y,
            '-' => x - y,
            '*' => x * y,
            _ => x / y,
        }),
        (a, b) => {
            let (a, b) = (Box::new(a), Box::new(b));
            match op {
                '+' => Add(a, b),
                '-' => Sub(a, b),
                '*' => Mul(a, b),
                _ => Div(a, b),
            }
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser { src, pos: 0 }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(PshError::Parse {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    fn eat(&mut self, ch: char) -> bool {
        if self.peek() == Some(ch) {
            self.pos += ch.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, ch: char) -> Result<()> {
        if self.eat(ch) {
            Ok(())
        } else {
            self.err(format!("expected '{ch}'"))
        }
    }

    fn parse_all(mut self) -> Result<AnalyticExpr> {
        let e = self.expr()?;
        if self.peek().is_some() {
            return self.err("unexpected trailing input");
        }
        Ok(e)
    }

    fn expr(&mut self) -> Result<AnalyticExpr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = fold(lhs, self.term()?, '+');
            } else if self.eat('-') || self.eat('−') {
                lhs = fold(lhs, self.term()?, '-');
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<AnalyticExpr> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = fold(lhs, self.unary()?, '*');
            } else if self.eat('/') {
                lhs = fold(lhs, self.unary()?, '/');
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<AnalyticExpr> {
        if self.eat('-') || self.eat('−') {
            return Ok(match self.unary()? {
                AnalyticExpr::Const(c) => AnalyticExpr::Const(-c),
                e => AnalyticExpr::Neg(Box::new(e)),
            });
        }
        if self.eat('+') {
            return self.unary();
        }
        self.atom()
    }

    fn ident(&mut self) -> &'a str {
        self.skip_ws();
        let r = self.rest();
        let len = r
            .find(|c: char| !c.is_ascii_alphabetic())
            .unwrap_or(r.len());
        self.pos += len;
        &r[..len]
    }

    fn number(&mut self) -> Result<f64> {
        self.skip_ws();
        let r = self.rest();
        let bytes = r.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            let b = bytes[i];
            let exp_sign = (b == b'+' || b == b'-') && i > 0 && matches!(bytes[i - 1], b'e' | b'E');
            if b.is_ascii_digit() || b == b'.' || exp_sign {
                i += 1;
            } else if (b == b'e' || b == b'E')
                && i > 0
                && bytes
                    .get(i + 1)
                    .is_some_and(|n| n.is_ascii_digit() || *n == b'-' || *n == b'+')
            {
                i += 1;
            } else {
                break;
            }
        }
        match r[..i].parse::<f64>() {
            Ok(v) => {
                self.pos += i;
                Ok(v)
            }
            Err(_) => self.err("malformed number"),
        }
    }

    fn atom(&mut self) -> Result<AnalyticExpr> {
        match self.peek() {
            None => self.err("unexpected end of input"),
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == '.' => {
                let v = self.number()?;
                if self.rest().starts_with('i')
                    && !self.rest()[1..].starts_with(|c: char| c.is_ascii_alphabetic())
                {
                    self.pos += 1;
                    Ok(AnalyticExpr::Const(Complex64::new(0.0, v)))
                } else {
                    Ok(AnalyticExpr::Const(Complex64::new(v, 0.0)))
                }
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                match self.ident() {
                    "z" => Ok(AnalyticExpr::Z),
                    "i" => Ok(AnalyticExpr::Const(Complex64::new(0.0, 1.0))),
                    "pow" => {
                        self.expect('(')?;
                        let base = self.expr()?;
                        self.expect(',')?;
                        let at = self.pos;
                        let k = self.expr()?;
                        let k = match k.poly_coeffs() {
                            Some(c) if c.len() == 1 && c[0].im == 0.0 => c[0].re,
                            _ => {
                                self.pos = at;
                                return self.err("pow exponent must be a real constant");
                            }
                        };
                        self.expect(')')?;
                        Ok(AnalyticExpr::Pow(Box::new(base), k))
                    }
                    "blaschke" => {
                        self.expect('(')?;
                        self.expect('[')?;
                        let mut zeros = Vec::new();
                        if !self.eat(']') {
                            loop {
                                let at = self.pos;
                                let e = self.expr()?;
                                match e.poly_coeffs() {
                                    Some(c) if c.len() == 1 => zeros.push(c[0]),
                                    _ => {
                                        self.pos = at;
                                        return self.err("Blaschke zeros must be constants");
                                    }
                                }
                                if self.eat(']') {
                                    break;
                                }
                                self.expect(',')?;
                            }
                        }
                        self.expect(')')?;
                        AnalyticExpr::blaschke(zeros).map_err(|e| PshError::Parse {
                            pos: start,
                            msg: e.to_string(),
                        })
                    }
                    other => {
                        self.pos = start;
                        self.err(format!("unknown identifier '{other}'"))
                    }
                }
            }
            Some(c) => self.err(format!("unexpected character '{c}'")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn parse_and_evaluate() {
        let e = AnalyticExpr::parse("z*(1-z)").unwrap();
        assert!((e.eval(c(0.5, 0.0)) - c(0.25, 0.0)).norm() < 1e-15);
        let e = AnalyticExpr::parse("pow(1-z, 0.5)").unwrap();
        assert!((e.eval(c(-3.0, 0.0)) - c(2.0, 0.0)).norm() < 1e-15);
        let e = AnalyticExpr::parse("(0.3+0.2i)*z - 2/(3 - z)").unwrap();
        let z = c(0.1, -0.4);
        let want = c(0.3, 0.2) * z - 2.0 / (3.0 - z);
        assert!((e.eval(z) - want).norm() < 1e-15);
        let e = AnalyticExpr::parse("blaschke([0.5, 0.3i])").unwrap();
        assert_eq!(e.zeros().unwrap(), vec![c(0.5, 0.0), c(0.0, 0.3)]);
    }

    #[test]
    fn parse_errors_carry_positions() {
        match AnalyticExpr::parse("z + foo(2)") {
            Err(PshError::Parse { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("{other:?}"),
        }
        assert!(AnalyticExpr::parse("pow(z, z)").is_err());
        assert!(AnalyticExpr::parse("blaschke([1.5])").is_err());
        assert!(AnalyticExpr::parse("(z").is_err());
        assert!(AnalyticExpr::parse("z z").is_err());
    }

    #[test]
    fn canonical_round_trip() {
        for s in [
            "z*(1-z)",
            "pow(1-z,-0.3)",
            "blaschke([0.5,0.3i])*(1-z)",
            "-z+(2-1i)/(3-z)",
            "pow(0.5*(1-z),2)",
        ] {
            let e = AnalyticExpr::parse(s).unwrap();
            let again = AnalyticExpr::parse(&e.canonical()).unwrap();
            assert_eq!(e, again, "{s} -> {}", e.canonical());
        }
    }

    #[test]
    fn derivatives_match_differences() {
        let h = 1e-6;
        for s in [
            "z*(1-z)",
            "pow(1-z,0.5)",
            "pow(1-z,-0.6)",
            "blaschke([0.5,0.3i])*(1-z)",
            "1/(2-z)",
        ] {
            let e = AnalyticExpr::parse(s).unwrap();
            for z in [c(0.2, 0.3), c(-0.5, -0.1), c(0.7, 0.0)] {
                let fd = (e.eval(z + h) - e.eval(z - h)) / (2.0 * h);
                let d = e.derivative(z);
                assert!((fd - d).norm() <= 1e-6 * d.norm().max(1.0), "{s} {z}");
            }
        }
    }

    #[test]
    fn zeros_and_boundary_points() {
        let e = AnalyticExpr::parse("z*(1-z)").unwrap();
        let z = e.zeros().unwrap();
        assert_eq!(z.len(), 1);
        assert!(z[0].norm() < 1e-12);
        assert_eq!(e.boundary_singular_angles().len(), 1);
        assert_eq!(e.boundary_exponent(0.0), Some(1.0));
        let g = AnalyticExpr::parse("pow(1-z,-0.6)").unwrap();
        assert!((g.boundary_exponent(0.0).unwrap() + 0.6).abs() < 1e-15);
        let q = AnalyticExpr::parse("(z-0.5)*(z+0.25i)*(z-2)").unwrap();
        let mut zs = q.zeros().unwrap();
        zs.sort_by(|a, b| a.re.total_cmp(&b.re));
        assert!((zs[0] - c(0.0, -0.25)).norm() < 1e-12 && (zs[1] - c(0.5, 0.0)).norm() < 1e-12);
        assert!(AnalyticExpr::parse("pow(z,0.5)").unwrap().zeros().is_err());
        assert!(AnalyticExpr::parse("1/z").unwrap().zeros().is_err());
        assert!(AnalyticExpr::parse("0").unwrap().zeros().is_err());
    }

    #[test]
    fn blaschke_modulus_on_circle() {
        let b = AnalyticExpr::blaschke(vec![c(0.5, 0.0), c(0.0, 0.3)]).unwrap();
        for j in 0..64 {
            let t = j as f64 * 0.098;
            assert!((b.eval(Complex64::from_polar(1.0, t)).norm() - 1.0).abs() < 1e-14);
        }
        assert!(
            (AnalyticExpr::blaschke(vec![c(0.5, 0.0)])
                .unwrap()
                .eval(ZERO)
                .norm()
                - 0.5)
                .abs()
                < 1e-15
        );
        assert!(AnalyticExpr::blaschke(vec![c(1.0, 0.0)]).is_err());
    }
}
