//! Sublevel sets `B_c = {u < c}` and their boundary curves `S_c`.

use std::collections::HashMap;
use std::f64::consts::{PI, TAU};
use std::io::Write;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use roots::{find_root_brent, Convergency};
use rustfft::FftPlanner;

use crate::error::{PshError, Result};
use crate::exhaustion::spec::{ExhaustionKind, ExhaustionSpec};
use crate::geometry::{integrate_pieces, ConformalMap, QuadratureResult, Status, Tolerance};
use crate::potential::{ClosedCurve, DensityTerm, Slab};

/// Default number of curve nodes.
pub const DEFAULT_RESOLUTION: usize = 256;

/// Side of the coarse grid used to locate sublevel components.
pub const GRID_SIZE: usize = 128;

/// Kress grading exponent used near singular boundary points.
const GRADING_Q: f64 = 4.0;

/// Node clustering `θ = α + w(t)` toward the direction `α`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grading {
    pub alpha: f64,
    pub q: f64,
}

impl Grading {
    fn v(&self, s: f64) -> f64 {
        let q = self.q;
        (1.0 / q - 0.5) * ((PI - s) / PI).powi(3) + (1.0 / q) * (s - PI) / PI + 0.5
    }

    /// Kress map on `[0, 2π]`.
    pub fn w(&self, t: f64) -> f64 {
        let t = t.rem_euclid(TAU);
        let a = self.v(t).powf(self.q);
        let b = self.v(TAU - t).powf(self.q);
        TAU * a / (a + b)
    }

    pub fn angle(&self, t: f64) -> f64 {
        self.alpha + self.w(t)
    }

    /// Parameter of the angle `θ` (inverse of [`angle`](Self::angle)).
    pub fn param(&self, theta: f64) -> f64 {
        let target = (theta - self.alpha).rem_euclid(TAU);
        let (mut lo, mut hi) = (0.0, TAU);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if self.w(mid) < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }
}

/// A traced level curve `S_c`, star-shaped about `center`.
#[derive(Clone, Debug)]
pub struct LevelSet {
    pub c: f64,
    pub center: Complex64,
    /// Counterclockwise nodes at `t_j = 2πj/N` with spectral derivatives.
    pub curve: ClosedCurve,
    /// `u` at the nodes.
    pub values: Vec<f64>,
    pub grading: Option<Grading>,
    /// Center and radius when the curve is an exact circle.
    pub circle: Option<(Complex64, f64)>,
    pub level_tolerance: f64,
}

struct BrentStop {
    ftol: f64,
    xtol: f64,
}

impl Convergency<f64> for BrentStop {
    fn is_root_found(&mut self, y: f64) -> bool {
        y.abs() < self.ftol
    }
    fn is_converged(&mut self, x1: f64, x2: f64) -> bool {
        (x1 - x2).abs() < self.xtol
    }
    fn is_iteration_limit_reached(&mut self, iter: usize) -> bool {
        iter >= 100
    }
}

/// Distance from `p` to the unit circle along direction `θ`.
fn exit_distance(p: Complex64, theta: f64) -> f64 {
    let b = p.re * theta.cos() + p.im * theta.sin();
    let c = 1.0 - p.norm_sqr();
    -b + (b * b + c).sqrt()
}

/// `u` on a uniform grid over `[-1, 1]²`, zero outside the disk.
#[derive(Clone, Debug)]
pub struct Grid {
    pub n: usize,
    pub values: Vec<f64>,
}

impl Grid {
    pub fn point(&self, i: usize, j: usize) -> Complex64 {
        let h = 2.0 / (self.n - 1) as f64;
        Complex64::new(-1.0 + i as f64 * h, -1.0 + j as f64 * h)
    }

    fn compute(u: &ExhaustionSpec, n: usize) -> Self {
        let mut g = Grid {
            n,
            values: vec![0.0; n * n],
        };
        for j in 0..n {
            for i in 0..n {
                let z = g.point(i, j);
                if z.norm_sqr() < 1.0 {
                    g.values[j * n + i] = u.evaluate(z);
                }
            }
        }
        g
    }

    /// Shared grid for `u`, memoized by the canonical spec string.
    pub fn cached(u: &ExhaustionSpec, n: usize) -> Arc<Grid> {
        static MEMO: OnceLock<Mutex<HashMap<(String, usize), Arc<Grid>>>> = OnceLock::new();
        let key = (u.canonical(), n);
        let memo = MEMO.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(g) = memo.lock().map(|m| m.get(&key).cloned()).ok().flatten() {
            return g;
        }
        let g = Arc::new(Grid::compute(u, n));
        if let Ok(mut m) = memo.lock() {
            m.insert(key, g.clone());
        }
        g
    }

    /// Connected components (4-neighbour) of the nodes with `u < c`.
    pub fn components_below(&self, c: f64) -> Vec<Vec<usize>> {
        let n = self.n;
        let below = |k: usize| {
            let z = self.point(k % n, k / n);
            z.norm_sqr() < 1.0 && self.values[k] < c
        };
        let mut seen = vec![false; n * n];
        let mut comps = Vec::new();
        for start in 0..n * n {
            if seen[start] || !below(start) {
                continue;
            }
            let mut comp = Vec::new();
            let mut stack = vec![start];
            seen[start] = true;
            while let Some(k) = stack.pop() {
                comp.push(k);
                let (i, j) = (k % n, k / n);
                let mut nb = Vec::with_capacity(4);
                if i > 0 {
                    nb.push(k - 1);
                }
                if i + 1 < n {
                    nb.push(k + 1);
                }
                if j > 0 {
                    nb.push(k - n);
                }
                if j + 1 < n {
                    nb.push(k + n);
                }
                for q in nb {
                    if !seen[q] && below(q) {
                        seen[q] = true;
                        stack.push(q);
                    }
                }
            }
            comps.push(comp);
        }
        comps
    }

    pub fn argmin(&self) -> (Complex64, f64) {
        let n = self.n;
        let mut best = (Complex64::new(0.0, 0.0), f64::INFINITY);
        for k in 0..n * n {
            let z = self.point(k % n, k / n);
            if z.norm_sqr() < 1.0 && self.values[k] < best.1 {
                best = (z, self.values[k]);
            }
        }
        best
    }
}

/// Compass search for a local minimum of `u` starting at `z0`.
fn refine_min(u: &ExhaustionSpec, z0: Complex64, mut step: f64) -> (Complex64, f64) {
    let mut z = z0;
    let mut fz = u.evaluate(z);
    let dirs = [
        Complex64::new(1.0, 0.0),
        Complex64::new(-1.0, 0.0),
        Complex64::new(0.0, 1.0),
        Complex64::new(0.0, -1.0),
    ];
    while step > 1e-9 {
        let mut moved = false;
        for d in dirs {
            let w = z + d * step;
            if w.norm_sqr() >= 1.0 {
                continue;
            }
            let fw = u.evaluate(w);
            if fw < fz {
                z = w;
                fz = fw;
                moved = true;
                break;
            }
        }
        if !moved {
            step *= 0.5;
        }
    }
    (z, fz)
}

/// `inf_𝔻 u`, with the point where it is (approximately) attained.
pub fn infimum(u: &ExhaustionSpec) -> (Option<Complex64>, f64) {
    match &u.kind {
        ExhaustionKind::RadialLog => (Some(Complex64::new(0.0, 0.0)), f64::NEG_INFINITY),
        ExhaustionKind::RadialSmooth { .. } => {
            let z = Complex64::new(0.0, 0.0);
            (Some(z), u.evaluate(z))
        }
        ExhaustionKind::GreenPotential(mu) if !mu.atoms.is_empty() => {
            (Some(mu.atoms[0].point), f64::NEG_INFINITY)
        }
        ExhaustionKind::Scaled(a, inner) => {
            let (z, v) = infimum(inner);
            (z, a * v)
        }
        ExhaustionKind::Pullback(map, inner) => {
            let (z, v) = infimum(inner);
            (z.map(|z| map.inverse(z)), v)
        }
        _ => {
            let g = Grid::cached(u, GRID_SIZE);
            let (z0, _) = g.argmin();
            let (z, v) = refine_min(u, z0, 2.0 / GRID_SIZE as f64);
            (Some(z), v)
        }
    }
}

fn check_resolution(n: usize) -> Result<()> {
    if n >= 64 && n.is_power_of_two() {
        Ok(())
    } else {
        Err(PshError::InvalidParameter(format!(
            "resolution {n} must be a power of two ≥ 64"
        )))
    }
}

/// Image of the circle `|z − c| = r` under a disk automorphism.
fn mobius_circle(map: &ConformalMap, center: Complex64, radius: f64) -> (Complex64, f64) {
    let p: Vec<Complex64> = (0..3)
        .map(|k| map.inverse(center + Complex64::from_polar(radius, TAU * k as f64 / 3.0)))
        .collect();
    // circumcircle of three points
    let (a, b, c) = (p[0], p[1], p[2]);
    let d = 2.0 * (a.re * (b.im - c.im) + b.re * (c.im - a.im) + c.re * (a.im - b.im));
    let (a2, b2, c2) = (a.norm_sqr(), b.norm_sqr(), c.norm_sqr());
    let ux = (a2 * (b.im - c.im) + b2 * (c.im - a.im) + c2 * (a.im - b.im)) / d;
    let uy = (a2 * (c.re - b.re) + b2 * (a.re - c.re) + c2 * (b.re - a.re)) / d;
    let o = Complex64::new(ux, uy);
    (o, (a - o).norm())
}

/// Exact circular level set when `u` admits one.
fn exact_circle(u: &ExhaustionSpec, c: f64) -> Result<Option<(Complex64, f64)>> {
    let origin = Complex64::new(0.0, 0.0);
    Ok(match &u.kind {
        ExhaustionKind::RadialLog => Some((origin, c.exp())),
        ExhaustionKind::RadialSmooth { .. } => {
            let u0 = u.evaluate(origin);
            if c <= u0 {
                return Err(PshError::EmptyLevel { c, inf: u0 });
            }
            let f = |r: f64| u.evaluate(Complex64::new(r, 0.0)) - c;
            let mut stop = BrentStop {
                ftol: 1e-15,
                xtol: 1e-15,
            };
            let r = find_root_brent(0.0, 1.0 - 1e-16, f, &mut stop).map_err(|e| {
                PshError::UnsupportedRegion(format!("radial level search failed: {e}"))
            })?;
            Some((origin, r))
        }
        ExhaustionKind::GreenPotential(mu) if mu.terms.is_empty() && mu.atoms.len() == 1 => {
            let a = mu.atoms[0];
            let rho = (c / a.mass).exp();
            let w = a.point;
            let den = 1.0 - rho * rho * w.norm_sqr();
            Some((
                w * (1.0 - rho * rho) / den,
                rho * (1.0 - w.norm_sqr()) / den,
            ))
        }
        ExhaustionKind::Scaled(a, inner) => exact_circle(inner, c / a)?,
        ExhaustionKind::Pullback(map, inner) => {
            exact_circle(inner, c)?.map(|(o, r)| mobius_circle(map, o, r))
        }
        _ => None,
    })
}

impl LevelSet {
    /// Traces `S_c` with `resolution` nodes.
    pub fn trace(u: &ExhaustionSpec, c: f64, resolution: usize) -> Result<Arc<LevelSet>> {
        static MEMO: OnceLock<Mutex<HashMap<(String, u64, usize), Arc<LevelSet>>>> =
            OnceLock::new();
        if !(c < 0.0) {
            return Err(PshError::InvalidParameter(format!(
                "level c = {c} must be negative"
            )));
        }
        check_resolution(resolution)?;
        let key = (u.canonical(), c.to_bits(), resolution);
        let memo = MEMO.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(l) = memo.lock().map(|m| m.get(&key).cloned()).ok().flatten() {
            return Ok(l);
        }
        let level = Arc::new(Self::trace_uncached(u, c, resolution)?);
        if let Ok(mut m) = memo.lock() {
            m.insert(key, level.clone());
        }
        Ok(level)
    }

    fn trace_uncached(u: &ExhaustionSpec, c: f64, n: usize) -> Result<LevelSet> {
        let level_tolerance = 1e-4 * c.abs();
        if let Some((o, r)) = exact_circle(u, c)? {
            let curve = ClosedCurve::circle(o, r, n);
            let values = curve.points.iter().map(|&z| u.evaluate(z)).collect();
            return Ok(LevelSet {
                c,
                center: o,
                curve,
                values,
                grading: None,
                circle: Some((o, r)),
                level_tolerance,
            });
        }
        let grid = Grid::cached(u, GRID_SIZE);
        let comps = grid.components_below(c);
        if comps.len() > 1 {
            return Err(PshError::UnsupportedRegion(format!(
                "sublevel set at c = {c} has {} components",
                comps.len()
            )));
        }
        let center = match comps.first() {
            Some(comp) => {
                let sum: Complex64 = comp
                    .iter()
                    .map(|&k| grid.point(k % grid.n, k / grid.n))
                    .sum();
                let centroid = sum / comp.len() as f64;
                if centroid.norm_sqr() < 1.0 && u.evaluate(centroid) < c {
                    centroid
                } else {
                    let (z0, _) = comp
                        .iter()
                        .map(|&k| (grid.point(k % grid.n, k / grid.n), grid.values[k]))
                        .fold((Complex64::new(0.0, 0.0), f64::INFINITY), |a, b| {
                            if b.1 < a.1 {
                                b
                            } else {
                                a
                            }
                        });
                    refine_min(u, z0, 2.0 / grid.n as f64).0
                }
            }
            None => {
                let (z, inf) = infimum(u);
                match z {
                    Some(z) if inf < c => z,
                    _ => return Err(PshError::EmptyLevel { c, inf }),
                }
            }
        };
        let grading = u.singular_boundary_angles().into_iter().find_map(|ts| {
            let d = Complex64::from_polar(1.0, ts) - center;
            let alpha = d.im.atan2(d.re);
            let r = ray_radius(u, center, alpha, c, None).ok()?;
            let z = center + Complex64::from_polar(r, alpha);
            (1.0 - z.norm() < 0.02).then_some(Grading {
                alpha,
                q: GRADING_Q,
            })
        });
        let angle = |j: usize| {
            let t = TAU * j as f64 / n as f64;
            match grading {
                Some(g) => g.angle(t),
                None => t,
            }
        };
        let mut points = Vec::with_capacity(n);
        let mut values = Vec::with_capacity(n);
        let mut prev = None;
        for j in 0..n {
            let theta = angle(j);
            let r = ray_radius(u, center, theta, c, prev)?;
            prev = Some(r);
            let dir = Complex64::from_polar(1.0, theta);
            let z = center + dir * r;
            // star check: below c inside, above c between the curve and the circle
            let rmax = exit_distance(center, theta);
            for f in [0.35, 0.7] {
                if u.evaluate(center + dir * (f * r)) >= c {
                    return Err(PshError::UnsupportedRegion(format!(
                        "level set at c = {c} is not star-shaped about {center}"
                    )));
                }
            }
            if u.evaluate(center + dir * (r + 0.5 * (rmax - r))) <= c {
                return Err(PshError::UnsupportedRegion(format!(
                    "level set at c = {c} is not star-shaped about {center}"
                )));
            }
            points.push(z);
            values.push(u.evaluate(z));
        }
        let curve = ClosedCurve::from_points(points)?;
        let level = LevelSet {
            c,
            center,
            curve,
            values,
            grading,
            circle: None,
            level_tolerance,
        };
        let worst = level.max_residual();
        if worst > level_tolerance {
            return Err(PshError::UnsupportedRegion(format!(
                "traced curve misses the level by {worst:e} > {level_tolerance:e}"
            )));
        }
        Ok(level)
    }

    pub fn len(&self) -> usize {
        self.curve.len()
    }

    pub fn is_empty(&self) -> bool {
        self.curve.is_empty()
    }

    pub fn arclength(&self) -> f64 {
        self.curve.length()
    }

    pub fn max_residual(&self) -> f64 {
        self.values
            .iter()
            .map(|v| (v - self.c).abs())
            .fold(0.0, f64::max)
    }

    /// Angle about the center of the node parameter `t`.
    pub fn angle_of_param(&self, t: f64) -> f64 {
        match self.grading {
            Some(g) => g.angle(t),
            None => t,
        }
    }

    /// Whether `z` lies in the sublevel region.
    pub fn contains(&self, z: Complex64) -> bool {
        if let Some((o, r)) = self.circle {
            return (z - o).norm() < r;
        }
        self.curve.winding_number(z) > 0.5
    }

    /// Curve nodes, first and second derivatives upsampled by an integer
    /// power of two through trigonometric interpolation.
    pub fn upsampled(&self, factor: usize) -> ClosedCurve {
        if factor <= 1 {
            return self.curve.clone();
        }
        if let Some((o, r)) = self.circle {
            return ClosedCurve::circle(o, r, self.len() * factor);
        }
        let n = self.len();
        let m = n * factor;
        let mut planner = FftPlanner::new();
        let mut spec = self.curve.points.clone();
        planner.plan_fft_forward(n).process(&mut spec);
        let mut padded = vec![Complex64::new(0.0, 0.0); m];
        for k in 0..n {
            if k < n / 2 {
                padded[k] = spec[k];
            } else if k == n / 2 {
                padded[k] = spec[k] * 0.5;
                padded[m - k] = spec[k] * 0.5;
            } else {
                padded[m - (n - k)] = spec[k];
            }
        }
        let scale = 1.0 / n as f64;
        let inv = planner.plan_fft_inverse(m);
        let derive = |order: u32| {
            let mut buf: Vec<Complex64> = padded
                .iter()
                .enumerate()
                .map(|(k, c)| {
                    let kk = if k <= m / 2 {
                        k as f64
                    } else {
                        k as f64 - m as f64
                    };
                    c * Complex64::new(0.0, kk).powu(order) * scale
                })
                .collect();
            inv.process(&mut buf);
            buf
        };
        ClosedCurve {
            points: derive(0),
            d1: derive(1),
            d2: derive(2),
        }
    }

    /// `∫_{B_c} f dA` (Lebesgue area) in star coordinates
    /// `z = p₀ + λ(z(t) − p₀)`, with `breaks(a, b)` listing the parameters in
    /// `(0, 1)` where `f` jumps along the segment `[a, b]`.
    pub fn integrate_region(
        &self,
        f: &dyn Fn(Complex64) -> f64,
        breaks: &dyn Fn(Complex64, Complex64) -> Vec<f64>,
        tol: &Tolerance<f64>,
    ) -> QuadratureResult<f64> {
        let p0 = self.center;
        let ray_tol = Tolerance {
            abs: tol.abs * 0.1,
            rel: tol.rel * 0.1,
            budget: tol.budget / 64,
        };
        let sweep = |curve: &ClosedCurve| -> (f64, Status, usize) {
            let n = curve.len();
            let mut acc = 0.0;
            let mut status = Status::Converged;
            let mut evals = 0;
            for j in 0..n {
                let z = curve.points[j];
                let jac = ((z - p0).conj() * curve.d1[j]).im;
                let mut pts = vec![0.0];
                let mut b = breaks(p0, z);
                b.retain(|&l| l > 0.0 && l < 1.0);
                b.sort_by(|x, y| x.partial_cmp(y).unwrap_or(std::cmp::Ordering::Equal));
                pts.extend(b);
                pts.push(1.0);
                let r = integrate_pieces(|l| f(p0 + (z - p0) * l) * l, &pts, &ray_tol);
                status = status.combine(r.status);
                evals += r.evaluations;
                acc += r.value * jac;
            }
            (acc * TAU / n as f64, status, evals)
        };
        let mut factor = 1;
        let (mut prev, mut status, mut evals) = sweep(&self.curve);
        loop {
            factor *= 2;
            let (next, st, ev) = sweep(&self.upsampled(factor));
            evals += ev;
            status = status.combine(st);
            let err = (next - prev).abs();
            if err <= tol.target(next) || factor >= 16 {
                let status = if err <= tol.target(next) {
                    status
                } else {
                    status.combine(Status::Inconclusive)
                };
                return QuadratureResult {
                    value: next,
                    error_estimate: err,
                    status,
                    depth: factor.trailing_zeros() as usize,
                    evaluations: evals,
                };
            }
            prev = next;
        }
    }

    /// CSV with header `x,y,u_value`.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record(["x", "y", "u_value"])?;
        for (z, v) in self.curve.points.iter().zip(&self.values) {
            wr.write_record([
                format!("{:.17e}", z.re),
                format!("{:.17e}", z.im),
                format!("{:.17e}", v),
            ])?;
        }
        wr.flush()?;
        Ok(())
    }

    /// No two non-adjacent polyline edges intersect.
    pub fn is_simple(&self) -> bool {
        let p = &self.curve.points;
        let n = p.len();
        let cross = |a: Complex64, b: Complex64| a.re * b.im - a.im * b.re;
        let seg = |i: usize, j: usize| {
            let (a, b, c, d) = (p[i], p[(i + 1) % n], p[j], p[(j + 1) % n]);
            let d1 = cross(b - a, c - a);
            let d2 = cross(b - a, d - a);
            let d3 = cross(d - c, a - c);
            let d4 = cross(d - c, b - c);
            d1 * d2 < 0.0 && d3 * d4 < 0.0
        };
        for i in 0..n {
            for j in i + 2..n {
                if i == 0 && j == n - 1 {
                    continue;
                }
                if seg(i, j) {
                    return false;
                }
            }
        }
        true
    }
}

/// Radius `r` with `u(p + r e^{iθ}) = c`.
fn ray_radius(
    u: &ExhaustionSpec,
    p: Complex64,
    theta: f64,
    c: f64,
    guess: Option<f64>,
) -> Result<f64> {
    let dir = Complex64::from_polar(1.0, theta);
    let rmax = exit_distance(p, theta);
    let f = |r: f64| {
        if r >= rmax {
            -c
        } else {
            u.evaluate(p + dir * r) - c
        }
    };
    let (mut lo, mut hi) = (0.0, rmax);
    if let Some(g) = guess {
        let g = g.min(rmax);
        let (a, b) = (0.8 * g, (1.25 * g).min(rmax));
        if f(a) < 0.0 && f(b) > 0.0 {
            lo = a;
            hi = b;
        }
    }
    let mut stop = BrentStop {
        ftol: 1e-9 * c.abs(),
        xtol: 1e-14,
    };
    find_root_brent(lo, hi, f, &mut stop)
        .map_err(|e| PshError::UnsupportedRegion(format!("ray search at θ = {theta} failed: {e}")))
}

/// Parameters `λ ∈ (0, 1)` where the segment `a + λ(b − a)` crosses the
/// circle `|z − o| = r`.
pub fn circle_crossings(a: Complex64, b: Complex64, o: Complex64, r: f64) -> Vec<f64> {
    let d = b - a;
    let e = a - o;
    let qa = d.norm_sqr();
    let qb = 2.0 * (e.conj() * d).re;
    let qc = e.norm_sqr() - r * r;
    let disc = qb * qb - 4.0 * qa * qc;
    if qa == 0.0 || disc <= 0.0 {
        return Vec::new();
    }
    let s = disc.sqrt();
    [(-qb - s) / (2.0 * qa), (-qb + s) / (2.0 * qa)]
        .into_iter()
        .filter(|l| *l > 0.0 && *l < 1.0)
        .collect()
}

impl ExhaustionSpec {
    fn has_lens_density(&self) -> bool {
        match &self.kind {
            ExhaustionKind::ExampleUm(_) => true,
            ExhaustionKind::GreenPotential(mu) => mu.terms.iter().any(|t| {
                matches!(
                    t,
                    DensityTerm::EdgePower {
                        slab: Slab::Lens,
                        ..
                    }
                )
            }),
            ExhaustionKind::Scaled(_, inner) | ExhaustionKind::Pullback(_, inner) => {
                inner.has_lens_density()
            }
            _ => false,
        }
    }

    /// Parameters along `[a, b]` where `Λu` jumps across a lens edge.
    pub fn density_breaks(&self, a: Complex64, b: Complex64) -> Vec<f64> {
        if !self.has_lens_density() {
            return Vec::new();
        }
        let mut map = ConformalMap::Identity;
        let mut cur = self;
        loop {
            match &cur.kind {
                ExhaustionKind::Scaled(_, inner) => cur = inner,
                ExhaustionKind::Pullback(m, inner) => {
                    map = *m;
                    cur = inner;
                }
                _ => break,
            }
        }
        let (o, r) = mobius_circle(&map, Complex64::new(0.5, 0.0), 0.5);
        circle_crossings(a, b, o, r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kress_map_is_monotone_and_invertible() {
        let g = Grading { alpha: 0.3, q: 4.0 };
        let mut last = -1.0;
        for k in 0..64 {
            let t = TAU * k as f64 / 64.0;
            let w = g.w(t);
            assert!(w >= last);
            last = w;
            if k > 0 {
                assert!((g.param(g.angle(t)) - t).abs() < 1e-10);
            }
        }
        assert!(g.w(TAU * 0.01) < 1e-4);
    }

    #[test]
    fn log_level_is_exact_circle() {
        let u = ExhaustionSpec::log();
        let l = LevelSet::trace(&u, -1.0, 256).unwrap();
        let (o, r) = l.circle.unwrap();
        assert!(o.norm() == 0.0 && (r - (-1.0f64).exp()).abs() < 1e-15);
        assert!(l.max_residual() < 1e-14);
        assert!((l.arclength() - TAU * r).abs() < 1e-12);
    }

    #[test]
    fn green_level_is_circle() {
        let w = Complex64::new(0.3, 0.0);
        let u = ExhaustionSpec::green(w).unwrap();
        let l = LevelSet::trace(&u, -0.5, 256).unwrap();
        assert!(l.circle.is_some());
        assert!(l.max_residual() < 1e-13, "{}", l.max_residual());
        assert!(l.contains(w));
    }

    #[test]
    fn two_atom_level_is_traced() {
        let u = ExhaustionSpec::parse("green:0.2+0i;-0.1+0.1i").unwrap();
        let l = LevelSet::trace(&u, -0.4, 256).unwrap();
        assert!(l.circle.is_none());
        assert!(l.max_residual() <= l.level_tolerance);
        assert!(l.is_simple());
        assert!(l.curve.signed_area() > 0.0);
    }

    #[test]
    fn disconnected_level_is_rejected() {
        let u = ExhaustionSpec::parse("green:0.7+0i;-0.7+0i").unwrap();
        assert!(matches!(
            LevelSet::trace(&u, -3.0, 256),
            Err(PshError::UnsupportedRegion(_))
        ));
    }

    #[test]
    fn region_area_of_circle() {
        let u = ExhaustionSpec::green(Complex64::new(0.3, 0.2)).unwrap();
        let l = LevelSet::trace(&u, -0.7, 128).unwrap();
        let (_, r) = l.circle.unwrap();
        let a = l.integrate_region(&|_| 1.0, &|_, _| Vec::new(), &Tolerance::new(1e-12, 1e-12));
        assert!((a.value - PI * r * r).abs() < 1e-11, "{a:?}");
    }

    #[test]
    fn upsampling_reproduces_circle() {
        let u = ExhaustionSpec::parse("green:0.2+0i;-0.1+0.1i").unwrap();
        let l = LevelSet::trace(&u, -0.4, 128).unwrap();
        let up = l.upsampled(2);
        for j in 0..l.len() {
            assert!((up.points[2 * j] - l.curve.points[j]).norm() < 1e-12);
            assert!((up.d1[2 * j] - l.curve.d1[j]).norm() < 1e-9);
        }
    }

    #[test]
    fn crossings_of_unit_segment() {
        let c = circle_crossings(
            Complex64::new(-1.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
            0.5,
        );
        assert_eq!(c.len(), 2);
        assert!((c[0] - 0.25).abs() < 1e-15 && (c[1] - 0.75).abs() < 1e-15);
    }
}
