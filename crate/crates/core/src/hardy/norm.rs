//! `H^p_u` norms by three routes, membership verdicts and harmonic majorants.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{PshError, Result};
use crate::exhaustion::{level_pairing, ExhaustionSpec, DEFAULT_RESOLUTION};
use crate::factorization::AnalyticExpr;
use crate::geometry::{
    integrate_boundary_arc, integrate_disk_area, AreaNormalization, ConformalMap, QuadratureResult,
    Singularities, Status, Tolerance,
};
use crate::hardy::weight::{weight_at, weight_exponent, Normalization};
use crate::potential::BoundaryProfile;

/// Largest relative gap allowed between finite routes.
pub const ROUTE_AGREEMENT: f64 = 5e-3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum RouteStatus {
    Finite,
    Divergent,
    Inconclusive,
    Skipped,
}

/// One route's value of `‖f‖^p_{u,p}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Route {
    pub status: RouteStatus,
    pub value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Route {
    pub fn from_quadrature(r: &QuadratureResult<f64>) -> Self {
        let status = match r.status {
            Status::Converged if r.value.is_finite() => RouteStatus::Finite,
            Status::Divergent => RouteStatus::Divergent,
            _ => RouteStatus::Inconclusive,
        };
        Route {
            status,
            value: (status != RouteStatus::Divergent).then_some(r.value),
            note: None,
        }
    }

    pub fn skipped(note: impl Into<String>) -> Self {
        Route {
            status: RouteStatus::Skipped,
            value: None,
            note: Some(note.into()),
        }
    }

    fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn finite(&self) -> Option<f64> {
        match self.status {
            RouteStatus::Finite => self.value,
            _ => None,
        }
    }

    pub fn is_divergent(&self) -> bool {
        self.status == RouteStatus::Divergent
    }

    fn scaled(&self, a: f64) -> Self {
        Route {
            value: self.value.map(|v| v * a),
            ..self.clone()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Member,
    NotMember,
    Inconclusive,
}

#[derive(Clone, Debug, Serialize)]
pub struct LadderRung {
    pub k: u32,
    pub c: f64,
    pub pairing: f64,
    pub empty: bool,
}

/// Level pairings `∫|f|^p dμ_{c,u}` on `c_k = −2^{−k}`.
#[derive(Clone, Debug, Serialize)]
pub struct LevelLadder {
    pub rungs: Vec<LadderRung>,
    pub monotone: bool,
    pub sup: f64,
    /// Aitken Δ² limit of the last three rungs (the sup when not applicable).
    pub extrapolated: f64,
}

impl LevelLadder {
    fn from_rungs(rungs: Vec<LadderRung>) -> Self {
        let vals: Vec<f64> = rungs.iter().map(|r| r.pairing).collect();
        let sup = vals.iter().copied().fold(0.0, f64::max);
        let slack = 1e-6 * sup.max(f64::MIN_POSITIVE);
        let monotone = vals.windows(2).all(|w| w[1] >= w[0] - slack);
        let live: Vec<f64> = rungs
            .iter()
            .filter(|r| !r.empty)
            .map(|r| r.pairing)
            .collect();
        let single = match live.as_slice() {
            [.., a, b, c] if b - a > 0.0 => aitken(*a, *b, *c),
            _ => None,
        };
        let double = match live.as_slice() {
            [.., a, b, c, d, e] if single.is_some() => {
                match (aitken(*a, *b, *c), aitken(*b, *c, *d), aitken(*c, *d, *e)) {
                    (Some(x), Some(y), Some(z)) => aitken(x, y, z),
                    _ => None,
                }
            }
            _ => None,
        };
        let extrapolated = match (single, double) {
            // the second pass must be a small correction to the first
            (Some(s1), Some(s2)) if (s2 - s1).abs() <= (s1 - live[live.len() - 1]).abs() => s2,
            (Some(s1), _) => s1,
            _ => sup,
        };
        LevelLadder {
            rungs,
            monotone,
            sup,
            extrapolated,
        }
    }
}

/// `Δ²` extrapolation; `None` unless the differences shrink without a sign
/// change.
fn aitken(a: f64, b: f64, c: f64) -> Option<f64> {
    let (d1, d2) = (b - a, c - b);
    if d2 == 0.0 {
        return Some(c);
    }
    (d1 * d2 > 0.0 && d2.abs() < d1.abs()).then(|| c + d2 * d2 / (d1 - d2))
}

/// Which routes to run and how finely.
#[derive(Clone, Debug)]
pub struct NormOptions {
    pub tol: Tolerance<f64>,
    /// Tolerance for evaluating `u` inside the bulk area integral.
    pub eval_tol: Tolerance<f64>,
    pub resolution: usize,
    /// Ladder `k = 0..=k_max`.
    pub k_max: u32,
    pub level: bool,
    pub bulk: bool,
    pub boundary: bool,
}

impl Default for NormOptions {
    fn default() -> Self {
        NormOptions {
            tol: Tolerance::new(1e-10, 1e-5),
            eval_tol: Tolerance::new(1e-12, 1e-8).with_budget(1 << 13),
            resolution: DEFAULT_RESOLUTION,
            k_max: 12,
            level: true,
            bulk: true,
            boundary: true,
        }
    }
}

impl NormOptions {
    pub fn boundary_only() -> Self {
        NormOptions {
            level: false,
            bulk: false,
            ..Default::default()
        }
    }

    pub fn without_bulk() -> Self {
        NormOptions {
            bulk: false,
            ..Default::default()
        }
    }

    pub fn without_level() -> Self {
        NormOptions {
            level: false,
            ..Default::default()
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct NormReport {
    pub function: String,
    pub exhaustion: String,
    pub p: f64,
    #[serde(rename = "routeLevelSup")]
    pub route_level_sup: Route,
    #[serde(rename = "routeBulk")]
    pub route_bulk: Route,
    #[serde(rename = "routeBoundary")]
    pub route_boundary: Route,
    /// `∫|f*|^p dν`, the classical `H^p` norm to the power `p`.
    pub classical: Route,
    /// Closed-form reason for divergence of `∫|f*|^p V dν`, if any.
    #[serde(rename = "analyticDivergence")]
    pub analytic_divergence: Option<String>,
    pub verdict: Verdict,
    /// Largest pairwise relative gap among finite routes.
    pub agreement: Option<f64>,
    /// `‖f‖_{u,p}` from the boundary route (bulk if unavailable).
    pub norm: Option<f64>,
    pub ladder: Option<LevelLadder>,
    #[serde(rename = "routesRun")]
    pub routes_run: Vec<String>,
    pub normalization: Normalization,
}

impl NormReport {
    /// Best available value of `‖f‖^p_{u,p}`.
    pub fn value(&self) -> Option<f64> {
        self.route_boundary
            .finite()
            .or(self.route_bulk.finite())
            .or(self.route_level_sup.finite())
    }

    /// Report with route values in the given convention (`×2π` for
    /// `paper-2pi`); verdicts are unchanged.
    pub fn in_normalization(&self, n: Normalization) -> NormReport {
        let a = n.factor() / self.normalization.factor();
        let mut r = self.clone();
        r.route_level_sup = r.route_level_sup.scaled(a);
        r.route_bulk = r.route_bulk.scaled(a);
        r.route_boundary = r.route_boundary.scaled(a);
        r.norm = r.value().map(|v| v.powf(1.0 / r.p));
        if let Some(l) = &mut r.ladder {
            l.sup *= a;
            l.extrapolated *= a;
            l.rungs.iter_mut().for_each(|g| g.pairing *= a);
        }
        r.normalization = n;
        r
    }
}

fn relative_gap(a: f64, b: f64) -> f64 {
    let s = a.abs().max(b.abs());
    if s == 0.0 {
        0.0
    } else {
        (a - b).abs() / s
    }
}

/// `Λ|f|^p = (p²/2π)|f|^{p−2}|f′|²`.
pub fn power_modulus_laplacian(f: &AnalyticExpr, p: f64, z: Complex64) -> f64 {
    let (v, d) = f.eval_with_derivative(z);
    let d2 = d.norm_sqr();
    if d2 == 0.0 {
        return 0.0;
    }
    let m = v.norm();
    let core = if p == 2.0 { d2 } else { m.powf(p - 2.0) * d2 };
    p * p / (2.0 * PI) * core
}

fn level_route(
    f: &AnalyticExpr,
    p: f64,
    u: &ExhaustionSpec,
    opts: &NormOptions,
) -> (Route, Option<LevelLadder>) {
    let mut rungs = Vec::new();
    for k in 0..=opts.k_max {
        let c = -(2f64.powi(-(k as i32)));
        let phi = |z: Complex64| f.eval(z).norm().powf(p);
        match level_pairing(u, c, opts.resolution, &phi) {
            Ok((v, circular)) => {
                if p <= 1.0 && !circular {
                    return (
                        Route::skipped("p ≤ 1: level route runs on circular levels only"),
                        None,
                    );
                }
                rungs.push(LadderRung {
                    k,
                    c,
                    pairing: v,
                    empty: false,
                })
            }
            Err(PshError::EmptyLevel { .. }) => rungs.push(LadderRung {
                k,
                c,
                pairing: 0.0,
                empty: true,
            }),
            Err(e) => return (Route::skipped(format!("level c = {c}: {e}")), None),
        }
    }
    let ladder = LevelLadder::from_rungs(rungs);
    let v = ladder.extrapolated;
    let tail = relative_gap(v, ladder.sup);
    let status = if !ladder.monotone || !v.is_finite() || tail > 0.05 {
        RouteStatus::Inconclusive
    } else {
        RouteStatus::Finite
    };
    let mut route = Route {
        status,
        value: Some(v),
        note: None,
    };
    if !ladder.monotone {
        route = route.with_note("level pairings are not monotone in c");
    } else if tail > 0.05 {
        route = route.with_note(format!(
            "extrapolated tail {tail:.3} of the value: ladder not converged"
        ));
    }
    (route, Some(ladder))
}

fn bulk_route(f: &AnalyticExpr, p: f64, u: &ExhaustionSpec, opts: &NormOptions) -> Route {
    let phi = |z: Complex64| f.eval(z).norm().powf(p);
    let tol = Tolerance {
        abs: opts.tol.abs * u.scale_factor().abs(),
        ..opts.tol
    };
    let part_a = match u.integrate_measure(&phi, &tol) {
        Ok(r) => r,
        Err(e) => return Route::skipped(format!("∫|f|^p dΛu: {e}")),
    };
    let ue = u.clone().with_tolerance(opts.eval_tol);
    let mut interior: Vec<Complex64> = u
        .atoms()
        .unwrap_or_default()
        .iter()
        .map(|a| a.point)
        .collect();
    if p < 2.0 {
        match f.zeros() {
            Ok(z) => interior.extend(z),
            Err(e) => return Route::skipped(format!("zeros of f: {e}")),
        }
    }
    let mut boundary = f.boundary_singular_angles();
    boundary.extend(u.singular_boundary_angles());
    let sing = Singularities {
        interior,
        boundary_layer: !boundary.is_empty(),
        boundary,
    };
    let part_b = integrate_disk_area(
        |z| {
            let l = power_modulus_laplacian(f, p, z);
            if l == 0.0 || !l.is_finite() {
                return if l.is_finite() { 0.0 } else { f64::INFINITY };
            }
            -ue.evaluate(z) * l
        },
        &tol,
        &sing,
        AreaNormalization::Lebesgue,
    );
    let mut sum = part_a.clone() + part_b.clone();
    if part_a.is_divergent() || part_b.is_divergent() {
        sum.status = Status::Divergent;
    }
    Route::from_quadrature(&sum)
}

fn boundary_routes(
    f: &AnalyticExpr,
    p: f64,
    u: &ExhaustionSpec,
    opts: &NormOptions,
) -> (Route, Route) {
    let mut angles = f.boundary_singular_angles();
    let classical = integrate_boundary_arc(|t| f.boundary_modulus(t).powf(p), &opts.tol, &angles);
    if let Err(e) = u.boundary_weight(0.5) {
        return (
            Route::from_quadrature(&classical),
            Route::skipped(format!("boundary weight: {e}")),
        );
    }
    angles.extend(u.singular_boundary_angles());
    let weighted = integrate_boundary_arc(
        |t| {
            let m = f.boundary_modulus(t).powf(p);
            if m == 0.0 {
                0.0
            } else {
                m * weight_at(u, t)
            }
        },
        &opts.tol,
        &angles,
    );
    let weighted = Route::from_quadrature(&weighted);
    let weighted = if p <= 1.0 {
        weighted.with_note("p ≤ 1: boundary formula used outside its proven range")
    } else {
        weighted
    };
    (Route::from_quadrature(&classical), weighted)
}

/// Closed-form divergence of `∫|f*|^p V dν` read off boundary exponents.
pub fn analytic_divergence(f: &AnalyticExpr, p: f64, u: &ExhaustionSpec) -> Option<String> {
    let mut angles = f.boundary_singular_angles();
    angles.extend(u.singular_boundary_angles());
    for t in angles {
        let (Some(af), Some(av)) = (f.boundary_exponent(t), weight_exponent(u, t)) else {
            continue;
        };
        let e = p * af + av;
        if e <= -1.0 {
            return Some(format!("|f*|^p V ≍ |θ − {t}|^{e} is not integrable"));
        }
    }
    None
}

fn verdict(report: &NormReport) -> Verdict {
    let routes = [
        &report.route_level_sup,
        &report.route_bulk,
        &report.route_boundary,
    ];
    let divergent = routes.iter().filter(|r| r.is_divergent()).count();
    let decisive = divergent >= 2
        || (divergent >= 1 && report.analytic_divergence.is_some())
        || (report.classical.is_divergent()
            && (divergent >= 1 || report.analytic_divergence.is_some()));
    if decisive {
        return Verdict::NotMember;
    }
    if divergent > 0
        || report.classical.finite().is_none()
        || report.route_boundary.finite().is_none()
    {
        return Verdict::Inconclusive;
    }
    let inconclusive = routes
        .iter()
        .filter(|r| r.status == RouteStatus::Inconclusive)
        .count();
    let finite = routes.iter().filter(|r| r.finite().is_some()).count();
    if inconclusive == 0 || finite >= 2 {
        Verdict::Member
    } else {
        Verdict::Inconclusive
    }
}

/// `‖f‖^p_{u,p}` by the level ladder, the bulk identity and the weighted
/// boundary integral, with a membership verdict.
pub fn hardy_norm(
    f: &AnalyticExpr,
    p: f64,
    u: &ExhaustionSpec,
    opts: &NormOptions,
) -> Result<NormReport> {
    if !(p > 0.0 && p.is_finite()) {
        return Err(PshError::InvalidParameter(format!(
            "p = {p} must be positive"
        )));
    }
    let mut routes_run = Vec::new();
    let (route_level_sup, ladder) = if opts.level {
        routes_run.push("level".to_string());
        level_route(f, p, u, opts)
    } else {
        (Route::skipped("not requested"), None)
    };
    let route_bulk = if opts.bulk {
        routes_run.push("bulk".to_string());
        bulk_route(f, p, u, opts)
    } else {
        Route::skipped("not requested")
    };
    let (classical, route_boundary) = boundary_routes(f, p, u, opts);
    let route_boundary = if opts.boundary {
        routes_run.push("boundary".to_string());
        route_boundary
    } else {
        Route::skipped("not requested")
    };
    let finite: Vec<f64> = [&route_level_sup, &route_bulk, &route_boundary]
        .iter()
        .filter_map(|r| r.finite())
        .collect();
    let agreement = if finite.len() >= 2 {
        let mut g: f64 = 0.0;
        for i in 0..finite.len() {
            for j in i + 1..finite.len() {
                g = g.max(relative_gap(finite[i], finite[j]));
            }
        }
        Some(g)
    } else {
        None
    };
    let mut report = NormReport {
        function: f.canonical(),
        exhaustion: u.canonical(),
        p,
        route_level_sup,
        route_bulk,
        route_boundary,
        classical,
        analytic_divergence: analytic_divergence(f, p, u),
        verdict: Verdict::Inconclusive,
        agreement,
        norm: None,
        ladder,
        routes_run,
        normalization: Normalization::Normalized,
    };
    report.norm = report.value().map(|v| v.powf(1.0 / p));
    report.verdict = verdict(&report);
    Ok(report)
}

/// Verdict with its evidence.
#[derive(Clone, Debug, Serialize)]
pub struct MembershipEvidence {
    pub verdict: Verdict,
    /// Whether `f` passes the classical `H^p` check.
    #[serde(rename = "classicalMember")]
    pub classical_member: Option<bool>,
    #[serde(rename = "weightProfile")]
    pub weight_profile: String,
    pub report: NormReport,
}

pub fn membership_verdict(
    f: &AnalyticExpr,
    p: f64,
    u: &ExhaustionSpec,
    opts: &NormOptions,
) -> Result<MembershipEvidence> {
    let report = hardy_norm(f, p, u, opts)?;
    let classical_member = match report.classical.status {
        RouteStatus::Finite => Some(true),
        RouteStatus::Divergent => Some(false),
        _ => None,
    };
    Ok(MembershipEvidence {
        verdict: report.verdict,
        classical_member,
        weight_profile: format!("weight:{}", u.canonical()),
        report,
    })
}

/// Norm of `f ∘ φ` under `u ∘ φ` for a disk map `φ`.
pub fn conformal_pullback_norm(
    f: &AnalyticExpr,
    u: &ExhaustionSpec,
    map: ConformalMap,
    p: f64,
    opts: &NormOptions,
) -> Result<NormReport> {
    map.validate()?;
    let g = AnalyticExpr::Compose(Box::new(f.clone()), map);
    let v = ExhaustionSpec::pullback(map, u.clone())?;
    hardy_norm(&g, p, &v, opts)
}

/// Least harmonic majorant `h = P[|f*|^p]` of `|f|^p`.
#[derive(Clone, Debug)]
pub struct HarmonicMajorant {
    pub representation: BoundaryProfile,
    pub p: f64,
    /// `h(0) = ∫|f*|^p dν`.
    pub h0: f64,
}

impl HarmonicMajorant {
    pub fn value_at(&self, z: Complex64) -> f64 {
        self.representation
            .poisson_integral(z, &Tolerance::new(1e-12, 1e-9))
            .value
    }

    /// `max (|f|^p − h)` over the given points.
    pub fn worst_violation(&self, f: &AnalyticExpr, points: &[Complex64]) -> f64 {
        points
            .iter()
            .map(|&z| f.eval(z).norm().powf(self.p) - self.value_at(z))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// `∫ h dΛu`, which equals `‖f‖^p_{u,p}` for finite-mass `u`.
    pub fn integrate_against(
        &self,
        u: &ExhaustionSpec,
        tol: &Tolerance<f64>,
    ) -> Result<QuadratureResult<f64>> {
        u.integrate_measure(&|z| self.value_at(z), tol)
    }
}

pub fn least_harmonic_majorant(f: &AnalyticExpr, p: f64) -> Result<HarmonicMajorant> {
    let g = f.clone();
    let sing = f.boundary_singular_angles();
    let trace = std::sync::Arc::new(move |t: f64| g.boundary_modulus(t).powf(p));
    let h0 = integrate_boundary_arc(|t| trace(t), &Tolerance::new(1e-12, 1e-10), &sing);
    if h0.is_divergent() || !h0.value.is_finite() {
        return Err(PshError::NoMajorant);
    }
    Ok(HarmonicMajorant {
        representation: BoundaryProfile::from_fn(1024, trace, sing)?,
        p,
        h0: h0.value,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> AnalyticExpr {
        AnalyticExpr::parse(s).unwrap()
    }

    #[test]
    fn constant_under_log_is_one_everywhere() {
        let r = hardy_norm(
            &parse("1"),
            2.0,
            &ExhaustionSpec::log(),
            &NormOptions::default(),
        )
        .unwrap();
        for route in [&r.route_level_sup, &r.route_bulk, &r.route_boundary] {
            assert!((route.finite().unwrap() - 1.0).abs() < 1e-9, "{r:?}");
        }
        assert_eq!(r.verdict, Verdict::Member);
    }

    #[test]
    fn monomial_under_log() {
        let r = hardy_norm(
            &parse("z*z"),
            2.0,
            &ExhaustionSpec::log(),
            &NormOptions::default(),
        )
        .unwrap();
        assert!((r.route_boundary.finite().unwrap() - 1.0).abs() < 1e-9);
        assert!((r.route_bulk.finite().unwrap() - 1.0).abs() < 1e-6, "{r:?}");
        assert!(
            (r.route_level_sup.finite().unwrap() - 1.0).abs() < 5e-3,
            "{r:?}"
        );
    }

    #[test]
    fn majorant_of_one_minus_z() {
        let f = parse("1-z");
        let h = least_harmonic_majorant(&f, 2.0).unwrap();
        assert!((h.h0 - 2.0).abs() < 1e-10);
        let pts: Vec<Complex64> = (0..20)
            .map(|j| Complex64::from_polar(0.9 * j as f64 / 20.0, j as f64))
            .collect();
        assert!(h.worst_violation(&f, &pts) <= 1e-6);
        assert!(matches!(
            least_harmonic_majorant(&parse("pow(1-z,-1)"), 2.0),
            Err(PshError::NoMajorant)
        ));
    }

    #[test]
    fn ladder_extrapolates_geometric_tail() {
        let rungs = (0..6)
            .map(|k| LadderRung {
                k,
                c: 0.0,
                pairing: 1.0 - 0.5f64.powi(k as i32),
                empty: false,
            })
            .collect();
        let l = LevelLadder::from_rungs(rungs);
        assert!(l.monotone);
        assert!((l.extrapolated - 1.0).abs() < 1e-14);
    }
}
