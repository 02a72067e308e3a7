//! `psh verify --suite <name>`: structured pass/fail cases.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use psh_core::exhaustion::{djl_both_sides, sandwich_check, ExhaustionSpec, ExplicitSubharmonic};
use psh_core::factorization::{beurling_isometry_check, u_inner, AnalyticExpr, UInnerOptions};
use psh_core::geometry::Tolerance;
use psh_core::hardy::{
    comparison_checks, green_domination, hardy_norm, membership_verdict, point_bound_check,
    polynomial_approximation, BoundaryWeight, ComparisonStatus, NormOptions, Verdict,
    ROUTE_AGREEMENT,
};
use psh_core::potential::{sigma_mass_exact, RieszMeasure};
use psh_core::Result;
use serde::Serialize;

pub const SUITES: [&str; 7] = [
    "djl",
    "routes",
    "riesz",
    "beurling",
    "radial",
    "comparisons",
    "examples",
];

#[derive(Clone, Debug, Serialize)]
pub struct Case {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Case {
    fn new(name: impl Into<String>, passed: bool) -> Self {
        Case {
            name: name.into(),
            passed,
            value: None,
            expected: None,
            residual: None,
            tolerance: None,
            detail: None,
        }
    }

    /// `|value − expected| / |expected| ≤ tol`.
    fn close(name: impl Into<String>, value: f64, expected: f64, tol: f64) -> Self {
        let residual = (value - expected).abs() / expected.abs().max(f64::MIN_POSITIVE);
        Case {
            value: Some(value),
            expected: Some(expected),
            residual: Some(residual),
            tolerance: Some(tol),
            ..Case::new(name, residual <= tol)
        }
    }

    fn residual(name: impl Into<String>, residual: f64, tol: f64) -> Self {
        Case {
            residual: Some(residual),
            tolerance: Some(tol),
            ..Case::new(name, residual <= tol)
        }
    }

    fn detail(mut self, d: impl Into<String>) -> Self {
        self.detail = Some(d.into());
        self
    }

    fn error(name: impl Into<String>, e: impl std::fmt::Display) -> Self {
        Case::new(name, false).detail(e.to_string())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub passed: bool,
    pub cases: Vec<Case>,
    pub paper_refs: Vec<String>,
}

/// Runs a case body; errors become failed cases.
fn guard(cases: &mut Vec<Case>, name: &str, body: impl FnOnce() -> Result<Vec<Case>>) {
    match body() {
        Ok(c) => cases.extend(c),
        Err(e) => cases.push(Case::error(name, e)),
    }
}

fn expr(s: &str) -> AnalyticExpr {
    AnalyticExpr::parse(s).expect("built-in expression")
}

fn spec(s: &str) -> ExhaustionSpec {
    ExhaustionSpec::parse(s).expect("built-in exhaustion")
}

pub fn run_suite(name: &str) -> Result<SuiteReport> {
    let (cases, refs): (Vec<Case>, &[&str]) = match name {
        "djl" => (djl(), &["Demailly-Lelong-Jensen formula"]),
        "routes" => (
            routes(),
            &[
                "least harmonic majorant characterization",
                "boundary value characterization ∫ |f*|^p V dν",
            ],
        ),
        "riesz" => (
            riesz(),
            &["Riesz measure of u_m: mass finite exactly when 1/2 < m ≤ 1"],
        ),
        "beurling" => (
            beurling(),
            &[
                "u-inner condition |φ*|² V = 1",
                "Beurling-type description Y = φH²",
            ],
        ),
        "radial" => (
            radial(),
            &["radial exhaustions have constant boundary weight"],
        ),
        "comparisons" => (
            comparisons(),
            &[
                "norm ordering under b·v ≤ u outside a compact",
                "point evaluation bound φ(w) ≤ (s/2π)‖φ‖_v",
                "domination by the Green exhaustion",
            ],
        ),
        "examples" => (examples(), &["membership of (1−z)-powers under u_m"]),
        other => {
            return Err(psh_core::PshError::InvalidParameter(format!(
                "unknown suite {other:?}; expected one of {}",
                SUITES.join(", ")
            )))
        }
    };
    Ok(SuiteReport {
        suite: name.to_string(),
        passed: !cases.is_empty() && cases.iter().all(|c| c.passed),
        cases,
        paper_refs: refs.iter().map(|s| s.to_string()).collect(),
    })
}

/// `|1 − z|` with `Λ|1 − z| = 1/(2π|1 − z|)`.
pub fn distance_to_one() -> ExplicitSubharmonic {
    ExplicitSubharmonic {
        value: Arc::new(|z: Complex64| (1.0 - z).norm()),
        laplacian: Arc::new(|z: Complex64| 1.0 / (2.0 * PI * (1.0 - z).norm())),
        label: "|1-z|".into(),
    }
}

fn djl() -> Vec<Case> {
    let mut cases = Vec::new();
    let log = ExhaustionSpec::log();
    let v = ExplicitSubharmonic::modulus_squared();
    let tol = Tolerance::new(1e-12, 1e-10);
    for c in [-1.5, -1.0, -0.5, -0.1] {
        let name = format!("log, |z|^2, c = {c}");
        guard(&mut cases, &name, || {
            let r = djl_both_sides(&log, &v, c, 256, &tol)?;
            let want = (2.0 * c).exp();
            Ok(vec![
                Case::close(format!("{name}: lhs"), r.lhs, want, 1e-6),
                Case::close(format!("{name}: rhs"), r.rhs, want, 1e-6),
            ])
        });
    }
    let um = spec("um:0.75");
    let d = distance_to_one();
    for c in [-0.05] {
        let name = format!("um:0.75, |1-z|, c = {c}");
        guard(&mut cases, &name, || {
            let r = djl_both_sides(&um, &d, c, 256, &Tolerance::new(1e-10, 1e-8))?;
            Ok(vec![Case::residual(&name, r.residual, 1e-2)
                .detail(format!("lhs {} rhs {}", r.lhs, r.rhs))])
        });
    }
    cases
}

pub const ROUTE_BATTERY: [(&str, &str); 4] = [
    ("1", "log"),
    ("z", "log"),
    ("pow(1-z,0.5)", "um:0.75"),
    ("z*(1-z)", "um:0.75"),
];

fn routes() -> Vec<Case> {
    let mut cases = Vec::new();
    for (f, u) in ROUTE_BATTERY {
        let name = format!("{f} under {u}, p = 2");
        guard(&mut cases, &name, || {
            let r = hardy_norm(&expr(f), 2.0, &spec(u), &NormOptions::default())?;
            let gap = r.agreement.unwrap_or(f64::INFINITY);
            Ok(vec![Case {
                value: r.value(),
                ..Case::residual(&name, gap, ROUTE_AGREEMENT).detail(format!(
                    "level {:?}, bulk {:?}, boundary {:?}",
                    r.route_level_sup.value, r.route_bulk.value, r.route_boundary.value
                ))
            }])
        });
    }
    cases
}

fn riesz() -> Vec<Case> {
    let mut cases = Vec::new();
    for m in [0.3, 0.5, 0.6, 0.75, 0.9] {
        let name = format!("mass of sigma_{m}");
        guard(&mut cases, &name, || {
            let r = RieszMeasure::sigma(m)?.total_mass(&Tolerance::default());
            Ok(vec![match sigma_mass_exact(m).finite() {
                Some(want) if r.is_converged() => Case::close(&name, r.value, want, 1e-4),
                Some(_) => Case::new(&name, false).detail(format!("status {:?}", r.status)),
                None => Case::new(&name, r.is_divergent()).detail(format!("status {:?}", r.status)),
            }])
        });
    }
    for (u, want) in [("log", 1.0), ("green:0.3+0i", 1.0)] {
        let name = format!("mass of Λu for {u}");
        guard(&mut cases, &name, || {
            let m = spec(u).mass()?.finite().unwrap_or(f64::INFINITY);
            Ok(vec![Case::close(&name, m, want, 1e-10)])
        });
    }
    guard(&mut cases, "sandwich m = 0.75", || {
        let r = sandwich_check(0.75, 4, 8)?;
        let worst = r
            .phi_le_gphi
            .max(r.gphi_le_gsigma)
            .max(r.phi_le_vm)
            .max(r.vm_le_um);
        Ok(vec![Case {
            value: Some(worst),
            ..Case::new("sandwich m = 0.75: φ ≤ Gφ ≤ Gσ, φ ≤ v ≤ u", worst <= 1e-8)
        }])
    });
    cases
}

fn beurling() -> Vec<Case> {
    let mut cases = Vec::new();
    guard(&mut cases, "log", || {
        let c = u_inner(&ExhaustionSpec::log(), &UInnerOptions::default())?;
        Ok(vec![Case::residual("log: defect", c.defect, 1e-12)])
    });
    guard(&mut cases, "um:0.75", || {
        let u = spec("um:0.75");
        let cand = u_inner(&u, &UInnerOptions::default())?;
        let tests: Vec<AnalyticExpr> = (0..3).map(AnalyticExpr::monomial).collect();
        let r = beurling_isometry_check(&cand, &u, &tests, &NormOptions::without_bulk())?;
        let mut out = vec![
            Case::residual("um:0.75: sup ||φ*|²V − 1|", cand.defect, 1e-3),
            Case::close("um:0.75: mean of |φ*|²V", r.fourier_zero, 1.0, 1e-3),
            Case::residual(
                "um:0.75: largest other Fourier mode",
                r.fourier_max_other,
                1e-3,
            ),
        ];
        for e in &r.entries {
            out.push(Case {
                value: e.report.value(),
                expected: Some(e.classical),
                ..Case::residual(format!("um:0.75: ‖φ·{}‖²", e.g), e.gap, ROUTE_AGREEMENT)
            });
        }
        Ok(out)
    });
    cases
}

fn radial() -> Vec<Case> {
    let mut cases = Vec::new();
    for u in ["log", "radial-density:2,1"] {
        guard(&mut cases, u, || {
            let w = BoundaryWeight::compute(&spec(u), 1024)?;
            let mut out = vec![Case::residual(
                format!("{u}: stddev/mean of V"),
                w.relative_spread(),
                1e-6,
            )];
            if let Some(g) = w.fubini_gap() {
                out.push(Case::residual(format!("{u}: ∫ V dν vs Λu(𝔻)"), g, 1e-6));
            }
            Ok(out)
        });
    }
    guard(&mut cases, "log: V ≡ 1", || {
        let w = BoundaryWeight::compute(&ExhaustionSpec::log(), 1024)?;
        let worst = w
            .profile
            .samples
            .iter()
            .map(|v| (v - 1.0).abs())
            .fold(0.0, f64::max);
        Ok(vec![Case::residual("log: max |V − 1|", worst, 1e-6)])
    });
    for k in 0..4u32 {
        let name = format!("log: ‖z^{k}‖² = 1");
        guard(&mut cases, &name, || {
            let r = hardy_norm(
                &AnalyticExpr::monomial(k),
                2.0,
                &ExhaustionSpec::log(),
                &NormOptions::default(),
            )?;
            let mut out = Vec::new();
            for (route, v) in [
                ("level", r.route_level_sup.finite()),
                ("bulk", r.route_bulk.finite()),
                ("boundary", r.route_boundary.finite()),
                ("classical", r.classical.finite()),
            ] {
                out.push(match v {
                    Some(v) => Case::close(format!("{name} ({route})"), v, 1.0, 1e-6),
                    None => {
                        Case::new(format!("{name} ({route})"), false).detail("route not finite")
                    }
                });
            }
            Ok(out)
        });
    }
    cases
}

fn comparisons() -> Vec<Case> {
    let mut cases = Vec::new();
    let bulk_only = NormOptions {
        level: false,
        boundary: false,
        ..NormOptions::default()
    };
    for u in ["green:0.3+0i", "radial-density:2,1"] {
        let name = format!("scaling ‖φ‖_(2u) = 2‖φ‖_u, u = {u}");
        guard(&mut cases, &name, || {
            let base = spec(u);
            let f = expr("1-z");
            let a = hardy_norm(&f, 2.0, &base, &bulk_only)?.route_bulk.finite();
            let b = hardy_norm(&f, 2.0, &ExhaustionSpec::scaled(2.0, base)?, &bulk_only)?
                .route_bulk
                .finite();
            Ok(vec![match (a, b) {
                (Some(a), Some(b)) => Case::close(&name, b, 2.0 * a, 4.0 * f64::EPSILON),
                _ => Case::new(&name, false).detail("bulk route not finite"),
            }])
        });
    }
    let battery: Vec<(AnalyticExpr, f64)> = ["1", "1-z", "2-z", "1+z*z"]
        .iter()
        .map(|s| (expr(s), 2.0))
        .collect();
    guard(&mut cases, "point bound", || {
        let g0 = ExhaustionSpec::green(Complex64::new(0.0, 0.0))?;
        let r = point_bound_check(
            &g0,
            Complex64::new(0.0, 0.0),
            0.2,
            &battery,
            &NormOptions::default(),
        )?;
        Ok(r.entries
            .iter()
            .map(|e| Case {
                value: Some(e.value_at_w),
                expected: Some(e.bound),
                ..Case::new(
                    format!("φ(0) ≤ (s/2π)‖φ‖ for {}", e.function),
                    e.holds && r.status == ComparisonStatus::Pass,
                )
            })
            .collect())
    });
    guard(&mut cases, "ordering", || {
        let r = comparison_checks(
            &ExhaustionSpec::log(),
            &spec("green:0.3+0i"),
            2.0,
            0.6,
            &battery,
            &NormOptions::default(),
        )?;
        let mut out = vec![Case {
            value: Some(r.hypothesis_margin),
            ..Case::new(
                "hypothesis 2·g(·,0.3) ≤ log|z| on 0.6 ≤ |z|",
                r.hypothesis_margin >= 0.0,
            )
        }];
        out.extend(r.entries.iter().map(|e| Case {
            value: e.norm_u,
            expected: e.bound,
            ..Case::new(format!("‖φ‖_log ≤ 2‖φ‖_g for {}", e.function), e.holds)
        }));
        Ok(out)
    });
    guard(&mut cases, "green domination", || {
        let fit: Vec<(AnalyticExpr, f64)> = ["1", "z"].iter().map(|s| (expr(s), 2.0)).collect();
        let held: Vec<(AnalyticExpr, f64)> = ["1-z", "z*z", "2+z"]
            .iter()
            .map(|s| (expr(s), 2.0))
            .collect();
        let r = green_domination(
            &spec("radial-density:2,1"),
            Complex64::new(0.2, 0.1),
            &fit,
            &held,
            &NormOptions::default(),
        )?;
        Ok(r.entries
            .iter()
            .map(|e| Case {
                value: e.norm_v,
                expected: e.bound,
                ..Case::new(
                    format!("‖φ‖_g ≤ c‖φ‖_u (c = {:.6}) for {}", r.c, e.function),
                    e.holds,
                )
            })
            .collect())
    });
    cases
}

/// `(exhaustion, f, p, expected)` for the `u_m` membership matrix.
pub fn membership_matrix() -> Vec<(&'static str, String, f64, Verdict)> {
    let mut rows = Vec::new();
    for p in [1.0, 2.0] {
        rows.push((
            "um:0.5",
            format!("pow(0.5*(1-z),{})", 2.0 / p),
            p,
            Verdict::Member,
        ));
        rows.push(("um:0.5", "1".to_string(), p, Verdict::NotMember));
        rows.push((
            "um:0.75",
            format!("pow(1-z,{})", 1.0 / p),
            p,
            Verdict::Member,
        ));
        rows.push((
            "um:0.75",
            format!("pow(1-z,{})", -0.6 / p),
            p,
            Verdict::NotMember,
        ));
    }
    rows
}

fn examples() -> Vec<Case> {
    let mut cases = Vec::new();
    for (u, f, p, want) in membership_matrix() {
        let name = format!("{f} under {u}, p = {p}");
        guard(&mut cases, &name, || {
            let e = membership_verdict(&expr(&f), p, &spec(u), &NormOptions::default())?;
            Ok(vec![Case {
                value: e.report.value(),
                ..Case::new(&name, e.verdict == want)
                    .detail(format!("verdict {:?}, expected {:?}", e.verdict, want))
            }])
        });
    }
    guard(&mut cases, "polynomial approximation", || {
        let r = polynomial_approximation(
            &expr("pow(1-z,0.5)"),
            2.0,
            &spec("um:0.75"),
            &[4, 16, 64],
            &NormOptions::default(),
        )?;
        let mut out: Vec<Case> = r
            .entries
            .iter()
            .map(|e| Case {
                value: Some(e.residual),
                ..Case::new(
                    format!(
                        "Fejér mean of degree {} for {} under {}",
                        e.degree, r.function, r.exhaustion
                    ),
                    e.status == psh_core::geometry::Status::Converged,
                )
                .detail("relative H^2_u residual, empirical")
            })
            .collect();
        out.push(Case::new(
            "approximation residuals decrease with the degree",
            r.decreasing,
        ));
        Ok(out)
    });
    cases
}
