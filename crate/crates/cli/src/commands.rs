//! One function per subcommand, each returning rendered artifacts.

use psh_core::exhaustion::{DemaillyMeasure, LevelSet, DEFAULT_RESOLUTION};
use psh_core::factorization::{divide_by_blaschke, u_inner, UInnerOptions};
use psh_core::geometry::Tolerance;
use psh_core::hardy::{hardy_norm, BoundaryWeight, NormOptions, Normalization};
use psh_core::potential::Mass;
use psh_core::Result;
use serde_json::{json, Value};

use crate::config::RunConfig;
use crate::output::{render_json, scalar, with_refs, Artifacts};

pub const WEIGHT_REFS: [&str; 2] = [
    "boundary weight V(ζ) = ∫ P(z,ζ) dΛu(z)",
    "Fubini identity ∫ V dν = Λu(𝔻)",
];
pub const NORM_REFS: [&str; 3] = [
    "level-set norm ‖f‖^p = sup_c ∫ |f|^p dμ_{c,u}",
    "least harmonic majorant ‖f‖^p = ∫ |f|^p dΛu − ∫ u Λ|f|^p",
    "boundary characterization ‖f‖^p = ∫ |f*|^p V dν",
];
pub const LEVELSET_REFS: [&str; 1] = ["level set S_{c,u} = {u = c}"];
pub const DEMAILLY_REFS: [&str; 2] = [
    "Demailly measure μ_{c,u} = Λu_c − χ_{𝔻∖B_{c,u}} Λu",
    "absolute continuity μ_{c,u} = U_c ν_c with U_c = |∇u|/2π",
];
pub const FACTOR_REFS: [&str; 2] = [
    "factorization f = B h^{2/p} with h zero-free",
    "isometry ‖f‖_{p,u} = ‖h^{2/p}‖_{p,u}",
];
pub const UINNER_REFS: [&str; 2] = [
    "u-inner condition |φ*|² V = 1 a.e.",
    "Beurling-type description Y = φH²",
];

pub fn norm_name(n: Normalization) -> &'static str {
    match n {
        Normalization::Normalized => "normalized",
        Normalization::Paper2pi => "paper-2pi",
    }
}

fn mass_value(m: Mass, n: Normalization) -> Value {
    scalar(n.scale_mass(m).finite())
}

pub fn norm_options(cfg: &RunConfig) -> NormOptions {
    let mut o = NormOptions::default();
    if let Some(t) = cfg.tol {
        o.tol = Tolerance {
            rel: t,
            abs: o.tol.abs.min(t),
            ..o.tol
        };
    }
    if let Some(s) = cfg.samples {
        o.resolution = s;
    }
    o
}

pub fn weight(cfg: &RunConfig) -> Result<Artifacts> {
    let n = cfg.samples.unwrap_or(1024);
    let w = BoundaryWeight::compute(&cfg.exhaustion, n)?;
    let mut csv = Vec::new();
    w.write_csv(&mut csv, cfg.normalization)?;
    let f = cfg.normalization.factor();
    let summary = with_refs(
        json!({
            "exhaustion": cfg.exhaustion.canonical(),
            "samples": n,
            "normalization": norm_name(cfg.normalization),
            "mass": mass_value(w.mass_of_laplacian, cfg.normalization),
            "weightMean": scalar((!w.mean.is_divergent()).then_some(w.mean.value * f)),
            "weightMeanStatus": w.mean.status,
            "logIntegrable": w.log_integrable,
            "fubiniGap": w.fubini_gap(),
            "relativeSpread": w.relative_spread(),
            "divergentPoints": w.divergent_points,
        }),
        &WEIGHT_REFS,
    );
    Ok(Artifacts::new(render_json(&summary).trim_end())
        .with("weight.csv", String::from_utf8_lossy(&csv).into_owned())
        .with("weight.json", render_json(&summary)))
}

pub fn norm(cfg: &RunConfig) -> Result<Artifacts> {
    let r = hardy_norm(&cfg.function, cfg.p, &cfg.exhaustion, &norm_options(cfg))?
        .in_normalization(cfg.normalization);
    let v = with_refs(serde_json::to_value(&r)?, &NORM_REFS);
    let summary = format!(
        "{} in H^{}_u for u = {}: {:?}, norm {}",
        cfg.function.canonical(),
        cfg.p,
        cfg.exhaustion.canonical(),
        r.verdict,
        r.norm
            .map(|x| x.to_string())
            .unwrap_or_else(|| "INFINITE".into())
    );
    Ok(Artifacts::new(summary).with("norm.json", render_json(&v)))
}

pub fn levelset(cfg: &RunConfig) -> Result<Artifacts> {
    let res = cfg.samples.unwrap_or(DEFAULT_RESOLUTION);
    let level = LevelSet::trace(&cfg.exhaustion, cfg.c, res)?;
    let mut csv = Vec::new();
    level.write_csv(&mut csv)?;
    let summary = with_refs(
        json!({
            "exhaustion": cfg.exhaustion.canonical(),
            "c": cfg.c,
            "points": level.len(),
            "arclength": level.arclength(),
            "maxResidual": level.max_residual(),
        }),
        &LEVELSET_REFS,
    );
    Ok(Artifacts::new(render_json(&summary).trim_end())
        .with("levelset.csv", String::from_utf8_lossy(&csv).into_owned())
        .with("levelset.json", render_json(&summary)))
}

pub fn demailly(cfg: &RunConfig) -> Result<Artifacts> {
    let res = cfg.samples.unwrap_or(DEFAULT_RESOLUTION);
    let tol = Tolerance::new(1e-10, cfg.tol.unwrap_or(1e-8));
    let mu = DemaillyMeasure::compute(&cfg.exhaustion, cfg.c, res, &tol)?;
    let f = cfg.normalization.factor();
    let mut v = serde_json::to_value(&mu)?;
    if let Value::Object(m) = &mut v {
        m.insert("totalMass".into(), Value::from(mu.total_mass * f));
        m.insert("UcMass".into(), Value::from(mu.uc_mass * f));
        m.insert(
            "Uc".into(),
            Value::from(mu.uc.iter().map(|x| x * f).collect::<Vec<_>>()),
        );
        m.insert(
            "atoms".into(),
            Value::from(
                mu.atoms
                    .iter()
                    .map(|a| vec![a[0], a[1], a[2] * f])
                    .collect::<Vec<_>>(),
            ),
        );
        m.insert("massBalance".into(), Value::from(mu.mass_balance()));
        m.insert("exhaustion".into(), Value::from(cfg.exhaustion.canonical()));
        m.insert(
            "normalization".into(),
            Value::from(norm_name(cfg.normalization)),
        );
    }
    let v = with_refs(v, &DEMAILLY_REFS);
    let summary = format!(
        "μ_(c,u) for u = {} at c = {}: total mass {}, ∫U_c dν_c = {}",
        cfg.exhaustion.canonical(),
        cfg.c,
        mu.total_mass * f,
        mu.uc_mass * f
    );
    Ok(Artifacts::new(summary).with("demailly.json", render_json(&v)))
}

pub fn factor(cfg: &RunConfig) -> Result<Artifacts> {
    let (_, _, mut rep) =
        divide_by_blaschke(&cfg.function, cfg.p, &cfg.exhaustion, &norm_options(cfg))?;
    rep.isometry.left = rep.isometry.left.in_normalization(cfg.normalization);
    rep.isometry.right = rep.isometry.right.in_normalization(cfg.normalization);
    let mut v = serde_json::to_value(&rep)?;
    if let Value::Object(m) = &mut v {
        m.insert("exhaustion".into(), Value::from(cfg.exhaustion.canonical()));
        m.insert(
            "normalization".into(),
            Value::from(norm_name(cfg.normalization)),
        );
    }
    let v = with_refs(v, &FACTOR_REFS);
    let summary = format!(
        "{} = B·h^(2/p) with B = {}, isometry residual {:.3e} ({})",
        rep.function,
        rep.blaschke,
        rep.isometry.residual,
        if rep.isometry.passes { "pass" } else { "fail" }
    );
    Ok(Artifacts::new(summary).with("factor.json", render_json(&v)))
}

pub fn uinner(cfg: &RunConfig) -> Result<Artifacts> {
    let mut opts = UInnerOptions::default();
    if let Some(s) = cfg.samples {
        opts.samples = s;
        opts.fft_len = opts.fft_len.max(s.next_power_of_two());
    }
    let cand = u_inner(&cfg.exhaustion, &opts)?;
    let mut csv = Vec::new();
    cand.write_csv(&mut csv)?;
    let (c0, other) = cand.fourier_flatness();
    let summary = with_refs(
        json!({
            "exhaustion": cfg.exhaustion.canonical(),
            "phi": cand.phi.canonical(),
            "singularFactors": cand.singular_factors.iter().map(|(t, a)| json!({"theta": t, "alpha": a})).collect::<Vec<_>>(),
            "fftLength": opts.fft_len,
            "samples": opts.samples,
            "excludedArc": cand.excluded_arc,
            "defect": cand.defect,
            "fourierZero": c0,
            "fourierMaxOther": other,
        }),
        &UINNER_REFS,
    );
    Ok(Artifacts::new(render_json(&summary).trim_end())
        .with("uinner.csv", String::from_utf8_lossy(&csv).into_owned())
        .with("uinner.json", render_json(&summary)))
}
