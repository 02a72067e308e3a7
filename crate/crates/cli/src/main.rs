use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use psh_cli::cache::Cache;
use psh_cli::config::{Overrides, RunConfig};
use psh_cli::output::{render_json, Artifacts};
use psh_cli::suites::{run_suite, SUITES};

#[derive(Parser)]
#[command(
    name = "psh",
    version,
    about = "Hardy spaces of subharmonic exhaustions on the unit disk"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Subcommand)]
enum Command {
    /// Sample the boundary weight V (CSV theta,V).
    Weight,
    /// Three-route H^p_u norm and membership verdict (JSON).
    Norm,
    /// Run a verification suite; exit code 0 iff every case passes.
    Verify,
    /// Trace the level set {u = c} (CSV x,y,u_value).
    Levelset,
    /// Demailly measure on {u = c} (JSON).
    Demailly,
    /// Blaschke division f = B h^(2/p) with the isometry check (JSON).
    Factor,
    /// u-inner function and its boundary defect (CSV theta,re_phi,im_phi,phi2V).
    Uinner,
}

#[derive(Clone, Copy, ValueEnum)]
enum NormalizationArg {
    Normalized,
    #[value(name = "paper-2pi")]
    Paper2pi,
}

#[derive(Args)]
struct Flags {
    /// Exhaustion spec: log, um:M, vm:M, green:W[*MASS];..., radial-density:A,K, scaled:A:SPEC
    #[arg(long, global = true)]
    exhaustion: Option<String>,
    /// Analytic function: complex literals, z, + - * /, pow(expr, real), blaschke([a1, ...])
    #[arg(long, global = true)]
    f: Option<String>,
    #[arg(long, global = true)]
    p: Option<f64>,
    /// Level value c < 0.
    #[arg(long, global = true, allow_negative_numbers = true)]
    c: Option<f64>,
    /// Sample count or curve resolution.
    #[arg(long, global = true)]
    samples: Option<usize>,
    /// Relative quadrature tolerance.
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, global = true, value_enum)]
    normalization: Option<NormalizationArg>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Suite for `verify`, or `all`.
    #[arg(long, global = true)]
    suite: Option<String>,
}

impl Flags {
    fn overrides(&self) -> Overrides {
        let mut o = Overrides::default();
        o.set("exhaustion", self.exhaustion.clone());
        o.set("f", self.f.clone());
        o.set("p", self.p.map(|v| v.to_string()));
        o.set("c", self.c.map(|v| v.to_string()));
        o.set("samples", self.samples.map(|v| v.to_string()));
        o.set("tol", self.tol.map(|v| v.to_string()));
        o.set(
            "normalization",
            self.normalization.map(|n| {
                match n {
                    NormalizationArg::Normalized => "normalized",
                    NormalizationArg::Paper2pi => "paper-2pi",
                }
                .to_string()
            }),
        );
        o.set("out", self.out.as_ref().map(|p| p.display().to_string()));
        o.set("suite", self.suite.clone());
        o
    }
}

fn verify(cfg: &RunConfig) -> Result<bool, psh_core::PshError> {
    let names: Vec<&str> = match cfg.suite.as_deref() {
        None | Some("all") => SUITES.to_vec(),
        Some(s) => vec![s],
    };
    let mut reports = Vec::new();
    for n in names {
        reports.push(run_suite(n)?);
    }
    let passed = reports.iter().all(|r| r.passed);
    let mut art = Artifacts::new(
        reports
            .iter()
            .map(|r| {
                let failed = r.cases.iter().filter(|c| !c.passed).count();
                format!(
                    "{}: {} ({} cases, {failed} failed)",
                    r.suite,
                    if r.passed { "PASS" } else { "FAIL" },
                    r.cases.len()
                )
            })
            .collect::<Vec<_>>()
            .join("\n"),
    );
    let body = if reports.len() == 1 {
        serde_json::to_value(&reports[0])?
    } else {
        serde_json::json!({ "passed": passed, "suites": reports, "paper_refs": reports.iter().flat_map(|r| r.paper_refs.clone()).collect::<Vec<_>>() })
    };
    art = art.with("verify.json", render_json(&body));
    art.emit(cfg.out.as_deref())?;
    Ok(passed)
}

fn run(cli: Cli) -> Result<ExitCode, psh_core::PshError> {
    let overrides = cli.flags.overrides().over(Overrides::discover()?);
    let cfg = RunConfig::from_overrides(&overrides)?;
    let name = match cli.command {
        Command::Verify => {
            return Ok(if verify(&cfg)? {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            });
        }
        Command::Weight => "weight",
        Command::Norm => "norm",
        Command::Levelset => "levelset",
        Command::Demailly => "demailly",
        Command::Factor => "factor",
        Command::Uinner => "uinner",
    };
    let cache = Cache::from_env();
    let art = psh_cli::run_command(name, &cfg, cache.as_ref())?;
    art.emit(cfg.out.as_deref())?;
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
