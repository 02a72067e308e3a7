//! Front end for `psh-core`: configuration, cached commands and verification
//! suites behind the `psh` binary.

pub mod cache;
pub mod commands;
pub mod config;
pub mod output;
pub mod suites;

use cache::{cache_key, Cache};
use config::RunConfig;
use output::Artifacts;
use psh_core::Result;

pub const COMMANDS: [&str; 6] = ["weight", "norm", "levelset", "demailly", "factor", "uinner"];

/// Runs a computing subcommand, reading and filling the cache when given.
pub fn run_command(name: &str, cfg: &RunConfig, cache: Option<&Cache>) -> Result<Artifacts> {
    let key = cache_key(name, &cfg.canonical_params());
    if let Some(hit) = cache.and_then(|c| c.get(&key)) {
        return Ok(hit);
    }
    let out = match name {
        "weight" => commands::weight(cfg)?,
        "norm" => commands::norm(cfg)?,
        "levelset" => commands::levelset(cfg)?,
        "demailly" => commands::demailly(cfg)?,
        "factor" => commands::factor(cfg)?,
        "uinner" => commands::uinner(cfg)?,
        other => {
            return Err(psh_core::PshError::InvalidParameter(format!(
                "unknown command {other:?}"
            )))
        }
    };
    if let Some(c) = cache {
        if let Err(e) = c.put(&key, &out) {
            eprintln!("warning: cache write to {} failed: {e}", c.dir().display());
        }
    }
    Ok(out)
}
