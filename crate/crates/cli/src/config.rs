//! Run configuration: flags over a flat `key=value` file over defaults.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use psh_core::exhaustion::ExhaustionSpec;
use psh_core::factorization::AnalyticExpr;
use psh_core::hardy::Normalization;
use psh_core::PshError;

/// Environment variable naming the config file.
pub const CONFIG_ENV: &str = "PSH_CONFIG";
/// Config file picked up from the working directory when present.
pub const DEFAULT_CONFIG_FILE: &str = "psh.conf";

pub const KEYS: [&str; 9] = [
    "exhaustion",
    "f",
    "p",
    "c",
    "samples",
    "tol",
    "normalization",
    "out",
    "suite",
];

/// Raw settings as strings, one per flag.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Overrides {
    pub values: BTreeMap<String, String>,
}

impl Overrides {
    pub fn set(&mut self, key: &str, value: Option<String>) {
        if let Some(v) = value {
            self.values.insert(key.to_string(), v);
        }
    }

    /// Parses `key=value` lines; `#` starts a comment.
    pub fn parse_file(text: &str) -> Result<Self, PshError> {
        let mut out = Overrides::default();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| PshError::Parse {
                pos: n + 1,
                msg: format!("expected key=value, got {line:?}"),
            })?;
            let k = k.trim();
            if !KEYS.contains(&k) {
                return Err(PshError::Parse {
                    pos: n + 1,
                    msg: format!("unknown key {k:?}"),
                });
            }
            out.values.insert(k.to_string(), v.trim().to_string());
        }
        Ok(out)
    }

    pub fn load(path: &Path) -> Result<Self, PshError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| PshError::Io(format!("{}: {e}", path.display())))?;
        Self::parse_file(&text)
    }

    /// Config file from `PSH_CONFIG`, else `./psh.conf`, else empty.
    pub fn discover() -> Result<Self, PshError> {
        if let Some(p) = std::env::var_os(CONFIG_ENV) {
            return Self::load(Path::new(&p));
        }
        let p = Path::new(DEFAULT_CONFIG_FILE);
        if p.is_file() {
            Self::load(p)
        } else {
            Ok(Self::default())
        }
    }

    /// `self` wins over `lower`.
    pub fn over(mut self, lower: Overrides) -> Self {
        for (k, v) in lower.values {
            self.values.entry(k).or_insert(v);
        }
        self
    }
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub exhaustion: ExhaustionSpec,
    pub function: AnalyticExpr,
    pub p: f64,
    pub c: f64,
    pub samples: Option<usize>,
    pub tol: Option<f64>,
    pub normalization: Normalization,
    pub out: Option<PathBuf>,
    pub suite: Option<String>,
}

fn number<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, PshError> {
    v.parse()
        .map_err(|_| PshError::InvalidParameter(format!("--{key}: cannot parse {v:?}")))
}

impl RunConfig {
    pub fn from_overrides(o: &Overrides) -> Result<Self, PshError> {
        let get = |k: &str| o.values.get(k).map(String::as_str);
        let p: f64 = get("p").map(|v| number("p", v)).transpose()?.unwrap_or(2.0);
        if !(p > 0.0 && p.is_finite()) {
            return Err(PshError::InvalidParameter(format!(
                "--p must be positive, got {p}"
            )));
        }
        let c: f64 = get("c")
            .map(|v| number("c", v))
            .transpose()?
            .unwrap_or(-0.5);
        let samples = get("samples")
            .map(|v| number::<usize>("samples", v))
            .transpose()?;
        let tol = get("tol").map(|v| number::<f64>("tol", v)).transpose()?;
        if let Some(t) = tol {
            if !(t > 0.0 && t < 1.0) {
                return Err(PshError::InvalidParameter(format!(
                    "--tol must lie in (0, 1), got {t}"
                )));
            }
        }
        Ok(RunConfig {
            exhaustion: ExhaustionSpec::parse(get("exhaustion").unwrap_or("log"))?,
            function: AnalyticExpr::parse(get("f").unwrap_or("1"))?,
            p,
            c,
            samples,
            tol,
            normalization: Normalization::parse(get("normalization").unwrap_or("normalized"))?,
            out: get("out").map(PathBuf::from),
            suite: get("suite").map(str::to_string),
        })
    }

    /// Canonical `key=value` lines of everything that affects results.
    pub fn canonical_params(&self) -> String {
        let norm = match self.normalization {
            Normalization::Normalized => "normalized",
            Normalization::Paper2pi => "paper-2pi",
        };
        format!(
            "exhaustion={}\nf={}\np={}\nc={}\nsamples={}\ntol={}\nnormalization={norm}\n",
            self.exhaustion.canonical(),
            self.function.canonical(),
            self.p,
            self.c,
            self.samples.map(|s| s.to_string()).unwrap_or_default(),
            self.tol.map(|t| t.to_string()).unwrap_or_default(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_format() {
        let o = Overrides::parse_file("# demo\nexhaustion = um:0.75\np=1 # inline\n\n").unwrap();
        assert_eq!(o.values["exhaustion"], "um:0.75");
        assert_eq!(o.values["p"], "1");
        let e = Overrides::parse_file("p=1\nbogus=2").unwrap_err();
        assert!(matches!(e, PshError::Parse { pos: 2, .. }));
    }

    #[test]
    fn flags_win() {
        let mut flags = Overrides::default();
        flags.set("p", Some("3".into()));
        let file = Overrides::parse_file("p=1\nc=-0.25").unwrap();
        let cfg = RunConfig::from_overrides(&flags.over(file)).unwrap();
        assert_eq!(cfg.p, 3.0);
        assert_eq!(cfg.c, -0.25);
        assert_eq!(cfg.exhaustion.canonical(), "log");
    }
}
