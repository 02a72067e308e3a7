//! Rendered command outputs.

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Artifact {
    pub name: String,
    pub content: String,
}

/// Files produced by one command plus a short summary line.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Artifacts {
    pub files: Vec<Artifact>,
    pub summary: String,
}

impl Artifacts {
    pub fn new(summary: impl Into<String>) -> Self {
        Artifacts {
            files: Vec::new(),
            summary: summary.into(),
        }
    }

    pub fn with(mut self, name: &str, content: String) -> Self {
        self.files.push(Artifact {
            name: name.to_string(),
            content,
        });
        self
    }

    pub fn file(&self, name: &str) -> Option<&str> {
        self.files
            .iter()
            .find(|a| a.name == name)
            .map(|a| a.content.as_str())
    }

    /// Without `out`, the first file goes to stdout and the summary to
    /// stderr; with `out`, every file is written there and the summary goes
    /// to stdout.
    pub fn emit(&self, out: Option<&Path>) -> std::io::Result<()> {
        match out {
            Some(dir) => {
                std::fs::create_dir_all(dir)?;
                for a in &self.files {
                    std::fs::write(dir.join(&a.name), &a.content)?;
                }
                println!("{}", self.summary);
            }
            None => {
                if let Some(a) = self.files.first() {
                    std::io::stdout().write_all(a.content.as_bytes())?;
                }
                eprintln!("{}", self.summary);
            }
        }
        Ok(())
    }
}

/// Adds `paper_refs` to a JSON object.
pub fn with_refs(mut v: Value, refs: &[&str]) -> Value {
    if let Value::Object(m) = &mut v {
        m.insert(
            "paper_refs".into(),
            Value::from(refs.iter().map(|s| s.to_string()).collect::<Vec<_>>()),
        );
    }
    v
}

/// Pretty JSON with a trailing newline.
pub fn render_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).unwrap_or_else(|_| "{}".into());
    s.push('\n');
    s
}

/// `INFINITE` for unbounded scalars, otherwise the number.
pub fn scalar(v: Option<f64>) -> Value {
    match v {
        Some(x) if x.is_finite() => Value::from(x),
        _ => Value::from("INFINITE"),
    }
}
