//! Rendering of command results with the run configuration embedded.
//!
//! CSV output starts with `#! key=value` lines, JSON output carries a
//! `config` object of the same strings; both are accepted back by
//! [`RunConfig::from_text`].

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::config::{OutputFormat, RunConfig};
use crate::error::{Error, Result};

/// Rendered output of one command.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub text: String,
}

/// CSV document: config header, then `body` (header row and data rows).
pub fn csv_document(config: &RunConfig, command: &str, body: &str) -> Document {
    let mut text = format!("#! command={command}\n");
    text.push_str(&config.csv_header());
    text.push_str(body);
    if !body.is_empty() && !body.ends_with('\n') {
        text.push('\n');
    }
    Document { text }
}

/// JSON document `{"command", "config", "report"}`.
pub fn json_document<R: Serialize>(config: &RunConfig, command: &str, report: &R) -> Result<Document> {
    #[derive(Serialize)]
    struct Envelope<'a, R> {
        command: &'a str,
        config: std::collections::BTreeMap<String, String>,
        report: &'a R,
    }
    let env = Envelope {
        command,
        config: config.to_map(),
        report,
    };
    let mut text = serde_json::to_string_pretty(&env).map_err(|e| Error::InvalidParameters(format!("JSON encoding: {e}")))?;
    text.push('\n');
    Ok(Document { text })
}

/// Renders in the configured format.
pub fn render<R: Serialize>(config: &RunConfig, command: &str, csv_body: &str, report: &R) -> Result<Document> {
    match config.format {
        OutputFormat::Csv => Ok(csv_document(config, command, csv_body)),
        OutputFormat::Json => json_document(config, command, report),
    }
}

/// Writes `text` to `path` through a temporary file in the same directory,
/// so readers never observe a partial file.
pub fn write_atomic(path: &Path, text: &str) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = dir.join(format!(".{name}.{}.tmp", std::process::id()));
    let result = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(text.as_bytes())?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trips_the_config() {
        let mut cfg = RunConfig::default();
        cfg.set("ks", "6,8").unwrap();
        let doc = csv_document(&cfg, "sweep-weight", "a,b\n1,2");
        assert!(doc.text.starts_with("#! command=sweep-weight\n#! d=5\n"));
        assert!(doc.text.ends_with("a,b\n1,2\n"));
        assert_eq!(RunConfig::from_text(&doc.text).unwrap(), cfg);
    }

    #[test]
    fn json_round_trips_the_config() {
        let mut cfg = RunConfig::default();
        cfg.set("y", "1.3,0.9").unwrap();
        cfg.set("format", "json").unwrap();
        let doc = render(&cfg, "certify", "", &vec![1, 2]).unwrap();
        assert_eq!(RunConfig::from_text(&doc.text).unwrap(), cfg);
        let v: serde_json::Value = serde_json::from_str(&doc.text).unwrap();
        assert_eq!(v["command"], "certify");
        assert_eq!(v["report"][1], 2);
    }

    #[test]
    fn atomic_write_replaces_the_file() {
        let dir = std::env::temp_dir().join(format!("hp-out-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join("out.csv");
        write_atomic(&path, "old\n").unwrap();
        write_atomic(&path, "new\n").unwrap();
        assert_eq!(fs::read_to_string(&path).unwrap(), "new\n");
        assert_eq!(fs::read_dir(&dir).unwrap().count(), 1);
        fs::remove_dir_all(&dir).unwrap();
    }
}
