use std::path::Path;

use serde_json::Value;

use crate::error::{HarnessError, Result};
use crate::run::ExperimentReport;

pub fn load_report(path: &Path) -> Result<ExperimentReport> {
    let text = std::fs::read_to_string(path).map_err(|source| HarnessError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| HarnessError::Parse {
        path: path.to_path_buf(),
        source,
    })
}

/// Whether two reports carry byte-identical results. Configs must agree on
/// everything except seed, output path, format and worker count; otherwise
/// the comparison is meaningless and an error is returned.
pub fn replay_check(a: &ExperimentReport, b: &ExperimentReport) -> Result<bool> {
    let ca = serde_json::to_value(a.config.comparable())?;
    let cb = serde_json::to_value(b.config.comparable())?;
    if ca != cb {
        let differing: Vec<String> = match (&ca, &cb) {
            (Value::Object(ma), Value::Object(mb)) => ma
                .iter()
                .filter(|(k, v)| mb.get(*k) != Some(*v))
                .map(|(k, _)| k.clone())
                .collect(),
            _ => vec!["config".to_string()],
        };
        return Err(HarnessError::ConfigMismatch(differing.join(", ")));
    }
    Ok(serde_json::to_string(&a.results)? == serde_json::to_string(&b.results)?)
}
