//! Bundled configurations, one per reproduced figure.

use serde_json::Value;

use crate::error::{CliError, CliResult};

pub const PRESETS: &[(&str, &str)] = &[
    ("fig2", include_str!("../presets/fig2.json")),
    ("fig3", include_str!("../presets/fig3.json")),
    ("fig3-near", include_str!("../presets/fig3-near.json")),
    ("fig3-thin", include_str!("../presets/fig3-thin.json")),
    ("fig4", include_str!("../presets/fig4.json")),
    ("fig5", include_str!("../presets/fig5.json")),
    ("fig5-dephasing", include_str!("../presets/fig5-dephasing.json")),
    ("fig6", include_str!("../presets/fig6.json")),
    ("fig7", include_str!("../presets/fig7.json")),
    ("resonance", include_str!("../presets/resonance.json")),
];

pub fn preset(name: &str) -> CliResult<Value> {
    let (_, text) = PRESETS.iter().find(|(n, _)| *n == name).ok_or_else(|| {
        let names: Vec<&str> = PRESETS.iter().map(|(n, _)| *n).collect();
        CliError::config("preset", format!("unknown preset '{name}'; available: {}", names.join(", ")))
    })?;
    Ok(serde_json::from_str(text)?)
}

/// `(name, description)` of every preset.
pub fn descriptions() -> Vec<(&'static str, String)> {
    PRESETS
        .iter()
        .map(|(n, text)| {
            let v: Value = serde_json::from_str(text).unwrap_or(Value::Null);
            (*n, v["description"].as_str().unwrap_or_default().to_string())
        })
        .collect()
}
