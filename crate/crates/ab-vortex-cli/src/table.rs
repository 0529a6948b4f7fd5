//! Tabular output: CSV with a '#'-prefixed metadata header, or a single
//! JSON object with "metadata", "columns", and "rows" keys.
//!
//! Formatting is fixed (17 significant digits, scientific notation, '.'
//! separator, Unix line endings) so identical configs produce byte-identical
//! files. Non-finite row values become "NaN" in CSV and null in JSON.

use crate::config::{fmt_float, RunConfig, TOOL_NAME, TOOL_VERSION};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ColumnSpec {
    pub name: &'static str,
    pub unit: &'static str,
}

#[derive(Debug, Clone)]
pub struct ResultTable {
    pub config: RunConfig,
    pub columns: Vec<ColumnSpec>,
    pub rows: Vec<Vec<f64>>,
    /// Extra '#' metadata lines, e.g. status-code legends.
    pub annotations: Vec<String>,
}

impl ResultTable {
    pub fn new(config: RunConfig, columns: Vec<ColumnSpec>) -> Self {
        Self {
            config,
            columns,
            rows: Vec::new(),
            annotations: Vec::new(),
        }
    }

    pub fn push_row(&mut self, row: Vec<f64>) {
        assert_eq!(row.len(), self.columns.len(), "row arity mismatch");
        self.rows.push(row);
    }

    fn cell(x: f64) -> String {
        if x.is_finite() {
            fmt_float(x)
        } else if x.is_nan() {
            "NaN".to_string()
        } else if x > 0.0 {
            "inf".to_string()
        } else {
            "-inf".to_string()
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("# {TOOL_NAME} {TOOL_VERSION}\n"));
        for (key, value) in self.config.metadata_pairs() {
            out.push_str(&format!("# {key}: {value}\n"));
        }
        for note in &self.annotations {
            out.push_str(&format!("# {note}\n"));
        }
        let schema: Vec<String> = self
            .columns
            .iter()
            .map(|c| format!("{}[{}]", c.name, c.unit))
            .collect();
        out.push_str(&format!("# columns: {}\n", schema.join(",")));
        let names: Vec<&str> = self.columns.iter().map(|c| c.name).collect();
        out.push_str(&names.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|&x| Self::cell(x)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    fn json_cell(x: f64) -> String {
        if x.is_finite() {
            fmt_float(x)
        } else {
            "null".to_string()
        }
    }

    fn json_string(s: &str) -> String {
        let mut out = String::with_capacity(s.len() + 2);
        out.push('"');
        for c in s.chars() {
            match c {
                '"' => out.push_str("\\\""),
                '\\' => out.push_str("\\\\"),
                '\n' => out.push_str("\\n"),
                c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
                c => out.push(c),
            }
        }
        out.push('"');
        out
    }

    pub fn to_json(&self) -> String {
        let mut out = String::new();
        out.push_str("{\n  \"metadata\": {\n");
        out.push_str(&format!(
            "    \"tool\": {},\n    \"version\": {},\n",
            Self::json_string(TOOL_NAME),
            Self::json_string(TOOL_VERSION)
        ));
        let pairs = self.config.metadata_pairs();
        for (i, (key, value)) in pairs.iter().enumerate() {
            let comma = if i + 1 == pairs.len() { "" } else { "," };
            out.push_str(&format!(
                "    {}: {}{comma}\n",
                Self::json_string(key),
                Self::json_string(value)
            ));
        }
        out.push_str("  },\n  \"columns\": [\n");
        for (i, col) in self.columns.iter().enumerate() {
            let comma = if i + 1 == self.columns.len() { "" } else { "," };
            out.push_str(&format!(
                "    {{\"name\": {}, \"unit\": {}}}{comma}\n",
                Self::json_string(col.name),
                Self::json_string(col.unit)
            ));
        }
        out.push_str("  ],\n  \"rows\": [\n");
        for (i, row) in self.rows.iter().enumerate() {
            let comma = if i + 1 == self.rows.len() { "" } else { "," };
            let cells: Vec<String> = row.iter().map(|&x| Self::json_cell(x)).collect();
            out.push_str(&format!("    [{}]{comma}\n", cells.join(", ")));
        }
        out.push_str("  ]\n}\n");
        out
    }

    pub fn render(&self) -> String {
        match self.config.format {
            crate::config::OutputFormat::Csv => self.to_csv(),
            crate::config::OutputFormat::Json => self.to_json(),
        }
    }
}

/// Recover the run configuration from an emitted CSV file.
pub fn parse_csv_metadata(text: &str) -> Result<RunConfig, String> {
    let mut pairs = Vec::new();
    for line in text.lines() {
        let Some(rest) = line.strip_prefix("# ") else {
            continue;
        };
        if let Some((key, value)) = rest.split_once(": ") {
            pairs.push((key.to_string(), value.to_string()));
        }
    }
    RunConfig::from_metadata_pairs(&pairs)
}

/// Recover the run configuration from an emitted JSON file.
pub fn parse_json_metadata(text: &str) -> Result<RunConfig, String> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| format!("invalid JSON: {e}"))?;
    let metadata = value
        .get("metadata")
        .and_then(|m| m.as_object())
        .ok_or("missing metadata object")?;
    let pairs: Vec<(String, String)> = metadata
        .iter()
        .filter(|(k, _)| k.as_str() != "tool" && k.as_str() != "version")
        .map(|(k, v)| {
            (
                k.clone(),
                v.as_str().map(str::to_string).unwrap_or_else(|| v.to_string()),
            )
        })
        .collect();
    RunConfig::from_metadata_pairs(&pairs)
}
