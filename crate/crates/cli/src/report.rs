//! Report rendering shared by all subcommands.

use std::fmt::Write as _;

use clap::ValueEnum;
use serde_json::{json, Map, Value};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

impl Format {
    pub fn name(self) -> &'static str {
        match self {
            Format::Table => "table",
            Format::Json => "json",
            Format::Csv => "csv",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Column {
    pub name: &'static str,
    /// Numeric approximation; tables mark these cells with `≈`.
    pub approx: bool,
}

pub fn exact(name: &'static str) -> Column {
    Column { name, approx: false }
}

pub fn approx(name: &'static str) -> Column {
    Column { name, approx: true }
}

/// Everything a subcommand produces. `json` is the full machine-readable
/// result; `summary`, `columns` and `rows` drive the table and CSV views.
#[derive(Clone, Debug)]
pub struct Report {
    pub command: &'static str,
    pub config: Vec<(&'static str, Value)>,
    pub summary: Vec<(String, String)>,
    pub columns: Vec<Column>,
    pub rows: Vec<Vec<String>>,
    pub json: Value,
    /// `None` for purely informational commands.
    pub passed: Option<bool>,
    /// Emit `json` entries as separate lines instead of one document.
    pub json_lines: Option<Vec<Value>>,
}

impl Report {
    pub fn new(command: &'static str, config: Vec<(&'static str, Value)>) -> Self {
        Self {
            command,
            config,
            summary: Vec::new(),
            columns: Vec::new(),
            rows: Vec::new(),
            json: Value::Null,
            passed: None,
            json_lines: None,
        }
    }

    pub fn status(&self) -> &'static str {
        match self.passed {
            None => "ok",
            Some(true) => "pass",
            Some(false) => "fail",
        }
    }

    fn config_object(&self) -> Value {
        let mut map = Map::new();
        for (k, v) in &self.config {
            map.insert((*k).to_string(), v.clone());
        }
        Value::Object(map)
    }

    fn config_line(&self) -> String {
        let parts: Vec<String> = self
            .config
            .iter()
            .map(|(k, v)| match v {
                Value::String(s) => format!("{k}={s}"),
                Value::Array(items) => format!(
                    "{k}={}",
                    items
                        .iter()
                        .map(|i| i.as_str().map(str::to_string).unwrap_or_else(|| i.to_string()))
                        .collect::<Vec<_>>()
                        .join(",")
                ),
                other => format!("{k}={other}"),
            })
            .collect();
        parts.join(" ")
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Table => self.render_table(),
            Format::Csv => self.render_csv(),
            Format::Json => self.render_json(),
        }
    }

    fn render_table(&self) -> String {
        let mut out = String::new();
        writeln!(out, "# catalan-asym {}", self.command).unwrap();
        writeln!(out, "# config: {}", self.config_line()).unwrap();
        for (k, v) in &self.summary {
            writeln!(out, "{k}: {v}").unwrap();
        }
        if !self.columns.is_empty() {
            let cells: Vec<Vec<String>> = self
                .rows
                .iter()
                .map(|row| {
                    row.iter()
                        .zip(&self.columns)
                        .map(|(cell, col)| {
                            if col.approx {
                                format!("≈{cell}")
                            } else {
                                abbreviate(cell)
                            }
                        })
                        .collect()
                })
                .collect();
            let widths: Vec<usize> = self
                .columns
                .iter()
                .enumerate()
                .map(|(i, c)| {
                    cells
                        .iter()
                        .map(|r| r[i].chars().count())
                        .chain(std::iter::once(c.name.len()))
                        .max()
                        .unwrap_or(0)
                })
                .collect();
            let line = |items: Vec<&str>| -> String {
                items
                    .iter()
                    .zip(&widths)
                    .map(|(s, w)| format!("{s:<w$}", w = *w))
                    .collect::<Vec<_>>()
                    .join("  ")
                    .trim_end()
                    .to_string()
            };
            writeln!(out, "{}", line(self.columns.iter().map(|c| c.name).collect())).unwrap();
            for row in &cells {
                writeln!(out, "{}", line(row.iter().map(String::as_str).collect())).unwrap();
            }
        }
        writeln!(out, "status: {}", self.status()).unwrap();
        out
    }

    fn render_csv(&self) -> String {
        let mut out = String::new();
        writeln!(out, "# catalan-asym {}", self.command).unwrap();
        writeln!(out, "# config: {}", self.config_line()).unwrap();
        for (k, v) in &self.summary {
            writeln!(out, "# {k}: {v}").unwrap();
        }
        writeln!(out, "# status: {}", self.status()).unwrap();
        if !self.columns.is_empty() {
            let names: Vec<&str> = self.columns.iter().map(|c| c.name).collect();
            writeln!(out, "{}", names.join(",")).unwrap();
            for row in &self.rows {
                let escaped: Vec<String> = row.iter().map(|c| csv_escape(c)).collect();
                writeln!(out, "{}", escaped.join(",")).unwrap();
            }
        }
        out
    }

    fn render_json(&self) -> String {
        let header = json!({
            "schema_version": SCHEMA_VERSION,
            "command": self.command,
            "config": self.config_object(),
        });
        match &self.json_lines {
            Some(lines) => {
                let mut out = String::new();
                writeln!(out, "{header}").unwrap();
                for line in lines {
                    writeln!(out, "{line}").unwrap();
                }
                writeln!(out, "{}", json!({ "status": self.status(), "summary": self.json })).unwrap();
                out
            }
            None => {
                let mut doc = header;
                doc["result"] = self.json.clone();
                doc["status"] = json!(self.status());
                let mut text = serde_json::to_string_pretty(&doc).expect("serializable");
                text.push('\n');
                text
            }
        }
    }
}

/// Long digit strings are shortened in tables; CSV and JSON keep them whole.
fn abbreviate(cell: &str) -> String {
    const KEEP: usize = 12;
    let digits = cell.trim_start_matches('-');
    if digits.len() <= 3 * KEEP || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return cell.to_string();
    }
    let sign = &cell[..cell.len() - digits.len()];
    format!(
        "{sign}{}...{} ({} digits)",
        &digits[..KEEP],
        &digits[digits.len() - KEEP..],
        digits.len()
    )
}

fn csv_escape(cell: &str) -> String {
    if cell.contains([',', '"', '\n']) {
        format!("\"{}\"", cell.replace('"', "\"\""))
    } else {
        cell.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        let mut r = Report::new("demo", vec![("order", json!(3)), ("n_list", json!([1, 2]))]);
        r.summary.push(("prefactor".into(), "4^n".into()));
        r.columns = vec![exact("k"), approx("value")];
        r.rows = vec![vec!["0".into(), "1.5e0".into()], vec!["1".into(), "a,b".into()]];
        r.json = json!({"x": 1});
        r.passed = Some(true);
        r
    }

    #[test]
    fn table_marks_approximations() {
        let text = sample().render(Format::Table);
        assert!(text.starts_with("# catalan-asym demo\n# config: order=3 n_list=1,2\n"));
        assert!(text.contains("≈1.5e0"));
        assert!(text.ends_with("status: pass\n"));
    }

    #[test]
    fn long_integers_are_abbreviated() {
        assert_eq!(abbreviate("12345"), "12345");
        let long = "1".repeat(20) + &"2".repeat(30);
        assert_eq!(abbreviate(&long), "111111111111...222222222222 (50 digits)");
        assert_eq!(
            abbreviate(&format!("-{long}")),
            "-111111111111...222222222222 (50 digits)"
        );
    }

    #[test]
    fn csv_quotes_commas() {
        let text = sample().render(Format::Csv);
        assert!(text.contains("k,value\n0,1.5e0\n1,\"a,b\"\n"));
    }

    #[test]
    fn json_has_schema_version() {
        let doc: Value = serde_json::from_str(&sample().render(Format::Json)).unwrap();
        assert_eq!(doc["schema_version"], 1);
        assert_eq!(doc["config"]["order"], 3);
        assert_eq!(doc["status"], "pass");
    }
}
