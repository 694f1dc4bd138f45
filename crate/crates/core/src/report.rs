//! Machine-readable reports: named checks, tables, and their JSON/CSV/text
//! renderings.
//!
//! Floats are rounded to 12 significant digits before serialisation so that
//! reports diff cleanly across runs and platforms.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{json, Map, Value};

/// Anchor used for checks that record behaviour without a claim to test.
pub const EXPLORATORY: &str = "exploratory";

pub const SCHEMA_VERSION: u32 = 1;

/// One verified (or exploratory) statement.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub paper_anchor: String,
    pub expected: Value,
    pub observed: Value,
    pub tolerance: Option<f64>,
    pub pass: bool,
}

impl Check {
    pub fn new(
        name: impl Into<String>,
        anchor: impl Into<String>,
        expected: impl Serialize,
        observed: impl Serialize,
        tolerance: Option<f64>,
        pass: bool,
    ) -> Self {
        Check {
            name: name.into(),
            paper_anchor: anchor.into(),
            expected: to_value(expected),
            observed: to_value(observed),
            tolerance,
            pass,
        }
    }

    /// Integer (or other exact) equality.
    pub fn exact<T: Serialize + PartialEq>(
        name: impl Into<String>,
        anchor: impl Into<String>,
        expected: T,
        observed: T,
    ) -> Self {
        let pass = expected == observed;
        Self::new(name, anchor, expected, observed, None, pass)
    }

    /// `|observed - expected| <= tol`.
    pub fn close(
        name: impl Into<String>,
        anchor: impl Into<String>,
        expected: f64,
        observed: f64,
        tol: f64,
    ) -> Self {
        let pass = (observed - expected).abs() <= tol;
        Self::new(name, anchor, expected, observed, Some(tol), pass)
    }

    /// `observed <= bound + tol`.
    pub fn at_most(
        name: impl Into<String>,
        anchor: impl Into<String>,
        bound: f64,
        observed: f64,
        tol: f64,
    ) -> Self {
        let pass = observed <= bound + tol;
        Self::new(
            name,
            anchor,
            json!({ "at_most": bound }),
            observed,
            Some(tol),
            pass,
        )
    }

    /// Recorded for information only; never affects the overall verdict.
    pub fn exploratory(
        name: impl Into<String>,
        expected: impl Serialize,
        observed: impl Serialize,
        agrees: bool,
    ) -> Self {
        Self::new(name, EXPLORATORY, expected, observed, None, agrees)
    }

    pub fn is_exploratory(&self) -> bool {
        self.paper_anchor == EXPLORATORY
    }
}

/// A named matrix with a header row, exportable as CSV.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Table {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(csv_cell).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

fn csv_cell(v: &Value) -> String {
    match round_value(v.clone()) {
        Value::String(s) if s.contains([',', '"', '\n']) => {
            format!("\"{}\"", s.replace('"', "\"\""))
        }
        Value::String(s) => s,
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

/// Report metadata.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Meta {
    pub tool_version: String,
    pub seed: Option<u64>,
    pub field: Option<String>,
    pub timestamp: Option<String>,
}

impl Default for Meta {
    fn default() -> Self {
        Meta {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            seed: None,
            field: None,
            timestamp: None,
        }
    }
}

/// Output of one command or suite.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub command: String,
    pub meta: Meta,
    pub result: Value,
    pub checks: Vec<Check>,
    pub tables: BTreeMap<String, Table>,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Self {
        Report {
            command: command.into(),
            meta: Meta::default(),
            result: Value::Null,
            checks: Vec::new(),
            tables: BTreeMap::new(),
        }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn extend(&mut self, checks: impl IntoIterator<Item = Check>) {
        self.checks.extend(checks);
    }

    /// Conjunction over non-exploratory checks.
    pub fn pass(&self) -> bool {
        self.checks
            .iter()
            .filter(|c| !c.is_exploratory())
            .all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks
            .iter()
            .filter(|c| !c.is_exploratory() && !c.pass)
    }

    pub fn to_value(&self) -> Value {
        let mut root = Map::new();
        root.insert("schema".into(), json!(SCHEMA_VERSION));
        root.insert("command".into(), json!(self.command));
        root.insert("meta".into(), to_value(&self.meta));
        root.insert("result".into(), self.result.clone());
        root.insert("checks".into(), to_value(&self.checks));
        root.insert("tables".into(), to_value(&self.tables));
        root.insert("pass".into(), json!(self.pass()));
        round_value(Value::Object(root))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_value()).expect("reports serialise");
        s.push('\n');
        s
    }

    /// Checks as one CSV block, followed by every table.
    pub fn to_csv(&self) -> String {
        let mut checks = Table::new([
            "name",
            "paper_anchor",
            "expected",
            "observed",
            "tolerance",
            "pass",
        ]);
        for c in &self.checks {
            checks.push(vec![
                json!(c.name),
                json!(c.paper_anchor),
                json!(compact(&c.expected)),
                json!(compact(&c.observed)),
                json!(c.tolerance),
                json!(c.pass),
            ]);
        }
        let mut out = String::new();
        out.push_str("# checks\n");
        out.push_str(&checks.to_csv());
        for (name, table) in &self.tables {
            let _ = writeln!(out, "# {name}");
            out.push_str(&table.to_csv());
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{}: {}",
            self.command,
            if self.pass() { "PASS" } else { "FAIL" }
        );
        if !self.result.is_null() {
            let _ = writeln!(out, "result: {}", compact(&self.result));
        }
        for c in &self.checks {
            let status = match (c.is_exploratory(), c.pass) {
                (true, _) => "info",
                (false, true) => "pass",
                (false, false) => "FAIL",
            };
            let _ = writeln!(
                out,
                "[{status}] {} ({}): expected {}, observed {}",
                c.name,
                c.paper_anchor,
                compact(&c.expected),
                compact(&c.observed)
            );
        }
        out
    }
}

fn compact(v: &Value) -> String {
    match round_value(v.clone()) {
        Value::String(s) => s,
        other => other.to_string(),
    }
}

fn to_value(v: impl Serialize) -> Value {
    serde_json::to_value(v).expect("plain data serialises")
}

/// Rounds `x` to 12 significant digits.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

fn round_value(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = round_sig(n.as_f64().expect("f64 number"));
            // -0.0 and 0.0 should print the same
            let x = if x == 0.0 { 0.0 } else { x };
            serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
        }
        Value::Array(items) => Value::Array(items.into_iter().map(round_value).collect()),
        Value::Object(map) => {
            Value::Object(map.into_iter().map(|(k, v)| (k, round_value(v))).collect())
        }
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exploratory_checks_do_not_gate() {
        let mut r = Report::new("demo");
        r.push(Check::exact("a", "thm:demo", 1, 1));
        r.push(Check::exploratory("b", 2, 3, false));
        assert!(r.pass());
        r.push(Check::close("c", "eq:demo", 1.0, 1.1, 1e-3));
        assert!(!r.pass());
        assert_eq!(r.failures().count(), 1);
    }

    #[test]
    fn numbers_rounded_to_twelve_digits() {
        assert_eq!(round_sig(1.0 / 3.0), 0.333333333333);
        assert_eq!(round_sig(2.0f64.sqrt() * 1e10), 14142135623.7);
        let mut r = Report::new("x");
        r.result = json!({ "v": 0.1 + 0.2, "neg_zero": -0.0 });
        let text = r.to_json();
        assert!(text.contains("\"v\": 0.3"));
        assert!(text.contains("\"neg_zero\": 0.0"));
    }

    #[test]
    fn csv_escapes_cells() {
        let mut t = Table::new(["a", "b"]);
        t.push(vec![json!("x,y"), json!(1.5)]);
        assert_eq!(t.to_csv(), "a,b\n\"x,y\",1.5\n");
    }
}
