//! Report envelope, verdict rows and the CSV table contract.

use serde::Serialize;
use serde_json::Value;
use std::io::Write;

pub const TOOL: &str = "heisenmag";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// How `value` is compared with `target` and `tolerance`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparison {
    /// `value <= target + tolerance`.
    AtMost,
    /// `value >= target - tolerance`.
    AtLeast,
    /// `value > target + tolerance`.
    Above,
    /// `|value - target| <= tolerance`.
    Within,
    /// `|value - target| <= tolerance |target|`.
    WithinRelative,
    /// Bit-for-bit equality; the tolerance must be 0.
    Identical,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Comparison {
    pub fn verdict(self, value: f64, target: f64, tolerance: f64) -> Verdict {
        let ok = match self {
            Comparison::AtMost => value <= target + tolerance,
            Comparison::AtLeast => value >= target - tolerance,
            Comparison::Above => value > target + tolerance,
            Comparison::Within => (value - target).abs() <= tolerance,
            Comparison::WithinRelative => (value - target).abs() <= tolerance * target.abs(),
            Comparison::Identical => value.to_bits() == target.to_bits(),
        };
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Row {
    pub id: String,
    /// Acceptance criterion the row belongs to, when run by `verify`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub criterion: Option<String>,
    pub value: f64,
    pub target: f64,
    pub tolerance: f64,
    pub comparison: Comparison,
    pub verdict: Verdict,
}

impl Row {
    pub fn new(
        id: impl Into<String>,
        value: f64,
        target: f64,
        tolerance: f64,
        comparison: Comparison,
    ) -> Self {
        Row {
            id: id.into(),
            criterion: None,
            value,
            target,
            tolerance,
            comparison,
            verdict: comparison.verdict(value, target, tolerance),
        }
    }

    pub fn at_most(id: impl Into<String>, value: f64, target: f64, tolerance: f64) -> Self {
        Self::new(id, value, target, tolerance, Comparison::AtMost)
    }

    pub fn at_least(id: impl Into<String>, value: f64, target: f64, tolerance: f64) -> Self {
        Self::new(id, value, target, tolerance, Comparison::AtLeast)
    }

    pub fn within(id: impl Into<String>, value: f64, target: f64, tolerance: f64) -> Self {
        Self::new(id, value, target, tolerance, Comparison::Within)
    }

    pub fn within_rel(id: impl Into<String>, value: f64, target: f64, tolerance: f64) -> Self {
        Self::new(id, value, target, tolerance, Comparison::WithinRelative)
    }

    pub fn tagged(mut self, criterion: &str) -> Self {
        self.criterion = Some(criterion.to_string());
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

/// Plot-ready table written by `--csv`.
#[derive(Clone, Debug, Default)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(headers: &[&str]) -> Self {
        Table {
            headers: headers.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, cells: Vec<String>) {
        debug_assert_eq!(cells.len(), self.headers.len());
        self.rows.push(cells);
    }

    /// The generic `(id, value, target, tolerance, verdict)` table of a report.
    pub fn of_rows(rows: &[Row]) -> Self {
        let mut t = Table::new(&["id", "value", "target", "tolerance", "verdict"]);
        for r in rows {
            t.push(vec![
                r.id.clone(),
                r.value.to_string(),
                r.target.to_string(),
                r.tolerance.to_string(),
                if r.passed() { "pass" } else { "fail" }.to_string(),
            ]);
        }
        t
    }

    pub fn write(&self, out: impl Write) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.headers)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        w.flush()?;
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Timing {
    pub section: String,
    pub seconds: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Envelope {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    /// Echo of the effective configuration, including the seed.
    pub config: Value,
    pub rows: Vec<Row>,
    /// Command-specific results.
    pub data: Value,
    pub pass: bool,
    /// Wall-clock timings, present only with `--timings` so that reports
    /// stay byte-stable by default.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<Vec<Timing>>,
}

impl Envelope {
    pub fn failing(&self) -> impl Iterator<Item = &Row> {
        self.rows.iter().filter(|r| !r.passed())
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialises");
        s.push('\n');
        s
    }
}
