//! Run reports and their JSON / CSV serialization.

use std::io::Write;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bounds::{BoundMode, BoundReport, Remark, RemarkCheck, Status, Theorem};
use crate::identities::IdentityResidual;
use crate::preinvex::{CertificationReport, InstanceKey};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

/// Instance identity for the identity checks, which depend on neither λ
/// nor q.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityKey {
    pub function: String,
    pub map: String,
    pub a: f64,
    pub b: f64,
    pub alpha: f64,
}

impl IdentityKey {
    pub fn total_cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.function
            .cmp(&other.function)
            .then_with(|| self.map.cmp(&other.map))
            .then_with(|| self.a.total_cmp(&other.a))
            .then_with(|| self.b.total_cmp(&other.b))
            .then_with(|| self.alpha.total_cmp(&other.alpha))
    }
}

/// What was certified: `|f^(order)|^power` under `map` with `lambda`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertKey {
    pub function: String,
    pub map: String,
    pub lambda: f64,
    pub lo: f64,
    pub hi: f64,
    pub derivative_order: u8,
    pub power: f64,
}

impl CertKey {
    pub fn total_cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.function
            .cmp(&other.function)
            .then_with(|| self.map.cmp(&other.map))
            .then_with(|| self.lambda.total_cmp(&other.lambda))
            .then_with(|| self.lo.total_cmp(&other.lo))
            .then_with(|| self.hi.total_cmp(&other.hi))
            .then_with(|| self.derivative_order.cmp(&other.derivative_order))
            .then_with(|| self.power.total_cmp(&other.power))
    }

    /// Exact identity usable as a hash key.
    pub fn bits(&self) -> (String, String, [u64; 4], u8) {
        (
            self.function.clone(),
            self.map.clone(),
            [self.lambda.to_bits(), self.lo.to_bits(), self.hi.to_bits(), self.power.to_bits()],
            self.derivative_order,
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Lemma {
    FirstDerivative,
    SecondDerivative,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityRow {
    pub key: IdentityKey,
    pub lemma: Lemma,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residual: Option<IdentityResidual>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundRow {
    pub key: InstanceKey,
    pub theorem: Theorem,
    pub mode: BoundMode,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<BoundReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    /// Falsification trial index.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trial: Option<u64>,
    /// `gap / oracle_bound` for falsification hits.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slack_ratio: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificationRow {
    pub key: CertKey,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<CertificationReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RemarkRow {
    pub key: InstanceKey,
    pub theorem: Theorem,
    pub remark: Remark,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub check: Option<RemarkCheck>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ResultRow {
    Identity(IdentityRow),
    Bound(BoundRow),
    Certification(CertificationRow),
    Remark(RemarkRow),
}

impl ResultRow {
    pub fn status(&self) -> Status {
        match self {
            ResultRow::Identity(r) => r.status,
            ResultRow::Bound(r) => r.status,
            ResultRow::Certification(r) => r.status,
            ResultRow::Remark(r) => r.status,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            ResultRow::Identity(_) => "identity",
            ResultRow::Bound(_) => "bound",
            ResultRow::Certification(_) => "certification",
            ResultRow::Remark(_) => "remark",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub pass: usize,
    pub flag: usize,
    pub fail: usize,
    pub exploratory: usize,
    pub error: usize,
}

impl Summary {
    pub fn tally(rows: &[ResultRow]) -> Self {
        let mut s = Summary {
            total: rows.len(),
            ..Summary::default()
        };
        for r in rows {
            match r.status() {
                Status::Pass => s.pass += 1,
                Status::Flag => s.flag += 1,
                Status::Fail => s.fail += 1,
                Status::Exploratory => s.exploratory += 1,
                Status::Error => s.error += 1,
            }
        }
        s
    }

    pub fn has_findings(&self) -> bool {
        self.flag + self.fail + self.error > 0
    }
}

/// Aggregate counts of a falsification run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FalsifySummary {
    pub trials: u64,
    pub seed: u64,
    /// Bound evaluations across all trials and modes.
    pub evaluations: usize,
    pub certified: usize,
    pub exploratory: usize,
    /// `gap` and `oracle_bound` both zero.
    pub exact_equality: usize,
    pub violations: usize,
    pub errors: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_slack_ratio: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub tool_version: String,
    pub command: String,
    pub config_echo: serde_json::Value,
    pub results: Vec<ResultRow>,
    pub summary: Summary,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub falsification: Option<FalsifySummary>,
    /// Seconds; only recorded on request so reports stay reproducible.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time: Option<f64>,
}

impl RunReport {
    pub fn new(command: &str, config_echo: serde_json::Value, results: Vec<ResultRow>) -> Self {
        let summary = Summary::tally(&results);
        Self {
            tool_version: TOOL_VERSION.to_string(),
            command: command.to_string(),
            config_echo,
            results,
            summary,
            falsification: None,
            wall_time: None,
        }
    }

    /// 0 when every row passed or is exploratory, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        i32::from(self.summary.has_findings())
    }

    pub fn to_json(&self) -> Result<String, ReportError> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Self, ReportError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), ReportError> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(CSV_COLUMNS)?;
        for row in &self.results {
            w.write_record(csv_record(row))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv(&self) -> Result<String, ReportError> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is utf-8"))
    }
}

/// Column order of the CSV export. Cells that do not apply to a row kind
/// are empty.
pub const CSV_COLUMNS: [&str; 37] = [
    "kind",
    "status",
    "function",
    "map",
    "a",
    "b",
    "alpha",
    "lambda",
    "q",
    "theorem",
    "mode",
    "lemma",
    "remark",
    "trial",
    "lhs",
    "rhs",
    "residual",
    "combined_quadrature_error",
    "gap",
    "paper_bound",
    "oracle_bound",
    "oracle_loose",
    "tolerance",
    "bound_holds_oracle",
    "bound_holds_paper",
    "paper_vs_oracle_rel_diff",
    "certified",
    "slack_ratio",
    "derivative_order",
    "power",
    "domain_lo",
    "domain_hi",
    "max_violation",
    "general_bound",
    "remark_bound",
    "rel_diff",
    "error",
];

/// Shortest representation that parses back to the same `f64`.
pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:e}")
    } else {
        x.to_string()
    }
}

fn enum_name<T: Serialize>(v: &T) -> String {
    match serde_json::to_value(v) {
        Ok(serde_json::Value::String(s)) => s,
        Ok(other) => other.to_string(),
        Err(_) => String::new(),
    }
}

fn csv_record(row: &ResultRow) -> Vec<String> {
    let mut cells = vec![String::new(); CSV_COLUMNS.len()];
    let mut set = |name: &str, value: String| {
        let idx = CSV_COLUMNS
            .iter()
            .position(|c| *c == name)
            .expect("known column");
        cells[idx] = value;
    };
    set("kind", row.kind().to_string());
    set("status", enum_name(&row.status()));
    let instance = |k: &InstanceKey, set: &mut dyn FnMut(&str, String)| {
        set("function", k.function.clone());
        set("map", k.map.clone());
        set("a", fmt_f64(k.a));
        set("b", fmt_f64(k.b));
        set("alpha", fmt_f64(k.alpha));
        set("lambda", fmt_f64(k.lambda));
        set("q", fmt_f64(k.q));
    };
    match row {
        ResultRow::Identity(r) => {
            set("function", r.key.function.clone());
            set("map", r.key.map.clone());
            set("a", fmt_f64(r.key.a));
            set("b", fmt_f64(r.key.b));
            set("alpha", fmt_f64(r.key.alpha));
            set("lemma", enum_name(&r.lemma));
            if let Some(res) = &r.residual {
                set("lhs", fmt_f64(res.lhs));
                set("rhs", fmt_f64(res.rhs));
                set("residual", fmt_f64(res.residual));
                set("combined_quadrature_error", fmt_f64(res.combined_quadrature_error));
            }
            if let Some(e) = &r.error {
                set("error", e.clone());
            }
        }
        ResultRow::Bound(r) => {
            instance(&r.key, &mut set);
            set("theorem", r.theorem.to_string());
            set("mode", enum_name(&r.mode));
            if let Some(t) = r.trial {
                set("trial", t.to_string());
            }
            if let Some(s) = r.slack_ratio {
                set("slack_ratio", fmt_f64(s));
            }
            if let Some(b) = &r.report {
                set("gap", fmt_f64(b.gap));
                set("paper_bound", fmt_f64(b.paper_bound));
                set("oracle_bound", fmt_f64(b.oracle_bound));
                if let Some(l) = b.oracle_loose {
                    set("oracle_loose", fmt_f64(l));
                }
                set("tolerance", fmt_f64(b.tolerance));
                set("bound_holds_oracle", b.bound_holds_oracle.to_string());
                set("bound_holds_paper", b.bound_holds_paper.to_string());
                set("paper_vs_oracle_rel_diff", fmt_f64(b.paper_vs_oracle_rel_diff));
                set("certified", b.certified.to_string());
            }
            if let Some(e) = &r.error {
                set("error", e.clone());
            }
        }
        ResultRow::Certification(r) => {
            set("function", r.key.function.clone());
            set("map", r.key.map.clone());
            set("lambda", fmt_f64(r.key.lambda));
            set("derivative_order", r.key.derivative_order.to_string());
            set("power", fmt_f64(r.key.power));
            set("domain_lo", fmt_f64(r.key.lo));
            set("domain_hi", fmt_f64(r.key.hi));
            if let Some(c) = &r.report {
                set("certified", c.passed.to_string());
                set("max_violation", fmt_f64(c.max_violation));
                set("tolerance", fmt_f64(c.tolerance));
            }
            if let Some(e) = &r.error {
                set("error", e.clone());
            }
        }
        ResultRow::Remark(r) => {
            instance(&r.key, &mut set);
            set("theorem", r.theorem.to_string());
            set("remark", enum_name(&r.remark));
            if let Some(c) = &r.check {
                set("general_bound", fmt_f64(c.general_bound));
                set("remark_bound", fmt_f64(c.remark_bound));
                set("rel_diff", fmt_f64(c.rel_diff));
            }
            if let Some(e) = &r.error {
                set("error", e.clone());
            }
        }
    }
    cells
}
