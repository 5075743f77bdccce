use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::args::{Mode, OutputFormat};
use crate::equilibrium::Verdict;
use crate::mixed::Integration;
use crate::Result;

pub const TOOL_NAME: &str = "qbos";

/// Column order of the CSV output.
pub const CSV_HEADER: [&str; 28] = [
    "tool",
    "version",
    "mode",
    "alpha",
    "beta",
    "gamma",
    "example_instance",
    "method",
    "samples",
    "seed",
    "resolution",
    "label",
    "strategy_a",
    "strategy_b",
    "payoff_a",
    "payoff_b",
    "se_a",
    "se_b",
    "verdict",
    "gap_a",
    "gap_b",
    "threshold_a",
    "threshold_b",
    "residual_a",
    "residual_b",
    "best_response_a",
    "best_response_b",
    "equilibrium",
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PayoffEcho {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub example_instance: bool,
}

/// Integration settings flattened for reporting.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodEcho {
    pub kind: String,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub resolution: Option<usize>,
}

impl From<Integration> for MethodEcho {
    fn from(m: Integration) -> Self {
        match m {
            Integration::MonteCarlo { samples, seed } => MethodEcho {
                kind: "monte-carlo".into(),
                samples: Some(samples),
                seed: Some(seed),
                resolution: None,
            },
            Integration::Quadrature { resolution } => MethodEcho {
                kind: "quadrature".into(),
                samples: None,
                seed: None,
                resolution: Some(resolution),
            },
        }
    }
}

/// One result line. Fields that do not apply to the mode are `None`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub label: String,
    pub strategy_a: Option<String>,
    pub strategy_b: Option<String>,
    pub payoff_a: Option<f64>,
    pub payoff_b: Option<f64>,
    pub se_a: Option<f64>,
    pub se_b: Option<f64>,
    pub verdict: Option<Verdict>,
    pub gap_a: Option<f64>,
    pub gap_b: Option<f64>,
    pub threshold_a: Option<f64>,
    pub threshold_b: Option<f64>,
    pub residual_a: Option<f64>,
    pub residual_b: Option<f64>,
    pub best_response_a: Option<String>,
    pub best_response_b: Option<String>,
    pub equilibrium: Option<bool>,
}

/// Worst-case payoff after a strategy mismatch under each scheme.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MismatchComparison {
    pub classical: f64,
    pub two_tactic: f64,
    pub mixed_quantum: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRecord {
    pub tool: String,
    pub version: String,
    pub timestamp: String,
    pub mode: Mode,
    pub payoffs: PayoffEcho,
    pub method: Option<MethodEcho>,
    pub strategy_a: Option<String>,
    pub strategy_b: Option<String>,
    pub tolerance: Option<f64>,
    pub results: Vec<ResultRow>,
    /// Overall verdict in `verify` and `table` modes.
    pub verdict: Option<Verdict>,
    pub classical_equilibria: Option<Vec<String>>,
    pub mismatch_comparison: Option<MismatchComparison>,
}

impl ReportRecord {
    /// Process exit status for a successful run of this record.
    pub fn exit_code(&self) -> i32 {
        match (self.mode, self.verdict) {
            (Mode::Verify, Some(Verdict::NotEquilibrium)) => super::EXIT_NOT_EQUILIBRIUM,
            (Mode::Verify, Some(Verdict::Inconclusive)) => super::EXIT_INCONCLUSIVE,
            _ => super::EXIT_OK,
        }
    }

    /// JSON rendering with the timestamp blanked, for reproducibility checks.
    pub fn to_json_without_timestamp(&self) -> Result<String> {
        let mut r = self.clone();
        r.timestamp.clear();
        Ok(serde_json::to_string_pretty(&r)?)
    }
}

fn opt_f(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn opt_s<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(|x| x.to_string()).unwrap_or_default()
}

/// Renders `rec` in `format`.
pub fn render(rec: &ReportRecord, format: OutputFormat) -> Result<String> {
    match format {
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(rec)?;
            s.push('\n');
            Ok(s)
        }
        OutputFormat::Csv => render_csv(rec),
        OutputFormat::Text => Ok(render_text(rec)),
    }
}

fn render_csv(rec: &ReportRecord) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER)?;
    let m = rec.method.as_ref();
    for r in &rec.results {
        w.write_record([
            rec.tool.clone(),
            rec.version.clone(),
            rec.mode.to_string(),
            rec.payoffs.alpha.to_string(),
            rec.payoffs.beta.to_string(),
            rec.payoffs.gamma.to_string(),
            rec.payoffs.example_instance.to_string(),
            m.map(|m| m.kind.clone()).unwrap_or_default(),
            opt_s(&m.and_then(|m| m.samples)),
            opt_s(&m.and_then(|m| m.seed)),
            opt_s(&m.and_then(|m| m.resolution)),
            r.label.clone(),
            opt_s(&r.strategy_a),
            opt_s(&r.strategy_b),
            opt_f(r.payoff_a),
            opt_f(r.payoff_b),
            opt_f(r.se_a),
            opt_f(r.se_b),
            opt_s(&r.verdict),
            opt_f(r.gap_a),
            opt_f(r.gap_b),
            opt_f(r.threshold_a),
            opt_f(r.threshold_b),
            opt_f(r.residual_a),
            opt_f(r.residual_b),
            opt_s(&r.best_response_a),
            opt_s(&r.best_response_b),
            opt_s(&r.equilibrium),
        ])?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| std::io::Error::other(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv writer emits UTF-8"))
}

fn render_text(rec: &ReportRecord) -> String {
    let mut out = String::new();
    let p = &rec.payoffs;
    out.push_str(&format!(
        "{} {}  mode: {}\n",
        rec.tool, rec.version, rec.mode
    ));
    out.push_str(&format!(
        "payoffs: alpha={} beta={} gamma={}{}\n",
        p.alpha,
        p.beta,
        p.gamma,
        if p.example_instance {
            " (example instance)"
        } else {
            ""
        }
    ));
    if let Some(m) = &rec.method {
        match m.kind.as_str() {
            "monte-carlo" => out.push_str(&format!(
                "method: monte-carlo  N={}  seed={}\n",
                opt_s(&m.samples),
                opt_s(&m.seed)
            )),
            _ => out.push_str(&format!(
                "method: quadrature  resolution={}\n",
                opt_s(&m.resolution)
            )),
        }
    }
    if let Some(t) = rec.tolerance {
        out.push_str(&format!("tolerance: {t}\n"));
    }

    type Getter = fn(&ResultRow) -> String;
    let columns: [(&str, Getter); 17] = [
        ("label", |r| r.label.clone()),
        ("A", |r| opt_s(&r.strategy_a)),
        ("B", |r| opt_s(&r.strategy_b)),
        ("payoff A", |r| fmt_num(r.payoff_a)),
        ("payoff B", |r| fmt_num(r.payoff_b)),
        ("SE A", |r| fmt_num(r.se_a)),
        ("SE B", |r| fmt_num(r.se_b)),
        ("verdict", |r| opt_s(&r.verdict)),
        ("gap A", |r| fmt_num(r.gap_a)),
        ("gap B", |r| fmt_num(r.gap_b)),
        ("thresh A", |r| fmt_num(r.threshold_a)),
        ("thresh B", |r| fmt_num(r.threshold_b)),
        ("resid A", |r| fmt_num(r.residual_a)),
        ("resid B", |r| fmt_num(r.residual_b)),
        ("best resp A", |r| opt_s(&r.best_response_a)),
        ("best resp B", |r| opt_s(&r.best_response_b)),
        ("equilibrium", |r| opt_s(&r.equilibrium)),
    ];
    let cells: Vec<Vec<String>> = rec
        .results
        .iter()
        .map(|r| columns.iter().map(|(_, g)| g(r)).collect())
        .collect();
    let shown: Vec<usize> = (0..columns.len())
        .filter(|&c| cells.iter().any(|row| !row[c].is_empty()))
        .collect();
    let widths: Vec<usize> = shown
        .iter()
        .map(|&c| {
            cells
                .iter()
                .map(|row| row[c].chars().count())
                .chain(std::iter::once(columns[c].0.chars().count()))
                .max()
                .unwrap_or(0)
        })
        .collect();
    let line = |vals: Vec<&str>| -> String {
        let parts: Vec<String> = vals
            .iter()
            .zip(&widths)
            .map(|(v, w)| format!("{v:<w$}"))
            .collect();
        format!("{}\n", parts.join("  ").trim_end())
    };
    out.push('\n');
    out.push_str(&line(shown.iter().map(|&c| columns[c].0).collect()));
    let rules: Vec<String> = widths.iter().map(|&w| "-".repeat(w)).collect();
    out.push_str(&line(rules.iter().map(String::as_str).collect()));
    for row in &cells {
        out.push_str(&line(shown.iter().map(|&c| row[c].as_str()).collect()));
    }

    if let Some(v) = rec.verdict {
        out.push_str(&format!("\noverall verdict: {v}\n"));
    }
    if let Some(eqs) = &rec.classical_equilibria {
        out.push_str(&format!("\nclassical equilibria: {}\n", eqs.join(", ")));
    }
    if let Some(c) = &rec.mismatch_comparison {
        out.push_str(&format!(
            "\nworst-case mismatch payoff: classical {}  two-tactic {}  mixed quantum {}\n",
            c.classical, c.two_tactic, c.mixed_quantum
        ));
    }
    out
}

fn fmt_num(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.6}")).unwrap_or_default()
}

/// Writes the rendered report to `path`, or stdout when `None`.
pub fn emit_report(rec: &ReportRecord, format: OutputFormat, path: Option<&Path>) -> Result<()> {
    let s = render(rec, format)?;
    match path {
        Some(p) => std::fs::write(p, s)?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(s.as_bytes())?;
            out.flush()?;
        }
    }
    Ok(())
}
