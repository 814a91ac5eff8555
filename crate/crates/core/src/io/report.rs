//! Report documents and their text renderings.
//!
//! Values are kept unrounded; rounding happens only here. Rates print with one
//! decimal as percentages, latencies with one decimal in milliseconds, FPS as
//! integers. All rounding is half-up.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{read_file, LoadError};
use crate::eval::{macro_average, DatasetReport, EvalError, RankingMode, SweepReport};

/// Rounds half-up to `decimals` places.
///
/// The scaled value is first snapped to a 1e-9 grid so that binary
/// representation error (0.97575 stored as 0.974999...) does not flip the
/// rounding direction.
pub fn round_half_up(value: f64, decimals: u32) -> f64 {
    let factor = 10f64.powi(decimals as i32);
    let scaled = value * factor;
    let snapped = (scaled * 1e9).round() / 1e9;
    (snapped + 0.5).floor() / factor
}

/// `0.92406` -> `"92.4%"`.
pub fn format_percent(rate: f64) -> String {
    format!("{}%", percent_number(rate))
}

fn percent_number(rate: f64) -> String {
    format!("{:.1}", round_half_up(rate * 100.0, 1))
}

/// Milliseconds with one decimal.
pub fn format_latency(ms: f64) -> String {
    format!("{:.1}", round_half_up(ms, 1))
}

/// Whole frames per second.
pub fn format_fps(fps: f64) -> String {
    format!("{:.0}", round_half_up(fps, 0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RenderFormat {
    /// Comma-delimited, numbers without units.
    Delimited,
    /// Aligned plain-text table.
    Table,
}

impl FromStr for RenderFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "delimited" | "csv" => Ok(Self::Delimited),
            "table" => Ok(Self::Table),
            other => Err(format!("unknown report format {other:?}")),
        }
    }
}

impl fmt::Display for RenderFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Delimited => "delimited",
            Self::Table => "table",
        })
    }
}

/// Per-dataset rates of one approach and their unweighted average.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApproachRow {
    pub approach: String,
    pub datasets: Vec<DatasetReport>,
    pub average: f64,
}

impl ApproachRow {
    pub fn new(approach: impl Into<String>, datasets: Vec<DatasetReport>) -> Result<Self, EvalError> {
        let average = macro_average(&datasets)?;
        Ok(Self {
            approach: approach.into(),
            datasets,
            average,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetTable {
    pub rows: Vec<ApproachRow>,
}

/// Anything the CLI can save and later re-render.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ReportDoc {
    Datasets(DatasetTable),
    Sweep(SweepReport),
}

pub fn write_report(doc: &ReportDoc) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("report serializes");
    s.push('\n');
    s
}

pub fn load_report(path: &Path) -> Result<ReportDoc, LoadError> {
    let text = read_file(path)?;
    serde_json::from_str(&text).map_err(|e| LoadError::parse(e.line(), e.to_string()))
}

pub fn render_report(doc: &ReportDoc, format: RenderFormat) -> String {
    match doc {
        ReportDoc::Datasets(t) => render_datasets(t, format),
        ReportDoc::Sweep(s) => render_sweep(s, format),
    }
}

fn render_datasets(table: &DatasetTable, format: RenderFormat) -> String {
    // Column set: datasets in order of first appearance across rows.
    let mut columns: Vec<(&str, usize)> = Vec::new();
    for row in &table.rows {
        for d in &row.datasets {
            if !columns.iter().any(|(name, _)| *name == d.dataset) {
                columns.push((&d.dataset, d.total));
            }
        }
    }
    let cell = |row: &ApproachRow, name: &str, percent: &dyn Fn(f64) -> String| {
        row.datasets
            .iter()
            .find(|d| d.dataset == name)
            .map(|d| percent(d.rate))
            .unwrap_or_else(|| "-".to_string())
    };

    match format {
        RenderFormat::Table => {
            let mut header = vec!["Approach".to_string()];
            header.extend(columns.iter().map(|(n, total)| format!("{n} (#{total})")));
            header.push("Average".into());
            let rows = table
                .rows
                .iter()
                .map(|row| {
                    let mut cells = vec![row.approach.clone()];
                    cells.extend(columns.iter().map(|(n, _)| cell(row, n, &format_percent)));
                    cells.push(format_percent(row.average));
                    cells
                })
                .collect();
            aligned(header, rows)
        }
        RenderFormat::Delimited => {
            let mut header = vec!["approach".to_string()];
            header.extend(columns.iter().map(|(n, _)| n.to_string()));
            header.push("average".into());
            let rows = table
                .rows
                .iter()
                .map(|row| {
                    let mut cells = vec![row.approach.clone()];
                    cells.extend(columns.iter().map(|(n, _)| cell(row, n, &percent_number)));
                    cells.push(percent_number(row.average));
                    cells
                })
                .collect();
            delimited(header, rows)
        }
    }
}

fn render_sweep(report: &SweepReport, format: RenderFormat) -> String {
    match format {
        RenderFormat::Table => {
            let mode = match report.ranking_mode {
                RankingMode::Accuracy => "accuracy",
                RankingMode::Speed => "speed",
            };
            let mut header = vec![format!("Models (ranked by {mode})")];
            header.extend(report.strategies.iter().map(|s| s.name().to_string()));
            header.push("Time / FPS".into());
            let rows = report
                .rows
                .iter()
                .map(|row| {
                    let label = if row.n == 1 {
                        format!("Top {} ({})", row.n, row.added_model)
                    } else {
                        format!("Top {} (+ {})", row.n, row.added_model)
                    };
                    let mut cells = vec![label];
                    cells.extend(row.per_strategy_rate.iter().map(|r| format_percent(r.rate)));
                    cells.push(format!(
                        "{} / {}",
                        format_latency(row.cumulative_latency_ms),
                        format_fps(row.fps)
                    ));
                    cells
                })
                .collect();
            aligned(header, rows)
        }
        RenderFormat::Delimited => {
            let mut header = vec!["n".to_string(), "added_model".to_string()];
            header.extend(report.strategies.iter().map(|s| s.name().to_string()));
            header.push("latency_ms".into());
            header.push("fps".into());
            let rows = report
                .rows
                .iter()
                .map(|row| {
                    let mut cells = vec![row.n.to_string(), row.added_model.to_string()];
                    cells.extend(row.per_strategy_rate.iter().map(|r| percent_number(r.rate)));
                    cells.push(format_latency(row.cumulative_latency_ms));
                    cells.push(format_fps(row.fps));
                    cells
                })
                .collect();
            delimited(header, rows)
        }
    }
}

fn aligned(header: Vec<String>, rows: Vec<Vec<String>>) -> String {
    let ncol = header.len();
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in &rows {
        for (w, c) in widths.iter_mut().zip(row) {
            *w = (*w).max(c.chars().count());
        }
    }
    let line = |cells: &[String]| {
        let parts: Vec<String> = cells
            .iter()
            .enumerate()
            .map(|(i, c)| {
                if i == 0 {
                    format!("{c:<w$}", w = widths[i])
                } else {
                    format!("{c:>w$}", w = widths[i])
                }
            })
            .collect();
        let mut l = parts.join("  ");
        l.truncate(l.trim_end().len());
        l.push('\n');
        l
    };
    let total = widths.iter().sum::<usize>() + 2 * (ncol - 1);
    let mut out = line(&header);
    out.push_str(&"-".repeat(total));
    out.push('\n');
    for row in &rows {
        out.push_str(&line(row));
    }
    out
}

fn delimited(header: Vec<String>, rows: Vec<Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&header).expect("in-memory write");
    for row in &rows {
        w.write_record(row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 cells")
}
