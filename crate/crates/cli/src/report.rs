//! Table rows and their text and CSV renderings.

use std::io::Write;

use anyhow::Result;
use serde::Serialize;

use crate::published::Published;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, clap::ValueEnum, serde::Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Text,
    Csv,
}

/// One cell of an experiment table.
#[derive(Clone, Debug, PartialEq)]
pub struct Row {
    pub experiment: String,
    pub beta: Option<f64>,
    pub n: usize,
    pub m_or_l: usize,
    pub q: Option<f64>,
    pub k: f64,
    pub error_abs: Option<f64>,
    pub ratio: Option<f64>,
    pub f_evals: usize,
    pub seconds: Option<f64>,
    /// Text output leaves a blank line wherever this changes.
    pub block: usize,
    /// Set when the cell could not be computed.
    pub failure: Option<String>,
}

impl Row {
    pub fn ok(&self) -> bool {
        self.failure.is_none()
    }
}

pub fn fmt_error(e: f64) -> String {
    format!("{e:.3e}")
}

pub fn fmt_ratio(r: f64) -> String {
    format!("{r:.2}")
}

fn fmt_num(x: f64) -> String {
    // shortest round-trip form keeps the grid values readable (0.5, 1000, 3.4333333333333336)
    format!("{x}")
}

fn opt(x: Option<f64>, f: fn(f64) -> String) -> String {
    x.map(f).unwrap_or_default()
}

const HEADER: [&str; 10] = [
    "experiment", "beta", "N", "M_or_L", "q", "k", "error_abs", "ratio", "f_evals", "seconds",
];

fn cells(row: &Row, format: Format) -> Vec<String> {
    vec![
        row.experiment.clone(),
        opt(row.beta, fmt_num),
        row.n.to_string(),
        row.m_or_l.to_string(),
        opt(row.q, |q| format!("{q:.4}")),
        fmt_num(row.k),
        match &row.failure {
            Some(msg) if format == Format::Csv => format!("failed: {msg}"),
            Some(_) => "failed".into(),
            None => opt(row.error_abs, fmt_error),
        },
        opt(row.ratio, fmt_ratio),
        row.f_evals.to_string(),
        opt(row.seconds, |s| format!("{s:.4}")),
    ]
}

fn published_cells(row: &Row, published: Option<&Published>) -> Vec<String> {
    let hit = published.and_then(|p| p.lookup(row));
    vec![
        hit.and_then(|c| c.error.clone()).unwrap_or_default(),
        hit.and_then(|c| c.ratio.clone()).unwrap_or_default(),
    ]
}

/// Writes the rows; `published` adds the printed error and ratio next to each cell.
pub fn write_rows(out: &mut dyn Write, rows: &[Row], format: Format, published: Option<&Published>) -> Result<()> {
    let mut header: Vec<String> = HEADER.iter().map(|s| s.to_string()).collect();
    if published.is_some() {
        header.push("published_error".into());
        header.push("published_ratio".into());
    }
    let body: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            let mut c = cells(r, format);
            if published.is_some() {
                c.extend(published_cells(r, published));
            }
            c
        })
        .collect();
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(&header)?;
            for c in &body {
                w.write_record(c)?;
            }
            w.flush()?;
        }
        Format::Text => {
            let mut widths: Vec<usize> = header.iter().map(String::len).collect();
            for c in &body {
                for (w, s) in widths.iter_mut().zip(c) {
                    *w = (*w).max(s.len());
                }
            }
            let line = |c: &[String]| {
                c.iter()
                    .zip(&widths)
                    .map(|(s, w)| format!("{s:>w$}"))
                    .collect::<Vec<_>>()
                    .join("  ")
            };
            writeln!(out, "{}", line(&header))?;
            let mut previous = None;
            for (r, c) in rows.iter().zip(&body) {
                if previous.is_some_and(|p| p != r.block) {
                    writeln!(out)?;
                }
                previous = Some(r.block);
                writeln!(out, "{}", line(c))?;
            }
            let mut failures: Vec<&str> = rows.iter().filter_map(|r| r.failure.as_deref()).collect();
            failures.dedup();
            if !failures.is_empty() {
                writeln!(out)?;
                for msg in failures {
                    writeln!(out, "failed: {msg}")?;
                }
            }
        }
    }
    Ok(())
}
