//! Published error and ratio values for the experiment tables, read from the
//! transcription in `data/published_tables.csv`.

use anyhow::{Context, Result};
use serde::Deserialize;

use crate::report::Row;

const TRANSCRIPTION: &str = include_str!("../data/published_tables.csv");

#[derive(Clone, Debug, Deserialize, PartialEq)]
pub struct PublishedCell {
    pub experiment: String,
    pub beta: Option<f64>,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "M_or_L")]
    pub m_or_l: usize,
    pub q: f64,
    pub k: f64,
    /// As printed, e.g. `4.3e-006`.
    pub error: Option<String>,
    pub ratio: Option<String>,
    /// Table the value was copied from.
    pub source: String,
}

impl PublishedCell {
    pub fn error_value(&self) -> Option<f64> {
        self.error.as_deref().and_then(|s| s.parse().ok())
    }

    pub fn ratio_value(&self) -> Option<f64> {
        self.ratio.as_deref().and_then(|s| s.parse().ok())
    }
}

#[derive(Clone, Debug)]
pub struct Published {
    pub cells: Vec<PublishedCell>,
}

impl Published {
    pub fn load() -> Result<Self> {
        let mut reader = csv::Reader::from_reader(TRANSCRIPTION.as_bytes());
        let cells = reader
            .deserialize()
            .collect::<std::result::Result<Vec<PublishedCell>, _>>()
            .context("reading the published-table transcription")?;
        Ok(Self { cells })
    }

    pub fn lookup(&self, row: &Row) -> Option<&PublishedCell> {
        self.cells.iter().find(|c| {
            c.experiment == row.experiment
                && c.n == row.n
                && c.m_or_l == row.m_or_l
                && c.k == row.k
                && match (c.beta, row.beta) {
                    (Some(a), Some(b)) => a == b,
                    (None, None) => true,
                    _ => false,
                }
                && row.q.is_some_and(|q| (q - c.q).abs() < 1e-3)
        })
    }
}
