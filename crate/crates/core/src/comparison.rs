//! Throughput-versus-noise comparison of transducers.
//!
//! Each row stores the quoted n_add and η·B·D and, when available, the
//! published ingredients from which the throughput can be recomputed.

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::report::{Cell, Table};

/// Relative mismatch above which a recomputed throughput is flagged.
pub const MISMATCH_TOLERANCE: f64 = 0.10;

#[derive(Debug, Error)]
pub enum ComparisonError {
    #[error("reading {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("parsing comparison rows: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("row `{label}`: {reason}")]
    Row { label: String, reason: String },
}

/// Published numbers from which η·B·D follows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Ingredients {
    /// η_ext·B·D with D = T_d·R_p, or D = 1 when both are absent.
    Bandwidth {
        eta_ext: f64,
        bandwidth_hz: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        pulse_duration_s: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        repetition_rate_hz: Option<f64>,
    },
    /// Pulse-mode efficiency η_ext,p = Π factors, times R_p.
    PulseEfficiency {
        factors: Vec<f64>,
        repetition_rate_hz: f64,
    },
}

impl Ingredients {
    pub fn throughput(&self) -> f64 {
        match self {
            Self::Bandwidth {
                eta_ext,
                bandwidth_hz,
                pulse_duration_s,
                repetition_rate_hz,
            } => {
                let d = match (pulse_duration_s, repetition_rate_hz) {
                    (Some(t), Some(r)) => t * r,
                    _ => 1.0,
                };
                eta_ext * bandwidth_hz * d
            }
            Self::PulseEfficiency {
                factors,
                repetition_rate_hz,
            } => factors.iter().product::<f64>() * repetition_rate_hz,
        }
    }

    pub fn duty_cycle(&self) -> Option<f64> {
        match self {
            Self::Bandwidth {
                pulse_duration_s: Some(t),
                repetition_rate_hz: Some(r),
                ..
            } => Some(t * r),
            Self::Bandwidth { .. } => Some(1.0),
            Self::PulseEfficiency { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComparisonRow {
    pub label: String,
    pub n_add: f64,
    /// Quoted η·B·D, Hz.
    pub throughput_hz: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub duty_cycle: Option<f64>,
    pub source: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ingredients: Option<Ingredients>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RowFile {
    rows: Vec<ComparisonRow>,
}

/// Reads `[[rows]]` from a TOML file.
pub fn load_rows(path: &Path) -> Result<Vec<ComparisonRow>, ComparisonError> {
    let text = std::fs::read_to_string(path).map_err(|source| ComparisonError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_rows(&text)
}

pub fn parse_rows(text: &str) -> Result<Vec<ComparisonRow>, ComparisonError> {
    let file: RowFile = toml::from_str(text)?;
    for row in &file.rows {
        if !(row.throughput_hz >= 0.0 && row.throughput_hz.is_finite()) {
            return Err(ComparisonError::Row {
                label: row.label.clone(),
                reason: format!("throughput {} must be finite and ≥ 0", row.throughput_hz),
            });
        }
    }
    Ok(file.rows)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonEntry {
    pub row: ComparisonRow,
    pub recomputed_hz: Option<f64>,
    /// recomputed/quoted − 1.
    pub deviation: Option<f64>,
    pub flagged: bool,
}

/// Recomputes every row with ingredients and flags deviations above 10%.
pub fn comparison_report(rows: &[ComparisonRow]) -> Vec<ComparisonEntry> {
    rows.iter()
        .map(|row| {
            let recomputed = row.ingredients.as_ref().map(Ingredients::throughput);
            let deviation = recomputed.map(|r| {
                if row.throughput_hz > 0.0 {
                    r / row.throughput_hz - 1.0
                } else if r == 0.0 {
                    0.0
                } else {
                    f64::INFINITY
                }
            });
            ComparisonEntry {
                row: row.clone(),
                recomputed_hz: recomputed,
                deviation,
                flagged: deviation.is_some_and(|d| d.abs() > MISMATCH_TOLERANCE),
            }
        })
        .collect()
}

/// Machine-readable form of a report.
pub fn report_table(entries: &[ComparisonEntry]) -> Table {
    let mut t = Table::new(
        [
            "label",
            "n_add",
            "throughput_quoted_Hz",
            "throughput_recomputed_Hz",
            "deviation",
            "duty_cycle",
            "flagged",
            "source",
        ]
        .map(str::to_owned)
        .to_vec(),
    );
    for e in entries {
        let duty = e
            .row
            .duty_cycle
            .or_else(|| e.row.ingredients.as_ref().and_then(Ingredients::duty_cycle));
        t.push_row(vec![
            Cell::Text(e.row.label.clone()),
            e.row.n_add.into(),
            e.row.throughput_hz.into(),
            e.recomputed_hz.into(),
            e.deviation.into(),
            duty.into(),
            Cell::Text(e.flagged.to_string()),
            Cell::Text(e.row.source.clone()),
        ])
        .expect("fixed width");
    }
    t
}

/// Fixed-width text rendering for terminals.
pub fn format_report(entries: &[ComparisonEntry]) -> String {
    let width = entries
        .iter()
        .map(|e| e.row.label.len())
        .max()
        .unwrap_or(5)
        .max(5);
    let mut out = format!(
        "{:<width$}  {:>7}  {:>12}  {:>12}  {:>9}  flag\n",
        "label", "n_add", "quoted_Hz", "recomp_Hz", "dev"
    );
    for e in entries {
        let recomputed = e
            .recomputed_hz
            .map_or("-".to_owned(), |r| format!("{r:.4}"));
        let dev = e
            .deviation
            .map_or("-".to_owned(), |d| format!("{:+.2}%", 100.0 * d));
        out.push_str(&format!(
            "{:<width$}  {:>7}  {:>12}  {:>12}  {:>9}  {}\n",
            e.row.label,
            e.row.n_add,
            e.row.throughput_hz,
            recomputed,
            dev,
            if e.flagged { "MISMATCH" } else { "" }
        ));
    }
    out
}
