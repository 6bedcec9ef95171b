use std::fmt::Write as _;

use thiserror::Error;

use crate::model::Model;
use crate::semantics::{conforms, Design, Meaning};

/// Marker printed for unresolved issues.
pub const NONE: &str = "none";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Csv,
    /// Space-padded columns separated by `|`.
    Table,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExportError {
    #[error("design {0} does not conform to the model")]
    NonConforming(String),
    #[error("header does not match the model: expected `{expected}`, found `{found}`")]
    HeaderMismatch { expected: String, found: String },
    #[error("row {row} has {found} cells, expected {expected}")]
    RowArity {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("`{label}` is not an alternative of issue `{issue}`")]
    UnknownLabel { issue: String, label: String },
    #[error("malformed csv: {0}")]
    Csv(String),
}

/// Renders one design per line with issue labels as the header, so rows can
/// be streamed as the search produces them.
#[derive(Debug, Clone)]
pub struct TableWriter<'m> {
    model: &'m Model,
    format: ExportFormat,
    widths: Vec<usize>,
}

impl<'m> TableWriter<'m> {
    pub fn new(model: &'m Model, format: ExportFormat) -> Self {
        let widths = model
            .issues()
            .iter()
            .map(|issue| {
                model
                    .alternatives()
                    .iter()
                    .filter(|a| a.issue == issue.id)
                    .map(|a| a.label.chars().count())
                    .chain([issue.label.chars().count(), NONE.len()])
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        TableWriter {
            model,
            format,
            widths,
        }
    }

    pub fn header(&self) -> String {
        let labels: Vec<&str> = self
            .model
            .issues()
            .iter()
            .map(|i| i.label.as_str())
            .collect();
        let mut out = self.line(&labels);
        if self.format == ExportFormat::Table {
            let rule: Vec<String> = self.widths.iter().map(|&w| "-".repeat(w)).collect();
            out.push_str(&rule.join("-+-"));
            out.push('\n');
        }
        out
    }

    pub fn row(&self, design: &Design) -> String {
        let cells: Vec<&str> = self
            .model
            .issues()
            .iter()
            .map(|issue| {
                design
                    .get(issue.id.as_str())
                    .and_then(|a| self.model.alternative(a.as_str()).ok())
                    .map_or(NONE, |a| a.label.as_str())
            })
            .collect();
        self.line(&cells)
    }

    fn line(&self, cells: &[&str]) -> String {
        let mut out = String::new();
        match self.format {
            ExportFormat::Csv => {
                let quoted: Vec<String> = cells.iter().map(|c| csv_field(c)).collect();
                out.push_str(&quoted.join(","));
            }
            ExportFormat::Table => {
                for (k, (cell, width)) in cells.iter().zip(&self.widths).enumerate() {
                    if k > 0 {
                        out.push_str(" | ");
                    }
                    let _ = write!(out, "{cell:<width$}");
                }
                out.truncate(out.trim_end().len());
            }
        }
        out.push('\n');
        out
    }
}

fn csv_field(cell: &str) -> String {
    if cell.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", cell.replace('"', "\"\""))
    } else {
        cell.to_owned()
    }
}

/// Header plus one row per design; every design must conform.
pub fn export_designs(
    model: &Model,
    meaning: &Meaning,
    format: ExportFormat,
) -> Result<String, ExportError> {
    let writer = TableWriter::new(model, format);
    let mut out = writer.header();
    for design in &meaning.designs {
        if !conforms(design, model).conforms {
            return Err(ExportError::NonConforming(
                serde_json::to_string(design).unwrap_or_default(),
            ));
        }
        out.push_str(&writer.row(design));
    }
    Ok(out)
}

/// Reads designs back from CSV produced by [`export_designs`].
pub fn import_designs_csv(model: &Model, text: &str) -> Result<Vec<Design>, ExportError> {
    let issues = model.issues();
    if issues.is_empty() {
        // Zero-column rows are blank lines, which csv readers skip.
        return Ok(vec![Design::new(); text.lines().count().saturating_sub(1)]);
    }
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(text.as_bytes());
    let header = reader
        .headers()
        .map_err(|e| ExportError::Csv(e.to_string()))?;
    let expected: Vec<&str> = issues.iter().map(|i| i.label.as_str()).collect();
    let found: Vec<&str> = header.iter().collect();
    if expected != found {
        return Err(ExportError::HeaderMismatch {
            expected: expected.join(","),
            found: found.join(","),
        });
    }
    let mut designs = Vec::new();
    for (row, record) in reader.records().enumerate() {
        let record = record.map_err(|e| ExportError::Csv(e.to_string()))?;
        if record.len() != issues.len() {
            return Err(ExportError::RowArity {
                row: row + 1,
                expected: issues.len(),
                found: record.len(),
            });
        }
        let mut design = Design::new();
        for (issue, cell) in issues.iter().zip(record.iter()) {
            if cell == NONE {
                continue;
            }
            let alt = model
                .alternatives()
                .iter()
                .find(|a| a.issue == issue.id && a.label == cell)
                .ok_or_else(|| ExportError::UnknownLabel {
                    issue: issue.id.to_string(),
                    label: cell.to_owned(),
                })?;
            design.insert(issue.id.clone(), alt.id.clone());
        }
        designs.push(design);
    }
    Ok(designs)
}
