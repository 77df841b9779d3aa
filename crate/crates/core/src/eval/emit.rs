//! Byte-stable CSV and JSON report files.
//!
//! Every file is a table with a fixed column order. Rates and scores are
//! written with four fractional digits, summary percentages with one, and
//! per-email scores also in exact form (`3/4`, `1.5`). CSV leaves
//! not-applicable cells empty; JSON writes them as `null`.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;
use serde_json::value::RawValue;

use super::{Comparison, EvalReport};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl OutputFormat {
    pub fn extension(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.extension())
    }
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(format!("unknown format {other:?} (expected csv or json)")),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum EmitError {
    #[error("cannot write {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot write {}: {source}", path.display())]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
}

enum Cell {
    Text(String),
    Int(i64),
    /// A number already rendered with its fixed number of digits.
    Number(String),
    Null,
}

impl Cell {
    fn fixed(value: Rational, digits: u32) -> Cell {
        Cell::Number(value.to_fixed(digits))
    }

    fn percent(value: Rational) -> Cell {
        Cell::fixed(value * Rational::from_integer(100), 1)
    }

    fn count(n: usize) -> Cell {
        Cell::Int(n as i64)
    }

    fn csv_text(&self) -> String {
        match self {
            Cell::Text(s) | Cell::Number(s) => s.clone(),
            Cell::Int(n) => n.to_string(),
            Cell::Null => String::new(),
        }
    }
}

impl Serialize for Cell {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Cell::Text(s) => serializer.serialize_str(s),
            Cell::Int(n) => serializer.serialize_i64(*n),
            Cell::Number(s) => RawValue::from_string(s.clone())
                .map_err(serde::ser::Error::custom)?
                .serialize(serializer),
            Cell::Null => serializer.serialize_unit(),
        }
    }
}

struct Table {
    name: &'static str,
    columns: &'static [&'static str],
    rows: Vec<Vec<Cell>>,
}

/// One JSON object per row, keys in column order.
struct JsonRow<'a> {
    columns: &'static [&'static str],
    cells: &'a [Cell],
}

impl Serialize for JsonRow<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.columns.len()))?;
        for (column, cell) in self.columns.iter().zip(self.cells) {
            map.serialize_entry(column, cell)?;
        }
        map.end()
    }
}

impl Table {
    fn write(&self, out_dir: &Path, format: OutputFormat) -> Result<PathBuf, EmitError> {
        let path = out_dir.join(format!("{}.{}", self.name, format.extension()));
        let bytes = match format {
            OutputFormat::Csv => self.to_csv(&path)?,
            OutputFormat::Json => self.to_json(),
        };
        fs::write(&path, bytes).map_err(|source| EmitError::Io {
            path: path.clone(),
            source,
        })?;
        Ok(path)
    }

    fn to_csv(&self, path: &Path) -> Result<Vec<u8>, EmitError> {
        let csv_error = |source| EmitError::Csv {
            path: path.to_path_buf(),
            source,
        };
        let mut writer = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        writer.write_record(self.columns).map_err(csv_error)?;
        for row in &self.rows {
            writer
                .write_record(row.iter().map(Cell::csv_text))
                .map_err(csv_error)?;
        }
        writer.into_inner().map_err(|e| EmitError::Io {
            path: path.to_path_buf(),
            source: e.into_error(),
        })
    }

    fn to_json(&self) -> Vec<u8> {
        let rows: Vec<JsonRow<'_>> = self
            .rows
            .iter()
            .map(|cells| JsonRow {
                columns: self.columns,
                cells,
            })
            .collect();
        let mut bytes = serde_json::to_vec_pretty(&rows).expect("report rows serialize");
        bytes.push(b'\n');
        bytes
    }
}

const SUMMARY_COLUMNS: &[&str] = &[
    "corpus",
    "label",
    "config",
    "aggregation",
    "x_weight",
    "a_weight",
    "direction_scope",
    "urgency_scope",
    "warning_band",
    "theta_warn",
    "theta_phish",
    "total",
    "decided_phishing",
    "decided_warning",
    "decided_legitimate",
    "detection_rate",
    "false_positive_rate",
    "warning_rate",
    "accuracy",
    "detection_pct",
    "false_positive_pct",
    "accuracy_pct",
    "delta_pct",
];

fn summary(reports: &[EvalReport]) -> Table {
    // The first report of each corpus is the baseline for the deltas.
    let mut baselines: BTreeMap<&str, Rational> = BTreeMap::new();
    let rows = reports
        .iter()
        .map(|r| {
            let delta = match baselines.get(r.corpus.as_str()) {
                Some(&base) => Cell::percent(r.primary_rate() - base),
                None => {
                    baselines.insert(&r.corpus, r.primary_rate());
                    Cell::Null
                }
            };
            let optional =
                |rate: Option<Rational>, f: fn(Rational) -> Cell| rate.map_or(Cell::Null, f);
            let c = &r.config;
            vec![
                Cell::Text(r.corpus.clone()),
                Cell::Text(r.label.to_string()),
                Cell::Text(r.config_label.clone()),
                Cell::Text(c.aggregation.to_string()),
                Cell::fixed(c.x_weight_default, 4),
                Cell::fixed(c.a_weight_default, 4),
                Cell::Text(c.direction_scope.to_string()),
                Cell::Text(c.urgency_scope.to_string()),
                Cell::Text(c.warning_band_enabled.to_string()),
                Cell::fixed(c.theta_warn, 4),
                Cell::fixed(c.theta_phish, 4),
                Cell::count(r.total),
                Cell::count(r.decided_phishing),
                Cell::count(r.decided_warning),
                Cell::count(r.decided_legitimate),
                optional(r.detection_rate, |v| Cell::fixed(v, 4)),
                optional(r.false_positive_rate, |v| Cell::fixed(v, 4)),
                Cell::fixed(r.warning_rate, 4),
                Cell::fixed(r.accuracy, 4),
                optional(r.detection_rate, Cell::percent),
                optional(r.false_positive_rate, Cell::percent),
                Cell::percent(r.accuracy),
                delta,
            ]
        })
        .collect();
    Table {
        name: "summary",
        columns: SUMMARY_COLUMNS,
        rows,
    }
}

fn pos_ranking(reports: &[EvalReport]) -> Table {
    let rows = reports
        .iter()
        .flat_map(|r| {
            r.pos_ranking.iter().enumerate().map(move |(i, p)| {
                vec![
                    Cell::Text(r.corpus.clone()),
                    Cell::Text(r.config_label.clone()),
                    Cell::count(i + 1),
                    Cell::Text(p.tag.to_string()),
                    Cell::count(p.count),
                    Cell::fixed(p.share, 4),
                ]
            })
        })
        .collect();
    Table {
        name: "pos_ranking",
        columns: &["corpus", "config", "rank", "tag", "count", "share"],
        rows,
    }
}

fn word_frequency(reports: &[EvalReport]) -> Table {
    let rows = reports
        .iter()
        .flat_map(|r| {
            r.word_frequency.iter().enumerate().map(move |(i, w)| {
                vec![
                    Cell::Text(r.corpus.clone()),
                    Cell::Text(r.config_label.clone()),
                    Cell::count(i + 1),
                    Cell::Text(w.origin.clone()),
                    Cell::Text(w.stem.clone()),
                    Cell::count(w.count),
                ]
            })
        })
        .collect();
    Table {
        name: "word_freq",
        columns: &["corpus", "config", "rank", "origin", "stem", "count"],
        rows,
    }
}

fn score_histogram(reports: &[EvalReport]) -> Table {
    let rows = reports
        .iter()
        .flat_map(|r| {
            r.score_histogram.iter().map(move |(score, count)| {
                vec![
                    Cell::Text(r.corpus.clone()),
                    Cell::Text(r.config_label.clone()),
                    Cell::fixed(*score, 4),
                    Cell::Text(score.to_string()),
                    Cell::count(*count),
                ]
            })
        })
        .collect();
    Table {
        name: "score_histogram",
        columns: &["corpus", "config", "score", "score_exact", "count"],
        rows,
    }
}

fn per_email_scores(reports: &[EvalReport]) -> Table {
    let rows = reports
        .iter()
        .flat_map(|r| {
            r.emails.iter().map(move |e| {
                let matches: Vec<String> = e
                    .word_scores
                    .iter()
                    .map(|w| {
                        format!(
                            "{}[{},L{},x={},a={}]={}",
                            w.surface, w.pos, w.entry.level, w.x, w.a, w.score
                        )
                    })
                    .collect();
                vec![
                    Cell::Text(r.corpus.clone()),
                    Cell::Text(r.config_label.clone()),
                    Cell::Text(e.email_id.clone()),
                    Cell::Text(r.label.to_string()),
                    Cell::fixed(e.email_score, 4),
                    Cell::Text(e.email_score.to_string()),
                    Cell::Text(e.decision.to_string()),
                    Cell::count(e.word_scores.len()),
                    Cell::Text(matches.join(" ")),
                ]
            })
        })
        .collect();
    Table {
        name: "per_email_scores",
        columns: &[
            "corpus",
            "config",
            "email_id",
            "label",
            "email_score",
            "email_score_exact",
            "decision",
            "match_count",
            "matches",
        ],
        rows,
    }
}

/// Writes the five report tables for all `reports` in each format, and
/// returns the paths written. Within a corpus the first report is the
/// baseline for `delta_pct`.
pub fn emit_reports(
    reports: &[EvalReport],
    out_dir: &Path,
    formats: &[OutputFormat],
) -> Result<Vec<PathBuf>, EmitError> {
    fs::create_dir_all(out_dir).map_err(|source| EmitError::Io {
        path: out_dir.to_path_buf(),
        source,
    })?;
    let tables = [
        summary(reports),
        pos_ranking(reports),
        word_frequency(reports),
        score_histogram(reports),
        per_email_scores(reports),
    ];
    let mut formats = formats.to_vec();
    formats.sort();
    formats.dedup();
    let mut written = Vec::new();
    for table in &tables {
        for &format in &formats {
            written.push(table.write(out_dir, format)?);
        }
    }
    Ok(written)
}

pub fn emit_report(
    report: &EvalReport,
    out_dir: &Path,
    formats: &[OutputFormat],
) -> Result<Vec<PathBuf>, EmitError> {
    emit_reports(std::slice::from_ref(report), out_dir, formats)
}

pub fn emit_comparison(
    comparison: &Comparison,
    out_dir: &Path,
    formats: &[OutputFormat],
) -> Result<Vec<PathBuf>, EmitError> {
    emit_reports(&comparison.reports, out_dir, formats)
}
