//! CSV and JSON tables, one row per report.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use complementarity_core::ccr::names;
use complementarity_core::{CcrReport, ChannelKind, IdentityId};
use serde_json::{Map, Value};

use crate::config::Format;
use crate::ScanError;

pub const COLUMNS: [&str; 21] = [
    "channel",
    "mu",
    "x",
    "p",
    names::P_HS_A,
    names::C_HS_A,
    names::S_L_A,
    names::CC_AB,
    names::CC_AEA,
    names::CC_AEB,
    names::CC_EAEB,
    names::CC_ABE,
    names::C_GLOBAL,
    names::C_ENV,
    names::CONCURRENCE_AB,
    names::PPT_AEA,
    names::PPT_AEB,
    names::PPT_EAEB,
    names::MUTUAL_INFO_AB,
    "residual_ccr",
    "residual_channel_identity",
];

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Empty,
    Text(String),
    Real(f64),
    Flag(bool),
}

impl Cell {
    fn real(v: Option<f64>) -> Cell {
        v.map_or(Cell::Empty, Cell::Real)
    }

    pub fn as_real(&self) -> Option<f64> {
        match self {
            Cell::Real(v) => Some(*v),
            _ => None,
        }
    }

    /// 17 significant digits, so every finite value round-trips exactly.
    pub fn render(&self) -> String {
        match self {
            Cell::Empty => String::new(),
            Cell::Text(s) => s.clone(),
            Cell::Real(v) => format!("{v:.16e}"),
            Cell::Flag(b) => b.to_string(),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Cell::Empty => Value::Null,
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Real(v) => Value::from(*v),
            Cell::Flag(b) => Value::Bool(*b),
        }
    }
}

pub type Row = Vec<Cell>;

pub fn row(report: &CcrReport) -> Row {
    let spec = &report.channel;
    let mu = if spec.kind() == ChannelKind::CorrelatedAmplitudeDamping {
        Cell::Real(spec.mu())
    } else {
        Cell::Empty
    };
    let mut cells = vec![
        Cell::Text(spec.kind().short_name().to_string()),
        mu,
        Cell::Real(report.x),
        Cell::Real(spec.p()),
    ];
    for name in &COLUMNS[4..19] {
        cells.push(match report.flag(name) {
            Some(b) => Cell::Flag(b),
            None => Cell::real(report.measure(name)),
        });
    }
    cells.push(Cell::real(report.residual(IdentityId::CcrUniversal)));
    cells.push(Cell::real(report.channel_identity_residual()));
    cells
}

pub fn rows(reports: &[CcrReport]) -> Vec<Row> {
    reports.iter().map(row).collect()
}

fn csv_err(e: csv::Error) -> ScanError {
    match e.into_kind() {
        csv::ErrorKind::Io(e) => ScanError::Io { path: "<csv>".into(), source: e },
        other => ScanError::Csv(format!("{other:?}")),
    }
}

pub fn write_csv<W: Write>(rows: &[Row], out: W) -> Result<(), ScanError> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    w.write_record(COLUMNS).map_err(csv_err)?;
    for r in rows {
        w.write_record(r.iter().map(Cell::render)).map_err(csv_err)?;
    }
    w.flush().map_err(|e| ScanError::Io { path: "<csv>".into(), source: e })
}

/// Inverse of [`write_csv`]. The header must match [`COLUMNS`] exactly.
pub fn parse_csv(text: &str) -> Result<Vec<Row>, ScanError> {
    let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
    let header = r.headers().map_err(csv_err)?;
    if header.iter().ne(COLUMNS.iter().copied()) {
        return Err(ScanError::Csv("header does not match the table schema".into()));
    }
    let mut out = Vec::new();
    for record in r.records() {
        let record = record.map_err(csv_err)?;
        let mut cells = Vec::with_capacity(COLUMNS.len());
        for (col, raw) in COLUMNS.iter().zip(record.iter()) {
            let cell = if raw.is_empty() {
                Cell::Empty
            } else if *col == "channel" {
                Cell::Text(raw.to_string())
            } else if col.starts_with("ppt_") {
                Cell::Flag(
                    raw.parse().map_err(|_| ScanError::Csv(format!("{col}: `{raw}` is not a flag")))?,
                )
            } else {
                Cell::Real(
                    raw.parse().map_err(|_| ScanError::Csv(format!("{col}: `{raw}` is not a number")))?,
                )
            };
            cells.push(cell);
        }
        out.push(cells);
    }
    Ok(out)
}

/// A JSON array with one object per line; inapplicable cells are `null`.
pub fn write_json<W: Write>(rows: &[Row], mut out: W) -> Result<(), ScanError> {
    let io = |e: io::Error| ScanError::Io { path: "<json>".into(), source: e };
    writeln!(out, "[").map_err(io)?;
    for (i, r) in rows.iter().enumerate() {
        let obj: Map<String, Value> =
            COLUMNS.iter().zip(r).map(|(k, c)| (k.to_string(), c.to_json())).collect();
        let sep = if i + 1 == rows.len() { "" } else { "," };
        writeln!(out, "{}{sep}", Value::Object(obj)).map_err(io)?;
    }
    writeln!(out, "]").map_err(io)?;
    out.flush().map_err(io)
}

pub fn write_table<W: Write>(rows: &[Row], format: Format, out: W) -> Result<(), ScanError> {
    match format {
        Format::Csv => write_csv(rows, out),
        Format::Json => write_json(rows, out),
    }
}

/// Write to `path`, or stdout when `path` is `None`.
pub fn emit(reports: &[CcrReport], format: Format, path: Option<&Path>) -> Result<(), ScanError> {
    if reports.is_empty() {
        return Err(ScanError::Config { field: "channels", message: "nothing to emit".into() });
    }
    let rows = rows(reports);
    match path {
        Some(path) => {
            let file = File::create(path)
                .map_err(|e| ScanError::Io { path: path.display().to_string(), source: e })?;
            write_table(&rows, format, BufWriter::new(file))
        }
        None => write_table(&rows, format, BufWriter::new(io::stdout().lock())),
    }
}
