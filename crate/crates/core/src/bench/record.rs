use std::fmt;
use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::BenchError;
use crate::{Precision, Termination};

/// Optimizer a benchmark cell runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, PartialOrd, Ord)]
#[serde(rename_all = "snake_case")]
pub enum Algo {
    /// Coordinate sampling with full objective evaluations.
    Abo,
    /// Coordinate sampling with incremental objective evaluations.
    AboOpt,
    /// Multi-start Nelder-Mead.
    Nm,
}

impl Algo {
    pub fn as_str(self) -> &'static str {
        match self {
            Algo::Abo => "abo",
            Algo::AboOpt => "abo_opt",
            Algo::Nm => "nm",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "abo" => Some(Algo::Abo),
            "abo_opt" | "abo-opt" => Some(Algo::AboOpt),
            "nm" => Some(Algo::Nm),
            _ => None,
        }
    }
}

impl fmt::Display for Algo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

pub const CSV_HEADER: [&str; 11] = [
    "algo",
    "dim",
    "precision",
    "fe",
    "wall_s",
    "best_f",
    "theory_kb",
    "peak_kb",
    "termination",
    "seed",
    "timestamp",
];

/// One benchmark row.
///
/// Records of single-precision cells hold `best_f` and `wall_s` rounded to
/// `f32`, which is what their 9-digit CSV form represents exactly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub algo: Algo,
    pub dim: usize,
    pub precision: Precision,
    pub fe: u64,
    pub wall_s: f64,
    /// `None` when the cell did not run (memory refusal).
    pub best_f: Option<f64>,
    pub theory_kb: f64,
    /// `None` when byte accounting was off.
    pub peak_kb: Option<f64>,
    pub termination: Termination,
    pub seed: u64,
    /// Unix seconds at which the cell finished.
    pub timestamp: u64,
}

impl RunRecord {
    /// Rounds the precision-dependent fields; see the type docs.
    pub fn normalized(mut self) -> Self {
        if self.precision == Precision::Single {
            self.wall_s = self.wall_s as f32 as f64;
            self.best_f = self.best_f.map(|v| v as f32 as f64);
        }
        self
    }
}

fn format_float(v: f64, precision: Precision) -> String {
    match precision {
        Precision::Double => format!("{v:.16e}"),
        Precision::Single => format!("{v:.8e}"),
    }
}

fn csv_row(r: &RunRecord) -> [String; 11] {
    [
        r.algo.to_string(),
        r.dim.to_string(),
        r.precision.to_string(),
        r.fe.to_string(),
        format_float(r.wall_s, r.precision),
        r.best_f
            .map(|v| format_float(v, r.precision))
            .unwrap_or_default(),
        format_float(r.theory_kb, Precision::Double),
        r.peak_kb
            .map(|v| format_float(v, Precision::Double))
            .unwrap_or_default(),
        r.termination.to_string(),
        r.seed.to_string(),
        r.timestamp.to_string(),
    ]
}

pub fn write_csv<W: Write>(records: &[RunRecord], out: W) -> Result<(), BenchError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in records {
        w.write_record(csv_row(r))?;
    }
    w.flush().map_err(|e| BenchError::io("<csv stream>", e))?;
    Ok(())
}

fn write_file(
    path: &Path,
    records: &[RunRecord],
    body: impl FnOnce(&[RunRecord], &mut io::BufWriter<File>) -> Result<(), BenchError>,
) -> Result<(), BenchError> {
    if records.is_empty() {
        return Err(BenchError::Empty);
    }
    let file = File::create(path).map_err(|e| BenchError::io(path, e))?;
    let mut buf = io::BufWriter::new(file);
    let res = body(records, &mut buf).and_then(|_| buf.flush().map_err(|e| BenchError::io(path, e)));
    if res.is_err() {
        drop(buf);
        let _ = std::fs::remove_file(path);
    }
    res
}

/// Writes the header and one row per record. Nothing is left behind on failure.
pub fn emit_csv(records: &[RunRecord], path: &Path) -> Result<(), BenchError> {
    write_file(path, records, |r, w| write_csv(r, w))
}

pub fn write_json<W: Write>(records: &[RunRecord], out: W) -> Result<(), BenchError> {
    serde_json::to_writer_pretty(out, records)?;
    Ok(())
}

/// JSON array mirroring the CSV columns.
pub fn emit_json(records: &[RunRecord], path: &Path) -> Result<(), BenchError> {
    write_file(path, records, |r, w| write_json(r, &mut *w))
}

fn parse_field<T: std::str::FromStr>(row: &csv::StringRecord, i: usize) -> Result<T, BenchError> {
    let raw = row.get(i).unwrap_or("");
    raw.parse()
        .map_err(|_| BenchError::Parse(format!("column {}: cannot parse {raw:?}", CSV_HEADER[i])))
}

fn parse_opt(row: &csv::StringRecord, i: usize) -> Result<Option<f64>, BenchError> {
    match row.get(i) {
        Some("") | None => Ok(None),
        Some(_) => parse_field(row, i).map(Some),
    }
}

pub fn read_csv<R: io::Read>(input: R) -> Result<Vec<RunRecord>, BenchError> {
    let mut rdr = csv::Reader::from_reader(input);
    let header = rdr.headers()?.clone();
    if header.iter().ne(CSV_HEADER.iter().copied()) {
        return Err(BenchError::Parse(format!("unexpected header {header:?}")));
    }
    let mut out = Vec::new();
    for row in rdr.records() {
        let row = row?;
        let algo = Algo::parse(&row[0])
            .ok_or_else(|| BenchError::Parse(format!("unknown algo {:?}", &row[0])))?;
        let precision = match &row[2] {
            "single" => Precision::Single,
            "double" => Precision::Double,
            other => return Err(BenchError::Parse(format!("unknown precision {other:?}"))),
        };
        let termination = Termination::parse(&row[8])
            .ok_or_else(|| BenchError::Parse(format!("unknown termination {:?}", &row[8])))?;
        out.push(RunRecord {
            algo,
            dim: parse_field(&row, 1)?,
            precision,
            fe: parse_field(&row, 3)?,
            wall_s: parse_field(&row, 4)?,
            best_f: parse_opt(&row, 5)?,
            theory_kb: parse_field(&row, 6)?,
            peak_kb: parse_opt(&row, 7)?,
            termination,
            seed: parse_field(&row, 9)?,
            timestamp: parse_field(&row, 10)?,
        }
        .normalized());
    }
    Ok(out)
}

pub fn parse_csv_file(path: &Path) -> Result<Vec<RunRecord>, BenchError> {
    let f = File::open(path).map_err(|e| BenchError::io(path, e))?;
    read_csv(f)
}
