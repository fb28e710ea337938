use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use clap::ValueEnum;
use qortho::verify::VerificationReport;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Output sink: a file when a path is given, standard output otherwise.
pub fn sink(out: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(File::create(p)?),
        None => Box::new(io::stdout().lock()),
    })
}

/// A report flattened for CSV, in JSON field order.
#[derive(Serialize)]
struct ReportRow {
    identity: String,
    inputs: String,
    lhs_re: f64,
    lhs_im: f64,
    rhs_re: f64,
    rhs_im: f64,
    abs_residual: f64,
    rel_residual: f64,
    tolerance: f64,
    passed: bool,
    flags: String,
}

impl From<&VerificationReport> for ReportRow {
    fn from(r: &VerificationReport) -> Self {
        ReportRow {
            identity: r.identity().to_string(),
            inputs: serde_json::to_string(r.inputs()).expect("inputs serialize"),
            lhs_re: r.lhs().re,
            lhs_im: r.lhs().im,
            rhs_re: r.rhs().re,
            rhs_im: r.rhs().im,
            abs_residual: r.abs_residual(),
            rel_residual: r.rel_residual(),
            tolerance: r.tolerance(),
            passed: r.passed(),
            flags: r
                .flags()
                .iter()
                .map(|f| format!("{f:?}"))
                .collect::<Vec<_>>()
                .join(";"),
        }
    }
}

pub fn write_reports_csv(w: impl Write, reports: &[VerificationReport]) -> io::Result<()> {
    let mut csv = csv::Writer::from_writer(w);
    if reports.is_empty() {
        csv.write_record([
            "identity",
            "inputs",
            "lhs_re",
            "lhs_im",
            "rhs_re",
            "rhs_im",
            "abs_residual",
            "rel_residual",
            "tolerance",
            "passed",
            "flags",
        ])?;
    }
    for r in reports {
        csv.serialize(ReportRow::from(r))?;
    }
    csv.flush()
}

pub fn write_json(mut w: impl Write, value: &impl Serialize) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)
}

/// A row of a coefficient table.
#[derive(Serialize)]
pub struct CoefficientRow {
    pub n: usize,
    pub k: usize,
    pub coefficient_re: f64,
    pub coefficient_im: f64,
}

pub fn write_table(w: impl Write, rows: &[CoefficientRow], format: Format) -> io::Result<()> {
    match format {
        Format::Json => write_json(w, &rows),
        Format::Csv => {
            let mut csv = csv::Writer::from_writer(w);
            if rows.is_empty() {
                csv.write_record(["n", "k", "coefficient_re", "coefficient_im"])?;
            }
            for r in rows {
                csv.serialize(r)?;
            }
            csv.flush()
        }
    }
}
