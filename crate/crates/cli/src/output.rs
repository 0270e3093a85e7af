use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use clap::ValueEnum;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// A table row: serialized as an object in JSON, as strings in CSV.
pub trait Row: Serialize {
    fn headers() -> Vec<&'static str>;
    fn cells(&self) -> Vec<String>;
}

/// 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

pub fn fmt_opt<T: ToString>(x: &Option<T>) -> String {
    x.as_ref().map(|v| v.to_string()).unwrap_or_default()
}

pub fn fmt_opt_f64(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

fn render<R: Row>(rows: &[R], format: Format) -> io::Result<Vec<u8>> {
    match format {
        Format::Json => {
            let mut out = serde_json::to_vec_pretty(rows)?;
            out.push(b'\n');
            Ok(out)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(R::headers())?;
            for r in rows {
                w.write_record(r.cells())?;
            }
            w.into_inner().map_err(|e| e.into_error())
        }
    }
}

pub fn emit<R: Row>(rows: &[R], format: Format, out: Option<&Path>) -> io::Result<()> {
    let bytes = render(rows, format)?;
    match out {
        Some(path) => File::create(path)?.write_all(&bytes),
        None => io::stdout().lock().write_all(&bytes),
    }
}
