//! Chain files: JSON `{"vertices": [[x, y], ...]}` or CSV with one `x,y`
//! pair per line and an optional header.

use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{bail, Context, Result};
use chainkit_core::{Point, PolygonalChain};
use serde::Deserialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

impl Format {
    /// Format implied by a file extension, if any.
    pub fn from_path(path: &Path) -> Option<Format> {
        match path.extension()?.to_str()?.to_ascii_lowercase().as_str() {
            "json" => Some(Format::Json),
            "csv" | "txt" => Some(Format::Csv),
            _ => None,
        }
    }
}

#[derive(Deserialize)]
struct ChainDoc {
    vertices: Vec<[f64; 2]>,
}

pub fn read_chain(path: &Path) -> Result<PolygonalChain> {
    let text =
        fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let format = Format::from_path(path).unwrap_or_else(|| {
        if text.trim_start().starts_with('{') {
            Format::Json
        } else {
            Format::Csv
        }
    });
    let points = match format {
        Format::Json => parse_json(&text),
        Format::Csv => parse_csv(&text),
    }
    .with_context(|| format!("malformed chain file {}", path.display()))?;
    Ok(PolygonalChain::new(points)?)
}

fn parse_json(text: &str) -> Result<Vec<Point>> {
    let doc: ChainDoc = serde_json::from_str(text)?;
    Ok(doc
        .vertices
        .into_iter()
        .map(|[x, y]| Point::new(x, y))
        .collect())
}

fn parse_csv(text: &str) -> Result<Vec<Point>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut points = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record?;
        if record.iter().all(str::is_empty) {
            continue;
        }
        if record.len() != 2 {
            bail!(
                "record {}: expected 2 fields, found {}",
                line + 1,
                record.len()
            );
        }
        match (record[0].parse::<f64>(), record[1].parse::<f64>()) {
            (Ok(x), Ok(y)) => points.push(Point::new(x, y)),
            _ if line == 0 => {} // header
            _ => bail!(
                "record {}: cannot parse `{},{}`",
                line + 1,
                &record[0],
                &record[1]
            ),
        }
    }
    Ok(points)
}

/// Serializes with shortest round-trip decimals, so reading back is exact.
pub fn write_chain(chain: &PolygonalChain, format: Format, out: &mut dyn Write) -> Result<()> {
    match format {
        Format::Json => {
            writeln!(out, "{{\n  \"vertices\": [")?;
            let n = chain.len();
            for (idx, p) in chain.vertices().iter().enumerate() {
                let sep = if idx + 1 < n { "," } else { "" };
                writeln!(
                    out,
                    "    [{}, {}]{sep}",
                    serde_json::to_string(&p.x)?,
                    serde_json::to_string(&p.y)?
                )?;
            }
            writeln!(out, "  ]\n}}")?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["x", "y"])?;
            for p in chain.vertices() {
                w.serialize((p.x, p.y))?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

pub fn save_chain(chain: &PolygonalChain, format: Format, path: &Path) -> Result<()> {
    let mut buf = Vec::new();
    write_chain(chain, format, &mut buf)?;
    fs::write(path, buf).with_context(|| format!("cannot write {}", path.display()))
}
