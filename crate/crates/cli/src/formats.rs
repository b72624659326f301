//! On-disk formats: the sweep record CSV and the histogram JSON document.
//!
//! The CSV carries an optional leading `# key=value ...` metadata comment,
//! then a fixed header, then one row per prime. Floats are written with
//! 17 significant digits so a read-back reproduces the doubles exactly.

use matrixpoints_core::dist::{DensityKind, Histogram, SweepRecord};
use serde::Serialize;
use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::Path;

pub const RECORD_HEADER: &str = "p,a,supersingular,split,star_error,r_star";

/// 17 significant digits round-trip any f64.
pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

fn format_opt_flag(v: Option<bool>) -> &'static str {
    match v {
        Some(true) => "1",
        Some(false) => "0",
        None => "",
    }
}

/// Writes records with a metadata comment line (omitted when empty).
pub fn write_records_csv(
    path: &Path,
    records: &[SweepRecord],
    metadata: &[(String, String)],
) -> io::Result<()> {
    let mut w = BufWriter::new(fs::File::create(path)?);
    if !metadata.is_empty() {
        let joined = metadata
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(" ");
        writeln!(w, "# {joined}")?;
    }
    writeln!(w, "{RECORD_HEADER}")?;
    for r in records {
        writeln!(
            w,
            "{},{},{},{},{},{}",
            r.p,
            r.a,
            u8::from(r.supersingular),
            format_opt_flag(r.split),
            format_float(r.star_error),
            r.r_star.map(format_float).unwrap_or_default(),
        )?;
    }
    w.flush()
}

/// Writes a term-dump CSV: one preformatted row per summand.
pub fn write_terms_csv(path: &Path, header: &str, rows: &[String]) -> io::Result<()> {
    let mut w = BufWriter::new(fs::File::create(path)?);
    writeln!(w, "{header}")?;
    for row in rows {
        writeln!(w, "{row}")?;
    }
    w.flush()
}

fn bad_data(msg: String) -> io::Error {
    io::Error::new(io::ErrorKind::InvalidData, msg)
}

fn parse_flag(s: &str, line: usize) -> io::Result<Option<bool>> {
    match s {
        "" => Ok(None),
        "0" => Ok(Some(false)),
        "1" => Ok(Some(true)),
        other => Err(bad_data(format!("line {line}: flag must be 0/1/empty, got {other:?}"))),
    }
}

/// Reads a record CSV produced by [`write_records_csv`].
///
/// Returns the records and the metadata pairs from the comment line.
pub fn read_records_csv(path: &Path) -> io::Result<(Vec<SweepRecord>, Vec<(String, String)>)> {
    let text = fs::read_to_string(path)?;
    let mut metadata = Vec::new();
    let mut records = Vec::new();
    let mut saw_header = false;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix('#') {
            for pair in rest.split_whitespace() {
                if let Some((k, v)) = pair.split_once('=') {
                    metadata.push((k.to_string(), v.to_string()));
                }
            }
            continue;
        }
        if !saw_header {
            if trimmed != RECORD_HEADER {
                return Err(bad_data(format!(
                    "line {line}: expected header {RECORD_HEADER:?}, got {trimmed:?}"
                )));
            }
            saw_header = true;
            continue;
        }
        let fields: Vec<&str> = trimmed.split(',').collect();
        if fields.len() != 6 {
            return Err(bad_data(format!("line {line}: expected 6 fields, got {}", fields.len())));
        }
        let p = fields[0]
            .parse::<u64>()
            .map_err(|e| bad_data(format!("line {line}: p: {e}")))?;
        let a = fields[1]
            .parse::<i64>()
            .map_err(|e| bad_data(format!("line {line}: a: {e}")))?;
        let supersingular = parse_flag(fields[2], line)?
            .ok_or_else(|| bad_data(format!("line {line}: supersingular flag is required")))?;
        let split = parse_flag(fields[3], line)?;
        let star_error = fields[4]
            .parse::<f64>()
            .map_err(|e| bad_data(format!("line {line}: star_error: {e}")))?;
        let r_star = if fields[5].is_empty() {
            None
        } else {
            Some(
                fields[5]
                    .parse::<f64>()
                    .map_err(|e| bad_data(format!("line {line}: r_star: {e}")))?,
            )
        };
        records.push(SweepRecord { p, a, supersingular, split, star_error, r_star });
    }
    if !saw_header {
        return Err(bad_data("missing header line".to_string()));
    }
    Ok((records, metadata))
}

/// One histogram bin as serialized; `density_at_center` is null where the
/// reference density is not finite (integrable endpoint singularities).
#[derive(Debug, Clone, Serialize)]
pub struct HistogramBinDoc {
    pub lo: f64,
    pub hi: f64,
    pub count: u64,
    pub height: f64,
    pub density_at_center: Option<f64>,
}

/// The histogram JSON document.
#[derive(Debug, Clone, Serialize)]
pub struct HistogramDoc {
    /// Reference density name: semicircle, arcsine, or b1..b4.
    pub kind: String,
    pub support: [f64; 2],
    pub sample_size: u64,
    /// Kolmogorov-Smirnov-style sup over grid intervals, empirical vs CDF.
    pub discrepancy: f64,
    pub bins: Vec<HistogramBinDoc>,
    /// Provenance of the samples: sweep parameters, filters, notes.
    pub metadata: serde_json::Map<String, serde_json::Value>,
}

pub fn histogram_doc(
    hist: &Histogram,
    kind: DensityKind,
    discrepancy: f64,
    metadata: serde_json::Map<String, serde_json::Value>,
) -> HistogramDoc {
    let bins = hist
        .bins
        .iter()
        .map(|b| {
            let center = 0.5 * (b.lo + b.hi);
            let d = kind.density(center);
            HistogramBinDoc {
                lo: b.lo,
                hi: b.hi,
                count: b.count,
                height: b.height,
                density_at_center: d.is_finite().then_some(d),
            }
        })
        .collect();
    HistogramDoc {
        kind: kind.name().to_string(),
        support: [hist.support.0, hist.support.1],
        sample_size: hist.total,
        discrepancy,
        bins,
        metadata,
    }
}

pub fn write_histogram_json(path: &Path, doc: &HistogramDoc) -> io::Result<()> {
    let mut w = BufWriter::new(fs::File::create(path)?);
    let text = serde_json::to_string_pretty(doc)?;
    w.write_all(text.as_bytes())?;
    w.write_all(b"\n")?;
    w.flush()
}

#[cfg(test)]
mod tests {
    use super::*;
    use matrixpoints_core::dist::histogram;

    fn sample_records() -> Vec<SweepRecord> {
        vec![
            SweepRecord {
                p: 3,
                a: 0,
                supersingular: true,
                split: Some(false),
                star_error: -1.234567890123456e-1,
                r_star: Some(3.2e-5),
            },
            SweepRecord {
                p: 5,
                a: 2,
                supersingular: false,
                split: None,
                star_error: 0.0,
                r_star: None,
            },
        ]
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let dir = std::env::temp_dir().join("matrixpoints-formats-test");
        std::fs::create_dir_all(&dir).expect("temp dir");
        let path = dir.join("roundtrip.csv");
        let meta = vec![
            ("kind".to_string(), "elliptic".to_string()),
            ("n".to_string(), "2".to_string()),
        ];
        let records = sample_records();
        write_records_csv(&path, &records, &meta).expect("write");
        let (back, meta_back) = read_records_csv(&path).expect("read");
        assert_eq!(back, records);
        assert_eq!(meta_back, meta);
        std::fs::remove_file(&path).ok();
    }

    #[test]
    fn csv_header_and_flags_are_validated() {
        let dir = std::env::temp_dir().join("matrixpoints-formats-test");
        std::fs::create_dir_all(&dir).expect("temp dir");
        let bad_header = dir.join("bad-header.csv");
        std::fs::write(&bad_header, "p,a\n3,0\n").expect("write");
        assert!(read_records_csv(&bad_header).is_err());
        let bad_flag = dir.join("bad-flag.csv");
        std::fs::write(
            &bad_flag,
            format!("{RECORD_HEADER}\n3,0,2,,0.0e0,\n"),
        )
        .expect("write");
        assert!(read_records_csv(&bad_flag).is_err());
        std::fs::remove_file(&bad_header).ok();
        std::fs::remove_file(&bad_flag).ok();
    }

    #[test]
    fn histogram_doc_nulls_non_finite_density() {
        // One bin centered exactly on the b4 singularity at t = -1
        // exercises the null branch of density_at_center.
        let samples = [-1.0f64, -0.9, -0.6];
        let hist = histogram(&samples, 1, (-1.5, -0.5)).expect("nonempty");
        let doc = histogram_doc(&hist, DensityKind::B4, 0.5, serde_json::Map::new());
        assert_eq!(doc.bins.len(), 1);
        assert!(doc.bins[0].density_at_center.is_none());
        let text = serde_json::to_string(&doc).expect("serialize");
        assert!(text.contains("\"density_at_center\":null"));
        assert!(text.contains("\"kind\":\"b4\""));
    }
}
