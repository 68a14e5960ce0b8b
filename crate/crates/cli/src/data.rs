//! CSV series ingestion and emission with fixed headers per model.

use std::path::Path;

use scurve_core::estimation::{Series, SeriesKind};

use crate::error::{CliError, Result};

pub fn header(kind: SeriesKind) -> [&'static str; 2] {
    match kind {
        SeriesKind::Moore => ["t", "price"],
        SeriesKind::Wright => ["x_cum", "price"],
        SeriesKind::AiLoss => ["log10_compute", "loss"],
        SeriesKind::Benchmark => ["log10_compute", "accuracy"],
    }
}

/// Parse a series from CSV text. `source` names the input in errors.
pub fn parse_series(text: &str, kind: SeriesKind, source: &str) -> Result<Series> {
    let fail = |reason: String| CliError::Input {
        file: source.to_string(),
        reason,
    };
    let expected = header(kind);
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let found = reader
        .headers()
        .map_err(|e| fail(format!("unreadable header: {e}")))?
        .clone();
    let mut columns = [0usize; 2];
    for (slot, name) in columns.iter_mut().zip(expected) {
        *slot = found.iter().position(|h| h == name).ok_or_else(|| {
            fail(format!(
                "missing column `{name}` (header must be `{}`)",
                expected.join(",")
            ))
        })?;
    }

    let mut rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let row = i + 1;
        let record = record.map_err(|e| fail(format!("row {row}: {e}")))?;
        let mut pair = [0.0; 2];
        for (value, (&col, name)) in pair.iter_mut().zip(columns.iter().zip(expected)) {
            let cell = record.get(col).unwrap_or("");
            *value = cell.parse::<f64>().map_err(|_| {
                fail(format!(
                    "row {row}: `{name}` value `{cell}` is not a number"
                ))
            })?;
        }
        rows.push((pair[0], pair[1]));
    }
    Series::new(kind, rows).map_err(|e| fail(e.to_string()))
}

pub fn read_series(path: &Path, kind: SeriesKind) -> Result<Series> {
    let source = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Input {
        file: source.clone(),
        reason: e.to_string(),
    })?;
    parse_series(&text, kind, &source)
}

/// Series as CSV with the kind's header; numbers in shortest round-trip form.
pub fn write_series(series: &Series) -> String {
    let [u, v] = header(series.kind());
    let mut out = format!("{u},{v}\n");
    for &(x, y) in series.rows() {
        out.push_str(&format!("{x},{y}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_and_reorders_columns() {
        let s = parse_series("price,t\n2,0\n1,1\n0.5,2\n", SeriesKind::Moore, "mem").unwrap();
        assert_eq!(s.rows(), &[(0.0, 2.0), (1.0, 1.0), (2.0, 0.5)]);
    }

    #[test]
    fn errors_name_column_and_row() {
        let err = parse_series("t,cost\n0,1\n", SeriesKind::Moore, "mem").unwrap_err();
        assert!(err.to_string().contains("missing column `price`"), "{err}");
        let err = parse_series("t,price\n0,1\n1,-2\n2,1\n", SeriesKind::Moore, "mem").unwrap_err();
        assert!(err.to_string().contains("row 2"), "{err}");
        let err = parse_series("t,price\n0,1\n1,x\n2,1\n", SeriesKind::Moore, "mem").unwrap_err();
        assert!(err.to_string().contains("row 2"), "{err}");
        let err = parse_series("t,price\n0,1\n1,2\n", SeriesKind::Moore, "mem").unwrap_err();
        assert!(err.to_string().contains("at least 3"), "{err}");
    }

    #[test]
    fn write_then_read() {
        let s = Series::new(
            SeriesKind::Benchmark,
            vec![(18.8, 0.1), (20.0, 0.25), (25.6, 0.9)],
        )
        .unwrap();
        let text = write_series(&s);
        assert!(text.starts_with("log10_compute,accuracy\n"));
        assert_eq!(
            parse_series(&text, SeriesKind::Benchmark, "mem").unwrap(),
            s
        );
    }
}
