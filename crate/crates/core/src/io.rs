//! CSV and JSON persistence.
//!
//! Floats are written with 17 significant digits so that every value read
//! back is bit-identical to the one written.

use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use crate::error::{LevyError, Result};

/// Round-trip exact decimal representation.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes a CSV file with the given header and float rows.
pub fn write_csv_rows<P: AsRef<Path>>(path: P, header: &[&str], rows: &[Vec<f64>]) -> Result<()> {
    let mut out = BufWriter::new(fs::File::create(path)?);
    writeln!(out, "{}", header.join(","))?;
    for row in rows {
        let line: Vec<String> = row.iter().map(|&v| fmt_f64(v)).collect();
        writeln!(out, "{}", line.join(","))?;
    }
    out.flush()?;
    Ok(())
}

/// Writes columns of equal length as CSV.
pub fn write_csv_columns<P: AsRef<Path>>(
    path: P,
    header: &[&str],
    columns: &[&[f64]],
) -> Result<()> {
    let len = columns.first().map_or(0, |c| c.len());
    if columns.iter().any(|c| c.len() != len) || columns.len() != header.len() {
        return Err(LevyError::config("CSV columns have mismatched lengths"));
    }
    let rows: Vec<Vec<f64>> = (0..len)
        .map(|i| columns.iter().map(|c| c[i]).collect())
        .collect();
    write_csv_rows(path, header, &rows)
}

/// Writes increments as `k,x` with a 1-based index.
pub fn write_increments<P: AsRef<Path>>(path: P, increments: &[f64]) -> Result<()> {
    let mut out = BufWriter::new(fs::File::create(path)?);
    writeln!(out, "k,x")?;
    for (k, x) in increments.iter().enumerate() {
        writeln!(out, "{},{}", k + 1, fmt_f64(*x))?;
    }
    out.flush()?;
    Ok(())
}

/// Reads increments from a `k,x` CSV. A single-column file of values is
/// also accepted.
pub fn read_increments<P: AsRef<Path>>(path: P) -> Result<Vec<f64>> {
    let file = fs::File::open(path.as_ref())?;
    let mut values = Vec::new();
    for (lineno, line) in BufReader::new(file).lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let field = line.rsplit(',').next().unwrap_or(line).trim();
        match field.parse::<f64>() {
            Ok(v) => values.push(v),
            Err(_) if lineno == 0 => continue, // header
            Err(_) => {
                return Err(LevyError::Parse(format!(
                    "{}:{}: `{field}` is not a number",
                    path.as_ref().display(),
                    lineno + 1
                )))
            }
        }
    }
    Ok(values)
}

/// Pretty-printed JSON with a trailing newline.
pub fn write_json<P: AsRef<Path>, T: Serialize>(path: P, value: &T) -> Result<()> {
    let mut text =
        serde_json::to_string_pretty(value).map_err(|e| LevyError::Parse(e.to_string()))?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn float_text_round_trips(x in proptest::num::f64::NORMAL | proptest::num::f64::SUBNORMAL | proptest::num::f64::ZERO) {
            let back: f64 = fmt_f64(x).parse().unwrap();
            prop_assert_eq!(back.to_bits(), x.to_bits());
        }
    }

    #[test]
    fn increments_file_round_trip() {
        let dir = std::env::temp_dir().join(format!("levy-io-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join("x.csv");
        let xs = vec![0.1, -2.5e-7, 3.0, 1.0 / 3.0];
        write_increments(&path, &xs).unwrap();
        assert_eq!(read_increments(&path).unwrap(), xs);
        let text = fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("k,x\n1,"));
        fs::write(&path, "k,x\n1,abc\n").unwrap();
        assert!(read_increments(&path).is_err());
        fs::remove_dir_all(&dir).unwrap();
    }
}
