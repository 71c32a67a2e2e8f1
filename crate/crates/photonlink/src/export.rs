//! Delimited-text export of modes, traces, and sweep tables.
//!
//! Files carry a header row and one sample per row. Values are written with
//! Rust's shortest round-trip formatting, which preserves every `f64`
//! bit-exactly and makes seeded reruns byte-identical.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::Path;

use crate::atom::ExcitationTrace;
use crate::signal::{SpectralAmplitude, TemporalMode};

/// Render a table of named columns as CSV text.
pub fn csv_table(headers: &[&str], columns: &[Vec<f64>]) -> String {
    assert_eq!(headers.len(), columns.len(), "one header per column");
    let rows = columns.first().map(|c| c.len()).unwrap_or(0);
    assert!(
        columns.iter().all(|c| c.len() == rows),
        "ragged columns in CSV export"
    );
    let mut out = String::new();
    out.push_str(&headers.join(","));
    out.push('\n');
    for r in 0..rows {
        for (i, col) in columns.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            let _ = write!(out, "{}", col[r]);
        }
        out.push('\n');
    }
    out
}

/// Write a CSV table to disk.
pub fn write_csv(path: &Path, headers: &[&str], columns: &[Vec<f64>]) -> io::Result<()> {
    fs::write(path, csv_table(headers, columns))
}

/// Temporal mode as `t, re, im, abs2`.
pub fn temporal_mode_columns(mode: &TemporalMode) -> (Vec<&'static str>, Vec<Vec<f64>>) {
    let t: Vec<f64> = mode.grid().times().collect();
    let re: Vec<f64> = mode.values().iter().map(|v| v.re).collect();
    let im: Vec<f64> = mode.values().iter().map(|v| v.im).collect();
    let abs2: Vec<f64> = mode.values().iter().map(|v| v.norm_sqr()).collect();
    (vec!["t", "re", "im", "abs2"], vec![t, re, im, abs2])
}

/// Spectral mode as `omega, re, im, abs2`.
pub fn spectral_mode_columns(xi: &SpectralAmplitude) -> (Vec<&'static str>, Vec<Vec<f64>>) {
    let omega: Vec<f64> = xi.grid().samples().collect();
    let re: Vec<f64> = xi.values().iter().map(|v| v.re).collect();
    let im: Vec<f64> = xi.values().iter().map(|v| v.im).collect();
    let abs2: Vec<f64> = xi.values().iter().map(|v| v.norm_sqr()).collect();
    (vec!["omega", "re", "im", "abs2"], vec![omega, re, im, abs2])
}

/// Excitation trace as `t, pe`.
pub fn trace_columns(trace: &ExcitationTrace) -> (Vec<&'static str>, Vec<Vec<f64>>) {
    let t: Vec<f64> = trace.grid().times().collect();
    (vec!["t", "pe"], vec![t, trace.pe().to_vec()])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trips_doubles_exactly() {
        let x = vec![0.1, 1.0 / 3.0, f64::MIN_POSITIVE, 12345.6789e-300];
        let text = csv_table(&["x"], &[x.clone()]);
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("x"));
        for (line, want) in lines.zip(&x) {
            let parsed: f64 = line.parse().unwrap();
            assert_eq!(parsed.to_bits(), want.to_bits());
        }
    }

    #[test]
    fn header_and_shape() {
        let text = csv_table(&["a", "b"], &[vec![1.0, 2.0], vec![3.0, 4.0]]);
        assert_eq!(text, "a,b\n1,3\n2,4\n");
    }
}
