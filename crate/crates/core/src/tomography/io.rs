// Copyright 2026 The krausloom Authors
// SPDX-License-Identifier: Apache-2.0

//! Count files: `index,label,counts,total_shots`, one record per line.

use super::{setting, CountRecord};
use crate::error::{Error, Result};

const HEADER: &str = "index,label,counts,total_shots";

pub fn write_counts(records: &[CountRecord]) -> String {
    let mut out = String::from(HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&format!("{},{},{},{}\n", r.index, r.label, r.counts, r.total_shots));
    }
    out
}

/// Reads a count file. Blank lines, `#` comments and the header are
/// skipped; labels must agree with the settings table.
pub fn parse_counts(text: &str) -> Result<Vec<CountRecord>> {
    let mut records = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || line == HEADER {
            continue;
        }
        let bad = |what: &str| Error::Parse(format!("line {}: {what}: `{line}`", n + 1));
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let [index, label, counts, shots] = fields[..] else {
            return Err(bad("expected four comma-separated fields"));
        };
        let index: usize = index.parse().map_err(|_| bad("bad index"))?;
        let expected = setting(index).map_err(|_| bad("index not in 1..=16"))?;
        if !label.eq_ignore_ascii_case(&expected.label_string()) {
            return Err(bad(&format!("label should be {}", expected.label_string())));
        }
        records.push(CountRecord {
            index,
            label: expected.label_string(),
            expected_probability: None,
            counts: counts.parse().map_err(|_| bad("bad counts"))?,
            total_shots: shots.parse().map_err(|_| bad("bad total_shots"))?,
        });
    }
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmath::DensityMatrix;
    use crate::tomography::simulate_counts;

    #[test]
    fn round_trip() {
        let rho = DensityMatrix::maximally_mixed(vec![2, 2]);
        let rec = simulate_counts(&rho, 5000, true, 7).unwrap();
        let back = parse_counts(&write_counts(&rec)).unwrap();
        assert_eq!(back.len(), 16);
        for (a, b) in rec.iter().zip(&back) {
            assert_eq!((a.index, &a.label, a.counts, a.total_shots), (b.index, &b.label, b.counts, b.total_shots));
        }
    }

    #[test]
    fn rejects_bad_lines() {
        assert!(parse_counts("1,HV,10,100").is_err());
        assert!(parse_counts("17,HH,10,100").is_err());
        assert!(parse_counts("1,HH,-3,100").is_err());
        assert!(parse_counts("1,HH,10").is_err());
        assert_eq!(parse_counts("# comment\n\n1,hh,10,100\n").unwrap()[0].label, "HH");
    }
}
