// Copyright 2026 The krausloom Authors
// SPDX-License-Identifier: Apache-2.0

//! Parameter sweeps over `--grid` axes.

use std::path::Path;

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::args::{CommandKind, RunArgs};
use crate::commands;
use crate::error::{CliError, CliResult};
use crate::output::write_atomic;

#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub name: String,
    pub values: Vec<f64>,
}

/// Parses `name=start:stop:count` into `count` evenly spaced values.
pub fn parse_axis(text: &str) -> CliResult<Axis> {
    let bad = || CliError::Validation(format!("grid axis `{text}` is not name=start:stop:count"));
    let (name, range) = text.split_once('=').ok_or_else(bad)?;
    let parts: Vec<&str> = range.split(':').collect();
    let [start, stop, count] = parts[..] else {
        return Err(bad());
    };
    let start: f64 = start.trim().parse().map_err(|_| bad())?;
    let stop: f64 = stop.trim().parse().map_err(|_| bad())?;
    let count: usize = count.trim().parse().map_err(|_| bad())?;
    if count == 0 || !start.is_finite() || !stop.is_finite() {
        return Err(bad());
    }
    let values = match count {
        1 => vec![start],
        n => (0..n).map(|k| start + (stop - start) * k as f64 / (n - 1) as f64).collect(),
    };
    Ok(Axis {
        name: name.trim().to_string(),
        values,
    })
}

fn cartesian(axes: &[Axis]) -> Vec<Vec<f64>> {
    axes.iter().fold(vec![vec![]], |acc, axis| {
        acc.iter()
            .flat_map(|prefix| {
                axis.values.iter().map(move |&x| {
                    let mut p = prefix.clone();
                    p.push(x);
                    p
                })
            })
            .collect()
    })
}

pub fn run(kind: CommandKind, args: &RunArgs) -> CliResult<()> {
    let axes = args.grid.iter().map(|a| parse_axis(a)).collect::<CliResult<Vec<_>>>()?;
    for axis in &axes {
        if args.clone().numeric_field(&axis.name).is_none() {
            return Err(CliError::Validation(format!("`{}` cannot be swept", axis.name)));
        }
    }
    let dir = args
        .out
        .as_deref()
        .ok_or_else(|| CliError::Validation("--grid needs --out naming a directory".into()))?;
    if args.counts_out.is_some() || args.emit_circuit.is_some() || args.emit_theory.is_some() {
        return Err(CliError::Validation(
            "--counts-out, --emit-circuit and --emit-theory cannot be combined with --grid".into(),
        ));
    }
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;

    let ext = args.format().extension();
    let points = cartesian(&axes);
    let results: Vec<Value> = points
        .par_iter()
        .enumerate()
        .map(|(k, values)| {
            let file = format!("point-{k:04}.{ext}");
            let mut point = args.clone();
            point.grid.clear();
            point.out = Some(dir.join(&file));
            for (axis, &x) in axes.iter().zip(values) {
                *point.numeric_field(&axis.name).expect("axis checked") = Some(x);
            }
            let outcome = commands::run(kind, &point);
            json!({
                "index": k,
                "values": axes.iter().zip(values).map(|(a, x)| (a.name.clone(), json!(x))).collect::<serde_json::Map<_, _>>(),
                "file": file,
                "exit_code": outcome.as_ref().map_or_else(|e| e.code(), |_| 0),
                "error": outcome.err().map(|e| e.to_string()),
            })
        })
        .collect();

    let index = json!({
        "command": kind.name(),
        "axes": axes.iter().map(|a| json!({"name": a.name, "values": a.values})).collect::<Vec<_>>(),
        "points": results,
    });
    let text = serde_json::to_string_pretty(&index).expect("index serializes") + "\n";
    write_atomic(&Path::new(dir).join("index.json"), &text)?;

    match results_first_failure(&index) {
        Some((code, msg)) => Err(match code {
            3 => CliError::Consistency(msg),
            4 => CliError::Io(msg),
            _ => CliError::Validation(msg),
        }),
        None => Ok(()),
    }
}

fn results_first_failure(index: &Value) -> Option<(u64, String)> {
    index["points"].as_array()?.iter().find_map(|p| {
        let code = p["exit_code"].as_u64()?;
        (code != 0).then(|| {
            let msg = p["error"].as_str().unwrap_or_default();
            (code, format!("grid point {}: {msg}", p["index"]))
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axes_are_evenly_spaced() {
        let a = parse_axis("p=0:1:5").unwrap();
        assert_eq!(a.name, "p");
        assert_eq!(a.values, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(parse_axis("theta1=0.3:9:1").unwrap().values, vec![0.3]);
    }

    #[test]
    fn malformed_axes_are_rejected() {
        for bad in ["p", "p=0:1", "p=0:1:0", "p=a:1:2", "p=0:1:2:3"] {
            assert!(parse_axis(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn product_enumerates_last_axis_fastest() {
        let axes = [parse_axis("a=0:1:2").unwrap(), parse_axis("b=5:7:3").unwrap()];
        let pts = cartesian(&axes);
        assert_eq!(pts.len(), 6);
        assert_eq!(pts[0], vec![0.0, 5.0]);
        assert_eq!(pts[1], vec![0.0, 6.0]);
        assert_eq!(pts[5], vec![1.0, 7.0]);
    }
}
