// Copyright 2026 The krausloom Authors
// SPDX-License-Identifier: Apache-2.0

//! Reports and their JSON and CSV renderings.

use std::fs;
use std::io::Write;
use std::path::Path;

use krausloom::qmath::{CMatrix, MatrixRecord, PureState};
use serde_json::{json, Map, Value};

use crate::args::Format;
use crate::error::{CliError, CliResult};

#[derive(Debug, Clone)]
pub enum Entry {
    Number(f64),
    Integer(u64),
    Flag(bool),
    Text(String),
    Matrix { matrix: CMatrix, dims: Vec<usize> },
    State(PureState),
    Json(Value),
}

/// Ordered named results of one command.
#[derive(Debug, Clone, Default)]
pub struct Report {
    entries: Vec<(String, Entry)>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, name: impl Into<String>, entry: Entry) -> &mut Self {
        self.entries.push((name.into(), entry));
        self
    }

    pub fn number(&mut self, name: &str, x: f64) -> &mut Self {
        self.push(name, Entry::Number(x))
    }

    pub fn text(&mut self, name: &str, s: impl Into<String>) -> &mut Self {
        self.push(name, Entry::Text(s.into()))
    }

    pub fn matrix(&mut self, name: &str, matrix: &CMatrix, dims: &[usize]) -> &mut Self {
        self.push(
            name,
            Entry::Matrix {
                matrix: matrix.clone(),
                dims: dims.to_vec(),
            },
        )
    }

    pub fn json(&mut self, name: &str, value: Value) -> &mut Self {
        self.push(name, Entry::Json(value))
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut text = serde_json::to_string_pretty(&self.to_json()).expect("reports serialize");
                text.push('\n');
                text
            }
            Format::Csv => self.to_csv(),
        }
    }

    pub fn to_json(&self) -> Value {
        let mut map = Map::new();
        for (name, entry) in &self.entries {
            let value = match entry {
                Entry::Number(x) => json!(x),
                Entry::Integer(n) => json!(n),
                Entry::Flag(b) => json!(b),
                Entry::Text(s) => json!(s),
                Entry::Matrix { matrix, dims } => {
                    serde_json::to_value(MatrixRecord::from_matrix(matrix, dims)).expect("records serialize")
                }
                Entry::State(psi) => json!({
                    "dims": psi.dims(),
                    "re": psi.amplitudes().iter().map(|z| z.re).collect::<Vec<_>>(),
                    "im": psi.amplitudes().iter().map(|z| z.im).collect::<Vec<_>>(),
                }),
                Entry::Json(v) => v.clone(),
            };
            map.insert(name.clone(), value);
        }
        Value::Object(map)
    }

    /// `field,row,col,re,im` with twelve significant digits; scalars leave
    /// the index columns empty.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("field,row,col,re,im\n");
        let num = |x: f64| format!("{x:.11e}");
        for (name, entry) in &self.entries {
            match entry {
                Entry::Number(x) => out.push_str(&format!("{name},,,{},\n", num(*x))),
                Entry::Integer(n) => out.push_str(&format!("{name},,,{n},\n")),
                Entry::Flag(b) => out.push_str(&format!("{name},,,{b},\n")),
                Entry::Text(s) => out.push_str(&format!("{name},,,{},\n", quote(s))),
                Entry::Matrix { matrix, .. } => {
                    for i in 0..matrix.nrows() {
                        for j in 0..matrix.ncols() {
                            let z = matrix[(i, j)];
                            out.push_str(&format!("{name},{i},{j},{},{}\n", num(z.re), num(z.im)));
                        }
                    }
                }
                Entry::State(psi) => {
                    for (i, z) in psi.amplitudes().iter().enumerate() {
                        out.push_str(&format!("{name},{i},,{},{}\n", num(z.re), num(z.im)));
                    }
                }
                Entry::Json(v) => out.push_str(&format!("{name},,,{},\n", quote(&v.to_string()))),
            }
        }
        out
    }
}

fn quote(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Writes through a temporary sibling and renames it into place.
pub fn write_atomic(path: &Path, contents: &str) -> CliResult<()> {
    let name = path
        .file_name()
        .ok_or_else(|| CliError::Io(format!("{}: not a file path", path.display())))?;
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let tmp = dir.join(format!(".{}.{}.tmp", name.to_string_lossy(), std::process::id()));
    fs::write(&tmp, contents).map_err(|e| CliError::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| {
        let _ = fs::remove_file(&tmp);
        CliError::io(path, e)
    })
}

/// Sends a rendered report to `out`, or to stdout.
pub fn emit(report: &Report, out: Option<&Path>, format: Format) -> CliResult<()> {
    let text = report.render(format);
    match out {
        Some(path) => write_atomic(path, &text),
        None => std::io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Io(format!("stdout: {e}"))),
    }
}
