// Copyright 2026 The qcapacity Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Output formatting: CSV/JSON trace files and the run manifest.

use std::fs;
use std::io;
use std::path::Path;

use serde::Serialize;

use crate::grover::{TraceRecord, SAMPLING};
use crate::{bounds, linalg, qstate};

pub const CSV_HEADER: &str = "k,I_bits,S_avg_bits,S_branch_bits,delta_S_oracle_bits,fidelity_oracle,bures_oracle,fannes_bound_bits,step_bound_bits,fannes_ok,step_ok,fidelity_bound_ok";

pub const SWEEP_HEADER: &str = "purity,k,I_bits";

/// Formats `x` with 12 significant digits, trailing zeros removed.
/// Plain decimal notation is used for exponents in `[-5, 12)`.
pub fn format_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Tolerances {
    pub bound_check: f64,
    pub eigen_convergence: f64,
    pub eigen_clip: f64,
    pub density: f64,
    pub max_sweeps: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            bound_check: bounds::BOUND_TOLERANCE,
            eigen_convergence: linalg::CONVERGENCE_FACTOR,
            eigen_clip: linalg::CLIP_TOLERANCE,
            density: qstate::DENSITY_TOLERANCE,
            max_sweeps: linalg::MAX_SWEEPS,
        }
    }
}

/// Resolved configuration embedded in every output artifact.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_qubits: Option<usize>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub purities: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_blocks: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub priors: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub qubits_min: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub qubits_max: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub tolerances: Tolerances,
    pub sampling: &'static str,
}

impl RunManifest {
    pub fn new(command: &str) -> Self {
        Self {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            n_qubits: None,
            purities: Vec::new(),
            n_blocks: None,
            priors: None,
            qubits_min: None,
            qubits_max: None,
            seed: None,
            tolerances: Tolerances::default(),
            sampling: SAMPLING,
        }
    }

    pub fn for_trace(command: &str, n_qubits: usize, purities: &[f64], n_blocks: usize) -> Self {
        Self {
            n_qubits: Some(n_qubits),
            purities: purities.to_vec(),
            n_blocks: Some(n_blocks),
            priors: Some("uniform"),
            ..Self::new(command)
        }
    }

    /// `# key: value` lines, keys sorted, values as compact JSON.
    pub fn comment_lines(&self) -> String {
        let value = serde_json::to_value(self).expect("manifest serializes");
        let mut out = String::new();
        if let serde_json::Value::Object(map) = value {
            for (key, v) in map {
                let text = match v {
                    serde_json::Value::String(s) => s,
                    other => other.to_string(),
                };
                out.push_str(&format!("# {key}: {text}\n"));
            }
        }
        out
    }
}

fn flag(b: bool) -> &'static str {
    if b {
        "1"
    } else {
        "0"
    }
}

/// One CSV data row (no trailing newline).
pub fn csv_row(r: &TraceRecord) -> String {
    [
        r.k.to_string(),
        format_sig(r.mutual_information),
        format_sig(r.s_average),
        format_sig(r.s_branch),
        format_sig(r.delta_s_oracle),
        format_sig(r.fidelity_oracle),
        format_sig(r.bures_oracle),
        format_sig(r.fannes_bound),
        format_sig(r.step_bound),
        flag(r.fannes_ok).to_string(),
        flag(r.step_ok).to_string(),
        flag(r.fidelity_bound_ok).to_string(),
    ]
    .join(",")
}

pub fn trace_csv(manifest: &RunManifest, records: &[TraceRecord]) -> String {
    let mut out = manifest.comment_lines();
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&csv_row(r));
        out.push('\n');
    }
    out
}

#[derive(Serialize)]
struct TraceDocument<'a> {
    manifest: &'a RunManifest,
    records: &'a [TraceRecord],
}

pub fn trace_json(manifest: &RunManifest, records: &[TraceRecord]) -> String {
    let doc = TraceDocument { manifest, records };
    let mut s = serde_json::to_string_pretty(&doc).expect("trace serializes");
    s.push('\n');
    s
}

/// Long-format `purity,k,I_bits` table over several traces, in the order
/// given.
pub fn sweep_csv(manifest: &RunManifest, traces: &[(f64, Vec<TraceRecord>)]) -> String {
    let mut out = manifest.comment_lines();
    out.push_str(SWEEP_HEADER);
    out.push('\n');
    for (p, records) in traces {
        let p = format_sig(*p);
        for r in records {
            out.push_str(&format!(
                "{p},{},{}\n",
                r.k,
                format_sig(r.mutual_information)
            ));
        }
    }
    out
}

/// Writes to a sibling temporary file, then renames it into place.
pub fn write_atomic(path: &Path, contents: &str) -> io::Result<()> {
    let name = path.file_name().ok_or_else(|| {
        io::Error::new(io::ErrorKind::InvalidInput, "output path has no file name")
    })?;
    let mut tmp_name = std::ffi::OsString::from(".");
    tmp_name.push(name);
    tmp_name.push(".tmp");
    let tmp = path.with_file_name(tmp_name);
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(format_sig(0.0), "0");
        assert_eq!(format_sig(-0.0), "0");
        assert_eq!(format_sig(2.0), "2");
        assert_eq!(format_sig(3.0), "3");
        assert_eq!(format_sig(1.0 / 3.0), "0.333333333333");
        assert_eq!(format_sig(3.9245924889036488), "3.9245924889");
        assert_eq!(format_sig(0.95), "0.95");
        assert_eq!(format_sig(1234567.891011121), "1234567.89101");
        assert_eq!(format_sig(1.25e-7), "1.25e-7");
        assert_eq!(format_sig(-2.5e-16), "-2.5e-16");
        assert_eq!(format_sig(9.99999999999951), "10");
        assert_eq!(format_sig(1e15), "1e15");
    }

    #[test]
    fn manifest_lines_are_sorted_comments() {
        let m = RunManifest::for_trace("trace", 4, &[1.0], 12);
        let lines = m.comment_lines();
        assert!(lines.lines().all(|l| l.starts_with("# ")));
        assert!(lines.contains("# sampling: after-each-block\n"));
        assert!(lines.contains("# n_blocks: 12\n"));
        let keys: Vec<&str> = lines
            .lines()
            .map(|l| l[2..].split(':').next().unwrap())
            .collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
    }
}
