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

//! Command-line front end.
//!
//! Exit codes: 0 success, 1 numerical failure or property violation,
//! 2 invalid arguments.

pub mod output;
pub mod verify;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crate::bounds;
use crate::grover::{run_trace, GroverConfig, TraceRecord};
use crate::{Error, Result};

use output::{format_sig, RunManifest};
use verify::VerifyOptions;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "qcapacity",
    version,
    about = "Register mutual information of Grover search under mixed initial states"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Mutual information after each Grover block for one purity.
    Trace(TraceArgs),
    /// Traces for several purities plus a combined long-format table.
    Sweep(SweepArgs),
    /// Run the property suite and print a pass/fail table.
    Verify(VerifyArgs),
    /// Entropy threshold, per-query bound and minimum query count.
    Threshold(ThresholdArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TraceFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ReportFormat {
    Text,
    Json,
}

#[derive(Debug, clap::Args)]
struct TraceArgs {
    #[arg(long)]
    qubits: usize,
    /// Per-qubit initial state p|0⟩⟨0| + (1−p)|1⟩⟨1|.
    #[arg(long, default_value_t = 1.0)]
    purity: f64,
    #[arg(long, default_value_t = 25)]
    blocks: usize,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = TraceFormat::Csv)]
    format: TraceFormat,
}

#[derive(Debug, clap::Args)]
struct SweepArgs {
    #[arg(long)]
    qubits: usize,
    /// Comma-separated purities, e.g. 1.0,0.95,0.7.
    #[arg(long, value_delimiter = ',', required = true)]
    purity: Vec<f64>,
    #[arg(long, default_value_t = 25)]
    blocks: usize,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, clap::Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 2)]
    qubits_min: usize,
    #[arg(long, default_value_t = 6)]
    qubits_max: usize,
    #[arg(long, default_value_t = 1e-9)]
    tolerance: f64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Blocks per trace in the trace-based properties.
    #[arg(long, default_value_t = 25)]
    blocks: usize,
}

#[derive(Debug, clap::Args)]
struct ThresholdArgs {
    #[arg(long)]
    qubits: usize,
    #[arg(long, default_value_t = 1.0)]
    purity: f64,
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    format: ReportFormat,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    return EXIT_OK;
                }
                _ => EXIT_USAGE,
            };
            let _ = write!(err, "{}", e.render());
            return code;
        }
    };
    let result = match cli.command {
        Command::Trace(a) => cmd_trace(&a, out),
        Command::Sweep(a) => cmd_sweep(&a, out),
        Command::Verify(a) => cmd_verify(&a, out),
        Command::Threshold(a) => cmd_threshold(&a, out),
    };
    match result {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Runtime(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_FAILURE
        }
    }
}

enum Failure {
    Usage(String),
    Runtime(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Runtime(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Runtime(e.into())
    }
}

fn usage(e: Error) -> Failure {
    match e {
        Error::InvalidArgument(msg) => Failure::Usage(msg),
        other => Failure::Usage(other.to_string()),
    }
}

type CmdResult = std::result::Result<i32, Failure>;

fn trace_config(
    qubits: usize,
    purity: f64,
    blocks: usize,
) -> std::result::Result<GroverConfig, Failure> {
    let cfg = GroverConfig::new(qubits, purity, blocks);
    cfg.validate().map_err(usage)?;
    Ok(cfg)
}

fn emit(path: Option<&PathBuf>, contents: &str, out: &mut dyn Write) -> Result<()> {
    match path {
        Some(p) => output::write_atomic(p, contents)?,
        None => out.write_all(contents.as_bytes())?,
    }
    Ok(())
}

fn cmd_trace(a: &TraceArgs, out: &mut dyn Write) -> CmdResult {
    let cfg = trace_config(a.qubits, a.purity, a.blocks)?;
    let records = run_trace(&cfg)?;
    let manifest = RunManifest::for_trace("trace", a.qubits, &[a.purity], a.blocks);
    let text = match a.format {
        TraceFormat::Csv => output::trace_csv(&manifest, &records),
        TraceFormat::Json => output::trace_json(&manifest, &records),
    };
    emit(a.out.as_ref(), &text, out)?;
    Ok(EXIT_OK)
}

/// File name of one purity's trace inside a sweep directory.
pub fn sweep_trace_file(purity: f64) -> String {
    format!("trace_p{}.csv", format_sig(purity))
}

pub const SWEEP_COMBINED_FILE: &str = "sweep.csv";

fn cmd_sweep(a: &SweepArgs, out: &mut dyn Write) -> CmdResult {
    if a.purity.is_empty() {
        return Err(Failure::Usage("purity list is empty".into()));
    }
    let configs = a
        .purity
        .iter()
        .map(|&p| trace_config(a.qubits, p, a.blocks))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    if !a.out.is_dir() {
        std::fs::create_dir_all(&a.out)?;
    }
    let manifest = RunManifest::for_trace("sweep", a.qubits, &a.purity, a.blocks);

    let traces: Vec<(f64, Vec<TraceRecord>)> = configs
        .par_iter()
        .map(|cfg| {
            let records = run_trace(cfg)?;
            let path = a.out.join(sweep_trace_file(cfg.purity));
            output::write_atomic(&path, &output::trace_csv(&manifest, &records))?;
            Ok((cfg.purity, records))
        })
        .collect::<Result<_>>()?;
    output::write_atomic(
        &a.out.join(SWEEP_COMBINED_FILE),
        &output::sweep_csv(&manifest, &traces),
    )?;

    let n = 1usize << a.qubits;
    writeln!(out, "purity,max_I_bits,ceiling_bits,file")?;
    for (p, records) in &traces {
        let max_i = records
            .iter()
            .map(|r| r.mutual_information)
            .fold(0.0, f64::max);
        let ceiling = (n as f64).log2() - bounds::bound_report(a.qubits, *p)?.initial_entropy;
        writeln!(
            out,
            "{},{},{},{}",
            format_sig(*p),
            format_sig(max_i),
            format_sig(ceiling),
            sweep_trace_file(*p)
        )?;
    }
    Ok(EXIT_OK)
}

fn cmd_verify(a: &VerifyArgs, out: &mut dyn Write) -> CmdResult {
    let opts = VerifyOptions {
        qubits_min: a.qubits_min,
        qubits_max: a.qubits_max,
        tolerance: a.tolerance,
        seed: a.seed,
        blocks: a.blocks,
        ..VerifyOptions::default()
    };
    opts.validate().map_err(usage)?;
    let outcomes = verify::run_verification(&opts)?;

    let mut manifest = RunManifest::new("verify");
    manifest.qubits_min = Some(opts.qubits_min);
    manifest.qubits_max = Some(opts.qubits_max);
    manifest.n_blocks = Some(opts.blocks);
    manifest.seed = Some(opts.seed);
    manifest.purities = verify::PURITIES.to_vec();
    manifest.tolerances.bound_check = opts.tolerance;
    write!(out, "{}", manifest.comment_lines())?;

    writeln!(
        out,
        "{:<38} {:>6} {:>12}  status",
        "property", "cases", "worst"
    )?;
    for o in &outcomes {
        let worst = if o.cases == 0 {
            "n/a".to_string()
        } else {
            format!("{:.3e}", o.worst + 0.0)
        };
        let status = if o.passed() { "PASS" } else { "FAIL" };
        writeln!(out, "{:<38} {:>6} {:>12}  {status}", o.name, o.cases, worst)?;
    }
    let failed: Vec<_> = outcomes.iter().filter(|o| !o.passed()).collect();
    for o in &failed {
        if let Some(instance) = &o.failure {
            writeln!(out, "FAIL {}: {}", o.name, instance)?;
        }
    }
    writeln!(
        out,
        "{}/{} properties passed",
        outcomes.len() - failed.len(),
        outcomes.len()
    )?;
    Ok(if failed.is_empty() {
        EXIT_OK
    } else {
        EXIT_FAILURE
    })
}

fn cmd_threshold(a: &ThresholdArgs, out: &mut dyn Write) -> CmdResult {
    let report = bounds::bound_report(a.qubits, a.purity).map_err(usage)?;
    match a.format {
        ReportFormat::Json => {
            let mut manifest = RunManifest::new("threshold");
            manifest.n_qubits = Some(a.qubits);
            manifest.purities = vec![a.purity];
            let doc = serde_json::json!({ "manifest": manifest, "report": report });
            writeln!(
                out,
                "{}",
                serde_json::to_string_pretty(&doc).expect("report serializes")
            )?;
        }
        ReportFormat::Text => {
            writeln!(out, "n_qubits: {}", report.n_qubits)?;
            writeln!(out, "N: {}", report.n)?;
            writeln!(out, "purity: {}", format_sig(report.purity))?;
            writeln!(
                out,
                "initial_entropy_bits: {}",
                format_sig(report.initial_entropy)
            )?;
            writeln!(
                out,
                "threshold_bits: {}",
                format_sig(report.threshold_entropy)
            )?;
            writeln!(out, "min_queries: {}", format_sig(report.min_queries))?;
            writeln!(out, "step_bound_bits: {}", format_sig(report.step_bound))?;
            writeln!(
                out,
                "no_speedup_sufficient: {}",
                report.no_speedup_sufficient
            )?;
        }
    }
    Ok(EXIT_OK)
}
