//! Command-line interface.
//!
//! Standard output carries only machine-readable payloads (JSON, CSV,
//! Markdown tables, hypergraph files); diagnostics go to standard error.
//! Exit status is 0 on success, 2 for usage or parameter errors and 3 when a
//! computation fails.

use std::fmt;
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::hypergraph::{generate_configuration, generate_simple, Hypergraph, HypergraphError};
use crate::ode::{solve, OdeError, RateConfig, RateMode, SolveResult};
use crate::oracle::{exact_max_independent, exact_max_matching, OracleError};
use crate::process::{
    default_stride, replicate, run_process, run_reference, valid_vertex_count, PairingState, ProcessError, Summary,
};
use crate::rng;
use crate::ProcessKind;

#[derive(Debug, Parser)]
#[command(name = "hypergreedy", version, about = "Degree-greedy matching and independent-set processes on random regular uniform hypergraphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Integrate the phase-blended ODEs for one (k, d) and print the result as JSON.
    Solve {
        #[command(flatten)]
        cell: Cell,
        #[command(flatten)]
        solver: SolverArgs,
        /// Also write the sampled trajectory as CSV.
        #[arg(long, value_name = "PATH")]
        trajectory: Option<PathBuf>,
    },
    /// Solve every cell of a k/d grid.
    Table {
        #[arg(long, alias = "kind")]
        process: ProcessKind,
        /// Uniformity range `lo:hi` (inclusive) or a single value.
        #[arg(short)]
        k: Span,
        /// Regularity range `lo:hi` (inclusive) or a single value.
        #[arg(short)]
        d: Span,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(long, value_enum, default_value_t = Format::Md)]
        format: Format,
        /// Write full-precision JSON here as well.
        #[arg(long, value_name = "PATH")]
        json: Option<PathBuf>,
    },
    /// Run the process on random instances and summarise the output fraction.
    Simulate {
        #[command(flatten)]
        cell: Cell,
        #[command(flatten)]
        sim: SimArgs,
        /// Run on explicit simple hypergraphs instead of the pairing model.
        #[arg(long)]
        simple: bool,
        /// Write the first run's trajectory as CSV.
        #[arg(long, value_name = "PATH")]
        trajectory: Option<PathBuf>,
    },
    /// Compare ODE values with simulation means.
    Compare {
        #[command(flatten)]
        cell: Cell,
        #[command(flatten)]
        sim: SimArgs,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Write a random k-uniform d-regular hypergraph file.
    Gen {
        #[arg(short)]
        k: usize,
        #[arg(short)]
        d: usize,
        #[arg(short)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Reject draws with loops or repeated edges.
        #[arg(long)]
        simple: bool,
        #[arg(long, default_value_t = 10_000)]
        max_attempts: usize,
    },
    /// Print the Berge girth of a hypergraph file (stdin when omitted).
    Girth { file: Option<PathBuf> },
    /// Write the dual of a hypergraph file (stdin when omitted).
    Dual { file: Option<PathBuf> },
    /// Exact maximum matching or independent set of a small hypergraph file.
    Oracle {
        #[arg(long, alias = "process")]
        kind: ProcessKind,
        file: Option<PathBuf>,
        /// Search node limit.
        #[arg(long, default_value_t = 100_000_000)]
        budget: u64,
    },
}

#[derive(Debug, Args)]
pub struct Cell {
    #[arg(long, alias = "kind")]
    pub process: ProcessKind,
    #[arg(short)]
    pub k: usize,
    #[arg(short)]
    pub d: usize,
}

#[derive(Debug, Args)]
pub struct SolverArgs {
    /// Fixed RK4 step.
    #[arg(long, default_value_t = RateConfig::DEFAULT_STEP)]
    pub step: f64,
    /// Stop once the scaled vertex-point mass drops below this.
    #[arg(long, default_value_t = RateConfig::DEFAULT_EPS_END)]
    pub eps_end: f64,
    /// Use the independent-process edge rates exactly as in the analysis,
    /// without the conservation correction.
    #[arg(long)]
    pub literal: bool,
}

#[derive(Debug, Args)]
pub struct SimArgs {
    #[arg(short, default_value_t = 1_000_000)]
    pub n: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 5)]
    pub reps: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Md,
}

/// Inclusive integer range written `lo:hi`, or a single value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Span {
    pub lo: usize,
    pub hi: usize,
}

impl FromStr for Span {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let num = |t: &str| t.trim().parse::<usize>().map_err(|_| format!("`{t}` is not a non-negative integer"));
        let (lo, hi) = match s.split_once(':') {
            Some((a, b)) => (num(a)?, num(b)?),
            None => (num(s)?, num(s)?),
        };
        if lo > hi {
            return Err(format!("empty range {lo}:{hi}"));
        }
        Ok(Span { lo, hi })
    }
}

impl Span {
    fn values(self) -> std::ops::RangeInclusive<usize> {
        self.lo..=self.hi
    }
}

#[derive(Debug)]
pub enum CliError {
    /// Bad parameters or input; exit status 2.
    Usage(String),
    /// A computation failed; exit status 3.
    Compute(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Compute(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Compute(m) => f.write_str(m),
        }
    }
}

impl From<OdeError> for CliError {
    fn from(e: OdeError) -> Self {
        match e {
            OdeError::InvalidConfig(_) => CliError::Usage(e.to_string()),
            _ => CliError::Compute(e.to_string()),
        }
    }
}

impl From<ProcessError> for CliError {
    fn from(e: ProcessError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::BudgetExhausted(_) => CliError::Compute(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

fn io_err(path: &Path, e: io::Error) -> CliError {
    CliError::Usage(format!("{}: {e}", path.display()))
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| io_err(path, e))
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    out.write_all(text.as_bytes())
        .map_err(|e| CliError::Compute(format!("writing output: {e}")))
}

fn emit_json(out: &mut dyn Write, v: &Value) -> Result<(), CliError> {
    emit(out, &(serde_json::to_string_pretty(v).expect("JSON values serialize") + "\n"))
}

fn rate_config(process: ProcessKind, k: usize, d: usize, s: &SolverArgs) -> RateConfig {
    let mode = if s.literal {
        RateMode::Literal
    } else {
        RateMode::ConservationCorrected
    };
    RateConfig {
        mode,
        step: s.step,
        eps_end: s.eps_end,
        ..RateConfig::new(process, k, d)
    }
}

fn read_hypergraph(file: Option<&Path>, stdin: &mut dyn Read) -> Result<Hypergraph, CliError> {
    let (name, text) = match file {
        Some(p) => (p.display().to_string(), fs::read_to_string(p).map_err(|e| io_err(p, e))?),
        None => {
            let mut s = String::new();
            stdin
                .read_to_string(&mut s)
                .map_err(|e| CliError::Usage(format!("<stdin>: {e}")))?;
            ("<stdin>".to_string(), s)
        }
    };
    Hypergraph::decode(&text).map_err(|e| match e {
        HypergraphError::Parse { line, message } => CliError::Usage(format!("{name}:{line}: {message}")),
        other => CliError::Usage(format!("{name}: {other}")),
    })
}

fn admissible_n(k: usize, d: usize, n: usize) -> usize {
    let m = valid_vertex_count(k, d, n);
    if m != n {
        eprintln!("note: k = {k} does not divide d*n; using n = {m}");
    }
    m
}

/// Runs `reps` replications, through explicit simple hypergraphs if asked.
fn simulate_summary(cell: &Cell, sim: &SimArgs, simple: bool) -> Result<Summary, CliError> {
    let n = admissible_n(cell.k, cell.d, sim.n);
    if !simple {
        return Ok(replicate(cell.k, cell.d, n, cell.process, sim.reps, sim.seed)?);
    }
    if sim.reps == 0 {
        return Err(CliError::Usage("reps must be at least 1".into()));
    }
    let seeds: Vec<u64> = (1..=sim.reps as u64).map(|i| sim.seed.wrapping_add(i)).collect();
    let sizes = seeds
        .par_iter()
        .map(|&s| {
            let h = generate_simple(cell.k, cell.d, n, s, 10_000).map_err(|e| match e {
                HypergraphError::AttemptsExhausted { .. } => CliError::Compute(e.to_string()),
                other => CliError::Usage(other.to_string()),
            })?;
            Ok(run_reference(&h, cell.process, rng::derive_seed(s, u64::MAX)).output.len())
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok(Summary::from_sizes(cell.process, cell.k, cell.d, n, seeds, &sizes))
}

fn table_cells(process: ProcessKind, k: Span, d: Span, s: &SolverArgs) -> Vec<(usize, usize, Result<SolveResult, OdeError>)> {
    let cells: Vec<(usize, usize)> = k.values().flat_map(|k| d.values().map(move |d| (k, d))).collect();
    cells
        .into_par_iter()
        .map(|(k, d)| (k, d, solve(&rate_config(process, k, d, s))))
        .collect()
}

fn table_json(process: ProcessKind, s: &SolverArgs, cells: &[(usize, usize, Result<SolveResult, OdeError>)]) -> Value {
    let mode = (process == ProcessKind::Independent).then(|| rate_config(process, 3, 2, s).mode.as_str());
    json!({
        "process": process.as_str(),
        "mode": mode,
        "solver": { "h": s.step, "eps_end": s.eps_end },
        "cells": cells.iter().map(|(k, d, r)| match r {
            Ok(r) => json!({ "k": k, "d": d, "value": r.value, "rounded": round3(r.value) }),
            Err(e) => json!({ "k": k, "d": d, "error": e.to_string() }),
        }).collect::<Vec<_>>(),
    })
}

fn round3(x: f64) -> f64 {
    (x * 1000.0).round() / 1000.0
}

fn table_text(format: Format, k: Span, d: Span, cells: &[(usize, usize, Result<SolveResult, OdeError>)]) -> String {
    let cell = |k: usize, d: usize| {
        match cells.iter().find(|c| c.0 == k && c.1 == d).map(|c| &c.2) {
            Some(Ok(r)) => format!("{:.3}", r.value),
            _ => "error".to_string(),
        }
    };
    let mut out = String::new();
    match format {
        Format::Csv => {
            out.push_str("k,d,value,rounded\n");
            for (k, d, r) in cells {
                match r {
                    Ok(r) => out.push_str(&format!("{k},{d},{},{:.3}\n", r.value, r.value)),
                    Err(_) => out.push_str(&format!("{k},{d},,\n")),
                }
            }
        }
        Format::Md => {
            out.push_str("| k \\ d |");
            for dv in d.values() {
                out.push_str(&format!(" {dv} |"));
            }
            out.push_str("\n|---|");
            out.push_str(&"---|".repeat(d.values().count()));
            out.push('\n');
            for kv in k.values() {
                out.push_str(&format!("| {kv} |"));
                for dv in d.values() {
                    out.push_str(&format!(" {} |", cell(kv, dv)));
                }
                out.push('\n');
            }
        }
        Format::Json => unreachable!("JSON is rendered separately"),
    }
    out
}

/// Runs one parsed command, writing payloads to `out` and reading hypergraph
/// files from `stdin` when no path is given.
pub fn run(cli: Cli, out: &mut dyn Write, stdin: &mut dyn Read) -> Result<(), CliError> {
    match cli.command {
        Command::Solve { cell, solver, trajectory } => {
            let r = solve(&rate_config(cell.process, cell.k, cell.d, &solver))?;
            if let Some(p) = trajectory {
                write_file(&p, &r.trajectory_csv())?;
            }
            emit_json(out, &r.to_json())
        }
        Command::Table {
            process,
            k,
            d,
            solver,
            format,
            json,
        } => {
            let cells = table_cells(process, k, d, &solver);
            let full = table_json(process, &solver, &cells);
            if let Some(p) = json {
                write_file(&p, &(serde_json::to_string_pretty(&full).unwrap() + "\n"))?;
            }
            match format {
                Format::Json => emit_json(out, &full)?,
                f => emit(out, &table_text(f, k, d, &cells))?,
            }
            let failed: Vec<String> = cells
                .iter()
                .filter_map(|(k, d, r)| r.as_ref().err().map(|e| format!("({k},{d}): {e}")))
                .collect();
            if failed.is_empty() {
                Ok(())
            } else {
                Err(CliError::Compute(format!("{} cell(s) failed: {}", failed.len(), failed.join("; "))))
            }
        }
        Command::Simulate {
            cell,
            sim,
            simple,
            trajectory,
        } => {
            if simple && trajectory.is_some() {
                return Err(CliError::Usage("--trajectory is only available for pairing-model runs".into()));
            }
            let summary = simulate_summary(&cell, &sim, simple)?;
            if let Some(p) = trajectory {
                let n = summary.n;
                let first = PairingState::new(cell.k, cell.d, n, summary.seeds[0])?;
                let r = run_process(first, cell.process, Some(default_stride(n)))?;
                write_file(&p, &r.trajectory_csv())?;
            }
            eprintln!(
                "{} k={} d={} n={}: mean {:.5} (std {:.5}, {} reps)",
                summary.process, summary.k, summary.d, summary.n, summary.mean, summary.std, summary.reps
            );
            emit_json(out, &serde_json::to_value(&summary).expect("summary serializes"))
        }
        Command::Compare { cell, sim, solver } => {
            let summary = simulate_summary(&cell, &sim, false)?;
            let modes: Vec<RateMode> = match cell.process {
                ProcessKind::Matching => vec![RateMode::ConservationCorrected],
                ProcessKind::Independent => vec![RateMode::ConservationCorrected, RateMode::Literal],
            };
            let mut rows = Vec::new();
            for mode in modes {
                let cfg = RateConfig {
                    mode,
                    ..rate_config(cell.process, cell.k, cell.d, &solver)
                };
                let r = solve(&cfg)?;
                rows.push((mode, r.value, (r.value - summary.mean).abs()));
            }
            let best = rows
                .iter()
                .min_by(|a, b| a.2.total_cmp(&b.2))
                .expect("at least one mode");
            let ode: Vec<Value> = rows
                .iter()
                .map(|(mode, value, dev)| {
                    let mode = (cell.process == ProcessKind::Independent).then(|| mode.as_str());
                    json!({ "mode": mode, "value": value, "deviation": dev, "within_0_003": *dev <= 0.003 })
                })
                .collect();
            let adjudicated = (cell.process == ProcessKind::Independent).then(|| best.0.as_str());
            for (mode, value, dev) in &rows {
                eprintln!("ODE {:<22} {value:.5}  |ODE - sim| = {dev:.5}", mode.as_str());
            }
            eprintln!("simulation mean {:.5} over {} runs at n = {}", summary.mean, summary.reps, summary.n);
            emit_json(
                out,
                &json!({
                    "process": cell.process.as_str(),
                    "k": cell.k,
                    "d": cell.d,
                    "simulation": summary,
                    "ode": ode,
                    "adjudicated": adjudicated,
                }),
            )
        }
        Command::Gen {
            k,
            d,
            n,
            seed,
            simple,
            max_attempts,
        } => {
            let h = if simple {
                generate_simple(k, d, n, seed, max_attempts)
            } else {
                generate_configuration(k, d, n, seed)
            }
            .map_err(|e| match e {
                HypergraphError::AttemptsExhausted { .. } => CliError::Compute(e.to_string()),
                other => CliError::Usage(other.to_string()),
            })?;
            emit(out, &h.encode())
        }
        Command::Girth { file } => {
            let h = read_hypergraph(file.as_deref(), stdin)?;
            emit(out, &format!("{}\n", h.girth()))
        }
        Command::Dual { file } => {
            let h = read_hypergraph(file.as_deref(), stdin)?;
            let dual = h.dual().map_err(|e| CliError::Usage(e.to_string()))?;
            emit(out, &dual.encode())
        }
        Command::Oracle { kind, file, budget } => {
            let h = read_hypergraph(file.as_deref(), stdin)?;
            let r = match kind {
                ProcessKind::Matching => exact_max_matching(&h, budget)?,
                ProcessKind::Independent => exact_max_independent(&h, budget)?,
            };
            emit_json(
                out,
                &json!({ "kind": kind.as_str(), "value": r.value, "witness": r.witness, "nodes": r.nodes }),
            )
        }
    }
}

/// Entry point for the binary: parses `std::env::args`, runs the command and
/// maps failures to exit codes.
pub fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match run(cli, &mut out, &mut io::stdin()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
