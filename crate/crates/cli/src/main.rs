//! `qmarina`: sweeps, comparisons and exports for the singly-excited open
//! Tavis-Cummings model.
//!
//! Exit codes: 0 success, 1 tolerance failure (`compare`), 2 usage or
//! input error.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use qmarina_core::output::{emit_csv, emit_json, emit_svg, format_number};
use qmarina_core::sweep::{run_sweep, Backend, SweepReport, SweepSpec};
use qmarina_core::{
    angles_from_coefficients, build_circuit, coefficients, export_qasm, run_circuit, TcParams,
};

#[derive(Parser)]
#[command(
    name = "qmarina",
    version,
    about = "Singly-excited open Tavis-Cummings simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the atomic amplitudes and populations at one time.
    Coeffs {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        t: f64,
    },
    /// Sweep a time grid over one or more backends.
    Sweep {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        sweep: SweepArgs,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Include per-backend wall-clock seconds in JSON output.
        #[arg(long)]
        timings: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Export the Q-MARINA circuit for one time as OpenQASM 2.0.
    Qasm {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        t: f64,
        /// Omit the classical register and measurements.
        #[arg(long)]
        no_measure: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample the circuit for one time and print the shot histogram as JSON.
    Sample {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        t: f64,
        #[arg(long, default_value_t = 40_000)]
        shots: u64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sweep and print the pairwise difference matrix; exit 1 if any entry exceeds --tol.
    Compare {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        sweep: SweepArgs,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
}

#[derive(Args)]
struct ModelArgs {
    /// Number of atoms.
    #[arg(long = "n")]
    n_atoms: usize,
    /// Single-atom coupling rate g.
    #[arg(long)]
    g: f64,
    /// Cavity loss rate kappa.
    #[arg(long)]
    kappa: f64,
    /// Initial atomic amplitudes, comma separated (default: atom 1 excited).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    c0: Option<Vec<f64>>,
}

impl ModelArgs {
    fn params(&self) -> Result<TcParams, String> {
        let result = match &self.c0 {
            Some(c0) => TcParams::new(self.n_atoms, self.g, self.kappa, c0.clone()),
            None => TcParams::first_atom_excited(self.n_atoms, self.g, self.kappa),
        };
        result.map_err(|e| e.to_string())
    }
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, default_value_t = 2.0)]
    t_max: f64,
    #[arg(long, default_value_t = 101)]
    steps: usize,
    /// Comma-separated subset of analytic,circuit,qme,volterra.
    #[arg(long, value_delimiter = ',', default_value = "analytic")]
    backends: Vec<Backend>,
    /// Finite-shot sampling for the circuit backend.
    #[arg(long)]
    shots: Option<u64>,
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

impl SweepArgs {
    fn spec(&self, params: TcParams) -> SweepSpec {
        SweepSpec {
            params,
            t_max: self.t_max,
            steps: self.steps,
            backends: self.backends.clone(),
            shots: self.shots,
            seed: self.seed,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Serialize)]
struct SampleOutput {
    t: f64,
    n_qubits: usize,
    shots: u64,
    seed: u64,
    counts: std::collections::BTreeMap<String, u64>,
    marginals: Vec<f64>,
}

enum Failure {
    Usage(String),
    Tolerance(String),
}

impl From<qmarina_core::Error> for Failure {
    fn from(e: qmarina_core::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn write_out(text: &str, out: Option<&PathBuf>) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display()))),
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Usage(format!("cannot write to stdout: {e}"))),
    }
}

fn check_time(t: f64) -> Result<(), Failure> {
    if t.is_finite() && t >= 0.0 {
        Ok(())
    } else {
        Err(Failure::Usage(format!(
            "--t must be a finite time >= 0, got {t}"
        )))
    }
}

fn diff_table(report: &SweepReport) -> String {
    let names: Vec<&str> = report.backends().iter().map(|b| b.name()).collect();
    let mut out = format!("{:<10}", "");
    for name in &names {
        out.push_str(&format!("{name:>14}"));
    }
    out.push('\n');
    for (i, name) in names.iter().enumerate() {
        out.push_str(&format!("{name:<10}"));
        for v in &report.max_abs_diff[i] {
            out.push_str(&format!("{:>14}", format!("{v:.3e}")));
        }
        out.push('\n');
    }
    out
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Coeffs { model, t } => {
            check_time(t)?;
            let params = model.params().map_err(Failure::Usage)?;
            let c = coefficients(&params, t)?;
            let mut text = String::from("atom,coefficient,population\n");
            for (i, v) in c.values.iter().enumerate() {
                text.push_str(&format!(
                    "{},{},{}\n",
                    i + 1,
                    format_number(*v),
                    format_number(v * v)
                ));
            }
            text.push_str(&format!("env,,{}\n", format_number(1.0 - c.norm_sqr())));
            write_out(&text, None)
        }
        Command::Sweep {
            model,
            sweep,
            format,
            timings,
            out,
        } => {
            let report = run_sweep(&sweep.spec(model.params().map_err(Failure::Usage)?))?;
            let text = match format {
                Format::Csv => emit_csv(&report),
                Format::Json => emit_json(&report, timings),
                Format::Svg => emit_svg(&report),
            };
            write_out(&text, out.as_ref())
        }
        Command::Qasm {
            model,
            t,
            no_measure,
            out,
        } => {
            check_time(t)?;
            let params = model.params().map_err(Failure::Usage)?;
            let c = coefficients(&params, t)?;
            let circuit = build_circuit(&angles_from_coefficients(&c.values)?)?;
            write_out(&export_qasm(&circuit, !no_measure), out.as_ref())
        }
        Command::Sample {
            model,
            t,
            shots,
            seed,
            out,
        } => {
            check_time(t)?;
            let params = model.params().map_err(Failure::Usage)?;
            let c = coefficients(&params, t)?;
            let circuit = build_circuit(&angles_from_coefficients(&c.values)?)?;
            let hist = run_circuit(&circuit)?.sample_counts(shots, seed)?;
            let report = SampleOutput {
                t,
                n_qubits: hist.n_qubits,
                shots,
                seed,
                counts: hist.bitstring_counts(),
                marginals: hist.marginals(),
            };
            let mut text = serde_json::to_string_pretty(&report).expect("histogram serializes");
            text.push('\n');
            write_out(&text, out.as_ref())
        }
        Command::Compare { model, sweep, tol } => {
            if tol.is_nan() || tol < 0.0 {
                return Err(Failure::Usage(format!("--tol must be >= 0, got {tol}")));
            }
            let report = run_sweep(&sweep.spec(model.params().map_err(Failure::Usage)?))?;
            write_out(&diff_table(&report), None)?;
            let worst = report.worst_diff();
            if worst > tol {
                Err(Failure::Tolerance(format!(
                    "max difference {worst:e} exceeds tolerance {tol:e}"
                )))
            } else {
                write_out(
                    &format!("max difference {worst:e} within tolerance {tol:e}\n"),
                    None,
                )
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Tolerance(msg)) => {
            eprintln!("qmarina: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("qmarina: error: {msg}");
            eprintln!("Usage: qmarina <coeffs|sweep|qasm|sample|compare> --n <N> --g <G> --kappa <KAPPA> [OPTIONS]");
            ExitCode::from(2)
        }
    }
}
