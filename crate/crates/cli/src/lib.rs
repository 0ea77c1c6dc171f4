//! Command-line front end: per-cell reports, DOT and table export, and
//! parallel sweeps over systems and moduli.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use numera::catalog::{resolve, ResolvedSystem};
use numera::divisibility::{build_divisibility_direct, verify_theorem, VerificationReport};
use numera::numlang::check_hypotheses;
use numera::Dfa;
use rayon::prelude::*;

/// Exit code when every asserted invariant holds.
pub const EXIT_OK: i32 = 0;
/// Exit code for bad input: unknown system, unreadable file, bad arguments.
pub const EXIT_INPUT: i32 = 1;
/// Exit code when a report records an assertion failure.
pub const EXIT_ASSERTION: i32 = 2;

pub const CSV_HEADER: [&str; 18] = [
    "system",
    "m",
    "k",
    "smith",
    "S",
    "preperiod",
    "period",
    "predicted_infinite",
    "total_states",
    "infinite_states",
    "finite_states",
    "lower_bound",
    "h1",
    "h2",
    "purely_periodic",
    "cross_equivalent",
    "oracle_length",
    "error",
];

#[derive(Debug, Parser)]
#[command(name = "numera", version, about = "Automata for multiples in linear numeration systems")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build and verify the automaton of multiples of M, print the report as JSON.
    Analyze {
        /// Preset (fibonacci, lbonacci:<l>, sqrt2plus1) or JSON definition file.
        system: String,
        m: u64,
        #[arg(long, env = "NUMERA_ORACLE_LEN", default_value_t = 12)]
        oracle_length: usize,
    },
    /// Emit the canonical automaton of multiples of M, or of the numeration
    /// language with `numlang`, as Graphviz DOT.
    Dot {
        system: String,
        /// A modulus, or `numlang`.
        target: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit the transition table of the canonical automaton of multiples of M.
    Table {
        system: String,
        target: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Report (H.1), (H.2) and the zero-return bounds of the numeration automaton.
    Hypotheses { system: String },
    /// One report per (system, m), in the given system order and ascending m.
    Sweep {
        #[arg(long, value_delimiter = ',', required = true)]
        systems: Vec<String>,
        #[arg(long)]
        m_min: u64,
        #[arg(long)]
        m_max: u64,
        #[arg(long, env = "NUMERA_ORACLE_LEN", default_value_t = 12)]
        oracle_length: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Failure of a command; the variant selects the exit code.
#[derive(Debug)]
pub enum Failure {
    Input(String),
    Assertion,
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Input(_) => EXIT_INPUT,
            Failure::Assertion => EXIT_ASSERTION,
        }
    }
}

impl From<numera::Error> for Failure {
    fn from(e: numera::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

/// Outcome of one sweep cell.
pub struct SweepRow {
    pub system: String,
    pub m: u64,
    pub report: Option<VerificationReport>,
    pub error: Option<String>,
}

impl SweepRow {
    pub fn failed(&self) -> bool {
        self.error.is_some()
    }

    fn csv_record(&self) -> Vec<String> {
        let mut rec = vec![self.system.clone(), self.m.to_string()];
        match &self.report {
            Some(r) => {
                let smith: Vec<String> = r.smith.iter().map(ToString::to_string).collect();
                rec.extend([
                    r.k.to_string(),
                    smith.join(" "),
                    r.s_um.to_string(),
                    r.period.preperiod.to_string(),
                    r.period.period.to_string(),
                    r.predicted_infinite.to_string(),
                    r.total_states.to_string(),
                    r.infinite_states.to_string(),
                    r.finite_states.to_string(),
                    r.lower_bound.to_string(),
                    r.h1.to_string(),
                    r.h2.to_string(),
                    r.purely_periodic.to_string(),
                    r.cross_equivalent.to_string(),
                    r.oracle_length.to_string(),
                ]);
            }
            None => rec.extend(std::iter::repeat_n(String::new(), CSV_HEADER.len() - 3)),
        }
        rec.push(self.error.clone().unwrap_or_default());
        rec
    }

    fn json(&self) -> serde_json::Value {
        let mut value = match &self.report {
            Some(r) => serde_json::to_value(r).expect("report serialises"),
            None => serde_json::json!({ "system": self.system, "m": self.m }),
        };
        if let Some(e) = &self.error {
            value["error"] = e.clone().into();
        }
        value
    }
}

/// Runs every `(system, m)` cell, in parallel, returning rows in input order.
pub fn sweep(systems: &[String], m_min: u64, m_max: u64, oracle_length: usize) -> Vec<SweepRow> {
    let resolved: Vec<(String, Result<ResolvedSystem, String>)> =
        systems.iter().map(|s| (s.clone(), resolve(s).map_err(|e| e.to_string()))).collect();
    let cells: Vec<(usize, u64)> =
        (0..resolved.len()).flat_map(|i| (m_min..=m_max).map(move |m| (i, m))).collect();
    cells
        .par_iter()
        .map(|&(i, m)| {
            let (name, system) = &resolved[i];
            let (label, outcome) = match system {
                Ok(sys) => (sys.label.clone(), verify_theorem(&sys.system, &sys.automaton, m, oracle_length)),
                Err(e) => return SweepRow { system: name.clone(), m, report: None, error: Some(e.clone()) },
            };
            match outcome {
                Ok(report) => {
                    let error = (!report.failures.is_empty()).then(|| report.failures.join("; "));
                    SweepRow { system: label, m, report: Some(report), error }
                }
                Err(e) => SweepRow { system: label, m, report: None, error: Some(e.to_string()) },
            }
        })
        .collect()
}

pub fn render_csv(rows: &[SweepRow]) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(CSV_HEADER).expect("in-memory write");
    for row in rows {
        writer.write_record(row.csv_record()).expect("in-memory write");
    }
    String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("utf-8")
}

pub fn render_json(rows: &[SweepRow]) -> String {
    let values: Vec<serde_json::Value> = rows.iter().map(SweepRow::json).collect();
    let mut text = serde_json::to_string_pretty(&values).expect("json");
    text.push('\n');
    text
}

fn parse_modulus(text: &str) -> Result<u64, Failure> {
    text.parse().map_err(|_| Failure::Input(format!("expected a modulus or `numlang`, got `{text}`")))
}

/// Canonical automaton for `target`: the numeration language or multiples of m.
fn target_automaton(system: &str, target: &str) -> Result<Dfa, Failure> {
    let resolved = resolve(system)?;
    if target == "numlang" {
        return Ok(resolved.automaton.minimize());
    }
    let m = parse_modulus(target)?;
    Ok(build_divisibility_direct(&resolved.automaton, &resolved.system, m)?)
}

fn emit(text: &str, out: Option<&PathBuf>, stdout: &mut dyn Write) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display()))),
        None => Ok(stdout.write_all(text.as_bytes())?),
    }
}

/// Executes a parsed command, writing results to `stdout`.
pub fn execute(command: Command, stdout: &mut dyn Write) -> Result<(), Failure> {
    match command {
        Command::Analyze { system, m, oracle_length } => {
            let resolved = resolve(&system)?;
            let report = verify_theorem(&resolved.system, &resolved.automaton, m, oracle_length)?;
            writeln!(stdout, "{}", report.to_json_pretty())?;
            if report.all_asserted_hold() {
                Ok(())
            } else {
                Err(Failure::Assertion)
            }
        }
        Command::Dot { system, target, out } => emit(&target_automaton(&system, &target)?.to_dot(), out.as_ref(), stdout),
        Command::Table { system, target, out } => {
            emit(&target_automaton(&system, &target)?.to_transition_table("r"), out.as_ref(), stdout)
        }
        Command::Hypotheses { system } => {
            let resolved = resolve(&system)?;
            let json = serde_json::to_string_pretty(&check_hypotheses(&resolved.automaton).to_json())
                .expect("hypotheses serialise");
            writeln!(stdout, "{json}")?;
            Ok(())
        }
        Command::Sweep { systems, m_min, m_max, oracle_length, out, format } => {
            if m_min < 2 {
                return Err(Failure::Input(format!("--m-min must be at least 2, got {m_min}")));
            }
            let rows = sweep(&systems, m_min, m_max, oracle_length);
            let text = match format {
                Format::Csv => render_csv(&rows),
                Format::Json => render_json(&rows),
            };
            emit(&text, out.as_ref(), stdout)?;
            if rows.iter().any(SweepRow::failed) {
                Err(Failure::Assertion)
            } else {
                Ok(())
            }
        }
    }
}

/// Parses `args` and runs the command; returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    match execute(cli.command, stdout) {
        Ok(()) => EXIT_OK,
        Err(failure) => {
            if let Failure::Input(message) = &failure {
                let _ = writeln!(stderr, "error: {message}");
            }
            failure.exit_code()
        }
    }
}
