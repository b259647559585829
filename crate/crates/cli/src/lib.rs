//! Batch front end: every subcommand returns its report text and an exit code.
//!
//! Exit codes are `0` when every check passes, `1` when a check fails and
//! `2` for usage, input or format errors.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{CommandFactory, Parser, Subcommand, ValueEnum};
use qand::circuit::Circuit;
use qand::codes::{self, StabilizerCode};
use qand::error::Error;
use qand::protocols::{self, CorrectionTable};
use qand::report;
use qand::sim::{self, EmulationTarget};
use qand::synth::{self, AndVariant, QubitGate};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "qand", version, about = "Exact checks for qutrit Clifford+T circuits, codes and protocols")]
pub struct Cli {
    /// Maximum number of worker threads.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Validate a code file and search its distance up to a weight bound.
    VerifyCode {
        file: PathBuf,
        #[arg(long, default_value_t = 3)]
        max_weight: usize,
    },
    /// Check that a layer implements a logical circuit on the encoder isometry.
    VerifyTransversal {
        code: PathBuf,
        #[arg(long)]
        layer: PathBuf,
        #[arg(long)]
        logical: PathBuf,
        /// Allow multi-wire gates in the layer.
        #[arg(long)]
        block_local: bool,
    },
    /// Concatenate two code files (inner has k = 1) and search the distance.
    VerifyConcat {
        outer: PathBuf,
        inner: PathBuf,
        #[arg(long, default_value_t = 3)]
        max_weight: usize,
    },
    /// Run a protocol verifier and print its certificate.
    VerifyProtocol {
        name: String,
        /// Correction table replacing the derived one.
        #[arg(long)]
        table: Option<PathBuf>,
    },
    /// Synthesize a gate and print the circuit or its resource counts.
    Synth {
        gate: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, value_enum, default_value_t = Emit::Circuit)]
        emit: Emit,
    },
    /// Reproduce a table of published values with PASS/FAIL per entry.
    Report { which: Which },
    /// Print the classical truth table of a circuit file.
    TruthTable { circuit: PathBuf },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Emit {
    Circuit,
    Counts,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Which {
    Table1,
    Table2,
}

#[derive(Debug, Default)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn read(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn load_circuit(path: &Path) -> Result<Circuit, Error> {
    Circuit::parse(&read(path)?)
}

fn load_code(path: &Path) -> Result<StabilizerCode, Error> {
    StabilizerCode::parse(&read(path)?, path.parent())
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, S>(args: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let mut text = e.render().to_string();
            if matches!(e.kind(), ErrorKind::InvalidSubcommand | ErrorKind::MissingSubcommand) {
                text.push('\n');
                text.push_str(&Cli::command().render_help().to_string());
            }
            return if e.use_stderr() {
                Outcome { code: EXIT_INPUT, stdout: String::new(), stderr: text }
            } else {
                Outcome { code: EXIT_PASS, stdout: text, stderr: String::new() }
            };
        }
    };
    if let Some(j) = cli.jobs {
        if j == 0 {
            return Outcome { code: EXIT_INPUT, stderr: "error: --jobs must be at least 1\n".into(), ..Default::default() };
        }
        let _ = rayon::ThreadPoolBuilder::new().num_threads(j).build_global();
    }
    let mut out = String::new();
    match execute(&cli.command, &mut out) {
        Ok(ok) => Outcome { code: if ok { EXIT_PASS } else { EXIT_FAIL }, stdout: out, stderr: String::new() },
        Err(e) => Outcome { code: EXIT_INPUT, stdout: out, stderr: format!("error: {e}\n") },
    }
}

fn execute(cmd: &Command, out: &mut String) -> Result<bool, Error> {
    match cmd {
        Command::VerifyCode { file, max_weight } => verify_code(&load_code(file)?, *max_weight, out),
        Command::VerifyTransversal { code, layer, logical, block_local } => {
            let code = load_code(code)?;
            let layer = load_circuit(layer)?;
            let logical_c = load_circuit(logical)?;
            let u = sim::unitary_of(&logical_c)?;
            let r = codes::transversal_check(&code, &layer, &u, *block_local)?;
            let _ = writeln!(out, "code [[{},{}]] over dimension {}", code.n, code.k, code.dim);
            let _ = writeln!(out, "layer {}", protocols::inline_gates(&layer));
            match r.phase {
                Some(k) => {
                    let _ = writeln!(out, "layer · E = zeta^{k} · E · logical");
                }
                None => {
                    let _ = writeln!(out, "layer · E differs from E · logical");
                }
            }
            let _ = writeln!(out, "verdict {}", verdict(r.holds));
            Ok(r.holds)
        }
        Command::VerifyConcat { outer, inner, max_weight } => {
            let code = codes::concatenate(&load_code(outer)?, &load_code(inner)?)?;
            verify_code(&code, *max_weight, out)
        }
        Command::VerifyProtocol { name, table } => {
            if !protocols::PROTOCOL_NAMES.contains(&name.as_str()) {
                return Err(Error::Invalid(format!(
                    "unknown protocol `{name}`; expected one of {}",
                    protocols::PROTOCOL_NAMES.join(", ")
                )));
            }
            let table = table.as_deref().map(|p| read(p).and_then(|t| CorrectionTable::parse(&t))).transpose()?;
            let cert = protocols::run_named(name, table.as_ref())?;
            let _ = write!(out, "{cert}");
            Ok(cert.passed())
        }
        Command::Synth { gate, n, emit } => synth_command(gate, *n, *emit, out),
        Command::Report { which } => {
            let r = match which {
                Which::Table1 => report::table1()?,
                Which::Table2 => report::table2()?,
            };
            let _ = writeln!(out, "qand {}", env!("CARGO_PKG_VERSION"));
            out.push_str(&r.text);
            let _ = writeln!(out, "verdict {}", verdict(r.passed()));
            Ok(r.passed())
        }
        Command::TruthTable { circuit } => {
            let c = load_circuit(circuit)?;
            out.push_str(&sim::truth_table(&c)?.render());
            Ok(true)
        }
    }
}

fn verify_code(code: &StabilizerCode, max_weight: usize, out: &mut String) -> Result<bool, Error> {
    let _ = writeln!(out, "code [[{},{}]] over dimension {}", code.n, code.k, code.dim);
    for line in code.provenance.lines() {
        let _ = writeln!(out, "provenance {line}");
    }
    let report = code.validate();
    let _ = writeln!(out, "stabilizer rank {}", report.stabilizers.rank);
    for f in &report.stabilizers.failures {
        let _ = writeln!(out, "failure {f}");
    }
    for f in &report.failures {
        let _ = writeln!(out, "failure {f}");
    }
    let mut ok = report.is_valid();
    let _ = writeln!(out, "valid {}", verdict(ok));
    if ok && code.encoder.is_some() {
        let proj = codes::projector_matches_encoder(code)?;
        let _ = writeln!(out, "encoder projector {}", verdict(proj));
        ok &= proj;
    }
    if ok {
        match code.distance(max_weight)? {
            Some(w) => {
                let _ = writeln!(out, "distance = {}", w.weight);
                let _ = writeln!(out, "witness {}", w.operator);
            }
            None => {
                let _ = writeln!(out, "distance > {max_weight} (no logical operator of weight <= {max_weight})");
            }
        }
    }
    let _ = writeln!(out, "verdict {}", verdict(ok));
    Ok(ok)
}

fn qubit_gate(name: &str, n: Option<usize>) -> Result<Option<QubitGate>, Error> {
    let need = |lo: usize| -> Result<usize, Error> {
        let v = n.ok_or_else(|| Error::Invalid(format!("`{name}` needs --n")))?;
        if v < lo {
            return Err(Error::Invalid(format!("`{name}` needs --n >= {lo}")));
        }
        Ok(v)
    };
    Ok(Some(match name {
        "x" => QubitGate::X,
        "z" => QubitGate::Z,
        "s" => QubitGate::S,
        "cx" => QubitGate::CX,
        "cz" => QubitGate::CZ,
        "ccx" => QubitGate::CCX,
        "ccz" => QubitGate::CCZ,
        "cnx-linear" => QubitGate::CnXLinear(need(2)?),
        "cnx-log" => QubitGate::CnXLog(need(2)?),
        "cnz-linear" => QubitGate::CnZLinear(need(3)?),
        "cnz-log" => QubitGate::CnZLog(need(3)?),
        _ => return Ok(None),
    }))
}

fn synth_command(gate: &str, n: Option<usize>, emit: Emit, out: &mut String) -> Result<bool, Error> {
    let mut injection_required = false;
    let (circuit, target): (Circuit, Option<EmulationTarget>) = match gate {
        "and" => (synth::build_and(AndVariant::Eq5)?, Some(synth::and_target(2))),
        "and-eq6" => (synth::build_and(AndVariant::Eq6)?, Some(synth::and_target(2))),
        "and-symmetric3" => (synth::build_and(AndVariant::Symmetric3)?, None),
        "and-tdepth1" => (synth::build_and(AndVariant::SymmetricTDepth1)?, None),
        "or" => (synth::build_or()?, Some(synth::or_target())),
        "nary-and" => {
            let m = n.ok_or_else(|| Error::Invalid("`nary-and` needs --n".into()))?;
            (synth::build_nary_and(m)?, Some(synth::and_target(m)))
        }
        "qubit-plus" => (synth::qubit_plus()?, None),
        "qubit-minus" => (synth::qubit_minus()?, None),
        other => match qubit_gate(other, n)? {
            Some(g) => {
                let s = synth::build_qubit_gate(g)?;
                injection_required = s.injection_required;
                (s.circuit, Some(synth::qubit_emulation_target(g)))
            }
            None => return Err(Error::Invalid(format!("unknown gate `{other}`"))),
        },
    };
    match emit {
        Emit::Circuit => {
            out.push_str(&circuit.to_string());
            Ok(true)
        }
        Emit::Counts => {
            let c = circuit.counts();
            let _ = writeln!(out, "T {}", c.t_count);
            let _ = writeln!(out, "R {}", c.r_count);
            let _ = writeln!(out, "CX {}", c.cx_count);
            let _ = writeln!(out, "2Q {}", c.two_qudit_count);
            let _ = writeln!(out, "raw2Q {}", c.raw_two_qudit_count);
            let _ = writeln!(out, "depth {}", c.depth);
            let _ = writeln!(out, "T-depth {}", c.t_depth);
            if injection_required {
                let _ = writeln!(out, "injection-required");
            }
            match target {
                Some(t) => {
                    let ok = sim::emulates(&circuit, &t)?;
                    let _ = writeln!(out, "emulation {}", verdict(ok));
                    Ok(ok)
                }
                None => Ok(true),
            }
        }
    }
}

/// Wraps the verdict words in ANSI colors.
pub fn colorize(text: &str) -> String {
    let mut s = String::with_capacity(text.len());
    for (i, line) in text.split('\n').enumerate() {
        if i > 0 {
            s.push('\n');
        }
        let words: Vec<String> = line
            .split(' ')
            .map(|w| match w {
                "PASS" => "\x1b[32mPASS\x1b[0m".to_string(),
                "FAIL" => "\x1b[31mFAIL\x1b[0m".to_string(),
                "NOTE" => "\x1b[33mNOTE\x1b[0m".to_string(),
                _ => w.to_string(),
            })
            .collect();
        s.push_str(&words.join(" "));
    }
    s
}
