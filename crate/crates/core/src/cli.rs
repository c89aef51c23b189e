//! Command-line front end. The binary is a thin wrapper around [`run`].
//!
//! Every flag can also be set through an environment variable with the `BB_`
//! prefix (`BB_HAMILTONIAN`, `BB_SEQUENCE`, `BB_N`, `BB_TAU`, `BB_BATH_DIM`,
//! `BB_SEED`, `BB_REPLICAS`, `BB_OUT`, `BB_CAP_DIM`).
//!
//! Exit codes: 0 success, 2 invalid input, 3 dimension cap exceeded,
//! 4 `--assert` failed. Failures print `{"error": {...}}` on stderr.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::bath::{build_named as build_hamiltonian, SBHamiltonian};
use crate::error::Error;
use crate::group::{ErrorGroup, GroupReport};
use crate::io::{bath_doc, hamiltonian_from_json, sequence_from_json, TermDoc};
use crate::numeric::{self, BathModel, SlopeFit, SpinSector, DEFAULT_CAP};
use crate::sequence::{BuiltinSequence, Sequence};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_CAP: i32 = 3;
pub const EXIT_ASSERT: i32 = 4;

pub const DEFAULT_SEED: u64 = 1234;
const SLOPE_RANGE: (f64, f64) = (1.8, 2.2);

#[derive(Parser, Debug)]
#[command(
    name = "bbsym",
    version,
    about = "Bang-bang pulse symmetrization of system-bath Hamiltonians",
    after_help = "Hamiltonians: linear:N, bilinear:N, hnn:N, zz_chain:N, pairwise_isotropic:N, or a JSON file.\n\
                  Sequences: linear_elim4, mqe8, mqe16_qx, full_elim16, collective6, collective14 (optionally name:N), or a JSON file.\n\
                  Every flag may be set through a BB_-prefixed environment variable, e.g. BB_SEED=7.\n\
                  Exit codes: 2 invalid input, 3 dimension cap exceeded, 4 --assert failed."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Average a Hamiltonian over a pulse cycle and list the surviving terms
    Symmetrize(Common),
    /// Error-group report for the surviving (or given) system operators
    Analyze(Common),
    /// Compare the simulated cycle with exp(-i W tau H_avg) over a tau grid
    Verify(Numeric),
    /// Decoherence-free subspace dimensions
    Dfs(DfsArgs),
    /// Tau sweep over random baths; writes CSV
    Sweep(SweepArgs),
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Builder (`hnn:4`) or JSON file
    #[arg(long, env = "BB_HAMILTONIAN")]
    pub hamiltonian: Option<String>,
    /// Builder (`mqe8`, `mqe8:6`) or JSON file
    #[arg(long, env = "BB_SEQUENCE")]
    pub sequence: Option<String>,
    /// Qubit count when neither source fixes it
    #[arg(long, env = "BB_N")]
    pub n: Option<usize>,
    /// Write the report here instead of stdout
    #[arg(long, env = "BB_OUT")]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct Numeric {
    #[command(flatten)]
    pub common: Common,
    /// Comma-separated, strictly descending tau values
    #[arg(long, env = "BB_TAU", value_delimiter = ',')]
    pub tau: Vec<f64>,
    #[arg(long, env = "BB_BATH_DIM", default_value_t = 2)]
    pub bath_dim: usize,
    #[arg(long, env = "BB_SEED", default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Maximum total Hilbert-space dimension
    #[arg(long, env = "BB_CAP_DIM", default_value_t = DEFAULT_CAP)]
    pub cap_dim: usize,
    /// Exit with code 4 unless the slope lies in [1.8, 2.2] or is exact
    #[arg(long = "assert")]
    pub assert: bool,
}

#[derive(Args, Debug, Clone)]
pub struct DfsArgs {
    #[command(flatten)]
    pub common: Common,
    /// Qubit count for the collective-decoherence null space
    #[arg(long)]
    pub collective: Option<usize>,
}

#[derive(Args, Debug, Clone)]
pub struct SweepArgs {
    #[command(flatten)]
    pub numeric: Numeric,
    /// Number of random baths, seeded `seed`, `seed + 1`, ...
    #[arg(long, env = "BB_REPLICAS", default_value_t = 5)]
    pub replicas: usize,
}

#[derive(Debug)]
pub enum Failure {
    Engine(Error),
    Assertion(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Engine(e)
    }
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Engine(Error::DimensionCap { .. }) => EXIT_CAP,
            Failure::Engine(_) => EXIT_VALIDATION,
            Failure::Assertion(_) => EXIT_ASSERT,
        }
    }

    pub fn code(&self) -> &'static str {
        match self {
            Failure::Engine(e) => e.code(),
            Failure::Assertion(_) => "assertion_failed",
        }
    }

    pub fn message(&self) -> String {
        match self {
            Failure::Engine(e) => e.to_string(),
            Failure::Assertion(m) => m.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        error_json(self.code(), self.exit_code(), &self.message())
    }
}

fn error_json(code: &str, exit_code: i32, message: &str) -> String {
    serde_json::json!({"error": {"code": code, "exit_code": exit_code, "message": message}}).to_string()
}

type CliResult<T> = std::result::Result<T, Failure>;

fn parse_builder(spec: &str) -> Option<(&str, Option<usize>)> {
    match spec.split_once(':') {
        Some((name, n)) => n.parse().ok().map(|n| (name, Some(n))),
        None => Some((spec, None)),
    }
}

fn read_file(path: &str) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{path}: {e}")).into())
}

fn is_file(spec: &str) -> bool {
    spec.ends_with(".json") || Path::new(spec).is_file()
}

/// The resolved `(H, sequence)` pair of a command.
pub struct Inputs {
    pub hamiltonian: SBHamiltonian,
    pub sequence: Option<Sequence>,
}

impl Common {
    fn n_hint(&self) -> Option<usize> {
        let from =
            |s: &Option<String>| s.as_deref().filter(|s| !is_file(s)).and_then(parse_builder).and_then(|(_, n)| n);
        self.n.or_else(|| from(&self.hamiltonian)).or_else(|| from(&self.sequence))
    }

    fn need_n(&self) -> CliResult<usize> {
        self.n_hint().ok_or_else(|| Error::InvalidArgument("qubit count unknown: use name:N or --n".into()).into())
    }

    fn load_hamiltonian(&self, spec: &str) -> CliResult<SBHamiltonian> {
        if is_file(spec) {
            return Ok(hamiltonian_from_json(&read_file(spec)?)?);
        }
        let (name, n) = parse_builder(spec).ok_or_else(|| Error::InvalidArgument(format!("bad builder {spec:?}")))?;
        let n = match (n, self.n) {
            (Some(a), Some(b)) if a != b => return Err(Error::DimensionMismatch { left: a, right: b }.into()),
            (Some(a), _) | (None, Some(a)) => a,
            (None, None) => self.need_n()?,
        };
        build_hamiltonian(name, n)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown Hamiltonian builder {name:?}")))?
            .map_err(Failure::from)
    }

    fn load_sequence(&self, spec: &str, n: Option<usize>) -> CliResult<Sequence> {
        if is_file(spec) {
            return Ok(sequence_from_json(&read_file(spec)?, n)?);
        }
        let (name, own_n) =
            parse_builder(spec).ok_or_else(|| Error::InvalidArgument(format!("bad builder {spec:?}")))?;
        let b = BuiltinSequence::from_key(name)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown sequence {name:?}")))?;
        let n = match (own_n, n) {
            (Some(a), Some(b)) if a != b => return Err(Error::DimensionMismatch { left: b, right: a }.into()),
            (Some(a), _) | (None, Some(a)) => a,
            (None, None) if b == BuiltinSequence::Collective14 => 3,
            (None, None) => self.need_n()?,
        };
        Ok(b.build(n)?)
    }

    pub fn resolve(&self) -> CliResult<Inputs> {
        match (&self.hamiltonian, &self.sequence) {
            (Some(h), seq) => {
                let hamiltonian = self.load_hamiltonian(h)?;
                let sequence =
                    seq.as_deref().map(|s| self.load_sequence(s, Some(hamiltonian.n_qubits()))).transpose()?;
                Ok(Inputs { hamiltonian, sequence })
            }
            (None, Some(s)) => {
                let sequence = self.load_sequence(s, self.n_hint())?;
                let n = sequence.n_qubits();
                let target = parse_builder(s)
                    .and_then(|(name, _)| BuiltinSequence::from_key(name))
                    .map(BuiltinSequence::target_hamiltonian)
                    .unwrap_or("linear");
                let hamiltonian = build_hamiltonian(target, n).expect("known builder")?;
                Ok(Inputs { hamiltonian, sequence: Some(sequence) })
            }
            (None, None) => Err(Error::InvalidArgument("give --hamiltonian and/or --sequence".into()).into()),
        }
    }
}

#[derive(Serialize)]
struct SequenceInfo {
    name: String,
    notation: String,
    pulse_count: usize,
    evolve_count: usize,
    total_weight: String,
}

impl SequenceInfo {
    fn of(s: &Sequence) -> Self {
        SequenceInfo {
            name: s.name().to_string(),
            notation: s.notation(),
            pulse_count: s.pulse_count(),
            evolve_count: s.evolve_count(),
            total_weight: s.total_weight().to_string(),
        }
    }
}

fn term_docs(h: &SBHamiltonian) -> Vec<TermDoc> {
    h.terms().map(|(p, b)| TermDoc { pauli: p.to_string(), bath: bath_doc(b) }).collect()
}

#[derive(Serialize)]
struct SymmetrizeReport {
    command: &'static str,
    n_qubits: usize,
    input_terms: usize,
    sequence: SequenceInfo,
    /// Normalized average `H̄ = Σ w_k F_k† H F_k / W`.
    surviving_terms: Vec<TermDoc>,
    /// `H̄ × W`, the generator multiplying `τ` in the cycle exponent.
    exponent_form: Vec<TermDoc>,
    surviving_count: usize,
    eliminated_terms: usize,
}

fn symmetrize_report(h: &SBHamiltonian, seq: &Sequence) -> CliResult<SymmetrizeReport> {
    let avg = seq.average_hamiltonian(h)?;
    let eliminated = h.terms().filter(|(p, _)| avg.bath_of(p).is_none()).count();
    Ok(SymmetrizeReport {
        command: "symmetrize",
        n_qubits: h.n_qubits(),
        input_terms: h.len(),
        sequence: SequenceInfo::of(seq),
        surviving_terms: term_docs(&avg),
        exponent_form: term_docs(&avg.scaled(&seq.total_weight())),
        surviving_count: avg.len(),
        eliminated_terms: eliminated,
    })
}

#[derive(Serialize)]
struct AnalyzeReport {
    command: &'static str,
    n_qubits: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    sequence: Option<SequenceInfo>,
    group: GroupReport,
    /// `2^N / |G|` as a decimal string when the group is Abelian.
    dfs_dimension: Option<String>,
}

fn analyzed(inputs: &Inputs) -> CliResult<SBHamiltonian> {
    Ok(match &inputs.sequence {
        Some(s) => s.average_hamiltonian(&inputs.hamiltonian)?,
        None => inputs.hamiltonian.clone(),
    })
}

fn pow2_string(k: usize) -> String {
    (num_bigint::BigUint::from(1u8) << k).to_string()
}

fn analyze_report(inputs: &Inputs) -> CliResult<AnalyzeReport> {
    let h = analyzed(inputs)?;
    let g = ErrorGroup::from_hamiltonian(&h);
    let group = g.report();
    Ok(AnalyzeReport {
        command: "analyze",
        n_qubits: h.n_qubits(),
        sequence: inputs.sequence.as_ref().map(SequenceInfo::of),
        dfs_dimension: group.dfs_dim_log2.map(pow2_string),
        group,
    })
}

#[derive(Serialize)]
struct VerifyReport {
    command: &'static str,
    sequence: SequenceInfo,
    n_qubits: usize,
    bath_dim: usize,
    seed: u64,
    points: Vec<Point>,
    fit: SlopeFit,
    slope_range: (f64, f64),
    within_range: bool,
}

#[derive(Serialize)]
struct Point {
    tau: f64,
    norm_error: f64,
}

fn taus_or_default(t: &[f64]) -> Vec<f64> {
    if t.is_empty() {
        numeric::default_taus()
    } else {
        t.to_vec()
    }
}

fn slope_ok(fit: &SlopeFit) -> bool {
    match fit {
        SlopeFit::Exact => true,
        SlopeFit::Slope { slope } => (SLOPE_RANGE.0..=SLOPE_RANGE.1).contains(slope),
    }
}

fn need_sequence(inputs: &Inputs) -> CliResult<&Sequence> {
    inputs.sequence.as_ref().ok_or_else(|| Error::InvalidArgument("this command needs --sequence".into()).into())
}

fn verify_report(args: &Numeric) -> CliResult<VerifyReport> {
    let inputs = args.common.resolve()?;
    let seq = need_sequence(&inputs)?;
    let bm = BathModel::random_for(&inputs.hamiltonian, args.bath_dim, args.seed);
    let taus = taus_or_default(&args.tau);
    let e = numeric::effective_error(seq, &inputs.hamiltonian, &bm, &taus, args.cap_dim)?;
    Ok(VerifyReport {
        command: "verify",
        sequence: SequenceInfo::of(seq),
        n_qubits: seq.n_qubits(),
        bath_dim: args.bath_dim,
        seed: args.seed,
        points: e.points.iter().map(|&(tau, norm_error)| Point { tau, norm_error }).collect(),
        within_range: slope_ok(&e.fit),
        fit: e.fit,
        slope_range: SLOPE_RANGE,
    })
}

#[derive(Serialize)]
struct CollectiveDfs {
    n_qubits: usize,
    dimension: usize,
    spin_sectors: Vec<SpinSector>,
}

#[derive(Serialize)]
struct DfsReport {
    command: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    collective: Option<CollectiveDfs>,
    #[serde(skip_serializing_if = "Option::is_none")]
    group: Option<AnalyzeReport>,
}

fn dfs_report(args: &DfsArgs) -> CliResult<DfsReport> {
    let collective = args
        .collective
        .map(|n| -> CliResult<CollectiveDfs> {
            let b = numeric::collective_dfs_basis(n)?;
            Ok(CollectiveDfs { n_qubits: n, dimension: b.dim(), spin_sectors: b.sectors })
        })
        .transpose()?;
    let c = &args.common;
    let group =
        if c.hamiltonian.is_some() || c.sequence.is_some() { Some(analyze_report(&c.resolve()?)?) } else { None };
    if collective.is_none() && group.is_none() {
        return Err(Error::InvalidArgument("give --collective N or a Hamiltonian/sequence".into()).into());
    }
    Ok(DfsReport { command: "dfs", collective, group })
}

#[derive(Serialize)]
struct SeedFit {
    seed: u64,
    norm_error: SlopeFit,
    leakage_sym: SlopeFit,
    leakage_unsym: SlopeFit,
}

#[derive(Serialize)]
struct SweepSummary {
    command: &'static str,
    sequence: SequenceInfo,
    n_qubits: usize,
    bath_dim: usize,
    base_seed: u64,
    replicas: usize,
    taus: Vec<f64>,
    fits: Vec<SeedFit>,
}

fn sweep_outputs(args: &SweepArgs) -> CliResult<(String, SweepSummary)> {
    let num = &args.numeric;
    let inputs = num.common.resolve()?;
    let seq = need_sequence(&inputs)?;
    let taus = taus_or_default(&num.tau);
    let rows = numeric::sweep(seq, &inputs.hamiltonian, num.bath_dim, num.seed, args.replicas, &taus, num.cap_dim)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in &rows {
        w.serialize(r).map_err(|e| Error::Format(e.to_string()))?;
    }
    let csv = String::from_utf8(w.into_inner().map_err(|e| Error::Format(e.to_string()))?).expect("csv is utf-8");
    let fits = numeric::sweep_fits(&rows)
        .into_iter()
        .map(|(seed, [a, b, c])| SeedFit { seed, norm_error: a, leakage_sym: b, leakage_unsym: c })
        .collect();
    Ok((
        csv,
        SweepSummary {
            command: "sweep",
            sequence: SequenceInfo::of(seq),
            n_qubits: seq.n_qubits(),
            bath_dim: num.bath_dim,
            base_seed: num.seed,
            replicas: args.replicas,
            taus,
            fits,
        },
    ))
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serializes");
    s.push('\n');
    s
}

fn emit(text: &str, out: Option<&Path>, stdout: &mut dyn Write) -> CliResult<()> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?,
        None => stdout.write_all(text.as_bytes()).map_err(|e| Error::Io(e.to_string()))?,
    }
    Ok(())
}

/// Execute a parsed command, writing reports to `stdout` (or `--out`).
pub fn execute(cli: &Cli, stdout: &mut dyn Write) -> CliResult<()> {
    match &cli.command {
        Command::Symmetrize(c) => {
            let inputs = c.resolve()?;
            let report = symmetrize_report(&inputs.hamiltonian, need_sequence(&inputs)?)?;
            emit(&to_json(&report), c.out.as_deref(), stdout)
        }
        Command::Analyze(c) => emit(&to_json(&analyze_report(&c.resolve()?)?), c.out.as_deref(), stdout),
        Command::Verify(args) => {
            let report = verify_report(args)?;
            emit(&to_json(&report), args.common.out.as_deref(), stdout)?;
            if args.assert && !report.within_range {
                return Err(Failure::Assertion(format!(
                    "error slope {:?} outside [{}, {}]",
                    report.fit, SLOPE_RANGE.0, SLOPE_RANGE.1
                )));
            }
            Ok(())
        }
        Command::Dfs(args) => emit(&to_json(&dfs_report(args)?), args.common.out.as_deref(), stdout),
        Command::Sweep(args) => {
            let (csv, summary) = sweep_outputs(args)?;
            match args.numeric.common.out.as_deref() {
                Some(p) => {
                    emit(&csv, Some(p), stdout)?;
                    emit(&to_json(&summary), None, stdout)
                }
                None => emit(&csv, None, stdout),
            }
        }
    }
}

/// Parse `args` (including the program name) and run. Returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{e}");
                return EXIT_OK;
            }
            let _ = writeln!(stderr, "{}", error_json("usage", EXIT_VALIDATION, e.to_string().trim()));
            return EXIT_VALIDATION;
        }
    };
    match execute(&cli, stdout) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(stderr, "{}", f.to_json());
            f.exit_code()
        }
    }
}
