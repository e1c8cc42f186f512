//! `gfqc`: build, simulate, verify and cost quantum finite-field multipliers.

mod estimate;
mod kinds;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use gfqc::sim::{run_basis, BasisOutput};
use gfqc::{AdderFamily, BasisState, Circuit, FieldSpec, SimError};

use kinds::{Domain, Kind};

pub const EXIT_VERIFY: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_NOT_BASIS: u8 = 3;
pub const EXIT_CAP: u8 = 4;

#[derive(Debug, thiserror::Error)]
#[error("{message}")]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn domain(message: impl Into<String>) -> CliError {
        CliError { code: EXIT_USAGE, message: message.into() }
    }
}

impl From<SimError> for CliError {
    fn from(e: SimError) -> CliError {
        let code = if matches!(e, SimError::WidthCap { .. }) { EXIT_CAP } else { EXIT_USAGE };
        CliError { code, message: e.to_string() }
    }
}

#[derive(Parser)]
#[command(name = "gfqc", version, about = "Quantum circuits for controlled multiplication over finite fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a circuit and write it in the text circuit format.
    Build(BuildArgs),
    /// Run a circuit file on a classical input.
    Simulate(SimulateArgs),
    /// Check multipliers over a field against the field arithmetic.
    Verify(verify::VerifyArgs),
    /// Print closed-form resource estimates and the complexity tables.
    Estimate(estimate::EstimateArgs),
}

/// Field or register width selection shared by `build` and `estimate`.
#[derive(Args, Debug, Clone)]
pub struct DomainArgs {
    /// Field: `p:<prime>`, `2^<n>:Q=<bits>` or `p^k:<p>,<k>,Q=<c_k,...,c_0>`.
    #[arg(long)]
    pub field: Option<String>,
    /// Register width for the field-free kinds (cswap, qft, int-adder).
    #[arg(long)]
    pub n: Option<u64>,
}

impl DomainArgs {
    pub fn resolve(&self, kind: Kind) -> Result<Domain, CliError> {
        match (&self.field, self.n) {
            (Some(f), None) => Ok(Domain::Field(parse_field(f)?)),
            (None, Some(n)) if !kind.needs_field() => Ok(Domain::Width(n)),
            (None, Some(_)) => Err(CliError::domain(format!("kind {} needs --field", kind.name()))),
            (Some(_), Some(_)) => Err(CliError::domain("give either --field or --n, not both")),
            (None, None) => Err(CliError::domain("missing --field")),
        }
    }
}

pub fn parse_field(s: &str) -> Result<FieldSpec, CliError> {
    let spec: FieldSpec = s.parse().map_err(|e| CliError::domain(format!("{e}")))?;
    spec.validate()
        .map_err(|e| CliError::domain(format!("{e} ({})", kinds::error_tag(&gfqc::BuildError::Field(e.clone())))))?;
    Ok(spec)
}

pub fn parse_family(s: &str) -> Result<AdderFamily, String> {
    s.parse()
}

/// Decimal, `0b` binary or `0x` hexadecimal.
pub fn parse_u64(s: &str) -> Result<u64, String> {
    let (digits, radix) = if let Some(b) = s.strip_prefix("0b") {
        (b, 2)
    } else if let Some(h) = s.strip_prefix("0x") {
        (h, 16)
    } else {
        (s, 10)
    };
    u64::from_str_radix(&digits.replace('_', ""), radix).map_err(|e| format!("`{s}`: {e}"))
}

#[derive(Args)]
struct BuildArgs {
    #[command(flatten)]
    domain: DomainArgs,
    #[arg(long, value_enum)]
    kind: Kind,
    /// Classical operand (packed field element).
    #[arg(long, value_parser = parse_u64, default_value = "0")]
    a: u64,
    #[arg(long, value_parser = parse_family, default_value = "carry-sum")]
    family: AdderFamily,
    /// Control qubits for adders (0, 1 or 2).
    #[arg(long, default_value_t = 0)]
    controls: usize,
    /// Output path; standard output when omitted.
    #[arg(short = 'o', long = "output")]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    /// Circuit file.
    path: PathBuf,
    /// Register assignments such as `c=1,x=4` or `c=1 x=4`.
    assignments: Vec<String>,
    /// Tolerance on the output basis-state probability.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
}

fn header(kind: Kind, domain: &Domain, a: u64, family: AdderFamily, controls: usize, c: &Circuit) -> String {
    format!(
        "# kind={} {} a={} family={} controls={}\n# width={} gates={} depth={}\n",
        kind.name(),
        domain.label(),
        a,
        family,
        controls,
        c.qubit_count(),
        c.len(),
        c.depth()
    )
}

fn cmd_build(args: BuildArgs) -> Result<(), CliError> {
    let domain = args.domain.resolve(args.kind)?;
    let c = kinds::build(args.kind, &domain, args.a, args.family, args.controls)?;
    let text = header(args.kind, &domain, args.a, args.family, args.controls, &c) + &c.serialize();
    match args.output {
        Some(path) => std::fs::write(&path, text)
            .map_err(|e| CliError::domain(format!("cannot write {}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    Ok(())
}

/// Registers that must be assigned explicitly; everything else starts at 0.
const MANDATORY: [&str; 2] = ["c", "x"];

fn parse_assignments(items: &[String]) -> Result<Vec<(String, u64)>, CliError> {
    let mut out: Vec<(String, u64)> = Vec::new();
    for item in items.iter().flat_map(|s| s.split(',')).filter(|s| !s.is_empty()) {
        let (name, value) = item
            .split_once('=')
            .ok_or_else(|| CliError::domain(format!("expected `name=value`, found `{item}`")))?;
        let value = parse_u64(value.trim()).map_err(CliError::domain)?;
        if out.iter().any(|(n, _)| n == name.trim()) {
            return Err(CliError::domain(format!("register `{name}` assigned twice")));
        }
        out.push((name.trim().to_string(), value));
    }
    Ok(out)
}

fn cmd_simulate(args: SimulateArgs) -> Result<(), CliError> {
    let text = std::fs::read_to_string(&args.path)
        .map_err(|e| CliError::domain(format!("cannot read {}: {e}", args.path.display())))?;
    let c = Circuit::parse(&text).map_err(|e| CliError::domain(e.to_string()))?;
    let assigned = parse_assignments(&args.assignments)?;
    for name in MANDATORY {
        if c.layout().get(name).is_some() && !assigned.iter().any(|(n, _)| n == name) {
            return Err(CliError::domain(format!("register `{name}` must be assigned")));
        }
    }
    let values: Vec<(&str, u64)> = assigned.iter().map(|(n, v)| (n.as_str(), *v)).collect();
    let input = BasisState::from_registers(c.layout(), &values)?;
    match run_basis(&c, &input, args.tol)? {
        BasisOutput::Basis { state, .. } => {
            let parts: Vec<String> = c
                .layout()
                .registers()
                .iter()
                .map(|r| Ok(format!("{}={}", r.name, state.read_register(c.layout(), &r.name)?)))
                .collect::<Result<_, SimError>>()?;
            println!("{}", parts.join(" "));
            Ok(())
        }
        BasisOutput::NotBasis { max_probability } => Err(CliError {
            code: EXIT_NOT_BASIS,
            message: format!("output is not a basis state (largest probability {max_probability:.12})"),
        }),
    }
}

/// Exit quietly when stdout is closed early (e.g. piped into `head`).
fn quiet_broken_pipe() {
    let default = std::panic::take_hook();
    std::panic::set_hook(Box::new(move |info| {
        let msg = info
            .payload()
            .downcast_ref::<String>()
            .map(String::as_str)
            .or_else(|| info.payload().downcast_ref::<&str>().copied())
            .unwrap_or("");
        if msg.contains("failed printing to stdout") && msg.contains("Broken pipe") {
            std::process::exit(0);
        }
        default(info);
    }));
}

fn main() -> ExitCode {
    quiet_broken_pipe();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Build(a) => cmd_build(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Verify(a) => verify::run(a),
        Command::Estimate(a) => estimate::run(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code)
        }
    }
}
