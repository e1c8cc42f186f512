//! Mapping from command-line circuit kinds to builders and formulas.

use clap::ValueEnum;
use gfqc::builders::{
    build_addmult, build_carry_sum_adder, build_cmult, build_cswap, build_field_adder, build_phi_adder, build_qft,
};
use gfqc::{AdderFamily, BuildError, Circuit, CircuitKind, FieldElement, FieldSpec, Gate, Params};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    /// Field adder `z <- z + a` with 0 to 2 controls.
    Adder,
    /// Controlled add-mult `z <- z + c*a*x`.
    Addmult,
    /// Controlled multiplication `x <- a^c * x`.
    Cmult,
    /// Controlled swap of two n-qubit registers.
    Cswap,
    /// QFT on n+1 qubits.
    Qft,
    /// Integer adder of an n-bit constant, in the chosen family.
    IntAdder,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Adder => "adder",
            Kind::Addmult => "addmult",
            Kind::Cmult => "cmult",
            Kind::Cswap => "cswap",
            Kind::Qft => "qft",
            Kind::IntAdder => "int-adder",
        }
    }

    pub fn needs_field(self) -> bool {
        matches!(self, Kind::Adder | Kind::Addmult | Kind::Cmult)
    }

    pub fn takes_family(self) -> bool {
        !matches!(self, Kind::Cswap | Kind::Qft)
    }

    pub fn takes_controls(self) -> bool {
        matches!(self, Kind::Adder | Kind::IntAdder)
    }
}

/// What a circuit is over: a field, or a bare register width.
#[derive(Debug, Clone)]
pub enum Domain {
    Field(FieldSpec),
    Width(u64),
}

impl Domain {
    pub fn params(&self) -> Params {
        match self {
            Domain::Field(spec) => Params::for_field(spec),
            Domain::Width(n) => Params::Bits(*n),
        }
    }

    pub fn n(&self) -> u64 {
        self.params().n()
    }

    pub fn label(&self) -> String {
        match self {
            Domain::Field(spec) => format!("field={spec}"),
            Domain::Width(n) => format!("n={n}"),
        }
    }
}

/// The formula entry for a concrete request.
pub fn circuit_kind(kind: Kind, domain: &Domain, family: AdderFamily, controls: u8) -> CircuitKind {
    use CircuitKind as K;
    let field = match domain {
        Domain::Field(spec) => Some(spec),
        Domain::Width(_) => None,
    };
    match (kind, field) {
        (Kind::Cswap, _) => K::CSwap,
        (Kind::Qft, _) => K::Qft,
        (Kind::IntAdder, _) | (_, None) => match family {
            AdderFamily::CarrySum => K::CarrySumAdder { controls },
            AdderFamily::Phi => K::PhiAdder { controls },
        },
        (Kind::Adder, Some(FieldSpec::Prime { .. })) => K::ModAdderGfp { family, controls },
        (Kind::Addmult, Some(FieldSpec::Prime { .. })) => K::AddMultGfp { family },
        (Kind::Cmult, Some(FieldSpec::Prime { .. })) => K::CMultGfp { family },
        (Kind::Adder, Some(FieldSpec::Binary { .. })) => K::AdderGf2n { controls },
        (Kind::Addmult, Some(FieldSpec::Binary { .. })) => K::AddMultGf2n,
        (Kind::Cmult, Some(FieldSpec::Binary { .. })) => K::CMultGf2n,
        (Kind::Adder, Some(FieldSpec::Extension { .. })) => K::AdderGfpk { family, controls },
        (Kind::Addmult, Some(FieldSpec::Extension { .. })) => K::AddMultGfpk { family },
        (Kind::Cmult, Some(FieldSpec::Extension { .. })) => K::CMultGfpk { family },
    }
}

/// Short tag naming a builder error, e.g. `NotInvertible` or `ReducibleModulus`.
pub fn error_tag(e: &BuildError) -> String {
    let dbg = match e {
        BuildError::Field(inner) => format!("{inner:?}"),
        other => format!("{other:?}"),
    };
    dbg.chars().take_while(|c| c.is_ascii_alphanumeric()).collect()
}

fn build_err(e: BuildError) -> CliError {
    CliError::domain(format!("{e} ({})", error_tag(&e)))
}

fn width_usize(n: u64) -> Result<usize, CliError> {
    usize::try_from(n).map_err(|_| CliError::domain(format!("register width {n} is too large")))
}

/// Builds the requested circuit as the builders emit it.
pub fn build_bare(kind: Kind, domain: &Domain, a: u64, family: AdderFamily, controls: usize) -> Result<Circuit, CliError> {
    let n = width_usize(domain.n())?;
    let c = match (kind, domain) {
        (Kind::Cswap, _) => build_cswap(n),
        (Kind::Qft, _) => build_qft(n + 1),
        (Kind::IntAdder, _) => match family {
            AdderFamily::CarrySum => build_carry_sum_adder(a, n, controls),
            AdderFamily::Phi => build_phi_adder(a, n + 1, controls),
        },
        (_, Domain::Width(_)) => {
            return Err(CliError::domain(format!("kind {} needs --field", kind.name())));
        }
        (Kind::Adder, Domain::Field(spec)) => build_field_adder(spec, FieldElement(a), family, controls),
        (Kind::Addmult, Domain::Field(spec)) => build_addmult(spec, FieldElement(a), family),
        (Kind::Cmult, Domain::Field(spec)) => build_cmult(spec, FieldElement(a), family),
    };
    c.map_err(build_err)
}

/// Qubits a bare circuit expects in Fourier space, if any.
fn fourier_register(kind: Kind, domain: &Domain, family: AdderFamily, c: &Circuit) -> Option<Vec<usize>> {
    if family != AdderFamily::Phi {
        return None;
    }
    match (kind, domain) {
        (Kind::IntAdder, _) => Some(c.layout().indices("z")),
        (Kind::Adder, Domain::Field(FieldSpec::Prime { .. })) => {
            let mut q = c.layout().indices("z");
            q.push(c.layout().indices("anc")[0]);
            Some(q)
        }
        _ => None,
    }
}

/// Builds the requested circuit. Phi adders that act in Fourier space (the
/// integer and GF(p) ones) are returned inside a QFT/inverse-QFT pair, so that
/// every file maps basis states to basis states.
pub fn build(kind: Kind, domain: &Domain, a: u64, family: AdderFamily, controls: usize) -> Result<Circuit, CliError> {
    let c = build_bare(kind, domain, a, family, controls)?;
    Ok(match fourier_register(kind, domain, family, &c) {
        Some(q) => fourier_wrap(&c, &q),
        None => c,
    })
}

fn fourier_wrap(body: &Circuit, q: &[usize]) -> Circuit {
    let qft = build_qft(q.len()).expect("register width already validated");
    let relabel = |g: &Gate| g.relabel(|i| q[i]).expect("distinct qubits");
    let mut gates: Vec<Gate> = qft.gates().iter().map(relabel).collect();
    gates.extend(body.gates().iter().cloned());
    gates.extend(qft.inverse().gates().iter().map(relabel));
    Circuit::with_gates(body.layout().clone(), gates).expect("same layout")
}
