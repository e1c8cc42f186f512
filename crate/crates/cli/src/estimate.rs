//! Closed-form estimates, the complexity tables and empirical comparisons.

use clap::{Args, ValueEnum};
use gfqc::resources::{self, compare, formula, CircuitKind, Sample, TableFormat};
use gfqc::{AdderFamily, FieldSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::kinds::{self, Domain, Kind};
use crate::{parse_family, CliError, DomainArgs};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
}

impl From<Format> for TableFormat {
    fn from(f: Format) -> TableFormat {
        match f {
            Format::Text => TableFormat::Text,
            Format::Csv => TableFormat::Csv,
        }
    }
}

#[derive(Args)]
pub struct EstimateArgs {
    /// Print complexity table 1 (integer adders) or 2 (field circuits).
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2), conflicts_with_all = ["kind", "field"])]
    table: Option<u8>,
    /// Coefficient width for `--table 2` at concrete sizes (with `--k`).
    #[arg(long, requires = "k")]
    l: Option<u64>,
    /// Extension degree for `--table 2` at concrete sizes (with `--l`).
    #[arg(long, requires = "l")]
    k: Option<u64>,
    #[command(flatten)]
    domain: DomainArgs,
    #[arg(long, value_enum, required_unless_present = "table")]
    kind: Option<Kind>,
    /// Both families when omitted.
    #[arg(long, value_parser = parse_family)]
    family: Option<AdderFamily>,
    #[arg(long, default_value_t = 0)]
    controls: u8,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Also build this many random-operand circuits and compare with the formula.
    #[arg(long)]
    empirical: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn out_of_domain(e: resources::ResourceError) -> CliError {
    CliError::domain(e.to_string())
}

pub fn run(args: EstimateArgs) -> Result<(), CliError> {
    let format: TableFormat = args.format.into();
    if let Some(t) = args.table {
        let text = match (t, args.domain.n, args.l.zip(args.k)) {
            (1, None, None) => resources::table1(format),
            (1, Some(n), None) => resources::table1_at(n, format).map_err(out_of_domain)?,
            (2, None, None) => resources::table2(format),
            (2, None, Some((l, k))) => resources::table2_at(l, k, format).map_err(out_of_domain)?,
            (1, _, Some(_)) => return Err(CliError::domain("table 1 takes --n, not --l/--k")),
            _ => return Err(CliError::domain("table 2 takes --l and --k, not --n")),
        };
        print!("{text}");
        return Ok(());
    }
    let kind = args.kind.expect("clap requires --kind without --table");
    let domain = args.domain.resolve(kind)?;
    if !kind.takes_controls() && args.controls != 0 {
        return Err(CliError::domain(format!("kind {} takes no --controls", kind.name())));
    }
    let families: Vec<AdderFamily> = match (args.family, kind.takes_family(), &domain) {
        (_, false, _) | (_, _, Domain::Field(FieldSpec::Binary { .. })) => vec![AdderFamily::CarrySum],
        (Some(f), true, _) => vec![f],
        (None, true, _) => vec![AdderFamily::CarrySum, AdderFamily::Phi],
    };
    let params = domain.params();
    let mut rows: Vec<(CircuitKind, resources::ResourceEstimate)> = Vec::new();
    for &family in &families {
        let ck = kinds::circuit_kind(kind, &domain, family, args.controls);
        rows.push((ck, formula(ck, params).map_err(out_of_domain)?));
    }
    println!("# estimate kind={} {} {params}", kind.name(), domain.label());
    match format {
        TableFormat::Csv => {
            println!("{}", resources::CSV_HEADER);
            for (ck, e) in &rows {
                println!("{}", resources::csv_row(*ck, e));
            }
        }
        TableFormat::Text => print!("{}", resources::text_rows(&rows)),
    }
    if let Some(count) = args.empirical {
        if count == 0 {
            return Err(CliError::domain("--empirical needs at least one sample"));
        }
        println!("# empirical samples={count} seed={} rng=chacha8", args.seed);
        let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
        for (&family, (ck, _)) in families.iter().zip(&rows) {
            let mut samples = Vec::with_capacity(count);
            for _ in 0..count {
                let a = draw_operand(kind, &domain, &mut rng);
                let c = kinds::build_bare(kind, &domain, a, family, args.controls as usize)?;
                samples.push(Sample::of(&c));
            }
            print!("{}", compare(*ck, params, &samples).map_err(out_of_domain)?);
        }
    }
    Ok(())
}

fn draw_operand(kind: Kind, domain: &Domain, rng: &mut ChaCha8Rng) -> u64 {
    match domain {
        Domain::Width(n) => match kind {
            Kind::IntAdder => rng.random_range(0..1u64 << n),
            _ => 0,
        },
        Domain::Field(spec) => {
            let elems = spec.elements();
            loop {
                let a = elems[rng.random_range(0..elems.len())].0;
                if kind != Kind::Cmult || a != 0 {
                    break a;
                }
            }
        }
    }
}
