//! Oracle sweeps over a field.

use std::collections::BTreeMap;

use clap::Args;
use gfqc::builders::unchecked::{adder_gf2n, adder_gfpk, mod_adder_gfp};
use gfqc::builders::{build_addmult, build_carry_sum_adder, build_cmult, build_phi_adder};
use gfqc::resources::{compare, CircuitKind, Sample};
use gfqc::sim::{run_basis, BasisOutput};
use gfqc::{AdderFamily, BasisState, Circuit, FieldElement, FieldSpec, Params};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{parse_family, parse_field, CliError, EXIT_VERIFY};

const MAX_EXHAUSTIVE_ORDER: u64 = 1 << 12;
/// Largest operand-times-modulus pattern space swept by `--counts`.
const MAX_COUNT_PATTERNS: u64 = 1 << 16;

#[derive(Args)]
pub struct VerifyArgs {
    #[arg(long)]
    field: String,
    /// Ignored for GF(2^n), which has a single adder.
    #[arg(long, value_parser = parse_family, default_value = "carry-sum")]
    family: AdderFamily,
    /// Every nonzero operand, every input and both control values.
    #[arg(long, conflicts_with = "samples")]
    exhaustive: bool,
    /// Number of random (a, x, c) cases.
    #[arg(long)]
    samples: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Also check the exact-average gate-count laws.
    #[arg(long)]
    counts: bool,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
}

#[derive(Default)]
struct Report {
    failed: usize,
}

impl Report {
    fn line(&mut self, ok: bool, text: String) {
        if !ok {
            self.failed += 1;
        }
        println!("{} {text}", if ok { "PASS" } else { "FAIL" });
    }

    fn ratio(&mut self, name: &str, good: u64, total: u64, what: &str) {
        self.line(good == total, format!("{name}: {good}/{total} {what}"));
    }
}

struct Runner<'a> {
    spec: &'a FieldSpec,
    family: AdderFamily,
    tol: f64,
    cache: BTreeMap<(bool, u64), Circuit>,
}

impl Runner<'_> {
    fn circuit(&mut self, cmult: bool, a: u64) -> Result<&Circuit, CliError> {
        if !self.cache.contains_key(&(cmult, a)) {
            let built = if cmult {
                build_cmult(self.spec, FieldElement(a), self.family)
            } else {
                build_addmult(self.spec, FieldElement(a), self.family)
            }
            .map_err(|e| CliError::domain(e.to_string()))?;
            self.cache.insert((cmult, a), built);
        }
        Ok(&self.cache[&(cmult, a)])
    }

    /// Output registers `(x, z, anc)`, or `None` for a non-basis output.
    fn run(&mut self, cmult: bool, a: u64, c: u64, x: u64, z: u64) -> Result<Option<(u64, u64, u64)>, CliError> {
        let tol = self.tol;
        let circ = self.circuit(cmult, a)?;
        let layout = circ.layout();
        let input = BasisState::from_registers(layout, &[("c", c), ("x", x), ("z", z)])?;
        Ok(match run_basis(circ, &input, tol)? {
            BasisOutput::Basis { state, .. } => {
                let anc = if layout.get("anc").is_some() { state.read_register(layout, "anc")? } else { 0 };
                Some((state.read_register(layout, "x")?, state.read_register(layout, "z")?, anc))
            }
            BasisOutput::NotBasis { .. } => None,
        })
    }
}

fn mul(spec: &FieldSpec, a: u64, b: u64) -> u64 {
    spec.mul(FieldElement(a), FieldElement(b)).expect("valid elements").0
}

fn add(spec: &FieldSpec, a: u64, b: u64) -> u64 {
    spec.add(FieldElement(a), FieldElement(b)).expect("valid elements").0
}

pub fn run(args: VerifyArgs) -> Result<(), CliError> {
    let spec = parse_field(&args.field)?;
    let family = if matches!(spec, FieldSpec::Binary { .. }) { AdderFamily::CarrySum } else { args.family };
    let elements: Vec<u64> = if args.exhaustive {
        if spec.order() > MAX_EXHAUSTIVE_ORDER {
            return Err(CliError::domain(format!(
                "field order {} is above the exhaustive limit {MAX_EXHAUSTIVE_ORDER}; use --samples",
                spec.order()
            )));
        }
        spec.elements().into_iter().map(|e| e.0).collect()
    } else {
        Vec::new()
    };
    let mode = match (args.exhaustive, args.samples) {
        (true, _) => "exhaustive".to_string(),
        (false, Some(n)) => format!("samples={n}"),
        (false, None) => return Err(CliError::domain("give --exhaustive or --samples N")),
    };
    println!("# verify field={spec} family={family} mode={mode} seed={} rng=chacha8", args.seed);

    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let all = elements;
    let random_element = |rng: &mut ChaCha8Rng, nonzero: bool| loop {
        let idx = rng.random_range(0..spec.order());
        let e = element_at(&spec, idx);
        if !nonzero || e != 0 {
            break e;
        }
    };

    let cmult_cases: Vec<(u64, u64, u64)> = if args.exhaustive {
        let mut v = Vec::new();
        for &a in all.iter().filter(|&&a| a != 0) {
            for &x in &all {
                for c in 0..2 {
                    v.push((a, x, c));
                }
            }
        }
        v
    } else {
        (0..args.samples.unwrap_or(0))
            .map(|_| (random_element(&mut rng, true), random_element(&mut rng, false), rng.random_range(0..2)))
            .collect()
    };
    let addmult_cases: Vec<(u64, u64, u64, u64)> = if args.exhaustive {
        let mut v = Vec::new();
        for &a in &all {
            for &x in &all {
                for c in 0..2 {
                    v.push((a, x, c, random_element(&mut rng, false)));
                }
            }
        }
        v
    } else {
        (0..args.samples.unwrap_or(0))
            .map(|_| {
                let a = random_element(&mut rng, false);
                let x = random_element(&mut rng, false);
                (a, x, rng.random_range(0..2), random_element(&mut rng, false))
            })
            .collect()
    };

    let mut report = Report::default();
    let mut runner = Runner { spec: &spec, family, tol: args.tol, cache: BTreeMap::new() };

    let kind = crate::kinds::circuit_kind(crate::kinds::Kind::Cmult, &crate::kinds::Domain::Field(spec.clone()), family, 0);
    let want = gfqc::resources::formula(kind, Params::for_field(&spec))
        .map_err(|e| CliError::domain(e.to_string()))?
        .width;
    let got = runner.circuit(true, 1)?.qubit_count() as u64;
    report.line(got == want, format!("width: cmult uses {got} qubits, formula {want}"));

    let (mut oracle, mut clean, mut ident, mut ident_total) = (0, 0, 0, 0);
    for &(a, x, c) in &cmult_cases {
        let expected = if c == 1 { mul(&spec, a, x) } else { x };
        let out = runner.run(true, a, c, x, 0)?;
        if let Some((ox, oz, oa)) = out {
            oracle += (ox == expected) as u64;
            clean += (oz == 0 && oa == 0) as u64;
            if c == 0 {
                ident_total += 1;
                ident += (ox == x) as u64;
            }
        } else if c == 0 {
            ident_total += 1;
        }
    }
    let n = cmult_cases.len() as u64;
    report.ratio("oracle", oracle, n, "cmult cases give a^c * x");
    report.ratio("ancilla", clean, n, "cmult cases return z and ancillas to 0");
    report.ratio("control", ident, ident_total, "c=0 cases leave x unchanged");

    let mut good = 0;
    for &(a, x, c, z) in &addmult_cases {
        let expected = if c == 1 { add(&spec, z, mul(&spec, a, x)) } else { z };
        if let Some((ox, oz, oa)) = runner.run(false, a, c, x, z)? {
            good += (ox == x && oz == expected && oa == 0) as u64;
        }
    }
    report.ratio("addmult", good, addmult_cases.len() as u64, "cases give z + c*a*x");

    if args.counts {
        count_checks(&spec, family, &mut report)?;
    }

    if report.failed > 0 {
        Err(CliError { code: EXIT_VERIFY, message: format!("{} check(s) failed", report.failed) })
    } else {
        Ok(())
    }
}

/// The element with coefficient index `idx` in the order of `FieldSpec::elements`.
fn element_at(spec: &FieldSpec, idx: u64) -> u64 {
    match spec {
        FieldSpec::Extension { p, k, .. } => {
            let l = spec.coefficient_bits();
            let mut rest = idx;
            let mut packed = 0;
            for i in 0..*k {
                packed |= (rest % p) << (i * l);
                rest /= p;
            }
            packed
        }
        _ => idx,
    }
}

fn exact_line(report: &mut Report, kind: CircuitKind, params: Params, samples: &[Sample], what: &str) -> Result<(), CliError> {
    let r = compare(kind, params, samples).map_err(|e| CliError::domain(e.to_string()))?;
    let detail = if r.all_counts_exact() {
        String::new()
    } else {
        let worst: Vec<String> = r
            .nonzero_gates()
            .filter(|d| !d.is_exact())
            .map(|d| format!("{} {} vs {}", d.label, d.empirical, d.formula))
            .collect();
        format!(" ({})", worst.join(", "))
    };
    report.line(
        r.all_counts_exact() && r.width_ok,
        format!("counts {kind} {params}: mean over {} {what}{detail}", samples.len()),
    );
    Ok(())
}

fn integer_adder_checks(n: u64, family: AdderFamily, report: &mut Report) -> Result<(), CliError> {
    if n > 16 {
        return Ok(());
    }
    for controls in 0..=2u8 {
        let samples: Vec<Sample> = (0..1u64 << n)
            .map(|a| match family {
                AdderFamily::CarrySum => build_carry_sum_adder(a, n as usize, controls as usize),
                AdderFamily::Phi => build_phi_adder(a, n as usize + 1, controls as usize),
            })
            .map(|c| c.map(|c| Sample::of(&c)).map_err(|e| CliError::domain(e.to_string())))
            .collect::<Result<_, _>>()?;
        let kind = match family {
            AdderFamily::CarrySum => CircuitKind::CarrySumAdder { controls },
            AdderFamily::Phi => CircuitKind::PhiAdder { controls },
        };
        exact_line(report, kind, Params::Bits(n), &samples, "operand bit patterns")?;
    }
    Ok(())
}

fn count_checks(spec: &FieldSpec, family: AdderFamily, report: &mut Report) -> Result<(), CliError> {
    let built = |r: Result<Circuit, gfqc::BuildError>| r.map(|c| Sample::of(&c)).map_err(|e| CliError::domain(e.to_string()));
    match spec {
        FieldSpec::Prime { .. } => {
            let n = spec.register_width() as u64;
            integer_adder_checks(n, family, report)?;
            if 1u64 << (2 * n) <= MAX_COUNT_PATTERNS {
                for controls in [0u8, 2] {
                    let mut samples = Vec::new();
                    for p in 0..1u64 << n {
                        for a in 0..1u64 << n {
                            samples.push(built(mod_adder_gfp(a, p, n as usize, family, controls as usize))?);
                        }
                    }
                    let kind = CircuitKind::ModAdderGfp { family, controls };
                    exact_line(report, kind, Params::Bits(n), &samples, "operand and modulus bit patterns")?;
                }
            } else {
                println!("SKIP counts: modular adder pattern space 4^{n} is above {MAX_COUNT_PATTERNS}");
            }
        }
        FieldSpec::Binary { n, .. } => {
            let n = *n as u64;
            if 1u64 << n <= MAX_COUNT_PATTERNS {
                for controls in [0u8, 2] {
                    let samples = (0..1u64 << n)
                        .map(|a| built(adder_gf2n(a, n as usize, controls as usize)))
                        .collect::<Result<Vec<_>, _>>()?;
                    exact_line(report, CircuitKind::AdderGf2n { controls }, Params::Bits(n), &samples, "operands")?;
                }
                let samples = spec
                    .elements()
                    .into_iter()
                    .map(|a| built(build_addmult(spec, a, AdderFamily::CarrySum)))
                    .collect::<Result<Vec<_>, _>>()?;
                exact_line(report, CircuitKind::AddMultGf2n, Params::Bits(n), &samples, "field elements")?;
            } else {
                println!("SKIP counts: 2^{n} operands is above {MAX_COUNT_PATTERNS}");
            }
        }
        FieldSpec::Extension { k, .. } => {
            let l = spec.coefficient_bits() as u64;
            let k = *k as u64;
            integer_adder_checks(l, family, report)?;
            if l * (k + 1) <= 16 {
                for controls in [0u8, 2] {
                    let mut samples = Vec::new();
                    for p in 0..1u64 << l {
                        for packed in 0..1u64 << (l * k) {
                            let coeffs: Vec<u64> = (0..k).map(|i| (packed >> (i * l)) & ((1 << l) - 1)).collect();
                            samples.push(built(adder_gfpk(&coeffs, p, l as usize, family, controls as usize))?);
                        }
                    }
                    let kind = CircuitKind::AdderGfpk { family, controls };
                    exact_line(report, kind, Params::Extension { k, l }, &samples, "coefficient and modulus bit patterns")?;
                }
            } else {
                println!("SKIP counts: coefficient pattern space 2^{} is above {MAX_COUNT_PATTERNS}", l * (k + 1));
            }
        }
    }
    Ok(())
}
