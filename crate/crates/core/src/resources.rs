//! Closed-form widths, average gate counts and depths for every circuit, the
//! two summary tables, and comparison of built circuits against the formulas.
//!
//! Counts are averages over uniformly random classical bits and are exact
//! rationals. For GF(p^k) the parameters are `k` and `l = ceil(lg p)`, with
//! `n = kl`.

use std::fmt::{self, Write as _};

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::builders::AdderFamily;
use crate::circuit::{GateHistogram, GateKind, Rational};
use crate::field::FieldSpec;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ResourceError {
    #[error("parameters outside the formula's domain: {0}")]
    OutOfDomain(String),
    #[error("at least one sample is required")]
    EmptySamples,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CircuitKind {
    CarrySumAdder { controls: u8 },
    PhiAdder { controls: u8 },
    /// QFT on `n+1` qubits.
    Qft,
    ModAdderGfp { family: AdderFamily, controls: u8 },
    AddMultGfp { family: AdderFamily },
    CSwap,
    CMultGfp { family: AdderFamily },
    AdderGf2n { controls: u8 },
    AddMultGf2n,
    CMultGf2n,
    AdderGfpk { family: AdderFamily, controls: u8 },
    AddMultGfpk { family: AdderFamily },
    CMultGfpk { family: AdderFamily },
}

impl CircuitKind {
    /// Every kind with a published formula.
    pub fn all() -> Vec<CircuitKind> {
        use CircuitKind::*;
        let mut v = Vec::new();
        for c in 0..=2 {
            v.push(CarrySumAdder { controls: c });
        }
        for c in 0..=2 {
            v.push(PhiAdder { controls: c });
        }
        v.push(Qft);
        for family in AdderFamily::ALL {
            for controls in [0, 2] {
                v.push(ModAdderGfp { family, controls });
            }
            v.push(AddMultGfp { family });
        }
        v.push(CSwap);
        for family in AdderFamily::ALL {
            v.push(CMultGfp { family });
        }
        v.extend([AdderGf2n { controls: 0 }, AdderGf2n { controls: 2 }, AddMultGf2n, CMultGf2n]);
        for family in AdderFamily::ALL {
            for controls in [0, 2] {
                v.push(AdderGfpk { family, controls });
            }
            v.push(AddMultGfpk { family });
            v.push(CMultGfpk { family });
        }
        v
    }

    pub fn name(self) -> &'static str {
        use CircuitKind::*;
        match self {
            CarrySumAdder { .. } => "carry-sum-adder",
            PhiAdder { .. } => "phi-adder",
            Qft => "qft",
            ModAdderGfp { .. } => "adder-gfp",
            AddMultGfp { .. } => "addmult-gfp",
            CSwap => "cswap",
            CMultGfp { .. } => "cmult-gfp",
            AdderGf2n { .. } => "adder-gf2n",
            AddMultGf2n => "addmult-gf2n",
            CMultGf2n => "cmult-gf2n",
            AdderGfpk { .. } => "adder-gfpk",
            AddMultGfpk { .. } => "addmult-gfpk",
            CMultGfpk { .. } => "cmult-gfpk",
        }
    }

    pub fn family(self) -> Option<AdderFamily> {
        use CircuitKind::*;
        match self {
            CarrySumAdder { .. } => Some(AdderFamily::CarrySum),
            PhiAdder { .. } => Some(AdderFamily::Phi),
            ModAdderGfp { family, .. }
            | AddMultGfp { family }
            | CMultGfp { family }
            | AdderGfpk { family, .. }
            | AddMultGfpk { family }
            | CMultGfpk { family } => Some(family),
            _ => None,
        }
    }

    pub fn controls(self) -> u8 {
        use CircuitKind::*;
        match self {
            CarrySumAdder { controls }
            | PhiAdder { controls }
            | ModAdderGfp { controls, .. }
            | AdderGf2n { controls }
            | AdderGfpk { controls, .. } => controls,
            _ => 0,
        }
    }

    fn takes_extension(self) -> bool {
        matches!(
            self,
            CircuitKind::AdderGfpk { .. } | CircuitKind::AddMultGfpk { .. } | CircuitKind::CMultGfpk { .. }
        )
    }
}

impl fmt::Display for CircuitKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())?;
        if let Some(fam) = self.family() {
            if !matches!(self, CircuitKind::CarrySumAdder { .. } | CircuitKind::PhiAdder { .. }) {
                write!(f, "[{fam}]")?;
            }
        }
        let c = self.controls();
        if c > 0 {
            write!(f, "/c{c}")?;
        }
        Ok(())
    }
}

/// Size parameters: the register width `n`, or `(k, l)` for GF(p^k).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Params {
    Bits(u64),
    Extension { k: u64, l: u64 },
}

impl Params {
    /// Parameters of the circuits over a field.
    pub fn for_field(spec: &FieldSpec) -> Params {
        match spec {
            FieldSpec::Extension { k, .. } => Params::Extension {
                k: *k as u64,
                l: spec.coefficient_bits() as u64,
            },
            _ => Params::Bits(spec.register_width() as u64),
        }
    }

    /// `n` (or `kl`).
    pub fn n(self) -> u64 {
        match self {
            Params::Bits(n) => n,
            Params::Extension { k, l } => k * l,
        }
    }
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Params::Bits(n) => write!(f, "n={n}"),
            Params::Extension { k, l } => write!(f, "k={k} l={l} n={}", k * l),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ResourceEstimate {
    pub width: u64,
    pub counts: GateHistogram,
    pub depth: Rational,
}

fn q(num: i64, den: i64) -> Rational {
    Rational::new(num, den)
}

fn int(v: u64) -> Rational {
    Rational::from_integer(v as i64)
}

fn domain(msg: impl Into<String>) -> ResourceError {
    ResourceError::OutOfDomain(msg.into())
}

/// The closed-form estimate for `kind` at `params`.
pub fn formula(kind: CircuitKind, params: Params) -> Result<ResourceEstimate, ResourceError> {
    use AdderFamily::*;
    use CircuitKind::*;
    use GateKind::*;

    let (nn, kk, ll) = match (kind.takes_extension(), params) {
        (true, Params::Extension { k, l }) => {
            if k < 1 || l < 2 {
                return Err(domain("GF(p^k) formulas need k >= 1 and p > 2 (l >= 2)"));
            }
            (k * l, k, l)
        }
        (false, Params::Bits(n)) => (n, 0, 0),
        (true, _) => return Err(domain(format!("{} takes k and l", kind.name()))),
        (false, _) => return Err(domain(format!("{} takes a bit width n", kind.name()))),
    };
    let min_n = match kind {
        Qft => 0,
        PhiAdder { .. } | CSwap | AdderGf2n { .. } | AddMultGf2n | CMultGf2n => 1,
        _ => 2,
    };
    if nn < min_n {
        return Err(domain(format!("{} needs n >= {min_n}", kind.name())));
    }
    if kind.controls() > 2 {
        return Err(domain("at most two controls"));
    }
    let n = int(nn);
    let k = int(kk);
    let l = int(ll);
    let n2 = n * n;
    let one = Rational::from_integer(1);

    let est = |width: Rational, counts: &[(GateKind, Rational)], depth: Rational| ResourceEstimate {
        width: width.to_integer() as u64,
        counts: GateHistogram::from_pairs(counts.iter().copied()),
        depth,
    };
    let cs_depth = q(11, 2) * n - q(13, 2);

    Ok(match kind {
        CarrySumAdder { controls: 0 } => est(
            int(2) * n,
            &[(C2N, int(2) * n - int(3)), (CN, int(2) * n - q(3, 2)), (N, q(3, 2) * n - int(2))],
            cs_depth,
        ),
        CarrySumAdder { controls: 1 } => est(
            int(2) * n + one,
            &[(C3N, one), (C2N, int(3) * n - q(9, 2)), (CN, q(3, 2) * n - one), (N, n - int(2))],
            cs_depth,
        ),
        CarrySumAdder { .. } => est(
            int(2) * n + int(2),
            &[
                (C4N, one),
                (C3N, n - q(1, 2)),
                (C2N, q(5, 2) * n - int(4)),
                (CN, n - one),
                (N, n - int(2)),
            ],
            cs_depth,
        ),
        PhiAdder { controls: 0 } => est(n + one, &[(P, n)], one),
        PhiAdder { controls: 1 } => est(n + int(2), &[(CP, n)], n),
        PhiAdder { .. } => est(n + int(3), &[(C2P, n)], n),
        Qft => est(n + one, &[(CP, n2 / int(2) + n / int(2)), (H, n + one)], int(2) * n + one),
        ModAdderGfp { family: CarrySum, controls: 0 } => est(
            int(2) * n + one,
            &[(C3N, one), (C2N, int(11) * n - q(33, 2)), (CN, q(19, 2) * n - int(5)), (N, int(7) * n - int(8))],
            q(55, 2) * n - q(57, 2),
        ),
        ModAdderGfp { family: CarrySum, controls: 2 } => est(
            int(2) * n + int(3),
            &[
                (C4N, int(3)),
                (C3N, int(3) * n - q(1, 2)),
                (C2N, q(25, 2) * n - q(39, 2)),
                (CN, q(13, 2) * n - q(7, 2)),
                (N, q(11, 2) * n - int(8)),
            ],
            q(55, 2) * n - q(57, 2),
        ),
        ModAdderGfp { family: Phi, controls: 0 } => est(
            n + int(2),
            &[
                (CP, int(2) * n2 + int(3) * n),
                (P, int(4) * n),
                (CN, int(2)),
                (N, int(2)),
                (H, int(4) * n + int(4)),
            ],
            int(9) * n + int(12),
        ),
        ModAdderGfp { family: Phi, controls: 2 } => est(
            n + int(4),
            &[
                (C2P, int(3) * n),
                (CP, int(2) * n2 + int(3) * n),
                (P, n),
                (CN, int(2)),
                (N, int(2)),
                (H, int(4) * n + int(4)),
            ],
            int(12) * n + int(9),
        ),
        ModAdderGfp { .. } => return Err(domain("GF(p) adders are published for 0 or 2 controls")),
        AddMultGfp { family: CarrySum } => est(
            int(3) * n + int(2),
            &[
                (C4N, int(3) * n),
                (C3N, int(3) * n2 - n / int(2)),
                (C2N, q(25, 2) * n2 - q(39, 2) * n),
                (CN, q(13, 2) * n2 - q(7, 2) * n),
                (N, q(11, 2) * n2 - int(8) * n),
            ],
            q(55, 2) * n2 - q(57, 2) * n,
        ),
        AddMultGfp { family: Phi } => est(
            int(2) * n + int(3),
            &[
                (C2P, int(3) * n2),
                (CP, int(2) * n2 * n + int(4) * n2 + n),
                (P, n2),
                (CN, int(2) * n),
                (N, int(2) * n),
                (H, int(4) * n2 + int(6) * n + int(2)),
            ],
            int(12) * n2 + int(13) * n + int(2),
        ),
        CSwap => est(int(2) * n + one, &[(C2N, n), (CN, int(2) * n)], n + int(2)),
        CMultGfp { family: CarrySum } => est(
            int(3) * n + int(2),
            &[
                (C4N, int(6) * n),
                (C3N, int(6) * n2 - n),
                (C2N, int(25) * n2 - int(38) * n),
                (CN, int(13) * n2 - int(5) * n),
                (N, int(11) * n2 - int(16) * n),
            ],
            int(55) * n2 - int(56) * n + int(2),
        ),
        CMultGfp { family: Phi } => est(
            int(2) * n + int(3),
            &[
                (C2P, int(6) * n2),
                (CP, int(4) * n2 * n + int(8) * n2 + int(2) * n),
                (P, int(2) * n2),
                (C2N, n),
                (CN, int(6) * n),
                (N, int(4) * n),
                (H, int(8) * n2 + int(12) * n + int(4)),
            ],
            int(24) * n2 + int(27) * n + int(6),
        ),
        AdderGf2n { controls: 0 } => est(n, &[(N, n / int(2))], one),
        AdderGf2n { controls: 2 } => est(n + int(2), &[(C2N, n / int(2))], n / int(2)),
        AdderGf2n { .. } => return Err(domain("GF(2^n) adders are published for 0 or 2 controls")),
        AddMultGf2n => est(int(2) * n + one, &[(C2N, n2 / int(2))], n2 / int(2)),
        CMultGf2n => est(int(2) * n + one, &[(C2N, n2 + n), (CN, int(2) * n)], n2 + n + int(2)),
        AdderGfpk { family: CarrySum, controls: 0 } => est(
            n + k + l,
            &[
                (C3N, k),
                (C2N, int(11) * n - q(33, 2) * k),
                (CN, q(19, 2) * n - int(5) * k),
                (N, int(7) * n - int(8) * k),
            ],
            q(55, 2) * n - q(57, 2) * k,
        ),
        AdderGfpk { family: CarrySum, controls: 2 } => est(
            n + k + l + int(2),
            &[
                (C4N, int(3) * k),
                (C3N, int(3) * n - k / int(2)),
                (C2N, q(25, 2) * n - q(39, 2) * k),
                (CN, q(13, 2) * n - q(7, 2) * k),
                (N, q(11, 2) * n - int(8) * k),
            ],
            q(55, 2) * n - q(57, 2) * k,
        ),
        AdderGfpk { family: Phi, controls: 0 } => est(
            n + int(2),
            &[
                (CP, int(3) * n * l + int(4) * n),
                (P, int(4) * n),
                (CN, int(2) * k),
                (N, int(2) * k),
                (H, int(6) * n + int(6) * k),
            ],
            int(13) * n + int(14) * k,
        ),
        AdderGfpk { family: Phi, controls: 2 } => est(
            n + int(4),
            &[
                (C2P, int(3) * n),
                (CP, int(3) * n * l + int(4) * n),
                (P, n),
                (CN, int(2) * k),
                (N, int(2) * k),
                (H, int(6) * n + int(6) * k),
            ],
            int(16) * n + int(11) * k,
        ),
        AdderGfpk { .. } => return Err(domain("GF(p^k) adders are published for 0 or 2 controls")),
        AddMultGfpk { family: CarrySum } => est(
            int(2) * n + k + l + one,
            &[
                (C4N, int(3) * n * k),
                (C3N, int(3) * n2 - n * k / int(2)),
                (C2N, q(25, 2) * n2 - q(39, 2) * n * k),
                (CN, q(13, 2) * n2 - q(7, 2) * n * k),
                (N, q(11, 2) * n2 - int(8) * n * k),
            ],
            q(55, 2) * n2 - q(57, 2) * n * k,
        ),
        AddMultGfpk { family: Phi } => est(
            int(2) * n + int(3),
            &[
                (C2P, int(3) * n2),
                (CP, int(3) * n2 * l + int(4) * n2),
                (P, n2),
                (CN, int(2) * n * k),
                (N, int(2) * n * k),
                (H, int(6) * n2 + int(6) * n * k),
            ],
            int(16) * n2 + int(11) * n * k,
        ),
        CMultGfpk { family: CarrySum } => est(
            int(2) * n + k + l + one,
            &[
                (C4N, int(6) * n * k),
                (C3N, int(6) * n2 - n * k),
                (C2N, int(25) * n2 - int(39) * n * k + n),
                (CN, int(13) * n2 - int(7) * n * k + int(2) * n),
                (N, int(11) * n2 - int(16) * n * k),
            ],
            int(55) * n2 - int(57) * n * k + n + int(2),
        ),
        CMultGfpk { family: Phi } => est(
            int(2) * n + int(3),
            &[
                (C2P, int(6) * n2),
                (CP, int(6) * n2 * l + int(8) * n2),
                (P, int(2) * n2),
                (C2N, n),
                (CN, int(4) * n * k + int(2) * n),
                (N, int(4) * n * k),
                (H, int(12) * n2 + int(12) * n * k),
            ],
            int(32) * n2 + int(22) * n * k + n + int(2),
        ),
    })
}

/// One built circuit's measurements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sample {
    pub width: u64,
    pub counts: GateHistogram,
    pub depth: u64,
}

impl Sample {
    pub fn of(c: &crate::circuit::Circuit) -> Sample {
        Sample { width: c.qubit_count() as u64, counts: c.tally(), depth: c.depth() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Deviation {
    pub label: String,
    pub empirical: Rational,
    pub formula: Rational,
}

impl Deviation {
    pub fn absolute(&self) -> Rational {
        self.empirical - self.formula
    }

    /// Relative deviation; `None` when the formula value is zero.
    pub fn relative(&self) -> Option<f64> {
        if self.formula.is_zero() {
            None
        } else {
            let r = self.absolute() / self.formula;
            Some(*r.numer() as f64 / *r.denom() as f64)
        }
    }

    pub fn is_exact(&self) -> bool {
        self.empirical == self.formula
    }

    /// Within `tol` relative, or exact when the formula value is zero.
    pub fn within(&self, tol: f64) -> bool {
        match self.relative() {
            Some(r) => r.abs() <= tol,
            None => self.empirical.is_zero(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompareReport {
    pub kind: CircuitKind,
    pub params: Params,
    pub samples: usize,
    pub width_formula: u64,
    /// True iff every sample has exactly the formula width.
    pub width_ok: bool,
    pub gates: Vec<Deviation>,
    pub depth: Deviation,
}

impl CompareReport {
    /// Gate-count rows where either side is nonzero.
    pub fn nonzero_gates(&self) -> impl Iterator<Item = &Deviation> {
        self.gates.iter().filter(|d| !d.formula.is_zero() || !d.empirical.is_zero())
    }

    pub fn all_counts_exact(&self) -> bool {
        self.gates.iter().all(Deviation::is_exact)
    }

    pub fn all_counts_within(&self, tol: f64) -> bool {
        self.gates.iter().all(|d| d.within(tol))
    }
}

impl fmt::Display for CompareReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {} samples={}", self.kind, self.params, self.samples)?;
        writeln!(
            f,
            "  width  formula={}  {}",
            self.width_formula,
            if self.width_ok { "PASS" } else { "FAIL" }
        )?;
        for d in self.nonzero_gates().chain(std::iter::once(&self.depth)) {
            let rel = d.relative().map(|r| format!("{:+.4}", r)).unwrap_or_else(|| "-".into());
            writeln!(
                f,
                "  {:<5} mean={:<12} formula={:<12} abs={:<12} rel={}{}",
                d.label,
                d.empirical.to_string(),
                d.formula.to_string(),
                d.absolute().to_string(),
                rel,
                if d.is_exact() { "  exact" } else { "" }
            )?;
        }
        Ok(())
    }
}

/// Compares measured samples with the formula for `kind`.
pub fn compare(kind: CircuitKind, params: Params, samples: &[Sample]) -> Result<CompareReport, ResourceError> {
    if samples.is_empty() {
        return Err(ResourceError::EmptySamples);
    }
    let f = formula(kind, params)?;
    let count = Rational::from_integer(samples.len() as i64);
    let sum = samples
        .iter()
        .fold(GateHistogram::new(), |acc, s| acc + s.counts.clone());
    let mean = sum.scale(count.recip());
    let gates = GateKind::ALL
        .into_iter()
        .map(|g| Deviation { label: g.name().to_string(), empirical: mean[g], formula: f.counts[g] })
        .collect();
    let depth_sum: i64 = samples.iter().map(|s| s.depth as i64).sum();
    Ok(CompareReport {
        kind,
        params,
        samples: samples.len(),
        width_formula: f.width,
        width_ok: samples.iter().all(|s| s.width == f.width),
        gates,
        depth: Deviation {
            label: "depth".into(),
            empirical: Rational::from_integer(depth_sum) / count,
            formula: f.depth,
        },
    })
}

/// Serializes a rational as `num/den`.
pub fn rational_csv(r: Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Column headers for per-kind formula rows.
pub const CSV_HEADER: &str = "circuit_kind,family,controls,width,N,CN,C2N,C3N,C4N,P,CP,C2P,H,depth";

/// One CSV row in the [`CSV_HEADER`] layout.
pub fn csv_row(kind: CircuitKind, e: &ResourceEstimate) -> String {
    let mut s = format!(
        "{},{},{},{}",
        kind.name(),
        kind.family().map(|f| f.name()).unwrap_or("-"),
        kind.controls(),
        e.width
    );
    for g in GateKind::ALL {
        write!(s, ",{}", rational_csv(e.counts[g])).unwrap();
    }
    write!(s, ",{}", rational_csv(e.depth)).unwrap();
    s
}

/// The same columns as [`csv_row`] rendered as an aligned text table.
pub fn text_rows(rows: &[(CircuitKind, ResourceEstimate)]) -> String {
    let mut cells: Vec<Vec<String>> = vec![CSV_HEADER.split(',').map(str::to_string).collect()];
    for (kind, e) in rows {
        let mut row = vec![
            kind.name().to_string(),
            kind.family().map(|f| f.name()).unwrap_or("-").to_string(),
            kind.controls().to_string(),
            e.width.to_string(),
        ];
        row.extend(GateKind::ALL.into_iter().map(|g| e.counts[g].to_string()));
        row.push(e.depth.to_string());
        cells.push(row);
    }
    align(&cells)
}

fn align(cells: &[Vec<String>]) -> String {
    let cols = cells.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|c| cells.iter().filter_map(|r| r.get(c)).map(|s| s.chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for row in cells {
        let mut line = String::new();
        for (i, cell) in row.iter().enumerate() {
            if i > 0 {
                line.push_str("  ");
            }
            line.push_str(cell);
            if i + 1 < row.len() {
                line.push_str(&" ".repeat(widths[i] - cell.chars().count()));
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

/// Output format for the tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableFormat {
    Text,
    Csv,
}

fn render(cells: &[Vec<String>], format: TableFormat) -> String {
    match format {
        TableFormat::Text => align(cells),
        TableFormat::Csv => {
            let mut out = String::new();
            for row in cells {
                out.push_str(&row.join(","));
                out.push('\n');
            }
            out
        }
    }
}

fn row(cells: &[&str]) -> Vec<String> {
    cells.iter().map(|s| s.to_string()).collect()
}

/// Complexity of integer addition.
pub fn table1(format: TableFormat) -> String {
    let cells = vec![
        row(&["Type of adder", "Width", "Size", "Depth"]),
        row(&["Carry-sum adder", "2n", "O(n)", "O(n)"]),
        row(&["phi-adder", "n+1", "O(n)", "1"]),
        row(&["Doubly controlled carry-sum adder", "2n+2", "O(n)", "O(n)"]),
        row(&["Doubly controlled phi-adder", "n+3", "O(n)", "O(n)"]),
    ];
    render(&cells, format)
}

/// Table 1 widths evaluated at `n`, from the formulas.
pub fn table1_at(n: u64, format: TableFormat) -> Result<String, ResourceError> {
    let w = |kind| formula(kind, Params::Bits(n)).map(|e| e.width.to_string());
    let cells = vec![
        row(&["Type of adder", "Width", "Size", "Depth"]),
        vec!["Carry-sum adder".into(), w(CircuitKind::CarrySumAdder { controls: 0 })?, "O(n)".into(), "O(n)".into()],
        vec!["phi-adder".into(), w(CircuitKind::PhiAdder { controls: 0 })?, "O(n)".into(), "1".into()],
        vec![
            "Doubly controlled carry-sum adder".into(),
            w(CircuitKind::CarrySumAdder { controls: 2 })?,
            "O(n)".into(),
            "O(n)".into(),
        ],
        vec![
            "Doubly controlled phi-adder".into(),
            w(CircuitKind::PhiAdder { controls: 2 })?,
            "O(n)".into(),
            "O(n)".into(),
        ],
    ];
    Ok(render(&cells, format))
}

const TABLE2_HEADER: [&str; 7] =
    ["", "", "GF(p) carry-sum", "GF(p) phi-adders", "GF(2^n)", "GF(p^k) carry-sum", "GF(p^k) phi-adders"];

const TABLE2_SIZES: [[[&str; 5]; 2]; 3] = [
    [["O(l)", "O(l^2)", "O(n)", "O(kl)", "O(kl^2)"], ["O(l)", "O(l)", "1", "O(kl)", "O(kl)"]],
    [["O(l)", "O(l^2)", "O(n)", "O(kl)", "O(kl^2)"], ["O(l)", "O(l)", "O(n)", "O(kl)", "O(kl)"]],
    [
        ["O(l^2)", "O(l^3)", "O(n^2)", "O(k^2l^2)", "O(k^2l^3)"],
        ["O(l^2)", "O(l^2)", "O(n^2)", "O(k^2l^2)", "O(k^2l^2)"],
    ],
];

const TABLE2_ROWS: [&str; 3] = ["Adder", "Doubly controlled adder", "Controlled multiplication"];

fn table2_cells(widths: [[String; 5]; 3]) -> Vec<Vec<String>> {
    let mut cells = vec![row(&TABLE2_HEADER)];
    for (i, name) in TABLE2_ROWS.iter().enumerate() {
        let mut w = vec![name.to_string(), "Width".to_string()];
        w.extend(widths[i].iter().cloned());
        cells.push(w);
        for (metric, vals) in ["Size", "Depth"].iter().zip(&TABLE2_SIZES[i]) {
            let mut r = vec![String::new(), metric.to_string()];
            r.extend(vals.iter().map(|s| s.to_string()));
            cells.push(r);
        }
    }
    cells
}

/// Complexity of field arithmetic, with `l = ceil(lg p)` and `n = kl` for
/// GF(2^n).
pub fn table2(format: TableFormat) -> String {
    let s = |v: [&str; 5]| v.map(str::to_string);
    let widths = [
        s(["2l+1", "l+2", "n", "kl+k+l", "kl+2"]),
        s(["2l+3", "l+4", "n+2", "kl+k+l+2", "kl+4"]),
        s(["3l+2", "2l+3", "2n+1", "2kl+k+l+1", "2kl+3"]),
    ];
    render(&table2_cells(widths), format)
}

/// Table 2 with widths evaluated from the formulas at `l` and `k`; the GF(p)
/// columns use `n = l` and GF(2^n) uses `n = kl`.
pub fn table2_at(l: u64, k: u64, format: TableFormat) -> Result<String, ResourceError> {
    use AdderFamily::*;
    use CircuitKind::*;
    let gfp = Params::Bits(l);
    let bin = Params::Bits(k * l);
    let ext = Params::Extension { k, l };
    let w = |kind, p| formula(kind, p).map(|e| e.width.to_string());
    let widths = [
        [
            w(ModAdderGfp { family: CarrySum, controls: 0 }, gfp)?,
            w(ModAdderGfp { family: Phi, controls: 0 }, gfp)?,
            w(AdderGf2n { controls: 0 }, bin)?,
            w(AdderGfpk { family: CarrySum, controls: 0 }, ext)?,
            w(AdderGfpk { family: Phi, controls: 0 }, ext)?,
        ],
        [
            w(ModAdderGfp { family: CarrySum, controls: 2 }, gfp)?,
            w(ModAdderGfp { family: Phi, controls: 2 }, gfp)?,
            w(AdderGf2n { controls: 2 }, bin)?,
            w(AdderGfpk { family: CarrySum, controls: 2 }, ext)?,
            w(AdderGfpk { family: Phi, controls: 2 }, ext)?,
        ],
        [
            w(CMultGfp { family: CarrySum }, gfp)?,
            w(CMultGfp { family: Phi }, gfp)?,
            w(CMultGf2n, bin)?,
            w(CMultGfpk { family: CarrySum }, ext)?,
            w(CMultGfpk { family: Phi }, ext)?,
        ],
    ];
    Ok(render(&table2_cells(widths), format))
}

/// Least-squares fit of `y = c * x^e` on a log-log scale; returns `(c, e)`.
pub fn fit_power_law(points: &[(f64, f64)]) -> (f64, f64) {
    let m = points.len() as f64;
    let (sx, sy, sxx, sxy) = points.iter().fold((0.0, 0.0, 0.0, 0.0), |(sx, sy, sxx, sxy), &(x, y)| {
        let (lx, ly) = (x.ln(), y.ln());
        (sx + lx, sy + ly, sxx + lx * lx, sxy + lx * ly)
    });
    let e = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    let c = ((sy - e * sx) / m).exp();
    (c, e)
}

/// True if every count and the depth are nonnegative.
pub fn is_nonnegative(e: &ResourceEstimate) -> bool {
    e.counts.iter().all(|(_, c)| !c.is_negative()) && !e.depth.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn anchor_values() {
        let e = formula(CircuitKind::CarrySumAdder { controls: 0 }, Params::Bits(4)).unwrap();
        assert_eq!(e.width, 8);
        assert_eq!(e.counts[GateKind::C2N], q(5, 1));
        assert_eq!(e.counts[GateKind::CN], q(13, 2));
        assert_eq!(e.counts[GateKind::N], q(4, 1));
        assert_eq!(e.depth, q(31, 2));

        let e = formula(CircuitKind::CMultGf2n, Params::Bits(5)).unwrap();
        assert_eq!((e.width, e.counts[GateKind::C2N], e.counts[GateKind::CN], e.depth), (11, q(30, 1), q(10, 1), q(32, 1)));

        let e = formula(CircuitKind::Qft, Params::Bits(0)).unwrap();
        assert_eq!((e.width, e.counts[GateKind::CP], e.counts[GateKind::H], e.depth), (1, q(0, 1), q(1, 1), q(1, 1)));

        let e = formula(CircuitKind::CMultGfp { family: AdderFamily::Phi }, Params::Bits(8)).unwrap();
        assert_eq!(e.width, 19);
        let e = formula(CircuitKind::CMultGf2n, Params::Bits(8)).unwrap();
        assert_eq!((e.counts[GateKind::C2N], e.counts[GateKind::CN], e.depth), (q(72, 1), q(16, 1), q(74, 1)));
    }

    #[test]
    fn domain_checks() {
        assert!(formula(CircuitKind::CarrySumAdder { controls: 0 }, Params::Bits(1)).is_err());
        assert!(formula(CircuitKind::CMultGfpk { family: AdderFamily::Phi }, Params::Bits(4)).is_err());
        assert!(formula(CircuitKind::CMultGfpk { family: AdderFamily::CarrySum }, Params::Extension { k: 2, l: 1 }).is_err());
        assert!(formula(CircuitKind::ModAdderGfp { family: AdderFamily::Phi, controls: 1 }, Params::Bits(4)).is_err());
    }

    #[test]
    fn every_kind_is_nonnegative_and_monotone() {
        for kind in CircuitKind::all() {
            let mut prev: Option<ResourceEstimate> = None;
            for n in 2..=10u64 {
                let params = if kind.takes_extension() {
                    Params::Extension { k: n, l: 2 }
                } else {
                    Params::Bits(n)
                };
                let e = formula(kind, params).unwrap();
                assert!(is_nonnegative(&e), "{kind} {params}");
                if let Some(p) = &prev {
                    assert!(e.width >= p.width, "{kind}");
                    for g in GateKind::ALL {
                        assert!(e.counts[g] >= p.counts[g], "{kind} {g} at {params}");
                    }
                    assert!(e.depth >= p.depth);
                }
                prev = Some(e);
            }
        }
    }

    #[test]
    fn table2_evaluated_widths() {
        let t = table2_at(4, 3, TableFormat::Csv).unwrap();
        let line = t.lines().find(|l| l.starts_with("Controlled multiplication,Width")).unwrap();
        assert_eq!(line, "Controlled multiplication,Width,14,11,25,32,27");
    }

    #[test]
    fn compare_rejects_empty() {
        assert_eq!(
            compare(CircuitKind::Qft, Params::Bits(3), &[]),
            Err(ResourceError::EmptySamples)
        );
    }

    #[test]
    fn power_law_fit() {
        let pts: Vec<(f64, f64)> = (2..10).map(|n| (n as f64, 3.0 * (n as f64).powi(2))).collect();
        let (c, e) = fit_power_law(&pts);
        assert!((e - 2.0).abs() < 1e-9 && (c - 3.0).abs() < 1e-9);
    }
}
