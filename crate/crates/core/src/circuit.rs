//! Gate-level circuit representation: gates, register layout, counting,
//! ASAP depth, inversion, control extension and a line-oriented text format.

use std::fmt::{self, Write as _};
use std::ops::{Add, AddAssign, Index};

use num_rational::Ratio;
use num_traits::{One, Zero};
use thiserror::Error;

/// Exact rational used for phases (in turns), gate-count averages and depths.
pub type Rational = Ratio<i64>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CircuitError {
    #[error("{kind} cannot take {controls} controls")]
    ArityOverflow { kind: &'static str, controls: usize },
    #[error("qubit {qubit} is out of range for a {width}-qubit circuit")]
    QubitOutOfRange { qubit: usize, width: usize },
    #[error("qubit {0} appears more than once in a gate")]
    DuplicateQubit(usize),
    #[error("phase gates with a zero phase are never emitted")]
    ZeroPhase,
    #[error("control {0} is already used by the circuit")]
    ControlInUse(usize),
    #[error("register layout is invalid: {0}")]
    BadLayout(String),
    #[error("unknown register `{0}`")]
    UnknownRegister(String),
    #[error("layouts differ; cannot concatenate")]
    LayoutMismatch,
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
}

/// The elementary gate set: NOT with up to four controls, phase shift with up
/// to two controls, and Hadamard.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GateKind {
    N,
    CN,
    C2N,
    C3N,
    C4N,
    P,
    CP,
    C2P,
    H,
}

impl GateKind {
    pub const ALL: [GateKind; 9] = [
        GateKind::N,
        GateKind::CN,
        GateKind::C2N,
        GateKind::C3N,
        GateKind::C4N,
        GateKind::P,
        GateKind::CP,
        GateKind::C2P,
        GateKind::H,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GateKind::N => "N",
            GateKind::CN => "CN",
            GateKind::C2N => "C2N",
            GateKind::C3N => "C3N",
            GateKind::C4N => "C4N",
            GateKind::P => "P",
            GateKind::CP => "CP",
            GateKind::C2P => "C2P",
            GateKind::H => "H",
        }
    }

    pub fn from_name(s: &str) -> Option<GateKind> {
        GateKind::ALL.into_iter().find(|k| k.name() == s)
    }

    pub fn control_count(self) -> usize {
        match self {
            GateKind::N | GateKind::P | GateKind::H => 0,
            GateKind::CN | GateKind::CP => 1,
            GateKind::C2N | GateKind::C2P => 2,
            GateKind::C3N => 3,
            GateKind::C4N => 4,
        }
    }

    pub fn is_not(self) -> bool {
        matches!(
            self,
            GateKind::N | GateKind::CN | GateKind::C2N | GateKind::C3N | GateKind::C4N
        )
    }

    pub fn is_phase(self) -> bool {
        matches!(self, GateKind::P | GateKind::CP | GateKind::C2P)
    }

    fn index(self) -> usize {
        self as usize
    }

    fn not_with(controls: usize) -> Option<GateKind> {
        [GateKind::N, GateKind::CN, GateKind::C2N, GateKind::C3N, GateKind::C4N]
            .get(controls)
            .copied()
    }

    fn phase_with(controls: usize) -> Option<GateKind> {
        [GateKind::P, GateKind::CP, GateKind::C2P].get(controls).copied()
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Reduces a phase in turns into `[0, 1)`.
pub fn normalize_turns(t: Rational) -> Rational {
    let r = t - t.floor();
    if r < Rational::zero() {
        r + Rational::one()
    } else {
        r
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Gate {
    kind: GateKind,
    target: usize,
    controls: Vec<usize>,
    phase: Option<Rational>,
}

fn sorted_controls(target: usize, mut controls: Vec<usize>) -> Result<Vec<usize>, CircuitError> {
    controls.sort_unstable();
    for w in controls.windows(2) {
        if w[0] == w[1] {
            return Err(CircuitError::DuplicateQubit(w[0]));
        }
    }
    if controls.contains(&target) {
        return Err(CircuitError::DuplicateQubit(target));
    }
    Ok(controls)
}

impl Gate {
    /// Multi-controlled NOT.
    pub fn not(target: usize, controls: impl Into<Vec<usize>>) -> Result<Gate, CircuitError> {
        let controls = sorted_controls(target, controls.into())?;
        let kind = GateKind::not_with(controls.len()).ok_or(CircuitError::ArityOverflow {
            kind: "N",
            controls: controls.len(),
        })?;
        Ok(Gate { kind, target, controls, phase: None })
    }

    /// Controlled phase shift by `turns` full rotations (`exp(2 pi i turns)`).
    pub fn phase(
        turns: Rational,
        target: usize,
        controls: impl Into<Vec<usize>>,
    ) -> Result<Gate, CircuitError> {
        let turns = normalize_turns(turns);
        if turns.is_zero() {
            return Err(CircuitError::ZeroPhase);
        }
        let controls = sorted_controls(target, controls.into())?;
        let kind = GateKind::phase_with(controls.len()).ok_or(CircuitError::ArityOverflow {
            kind: "P",
            controls: controls.len(),
        })?;
        Ok(Gate { kind, target, controls, phase: Some(turns) })
    }

    pub fn hadamard(target: usize) -> Gate {
        Gate { kind: GateKind::H, target, controls: Vec::new(), phase: None }
    }

    pub fn kind(&self) -> GateKind {
        self.kind
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn controls(&self) -> &[usize] {
        &self.controls
    }

    /// Phase in turns, present only for the P family.
    pub fn phase_turns(&self) -> Option<Rational> {
        self.phase
    }

    pub fn qubits(&self) -> impl Iterator<Item = usize> + '_ {
        self.controls.iter().copied().chain(std::iter::once(self.target))
    }

    /// The inverse gate, or `None` if it is the identity.
    pub fn inverse(&self) -> Option<Gate> {
        match self.phase {
            None => Some(self.clone()),
            Some(t) => {
                let inv = normalize_turns(Rational::one() - t);
                if inv.is_zero() {
                    None
                } else {
                    Some(Gate { phase: Some(inv), ..self.clone() })
                }
            }
        }
    }

    /// Same gate with extra controls.
    pub fn with_controls(&self, extra: &[usize]) -> Result<Gate, CircuitError> {
        let mut controls = self.controls.clone();
        controls.extend_from_slice(extra);
        match self.kind {
            GateKind::H => Err(CircuitError::ArityOverflow { kind: "H", controls: controls.len() }),
            k if k.is_phase() => Gate::phase(self.phase.unwrap(), self.target, controls),
            _ => Gate::not(self.target, controls),
        }
    }

    /// Same gate with every qubit index passed through `map`.
    pub fn relabel(&self, map: impl Fn(usize) -> usize) -> Result<Gate, CircuitError> {
        let controls: Vec<usize> = self.controls.iter().map(|&q| map(q)).collect();
        let target = map(self.target);
        let controls = sorted_controls(target, controls)?;
        Ok(Gate { kind: self.kind, target, controls, phase: self.phase })
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let controls = self
            .controls
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(" ");
        match self.kind {
            GateKind::H => write!(f, "H {}", self.target),
            k if k.is_phase() => {
                let t = self.phase.expect("phase gate carries a phase");
                if controls.is_empty() {
                    write!(f, "{k} {}/{} ; -> {}", t.numer(), t.denom(), self.target)
                } else {
                    write!(f, "{k} {}/{} ; {controls} -> {}", t.numer(), t.denom(), self.target)
                }
            }
            k => {
                if controls.is_empty() {
                    write!(f, "{k} {} ;", self.target)
                } else {
                    write!(f, "{k} {} ; {controls}", self.target)
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Register {
    pub name: String,
    pub start: usize,
    pub len: usize,
}

impl Register {
    pub fn qubits(&self) -> std::ops::Range<usize> {
        self.start..self.start + self.len
    }

    pub fn qubit(&self, i: usize) -> usize {
        assert!(i < self.len, "qubit {i} outside register `{}`", self.name);
        self.start + i
    }
}

/// Ordered, disjoint registers covering `[0, qubit_count)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Layout {
    registers: Vec<Register>,
}

impl Layout {
    /// Allocates registers contiguously in the given order.
    pub fn new<S: Into<String>>(regs: impl IntoIterator<Item = (S, usize)>) -> Layout {
        let mut start = 0;
        let registers = regs
            .into_iter()
            .filter(|(_, len)| *len > 0)
            .map(|(name, len)| {
                let r = Register { name: name.into(), start, len };
                start += len;
                r
            })
            .collect();
        Layout { registers }
    }

    /// Validates an explicit register list.
    pub fn from_registers(qubit_count: usize, mut registers: Vec<Register>) -> Result<Layout, CircuitError> {
        let mut sorted = registers.clone();
        sorted.sort_by_key(|r| r.start);
        let mut next = 0;
        for r in &sorted {
            if r.start != next || r.len == 0 {
                return Err(CircuitError::BadLayout(format!(
                    "register `{}` does not tile the qubit range",
                    r.name
                )));
            }
            next += r.len;
        }
        if next != qubit_count {
            return Err(CircuitError::BadLayout(format!(
                "registers cover {next} of {qubit_count} qubits"
            )));
        }
        let mut names: Vec<&str> = sorted.iter().map(|r| r.name.as_str()).collect();
        names.sort_unstable();
        if names.windows(2).any(|w| w[0] == w[1]) {
            return Err(CircuitError::BadLayout("duplicate register name".into()));
        }
        registers.shrink_to_fit();
        Ok(Layout { registers })
    }

    pub fn qubit_count(&self) -> usize {
        self.registers.iter().map(|r| r.len).sum()
    }

    pub fn registers(&self) -> &[Register] {
        &self.registers
    }

    pub fn get(&self, name: &str) -> Option<&Register> {
        self.registers.iter().find(|r| r.name == name)
    }

    pub fn register(&self, name: &str) -> Result<&Register, CircuitError> {
        self.get(name).ok_or_else(|| CircuitError::UnknownRegister(name.to_string()))
    }

    /// Qubit indices of a register; panics on an unknown name.
    pub fn indices(&self, name: &str) -> Vec<usize> {
        self.get(name)
            .unwrap_or_else(|| panic!("no register `{name}`"))
            .qubits()
            .collect()
    }
}

/// Per-kind gate counts; exact rationals so formula averages compare exactly.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct GateHistogram {
    counts: [Rational; 9],
}

impl GateHistogram {
    pub fn new() -> GateHistogram {
        GateHistogram::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (GateKind, Rational)>) -> GateHistogram {
        let mut h = GateHistogram::new();
        for (k, v) in pairs {
            h.counts[k.index()] += v;
        }
        h
    }

    pub fn get(&self, kind: GateKind) -> Rational {
        self.counts[kind.index()]
    }

    pub fn set(&mut self, kind: GateKind, v: Rational) {
        self.counts[kind.index()] = v;
    }

    pub fn bump(&mut self, kind: GateKind) {
        self.counts[kind.index()] += Rational::one();
    }

    pub fn total(&self) -> Rational {
        self.counts.iter().copied().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (GateKind, Rational)> + '_ {
        GateKind::ALL.into_iter().map(|k| (k, self.get(k)))
    }

    pub fn scale(&self, factor: Rational) -> GateHistogram {
        let mut out = self.clone();
        for c in out.counts.iter_mut() {
            *c *= factor;
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.counts.iter().all(|c| c.is_zero())
    }
}

impl Index<GateKind> for GateHistogram {
    type Output = Rational;

    fn index(&self, kind: GateKind) -> &Rational {
        &self.counts[kind.index()]
    }
}

impl Add for GateHistogram {
    type Output = GateHistogram;

    fn add(mut self, rhs: GateHistogram) -> GateHistogram {
        self += rhs;
        self
    }
}

impl AddAssign for GateHistogram {
    fn add_assign(&mut self, rhs: GateHistogram) {
        for (a, b) in self.counts.iter_mut().zip(rhs.counts) {
            *a += b;
        }
    }
}

impl fmt::Display for GateHistogram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| format!("{k}:{c}"))
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Circuit {
    layout: Layout,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(layout: Layout) -> Circuit {
        Circuit { layout, gates: Vec::new() }
    }

    pub fn with_gates(layout: Layout, gates: Vec<Gate>) -> Result<Circuit, CircuitError> {
        let mut c = Circuit::new(layout);
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    pub fn qubit_count(&self) -> usize {
        self.layout.qubit_count()
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn push(&mut self, gate: Gate) -> Result<(), CircuitError> {
        let width = self.qubit_count();
        if let Some(q) = gate.qubits().find(|&q| q >= width) {
            return Err(CircuitError::QubitOutOfRange { qubit: q, width });
        }
        self.gates.push(gate);
        Ok(())
    }

    /// Appends `other`, which must share this circuit's layout.
    pub fn append(&mut self, other: &Circuit) -> Result<(), CircuitError> {
        if other.layout != self.layout {
            return Err(CircuitError::LayoutMismatch);
        }
        self.gates.extend_from_slice(&other.gates);
        Ok(())
    }

    /// True if every gate is a multi-controlled NOT.
    pub fn is_classical(&self) -> bool {
        self.gates.iter().all(|g| g.kind.is_not())
    }

    pub fn tally(&self) -> GateHistogram {
        let mut h = GateHistogram::new();
        for g in &self.gates {
            h.bump(g.kind);
        }
        h
    }

    /// ASAP layering in emission order: a gate lands one layer after the
    /// latest earlier gate sharing any qubit with it.
    pub fn depth(&self) -> u64 {
        let mut layer = vec![0u64; self.qubit_count()];
        let mut depth = 0;
        for g in &self.gates {
            let l = g.qubits().map(|q| layer[q]).max().unwrap_or(0) + 1;
            for q in g.qubits() {
                layer[q] = l;
            }
            depth = depth.max(l);
        }
        depth
    }

    /// Gates reversed and individually inverted.
    pub fn inverse(&self) -> Circuit {
        Circuit {
            layout: self.layout.clone(),
            gates: self.gates.iter().rev().filter_map(Gate::inverse).collect(),
        }
    }

    /// Every gate gains `new_controls`, which must lie in the layout and not
    /// be touched by any existing gate.
    pub fn with_controls(&self, new_controls: &[usize]) -> Result<Circuit, CircuitError> {
        let width = self.qubit_count();
        for &q in new_controls {
            if q >= width {
                return Err(CircuitError::QubitOutOfRange { qubit: q, width });
            }
            if self.gates.iter().any(|g| g.qubits().any(|x| x == q)) {
                return Err(CircuitError::ControlInUse(q));
            }
        }
        let gates = self
            .gates
            .iter()
            .map(|g| g.with_controls(new_controls))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Circuit { layout: self.layout.clone(), gates })
    }

    /// Circuit text format: `QUBITS`, `REG` lines, then one gate per line.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        writeln!(out, "QUBITS {}", self.qubit_count()).unwrap();
        for r in self.layout.registers() {
            writeln!(out, "REG {} {} {}", r.name, r.start, r.len).unwrap();
        }
        for g in &self.gates {
            writeln!(out, "{g}").unwrap();
        }
        out
    }

    pub fn parse(text: &str) -> Result<Circuit, CircuitError> {
        Parser::default().run(text)
    }
}

#[derive(Default)]
struct Parser {
    qubits: Option<usize>,
    registers: Vec<Register>,
    layout: Option<Layout>,
    gates: Vec<Gate>,
}

fn syntax(line: usize, message: impl Into<String>) -> CircuitError {
    CircuitError::Syntax { line, message: message.into() }
}

fn parse_index(line: usize, tok: &str) -> Result<usize, CircuitError> {
    tok.parse::<usize>()
        .map_err(|_| syntax(line, format!("expected a qubit index, found `{tok}`")))
}

fn parse_indices(line: usize, s: &str) -> Result<Vec<usize>, CircuitError> {
    s.split_whitespace().map(|t| parse_index(line, t)).collect()
}

fn parse_phase(line: usize, tok: &str) -> Result<Rational, CircuitError> {
    let (n, d) = tok
        .split_once('/')
        .ok_or_else(|| syntax(line, format!("expected a phase `num/den`, found `{tok}`")))?;
    let n: i64 = n.parse().map_err(|_| syntax(line, "bad phase numerator"))?;
    let d: i64 = d.parse().map_err(|_| syntax(line, "bad phase denominator"))?;
    if d <= 0 {
        return Err(syntax(line, "phase denominator must be positive"));
    }
    Ok(Rational::new(n, d))
}

impl Parser {
    fn run(mut self, text: &str) -> Result<Circuit, CircuitError> {
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            self.line(line_no, line)?;
        }
        let layout = match self.layout {
            Some(l) => l,
            None => {
                let q = self.qubits.ok_or_else(|| syntax(0, "missing QUBITS header"))?;
                Layout::from_registers(q, self.registers)?
            }
        };
        Circuit::with_gates(layout, self.gates)
    }

    fn finish_header(&mut self, line: usize) -> Result<usize, CircuitError> {
        let q = self.qubits.ok_or_else(|| syntax(line, "gate before QUBITS header"))?;
        if self.layout.is_none() {
            let regs = if self.registers.is_empty() {
                vec![Register { name: "q".into(), start: 0, len: q }]
            } else {
                std::mem::take(&mut self.registers)
            };
            let layout = if q == 0 {
                Layout::default()
            } else {
                Layout::from_registers(q, regs).map_err(|e| syntax(line, e.to_string()))?
            };
            self.layout = Some(layout);
        }
        Ok(q)
    }

    fn line(&mut self, line_no: usize, line: &str) -> Result<(), CircuitError> {
        let (head, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        match head {
            "QUBITS" => {
                if self.qubits.is_some() {
                    return Err(syntax(line_no, "duplicate QUBITS header"));
                }
                self.qubits = Some(parse_index(line_no, rest)?);
                Ok(())
            }
            "REG" => {
                if self.layout.is_some() {
                    return Err(syntax(line_no, "REG after the first gate"));
                }
                let parts: Vec<&str> = rest.split_whitespace().collect();
                if parts.len() != 3 {
                    return Err(syntax(line_no, "expected `REG <name> <start> <len>`"));
                }
                self.registers.push(Register {
                    name: parts[0].to_string(),
                    start: parse_index(line_no, parts[1])?,
                    len: parse_index(line_no, parts[2])?,
                });
                Ok(())
            }
            "H" => {
                let width = self.finish_header(line_no)?;
                let target = parse_index(line_no, rest)?;
                self.push(line_no, width, Gate::hadamard(target))
            }
            _ => {
                let kind = GateKind::from_name(head)
                    .ok_or_else(|| syntax(line_no, format!("unknown gate `{head}`")))?;
                let width = self.finish_header(line_no)?;
                let (lhs, rhs) = rest
                    .split_once(';')
                    .ok_or_else(|| syntax(line_no, "expected `;` separator"))?;
                let gate = if kind.is_phase() {
                    let phase = parse_phase(line_no, lhs.trim())?;
                    let (ctrl, tgt) = rhs
                        .split_once("->")
                        .ok_or_else(|| syntax(line_no, "expected `->` before the target"))?;
                    let controls = parse_indices(line_no, ctrl)?;
                    let target = parse_index(line_no, tgt.trim())?;
                    Gate::phase(phase, target, controls)
                } else {
                    let target = parse_index(line_no, lhs.trim())?;
                    Gate::not(target, parse_indices(line_no, rhs)?)
                }
                .map_err(|e| syntax(line_no, e.to_string()))?;
                if gate.kind() != kind {
                    return Err(syntax(
                        line_no,
                        format!("{head} expects {} controls", kind.control_count()),
                    ));
                }
                self.push(line_no, width, gate)
            }
        }
    }

    fn push(&mut self, line: usize, width: usize, gate: Gate) -> Result<(), CircuitError> {
        if let Some(q) = gate.qubits().find(|&q| q >= width) {
            return Err(syntax(line, CircuitError::QubitOutOfRange { qubit: q, width }.to_string()));
        }
        self.gates.push(gate);
        Ok(())
    }
}
