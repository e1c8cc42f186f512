//! Circuit constructors: integer adders, QFT, controlled swap, and the
//! modular adders, add-mult and controlled multiplication for each field.
//!
//! Classical operand bits are resolved at build time, so a gate conditioned on
//! a zero bit is simply not emitted.
//!
//! Register names used throughout: `ctrl` (external controls of an adder),
//! `c` (multiplication control), `x`, `z` (target value), `anc` (overflow
//! qubits, then carries, then the flag `t`). QFT uses `q`, swap uses `c`,
//! `x`, `y`.

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use thiserror::Error;

use crate::circuit::{normalize_turns, Circuit, Gate, Layout, Rational};
use crate::field::{FieldElement, FieldError, FieldSpec};

pub mod binary;
pub mod extension;
pub mod prime;
pub mod unchecked;

pub use binary::{build_adder_gf2n, build_addmult_gf2n, build_cmult_gf2n};
pub use extension::{build_adder_gfpk, build_addmult_gfpk, build_cmult_gfpk};
pub use prime::{build_addmult_gfp, build_cmult_gfp, build_mod_adder_gfp};

/// Widest register a phase-based circuit may address; phases are `k / 2^N`
/// with a 64-bit denominator.
pub const MAX_PHASE_REGISTER: usize = 62;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AdderFamily {
    CarrySum,
    Phi,
}

impl AdderFamily {
    pub const ALL: [AdderFamily; 2] = [AdderFamily::CarrySum, AdderFamily::Phi];

    pub fn name(self) -> &'static str {
        match self {
            AdderFamily::CarrySum => "carry-sum",
            AdderFamily::Phi => "phi",
        }
    }
}

impl fmt::Display for AdderFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AdderFamily {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "carry-sum" => Ok(AdderFamily::CarrySum),
            "phi" => Ok(AdderFamily::Phi),
            _ => Err(format!("unknown adder family `{s}` (expected carry-sum or phi)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuildError {
    #[error("register width {n} is below the minimum of {min}")]
    WidthTooSmall { n: usize, min: usize },
    #[error("register width {n} exceeds the maximum of {max}")]
    WidthTooLarge { n: usize, max: usize },
    #[error("operand {a} is out of range (must be below {bound})")]
    OperandOutOfRange { a: u64, bound: u64 },
    #[error("zero has no multiplicative inverse")]
    NotInvertible,
    #[error("{0} control qubits are not supported for this circuit")]
    UnsupportedControls(usize),
    #[error("this circuit is not defined over the field {0}")]
    WrongField(String),
    #[error("table has {found} entries, expected {expected}")]
    TableSize { expected: usize, found: usize },
    #[error(transparent)]
    Field(FieldError),
}

impl From<FieldError> for BuildError {
    fn from(e: FieldError) -> Self {
        match e {
            FieldError::NotInvertible => BuildError::NotInvertible,
            other => BuildError::Field(other),
        }
    }
}

pub(crate) fn check_controls(controls: usize, max: usize) -> Result<(), BuildError> {
    if controls > max {
        Err(BuildError::UnsupportedControls(controls))
    } else {
        Ok(())
    }
}

pub(crate) fn check_operand(a: u64, bound: u64) -> Result<(), BuildError> {
    if a >= bound {
        Err(BuildError::OperandOutOfRange { a, bound })
    } else {
        Ok(())
    }
}

fn cat(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut v = Vec::with_capacity(a.len() + b.len());
    v.extend_from_slice(a);
    v.extend_from_slice(b);
    v
}

/// Gate accumulator used by every builder.
#[derive(Debug, Default, Clone)]
pub(crate) struct Ops(pub Vec<Gate>);

impl Ops {
    pub fn new() -> Ops {
        Ops(Vec::new())
    }

    pub fn not(&mut self, target: usize, controls: &[usize]) {
        self.0.push(Gate::not(target, controls.to_vec()).expect("builder emits well-formed gates"));
    }

    pub fn phase(&mut self, turns: Rational, target: usize, controls: &[usize]) {
        if normalize_turns(turns).is_zero() {
            return;
        }
        self.0
            .push(Gate::phase(turns, target, controls.to_vec()).expect("builder emits well-formed gates"));
    }

    pub fn h(&mut self, q: usize) {
        self.0.push(Gate::hadamard(q));
    }

    pub fn extend_inverse(&mut self, other: Ops) {
        self.0.extend(other.0.iter().rev().filter_map(Gate::inverse));
    }

    pub fn into_circuit(self, layout: Layout) -> Circuit {
        Circuit::with_gates(layout, self.0).expect("builder gates fit the layout")
    }
}

/// Carry-sum addition of the classical `a` onto `b` (`n+1` qubits, the last
/// one being the overflow), using `n-1` carry qubits. Computes
/// `b + a mod 2^(n+1)`. Only the sum gates and the bottom carry take the
/// controls `k`.
pub(crate) fn carry_sum_add(ops: &mut Ops, a: u64, b: &[usize], carries: &[usize], k: &[usize]) {
    let n = b.len() - 1;
    debug_assert!(n >= 2 && carries.len() == n - 1);
    let bit = |i: usize| (a >> i) & 1 == 1;
    let c = |i: usize| carries[i - 1];

    if bit(0) {
        ops.not(c(1), &[b[0]]);
    }
    #[allow(clippy::needless_range_loop)]
    for i in 1..n - 1 {
        if bit(i) {
            ops.not(c(i + 1), &[b[i]]);
            ops.not(b[i], &[]);
        }
        ops.not(c(i + 1), &[c(i), b[i]]);
    }
    if bit(n - 1) {
        ops.not(b[n], &cat(k, &[b[n - 1]]));
        ops.not(b[n - 1], k);
    }
    ops.not(b[n], &cat(k, &[c(n - 1), b[n - 1]]));
    ops.not(b[n - 1], &cat(k, &[c(n - 1)]));
    for i in (1..n - 1).rev() {
        ops.not(c(i + 1), &[c(i), b[i]]);
        if bit(i) {
            ops.not(b[i], &[]);
            ops.not(c(i + 1), &[b[i]]);
            ops.not(b[i], k);
        }
        ops.not(b[i], &cat(k, &[c(i)]));
    }
    if bit(0) {
        ops.not(c(1), &[b[0]]);
        ops.not(b[0], k);
    }
}

pub(crate) fn carry_sum_sub(ops: &mut Ops, a: u64, b: &[usize], carries: &[usize], k: &[usize]) {
    let mut fwd = Ops::new();
    carry_sum_add(&mut fwd, a, b, carries, k);
    ops.extend_inverse(fwd);
}

/// Phase addition of `sign * a` on a register in Fourier space. Fourier qubit
/// `i` carries the phase `z / 2^(i+1)`.
pub(crate) fn phi_add(ops: &mut Ops, a: u64, negate: bool, q: &[usize], k: &[usize]) {
    for (i, &qi) in q.iter().enumerate() {
        let den = 1i64 << (i + 1);
        let num = (a % den as u64) as i64;
        let turns = Rational::new(if negate { -num } else { num }, den);
        ops.phase(turns, qi, k);
    }
}

/// QFT without terminal swaps.
pub(crate) fn qft(ops: &mut Ops, q: &[usize]) {
    for i in (0..q.len()).rev() {
        ops.h(q[i]);
        for m in (0..i).rev() {
            ops.phase(Rational::new(1, 1i64 << (i - m + 1)), q[i], &[q[m]]);
        }
    }
}

pub(crate) fn iqft(ops: &mut Ops, q: &[usize]) {
    let mut fwd = Ops::new();
    qft(&mut fwd, q);
    ops.extend_inverse(fwd);
}

/// Swaps `x` and `y` when `c` is set: a CN layer, a C²N column, a CN layer.
pub(crate) fn cswap(ops: &mut Ops, c: usize, x: &[usize], y: &[usize]) {
    for (&xi, &yi) in x.iter().zip(y) {
        ops.not(xi, &[yi]);
    }
    for (&xi, &yi) in x.iter().zip(y) {
        ops.not(yi, &[c, xi]);
    }
    for (&xi, &yi) in x.iter().zip(y) {
        ops.not(xi, &[yi]);
    }
}

/// Ancilla qubits a modular adder works with.
#[derive(Debug, Clone, Copy)]
pub(crate) struct ModAnc<'a> {
    pub carries: &'a [usize],
    pub t: usize,
}

/// `z <- (z + a) mod p` on `z` (`n` value qubits plus overflow, last). For the
/// phi family `z` is in Fourier space on entry and exit. The controls `k`
/// apply to the three `a`-adders only.
pub(crate) fn mod_add(
    ops: &mut Ops,
    family: AdderFamily,
    a: u64,
    p: u64,
    z: &[usize],
    anc: ModAnc<'_>,
    k: &[usize],
) {
    let msb = *z.last().expect("non-empty target");
    let t = anc.t;
    match family {
        AdderFamily::CarrySum => {
            let cs = anc.carries;
            carry_sum_add(ops, a, z, cs, k);
            carry_sum_sub(ops, p, z, cs, &[]);
            ops.not(t, &[msb]);
            carry_sum_add(ops, p, z, cs, &[t]);
            carry_sum_sub(ops, a, z, cs, k);
            ops.not(msb, &[]);
            ops.not(t, &[msb]);
            ops.not(msb, &[]);
            carry_sum_add(ops, a, z, cs, k);
        }
        AdderFamily::Phi => {
            phi_add(ops, a, false, z, k);
            phi_add(ops, p, true, z, &[]);
            iqft(ops, z);
            ops.not(t, &[msb]);
            qft(ops, z);
            phi_add(ops, p, false, z, &[t]);
            phi_add(ops, a, true, z, k);
            iqft(ops, z);
            ops.not(msb, &[]);
            ops.not(t, &[msb]);
            ops.not(msb, &[]);
            qft(ops, z);
            phi_add(ops, a, false, z, k);
        }
    }
}

fn ctrl_layout<S: Into<String>>(controls: usize, rest: impl IntoIterator<Item = (S, usize)>) -> Layout {
    let mut regs: Vec<(String, usize)> = vec![("ctrl".to_string(), controls)];
    regs.extend(rest.into_iter().map(|(s, l)| (s.into(), l)));
    Layout::new(regs)
}

/// Integer carry-sum adder: `z` holds `n+1` qubits (value plus overflow),
/// `anc` the `n-1` carries. Width `2n + controls`.
pub fn build_carry_sum_adder(a: u64, n: usize, controls: usize) -> Result<Circuit, BuildError> {
    check_controls(controls, 2)?;
    if n < 2 {
        return Err(BuildError::WidthTooSmall { n, min: 2 });
    }
    if n > 63 {
        return Err(BuildError::WidthTooLarge { n, max: 63 });
    }
    check_operand(a, 1u64 << n)?;
    let layout = ctrl_layout(controls, [("z", n + 1), ("anc", n - 1)]);
    let k = layout.get("ctrl").map(|r| r.qubits().collect()).unwrap_or_else(Vec::new);
    let mut ops = Ops::new();
    carry_sum_add(&mut ops, a, &layout.indices("z"), &layout.indices("anc"), &k);
    Ok(ops.into_circuit(layout))
}

/// Integer phi-adder on a `width`-qubit Fourier register (`width = n+1`).
pub fn build_phi_adder(a: u64, width: usize, controls: usize) -> Result<Circuit, BuildError> {
    check_controls(controls, 2)?;
    if width < 2 {
        return Err(BuildError::WidthTooSmall { n: width, min: 2 });
    }
    if width > MAX_PHASE_REGISTER {
        return Err(BuildError::WidthTooLarge { n: width, max: MAX_PHASE_REGISTER });
    }
    check_operand(a, 1u64 << (width - 1))?;
    let layout = ctrl_layout(controls, [("z", width)]);
    let k = layout.get("ctrl").map(|r| r.qubits().collect()).unwrap_or_else(Vec::new);
    let mut ops = Ops::new();
    phi_add(&mut ops, a, false, &layout.indices("z"), &k);
    Ok(ops.into_circuit(layout))
}

/// QFT on `width` qubits. Fourier qubit `i` ends up with the phase
/// `z / 2^(i+1)`, i.e. the output is bit-reversed relative to the textbook
/// DFT ordering.
pub fn build_qft(width: usize) -> Result<Circuit, BuildError> {
    if width < 1 {
        return Err(BuildError::WidthTooSmall { n: width, min: 1 });
    }
    if width > MAX_PHASE_REGISTER {
        return Err(BuildError::WidthTooLarge { n: width, max: MAX_PHASE_REGISTER });
    }
    let layout = Layout::new([("q", width)]);
    let mut ops = Ops::new();
    qft(&mut ops, &layout.indices("q"));
    Ok(ops.into_circuit(layout))
}

/// Swaps registers `x` and `y` (n qubits each) when `c` is set.
pub fn build_cswap(n: usize) -> Result<Circuit, BuildError> {
    if n < 1 {
        return Err(BuildError::WidthTooSmall { n, min: 1 });
    }
    let layout = Layout::new([("c", 1), ("x", n), ("y", n)]);
    let mut ops = Ops::new();
    cswap(&mut ops, 0, &layout.indices("x"), &layout.indices("y"));
    Ok(ops.into_circuit(layout))
}

/// Field adder `z <- z + a` with up to two controls, dispatching on the field.
/// The GF(p) phi variant works in Fourier space (see [`build_mod_adder_gfp`]).
pub fn build_field_adder(
    spec: &FieldSpec,
    a: FieldElement,
    family: AdderFamily,
    controls: usize,
) -> Result<Circuit, BuildError> {
    match spec {
        FieldSpec::Prime { p } => build_mod_adder_gfp(a.0, *p, family, controls),
        FieldSpec::Binary { .. } => build_adder_gf2n(spec, a, controls),
        FieldSpec::Extension { .. } => build_adder_gfpk(spec, a, family, controls),
    }
}

/// Controlled add-mult `|c,x,z> -> |c,x,z + c*a*x>`, dispatching on the field.
pub fn build_addmult(spec: &FieldSpec, a: FieldElement, family: AdderFamily) -> Result<Circuit, BuildError> {
    match spec {
        FieldSpec::Prime { p } => build_addmult_gfp(a.0, *p, family),
        FieldSpec::Binary { .. } => build_addmult_gf2n(spec, a),
        FieldSpec::Extension { .. } => build_addmult_gfpk(spec, a, family),
    }
}

/// Controlled in-place multiplication `|c,x> -> |c, a^c * x>`, dispatching on
/// the field. The family is ignored for GF(2^n).
pub fn build_cmult(spec: &FieldSpec, a: FieldElement, family: AdderFamily) -> Result<Circuit, BuildError> {
    match spec {
        FieldSpec::Prime { p } => build_cmult_gfp(a.0, *p, family),
        FieldSpec::Binary { .. } => build_cmult_gf2n(spec, a),
        FieldSpec::Extension { .. } => build_cmult_gfpk(spec, a, family),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::GateKind;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn phi_adder_example() {
        let c = build_phi_adder(2, 3, 0).unwrap();
        let phases: Vec<_> = c.gates().iter().map(|g| (g.target(), g.phase_turns().unwrap())).collect();
        assert_eq!(phases, vec![(1, r(1, 2)), (2, r(1, 4))]);
        assert!(build_phi_adder(0, 3, 0).unwrap().is_empty());
        assert_eq!(c.depth(), 1);
        assert!(build_phi_adder(4, 3, 0).is_err());
    }

    #[test]
    fn qft_shape() {
        let c = build_qft(1).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c.gates()[0].kind(), GateKind::H);
        let c = build_qft(4).unwrap();
        let h = c.tally();
        assert_eq!(h[GateKind::CP], r(6, 1));
        assert_eq!(h[GateKind::H], r(4, 1));
        assert_eq!(c.depth(), 7);
    }

    #[test]
    fn cswap_shape() {
        let c = build_cswap(5).unwrap();
        assert_eq!(c.qubit_count(), 11);
        assert_eq!(c.tally()[GateKind::C2N], r(5, 1));
        assert_eq!(c.tally()[GateKind::CN], r(10, 1));
        assert_eq!(c.depth(), 7);
    }

    #[test]
    fn carry_sum_adder_widths() {
        assert_eq!(build_carry_sum_adder(5, 4, 0).unwrap().qubit_count(), 8);
        assert_eq!(build_carry_sum_adder(5, 4, 1).unwrap().qubit_count(), 9);
        assert_eq!(build_carry_sum_adder(5, 4, 2).unwrap().qubit_count(), 10);
        assert_eq!(
            build_carry_sum_adder(1, 1, 0),
            Err(BuildError::WidthTooSmall { n: 1, min: 2 })
        );
        assert_eq!(
            build_carry_sum_adder(16, 4, 0),
            Err(BuildError::OperandOutOfRange { a: 16, bound: 16 })
        );
        assert_eq!(build_carry_sum_adder(1, 4, 3), Err(BuildError::UnsupportedControls(3)));
    }

    #[test]
    fn family_names_round_trip() {
        for f in AdderFamily::ALL {
            assert_eq!(f.name().parse::<AdderFamily>(), Ok(f));
        }
        assert!("vbe".parse::<AdderFamily>().is_err());
    }
}
