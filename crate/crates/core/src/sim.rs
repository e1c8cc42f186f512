//! Two simulators: a bit-flip evaluator for NOT-only circuits (any width) and
//! a dense statevector engine for everything else.
//!
//! Qubit `i` is bit `i` of a basis index. Amplitude storage follows the same
//! little-endian order.

use std::f64::consts::TAU;

use num_complex::Complex64;
use thiserror::Error;

use crate::circuit::{Circuit, GateKind, Layout};

/// Default statevector qubit cap (2^26 amplitudes, 1 GiB).
pub const DEFAULT_STATEVECTOR_CAP: usize = 26;

/// Environment variable overriding [`DEFAULT_STATEVECTOR_CAP`].
pub const STATEVECTOR_CAP_ENV: &str = "GFQC_MAX_SV_QUBITS";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimError {
    #[error("gate {index} is {kind}, which the permutation simulator cannot apply")]
    NonClassicalGate { index: usize, kind: GateKind },
    #[error("{width} qubits exceed the statevector cap of {cap}")]
    WidthCap { width: usize, cap: usize },
    #[error("state has {found} qubits but the circuit has {expected}")]
    WidthMismatch { expected: usize, found: usize },
    #[error("unknown register `{0}`")]
    UnknownRegister(String),
    #[error("value {value} does not fit register `{register}` of {len} qubits")]
    ValueTooLarge { register: String, value: u64, len: usize },
    #[error("register `{0}` is wider than 64 qubits")]
    RegisterTooWide(String),
}

/// A computational basis state of arbitrary width.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BasisState {
    width: usize,
    words: Vec<u64>,
}

impl BasisState {
    pub fn zeros(width: usize) -> BasisState {
        BasisState { width, words: vec![0; width.div_ceil(64).max(1)] }
    }

    /// Basis state from its index. Bits at or above `width` must be zero.
    pub fn from_index(width: usize, index: u64) -> BasisState {
        assert!(width >= 64 || index >> width == 0, "index {index} exceeds {width} qubits");
        let mut s = BasisState::zeros(width);
        s.words[0] = index;
        s
    }

    /// Sets each named register to the given value; everything else is 0.
    pub fn from_registers(layout: &Layout, values: &[(&str, u64)]) -> Result<BasisState, SimError> {
        let mut s = BasisState::zeros(layout.qubit_count());
        for &(name, v) in values {
            s.write_register(layout, name, v)?;
        }
        Ok(s)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn get(&self, q: usize) -> bool {
        (self.words[q / 64] >> (q % 64)) & 1 == 1
    }

    pub fn set(&mut self, q: usize, v: bool) {
        let bit = 1u64 << (q % 64);
        if v {
            self.words[q / 64] |= bit;
        } else {
            self.words[q / 64] &= !bit;
        }
    }

    pub fn flip(&mut self, q: usize) {
        self.words[q / 64] ^= 1u64 << (q % 64);
    }

    /// Index of the state, if it fits in 64 bits.
    pub fn index(&self) -> Option<u64> {
        if self.words[1..].iter().all(|&w| w == 0) {
            Some(self.words[0])
        } else {
            None
        }
    }

    pub fn read_register(&self, layout: &Layout, name: &str) -> Result<u64, SimError> {
        let r = layout.get(name).ok_or_else(|| SimError::UnknownRegister(name.to_string()))?;
        if r.len > 64 {
            return Err(SimError::RegisterTooWide(name.to_string()));
        }
        Ok(r.qubits().enumerate().fold(0u64, |acc, (i, q)| acc | (self.get(q) as u64) << i))
    }

    pub fn write_register(&mut self, layout: &Layout, name: &str, value: u64) -> Result<(), SimError> {
        let r = layout.get(name).ok_or_else(|| SimError::UnknownRegister(name.to_string()))?;
        if r.len < 64 && value >> r.len != 0 {
            return Err(SimError::ValueTooLarge { register: name.to_string(), value, len: r.len });
        }
        for (i, q) in r.qubits().enumerate() {
            self.set(q, i < 64 && (value >> i) & 1 == 1);
        }
        Ok(())
    }
}

/// Reads a register out of a basis state.
pub fn read_register(s: &BasisState, layout: &Layout, name: &str) -> Result<u64, SimError> {
    s.read_register(layout, name)
}

fn check_width(c: &Circuit, found: usize) -> Result<(), SimError> {
    if c.qubit_count() != found {
        Err(SimError::WidthMismatch { expected: c.qubit_count(), found })
    } else {
        Ok(())
    }
}

/// Applies a NOT-family circuit to a basis state.
pub fn run_permutation(c: &Circuit, input: &BasisState) -> Result<BasisState, SimError> {
    check_width(c, input.width)?;
    if let Some((index, g)) = c.gates().iter().enumerate().find(|(_, g)| !g.kind().is_not()) {
        return Err(SimError::NonClassicalGate { index, kind: g.kind() });
    }
    let mut s = input.clone();
    for g in c.gates() {
        if g.controls().iter().all(|&q| s.get(q)) {
            s.flip(g.target());
        }
    }
    Ok(s)
}

/// Qubit cap for the statevector path, honouring the environment override.
pub fn statevector_cap() -> usize {
    std::env::var(STATEVECTOR_CAP_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_STATEVECTOR_CAP)
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    width: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// The basis state `|index>`; fails above the configured cap.
    pub fn basis(width: usize, index: u64) -> Result<StateVector, SimError> {
        let cap = statevector_cap();
        if width > cap || width >= usize::BITS as usize {
            return Err(SimError::WidthCap { width, cap });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1usize << width];
        amps[index as usize] = Complex64::new(1.0, 0.0);
        Ok(StateVector { width, amps })
    }

    pub fn from_basis(s: &BasisState) -> Result<StateVector, SimError> {
        let cap = statevector_cap();
        match s.index() {
            Some(i) if s.width <= cap => StateVector::basis(s.width, i),
            _ => Err(SimError::WidthCap { width: s.width, cap }),
        }
    }

    /// Wraps raw amplitudes; the length must be a power of two.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> StateVector {
        assert!(amps.len().is_power_of_two(), "amplitude count must be a power of two");
        StateVector { width: amps.len().trailing_zeros() as usize, amps }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// The unique basis state with probability at least `1 - tol`.
    pub fn read_basis(&self, tol: f64) -> Option<BasisState> {
        let (idx, p) = self.dominant();
        (p >= 1.0 - tol).then(|| BasisState::from_index(self.width, idx as u64))
    }

    /// Index and probability of the largest amplitude.
    pub fn dominant(&self) -> (usize, f64) {
        self.amps
            .iter()
            .map(|a| a.norm_sqr())
            .enumerate()
            .fold((0, -1.0), |best, (i, p)| if p > best.1 { (i, p) } else { best })
    }
}

/// Free function form of [`StateVector::read_basis`].
pub fn read_basis(v: &StateVector, tol: f64) -> Option<BasisState> {
    v.read_basis(tol)
}

enum Op {
    Flip,
    Phase(Complex64),
    Hadamard,
}

struct Compiled {
    op: Op,
    target: usize,
    controls: usize,
}

/// Visits every index in `[0, 2^width)` whose bits under `fixed` equal
/// `value`, by stepping through the subsets of the free bits.
#[inline]
fn for_each_fixed(width: usize, fixed: usize, value: usize, mut f: impl FnMut(usize)) {
    let free = ((1usize << width) - 1) & !fixed;
    let mut x = 0usize;
    loop {
        f(x | value);
        x = (x | !free).wrapping_add(1) & free;
        if x == 0 {
            break;
        }
    }
}

/// Applies any circuit to a statevector in place.
pub fn apply_statevector(c: &Circuit, v: &mut StateVector) -> Result<(), SimError> {
    check_width(c, v.width)?;
    let compiled: Vec<Compiled> = c
        .gates()
        .iter()
        .map(|g| {
            let op = match g.kind() {
                GateKind::H => Op::Hadamard,
                k if k.is_phase() => {
                    let t = g.phase_turns().expect("phase gate carries a phase");
                    let angle = TAU * (*t.numer() as f64) / (*t.denom() as f64);
                    Op::Phase(Complex64::from_polar(1.0, angle))
                }
                _ => Op::Flip,
            };
            Compiled {
                op,
                target: 1usize << g.target(),
                controls: g.controls().iter().fold(0, |m, &q| m | 1usize << q),
            }
        })
        .collect();
    let w = v.width;
    let amps = &mut v.amps;
    let h = std::f64::consts::FRAC_1_SQRT_2;
    for g in &compiled {
        let fixed = g.controls | g.target;
        match g.op {
            Op::Flip => for_each_fixed(w, fixed, g.controls, |i| amps.swap(i, i | g.target)),
            Op::Phase(z) => for_each_fixed(w, fixed, fixed, |i| amps[i] *= z),
            Op::Hadamard => for_each_fixed(w, fixed, 0, |i| {
                let (a, b) = (amps[i], amps[i | g.target]);
                amps[i] = (a + b) * h;
                amps[i | g.target] = (a - b) * h;
            }),
        }
    }
    Ok(())
}

/// Applies `c` to `input`, returning the output state.
pub fn run_statevector(c: &Circuit, input: &StateVector) -> Result<StateVector, SimError> {
    let cap = statevector_cap();
    if input.width > cap {
        return Err(SimError::WidthCap { width: input.width, cap });
    }
    let mut v = input.clone();
    apply_statevector(c, &mut v)?;
    Ok(v)
}

/// Result of running a circuit on a basis input.
#[derive(Debug, Clone, PartialEq)]
pub enum BasisOutput {
    /// The output is (within tolerance) the given basis state.
    Basis { state: BasisState, probability: f64 },
    /// No basis state carries probability `1 - tol`.
    NotBasis { max_probability: f64 },
}

impl BasisOutput {
    pub fn state(&self) -> Option<&BasisState> {
        match self {
            BasisOutput::Basis { state, .. } => Some(state),
            BasisOutput::NotBasis { .. } => None,
        }
    }
}

/// Runs `c` on a basis input, choosing the permutation path for NOT-only
/// circuits and the statevector path otherwise.
pub fn run_basis(c: &Circuit, input: &BasisState, tol: f64) -> Result<BasisOutput, SimError> {
    if c.is_classical() {
        let state = run_permutation(c, input)?;
        return Ok(BasisOutput::Basis { state, probability: 1.0 });
    }
    check_width(c, input.width)?;
    let mut v = StateVector::from_basis(input)?;
    apply_statevector(c, &mut v)?;
    let (idx, p) = v.dominant();
    if p >= 1.0 - tol {
        Ok(BasisOutput::Basis { state: BasisState::from_index(v.width, idx as u64), probability: p })
    } else {
        Ok(BasisOutput::NotBasis { max_probability: p })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{Gate, Rational};

    fn flat(w: usize) -> Layout {
        Layout::new([("q", w)])
    }

    #[test]
    fn permutation_examples() {
        let empty = Circuit::new(flat(3));
        let s = BasisState::from_index(3, 5);
        assert_eq!(run_permutation(&empty, &s).unwrap(), s);
        let c = Circuit::with_gates(flat(2), vec![Gate::not(0, []).unwrap()]).unwrap();
        assert_eq!(run_permutation(&c, &BasisState::zeros(2)).unwrap().index(), Some(1));
        let c = Circuit::with_gates(flat(1), vec![Gate::hadamard(0)]).unwrap();
        assert_eq!(
            run_permutation(&c, &BasisState::zeros(1)),
            Err(SimError::NonClassicalGate { index: 0, kind: GateKind::H })
        );
    }

    #[test]
    fn wide_states() {
        let layout = Layout::new([("a", 70), ("b", 60)]);
        let mut s = BasisState::from_registers(&layout, &[("a", u64::MAX), ("b", 5)]).unwrap();
        assert_eq!(s.read_register(&layout, "b"), Ok(5));
        assert_eq!(s.read_register(&layout, "a"), Err(SimError::RegisterTooWide("a".into())));
        s.flip(129);
        assert!(s.get(129));
        assert_eq!(s.index(), None);
        assert!(matches!(
            BasisState::from_registers(&layout, &[("b", 1 << 61)]),
            Err(SimError::ValueTooLarge { .. })
        ));
    }

    #[test]
    fn register_readout() {
        let layout = Layout::new([("c", 1), ("x", 3), ("z", 3)]);
        let s = BasisState::from_registers(&layout, &[("c", 1), ("x", 5)]).unwrap();
        assert_eq!(s.read_register(&layout, "x"), Ok(5));
        assert_eq!(s.read_register(&layout, "z"), Ok(0));
        assert_eq!(s.read_register(&layout, "y"), Err(SimError::UnknownRegister("y".into())));
    }

    #[test]
    fn basis_readout() {
        let v = StateVector::basis(3, 6).unwrap();
        assert_eq!(v.read_basis(1e-9), Some(BasisState::from_index(3, 6)));
        let h = Circuit::with_gates(flat(2), vec![Gate::hadamard(0), Gate::hadamard(1)]).unwrap();
        let u = run_statevector(&h, &StateVector::basis(2, 0).unwrap()).unwrap();
        assert_eq!(u.read_basis(1e-9), None);
        assert!((u.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn phase_and_flip_kernels() {
        let gates = vec![
            Gate::hadamard(0),
            Gate::phase(Rational::new(1, 2), 0, []).unwrap(),
            Gate::hadamard(0),
            Gate::not(2, [0, 1]).unwrap(),
        ];
        let c = Circuit::with_gates(flat(3), gates).unwrap();
        // H P(1/2) H = X, then the Toffoli fires once qubit 1 is also set.
        let out = run_statevector(&c, &StateVector::basis(3, 0b010).unwrap()).unwrap();
        assert_eq!(out.read_basis(1e-12), Some(BasisState::from_index(3, 0b111)));
    }

    #[test]
    fn cap_is_enforced() {
        let s = BasisState::zeros(DEFAULT_STATEVECTOR_CAP + 1);
        if std::env::var(STATEVECTOR_CAP_ENV).is_err() {
            assert!(matches!(StateVector::from_basis(&s), Err(SimError::WidthCap { .. })));
        }
    }

    #[test]
    fn fixed_enumeration_visits_exactly_the_matching_indices() {
        for (fixed, value) in [(0b0000usize, 0usize), (0b1010, 0b1000), (0b1111, 0b0101), (0b0110, 0b0110)] {
            let mut seen = Vec::new();
            for_each_fixed(4, fixed, value, |i| seen.push(i));
            let expect: Vec<usize> = (0..16).filter(|i| i & fixed == value).collect();
            assert_eq!(seen, expect);
        }
    }
}
