//! Quantum circuits for controlled multiplication over GF(p), GF(2^n) and
//! GF(p^k), with exact field arithmetic, simulators and resource formulas.
//!
//! ```
//! use gfqc::builders::build_cmult_gfp;
//! use gfqc::sim::{run_basis, BasisOutput};
//! use gfqc::{AdderFamily, BasisState};
//!
//! let circ = build_cmult_gfp(3, 7, AdderFamily::CarrySum).unwrap();
//! let input = BasisState::from_registers(circ.layout(), &[("c", 1), ("x", 4)]).unwrap();
//! match run_basis(&circ, &input, 1e-9).unwrap() {
//!     BasisOutput::Basis { state, .. } => {
//!         assert_eq!(state.read_register(circ.layout(), "x").unwrap(), 5);
//!     }
//!     BasisOutput::NotBasis { .. } => unreachable!(),
//! }
//! ```

pub mod builders;
pub mod circuit;
pub mod field;
pub mod poly;
pub mod resources;
pub mod sim;

pub use builders::{AdderFamily, BuildError};
pub use circuit::{Circuit, CircuitError, Gate, GateHistogram, GateKind, Layout, Rational, Register};
pub use field::{FieldElement, FieldError, FieldSpec, ShiftTable};
pub use resources::{CircuitKind, Params, ResourceEstimate};
pub use sim::{BasisState, SimError, StateVector};
