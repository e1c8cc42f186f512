//! GF(p) circuits.

use super::{check_controls, check_operand, unchecked, AdderFamily, BuildError};
use crate::circuit::Circuit;
use crate::field::{ceil_log2, FieldElement, FieldSpec};

fn prime_width(p: u64) -> Result<usize, BuildError> {
    FieldSpec::Prime { p }.validate()?;
    Ok(ceil_log2(p) as usize)
}

fn doubled_operands(a: u64, p: u64, n: usize) -> Vec<u64> {
    let spec = FieldSpec::Prime { p };
    spec.shift_table(FieldElement(a))
        .expect("operand already validated")
        .entries()
        .iter()
        .map(|e| e.0)
        .take(n)
        .collect()
}

/// `|z> -> |(z + a) mod p>` for `z < p`, with 0 or 2 controls (1 is also
/// accepted). Layout `ctrl`, `z` (n), `anc` (overflow, carries, t). The phi
/// variant acts on the QFT of `z` plus the overflow qubit.
pub fn build_mod_adder_gfp(a: u64, p: u64, family: AdderFamily, controls: usize) -> Result<Circuit, BuildError> {
    let n = prime_width(p)?;
    check_controls(controls, 2)?;
    check_operand(a, p)?;
    unchecked::mod_adder_gfp(a, p, n, family, controls)
}

/// `|c,x,z> -> |c, x, (z + c*a*x) mod p>`. Adder `i` adds `2^i a mod p`
/// controlled by `(c, x_i)`.
pub fn build_addmult_gfp(a: u64, p: u64, family: AdderFamily) -> Result<Circuit, BuildError> {
    let n = prime_width(p)?;
    check_operand(a, p)?;
    unchecked::addmult_gfp(&doubled_operands(a, p, n), p, n, family)
}

/// `|c,x,0> -> |c, a^c x mod p, 0>`.
pub fn build_cmult_gfp(a: u64, p: u64, family: AdderFamily) -> Result<Circuit, BuildError> {
    let n = prime_width(p)?;
    check_operand(a, p)?;
    let inv = FieldSpec::Prime { p }.inv(FieldElement(a))?;
    unchecked::cmult_gfp(&doubled_operands(a, p, n), &doubled_operands(inv.0, p, n), p, n, family)
}
