//! GF(2^n) circuits. No carries: addition is a layer of NOTs.

use super::{check_controls, unchecked, BuildError};
use crate::circuit::Circuit;
use crate::field::{FieldElement, FieldSpec};

fn binary_width(spec: &FieldSpec) -> Result<usize, BuildError> {
    match spec {
        FieldSpec::Binary { n, .. } => {
            spec.validate()?;
            Ok(*n as usize)
        }
        other => Err(BuildError::WrongField(other.to_string())),
    }
}

fn table_bits(spec: &FieldSpec, a: FieldElement) -> Result<Vec<u64>, BuildError> {
    Ok(spec.shift_table(a)?.entries().iter().map(|e| e.0).collect())
}

/// `|z> -> |z + a>` (XOR), with 0, 1 or 2 controls.
pub fn build_adder_gf2n(spec: &FieldSpec, a: FieldElement, controls: usize) -> Result<Circuit, BuildError> {
    let n = binary_width(spec)?;
    check_controls(controls, 2)?;
    if !spec.is_valid_element(a) {
        return Err(crate::field::FieldError::InvalidElement(a.0).into());
    }
    unchecked::adder_gf2n(a.0, n, controls)
}

/// `|c,x,z> -> |c, x, z + c*a*x>` using the shift table of `a`.
pub fn build_addmult_gf2n(spec: &FieldSpec, a: FieldElement) -> Result<Circuit, BuildError> {
    let n = binary_width(spec)?;
    unchecked::addmult_gf2n(&table_bits(spec, a)?, n)
}

/// `|c,x,0> -> |c, a^c x, 0>`.
pub fn build_cmult_gf2n(spec: &FieldSpec, a: FieldElement) -> Result<Circuit, BuildError> {
    let n = binary_width(spec)?;
    let inv = spec.inv(a)?;
    unchecked::cmult_gf2n(&table_bits(spec, a)?, &table_bits(spec, inv)?, n)
}
