//! GF(p^k) circuits, built from `k` GF(p) modular adders per field addition.

use super::{check_controls, unchecked, AdderFamily, BuildError};
use crate::circuit::Circuit;
use crate::field::{FieldElement, FieldError, FieldSpec};

struct Shape {
    p: u64,
    k: usize,
    l: usize,
}

fn extension_shape(spec: &FieldSpec) -> Result<Shape, BuildError> {
    match spec {
        FieldSpec::Extension { p, k, .. } => {
            spec.validate()?;
            Ok(Shape { p: *p, k: *k as usize, l: spec.coefficient_bits() as usize })
        }
        other => Err(BuildError::WrongField(other.to_string())),
    }
}

fn coeff_table(spec: &FieldSpec, a: FieldElement) -> Result<Vec<Vec<u64>>, BuildError> {
    spec.shift_table(a)?
        .entries()
        .iter()
        .map(|&e| spec.coeff_decompose(e).map_err(BuildError::from))
        .collect()
}

/// `|z> -> |z + a>` coefficientwise mod p. Layout `ctrl`, `z` (kl), `anc`.
/// Carry-sum `anc` holds one overflow per coefficient, `l-1` shared carries
/// and `t`; phi `anc` holds one shared overflow and `t`.
pub fn build_adder_gfpk(
    spec: &FieldSpec,
    a: FieldElement,
    family: AdderFamily,
    controls: usize,
) -> Result<Circuit, BuildError> {
    let s = extension_shape(spec)?;
    check_controls(controls, 2)?;
    if !spec.is_valid_element(a) {
        return Err(FieldError::InvalidElement(a.0).into());
    }
    unchecked::adder_gfpk(&spec.coeff_decompose(a)?, s.p, s.l, family, controls)
}

/// `|c,x,z> -> |c, x, z + c*a*x>`; qubit `i*l + j` of `x` controls the adder
/// of `2^j x^i a mod Q`.
pub fn build_addmult_gfpk(spec: &FieldSpec, a: FieldElement, family: AdderFamily) -> Result<Circuit, BuildError> {
    let s = extension_shape(spec)?;
    unchecked::addmult_gfpk(&coeff_table(spec, a)?, s.p, s.l, s.k, family)
}

/// `|c,x,0> -> |c, a^c x, 0>`.
pub fn build_cmult_gfpk(spec: &FieldSpec, a: FieldElement, family: AdderFamily) -> Result<Circuit, BuildError> {
    let s = extension_shape(spec)?;
    let inv = spec.inv(a)?;
    unchecked::cmult_gfpk(&coeff_table(spec, a)?, &coeff_table(spec, inv)?, s.p, s.l, s.k, family)
}
