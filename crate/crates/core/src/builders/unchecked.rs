//! Composite builders taking raw classical operands with no field validation.
//!
//! The checked builders in the sibling modules compute their operands from a
//! [`FieldSpec`](crate::field::FieldSpec) and delegate here. Gate-count
//! studies use these directly, since they only need operands and moduli with
//! the right bit statistics, not true primes or irreducible polynomials.
//!
//! Operands are only checked to fit their registers.

use super::{
    check_controls, check_operand, cswap, iqft, mod_add, qft, AdderFamily, BuildError, ModAnc, Ops,
    MAX_PHASE_REGISTER,
};
use crate::circuit::{Circuit, Layout};

fn check_width(n: usize, family: AdderFamily) -> Result<(), BuildError> {
    if n < 2 {
        return Err(BuildError::WidthTooSmall { n, min: 2 });
    }
    let max = match family {
        AdderFamily::CarrySum => 63,
        AdderFamily::Phi => MAX_PHASE_REGISTER - 1,
    };
    if n > max {
        return Err(BuildError::WidthTooLarge { n, max });
    }
    Ok(())
}

fn check_table(found: usize, expected: usize) -> Result<(), BuildError> {
    if found != expected {
        Err(BuildError::TableSize { expected, found })
    } else {
        Ok(())
    }
}

/// Ancilla count of a GF(p) modular adder on `n`-bit values: overflow,
/// carries (carry-sum only) and the flag.
fn gfp_anc(n: usize, family: AdderFamily) -> usize {
    match family {
        AdderFamily::CarrySum => n + 1,
        AdderFamily::Phi => 2,
    }
}

/// Splits an `anc` block laid out as `[overflow, carries.., t]`.
fn split_gfp_anc(anc: &[usize]) -> (usize, ModAnc<'_>) {
    let (&t, rest) = anc.split_last().expect("ancilla block");
    (rest[0], ModAnc { carries: &rest[1..], t })
}

fn with_overflow(value: &[usize], overflow: usize) -> Vec<usize> {
    let mut z = value.to_vec();
    z.push(overflow);
    z
}

/// Modular adder for GF(p) on `n`-bit values. The phi variant expects `z`
/// plus the overflow qubit in Fourier space.
pub fn mod_adder_gfp(
    a: u64,
    p: u64,
    n: usize,
    family: AdderFamily,
    controls: usize,
) -> Result<Circuit, BuildError> {
    check_width(n, family)?;
    check_controls(controls, 2)?;
    check_operand(a, 1 << n)?;
    check_operand(p, 1 << n)?;
    let layout = Layout::new([("ctrl", controls), ("z", n), ("anc", gfp_anc(n, family))]);
    let k: Vec<usize> = (0..controls).collect();
    let anc = layout.indices("anc");
    let (ovf, m) = split_gfp_anc(&anc);
    let z = with_overflow(&layout.indices("z"), ovf);
    let mut ops = Ops::new();
    mod_add(&mut ops, family, a, p, &z, m, &k);
    Ok(ops.into_circuit(layout))
}

fn mult_layout(n: usize, anc: usize) -> Layout {
    Layout::new([("c", 1), ("x", n), ("z", n), ("anc", anc)])
}

fn emit_addmult_gfp(ops: &mut Ops, layout: &Layout, operands: &[u64], p: u64, family: AdderFamily) {
    let x = layout.indices("x");
    let anc = layout.indices("anc");
    let (ovf, m) = split_gfp_anc(&anc);
    let z = with_overflow(&layout.indices("z"), ovf);
    if family == AdderFamily::Phi {
        qft(ops, &z);
    }
    for (&ai, &xi) in operands.iter().zip(&x) {
        mod_add(ops, family, ai, p, &z, m, &[0, xi]);
    }
    if family == AdderFamily::Phi {
        iqft(ops, &z);
    }
}

fn check_operands(ops: &[u64], n: usize) -> Result<(), BuildError> {
    check_table(ops.len(), n)?;
    ops.iter().try_for_each(|&a| check_operand(a, 1 << n))
}

/// Add-mult for GF(p): adder `i` adds `operands[i]` controlled by `(c, x_i)`.
/// The phi variant includes the QFT pair around the accumulator.
pub fn addmult_gfp(operands: &[u64], p: u64, n: usize, family: AdderFamily) -> Result<Circuit, BuildError> {
    check_width(n, family)?;
    check_operands(operands, n)?;
    check_operand(p, 1 << n)?;
    let layout = mult_layout(n, gfp_anc(n, family));
    let mut ops = Ops::new();
    emit_addmult_gfp(&mut ops, &layout, operands, p, family);
    Ok(ops.into_circuit(layout))
}

/// Controlled multiplication for GF(p): add-mult of `operands`, controlled
/// swap of `x` with the value qubits of `z`, inverse add-mult of
/// `inv_operands`.
pub fn cmult_gfp(
    operands: &[u64],
    inv_operands: &[u64],
    p: u64,
    n: usize,
    family: AdderFamily,
) -> Result<Circuit, BuildError> {
    check_width(n, family)?;
    check_operands(operands, n)?;
    check_operands(inv_operands, n)?;
    check_operand(p, 1 << n)?;
    let layout = mult_layout(n, gfp_anc(n, family));
    let mut ops = Ops::new();
    emit_addmult_gfp(&mut ops, &layout, operands, p, family);
    cswap(&mut ops, 0, &layout.indices("x"), &layout.indices("z"));
    let mut back = Ops::new();
    emit_addmult_gfp(&mut back, &layout, inv_operands, p, family);
    ops.extend_inverse(back);
    Ok(ops.into_circuit(layout))
}

fn check_gf2n(n: usize) -> Result<(), BuildError> {
    if n < 1 {
        return Err(BuildError::WidthTooSmall { n, min: 1 });
    }
    if n > 63 {
        return Err(BuildError::WidthTooLarge { n, max: 63 });
    }
    Ok(())
}

fn emit_xor(ops: &mut Ops, a: u64, z: &[usize], k: &[usize]) {
    for (i, &zi) in z.iter().enumerate() {
        if (a >> i) & 1 == 1 {
            ops.not(zi, k);
        }
    }
}

/// GF(2^n) adder: a NOT (with the controls) on every qubit where `a` has a 1.
pub fn adder_gf2n(a: u64, n: usize, controls: usize) -> Result<Circuit, BuildError> {
    check_gf2n(n)?;
    check_controls(controls, 2)?;
    check_operand(a, 1 << n)?;
    let layout = Layout::new([("ctrl", controls), ("z", n)]);
    let k: Vec<usize> = (0..controls).collect();
    let mut ops = Ops::new();
    emit_xor(&mut ops, a, &layout.indices("z"), &k);
    Ok(ops.into_circuit(layout))
}

fn emit_addmult_gf2n(ops: &mut Ops, layout: &Layout, table: &[u64]) {
    let z = layout.indices("z");
    for (&t, xi) in table.iter().zip(layout.indices("x")) {
        emit_xor(ops, t, &z, &[0, xi]);
    }
}

/// GF(2^n) add-mult: `table[i]` is XORed onto `z` under `(c, x_i)`.
pub fn addmult_gf2n(table: &[u64], n: usize) -> Result<Circuit, BuildError> {
    check_gf2n(n)?;
    check_operands(table, n)?;
    let layout = Layout::new([("c", 1), ("x", n), ("z", n)]);
    let mut ops = Ops::new();
    emit_addmult_gf2n(&mut ops, &layout, table);
    Ok(ops.into_circuit(layout))
}

/// GF(2^n) controlled multiplication from the shift tables of `a` and `a^-1`.
pub fn cmult_gf2n(table: &[u64], inv_table: &[u64], n: usize) -> Result<Circuit, BuildError> {
    check_gf2n(n)?;
    check_operands(table, n)?;
    check_operands(inv_table, n)?;
    let layout = Layout::new([("c", 1), ("x", n), ("z", n)]);
    let mut ops = Ops::new();
    emit_addmult_gf2n(&mut ops, &layout, table);
    cswap(&mut ops, 0, &layout.indices("x"), &layout.indices("z"));
    let mut back = Ops::new();
    emit_addmult_gf2n(&mut back, &layout, inv_table);
    ops.extend_inverse(back);
    Ok(ops.into_circuit(layout))
}

/// Ancilla count of a GF(p^k) adder with `l`-bit coefficients.
fn gfpk_anc(l: usize, k: usize, family: AdderFamily) -> usize {
    match family {
        AdderFamily::CarrySum => k + (l - 1) + 1,
        AdderFamily::Phi => 2,
    }
}

#[allow(clippy::too_many_arguments)]
fn emit_adder_gfpk(
    ops: &mut Ops,
    coeffs: &[u64],
    p: u64,
    l: usize,
    family: AdderFamily,
    z: &[usize],
    anc: &[usize],
    ctrl: &[usize],
) {
    let k = coeffs.len();
    for (i, &ci) in coeffs.iter().enumerate() {
        let window = &z[i * l..(i + 1) * l];
        match family {
            AdderFamily::CarrySum => {
                let m = ModAnc { carries: &anc[k..k + l - 1], t: anc[k + l - 1] };
                mod_add(ops, family, ci, p, &with_overflow(window, anc[i]), m, ctrl);
            }
            AdderFamily::Phi => {
                let m = ModAnc { carries: &[], t: anc[1] };
                let zi = with_overflow(window, anc[0]);
                qft(ops, &zi);
                mod_add(ops, family, ci, p, &zi, m, ctrl);
                iqft(ops, &zi);
            }
        }
    }
}

fn check_gfpk(coeffs: &[u64], p: u64, l: usize, family: AdderFamily) -> Result<(), BuildError> {
    check_width(l, family)?;
    if coeffs.is_empty() {
        return Err(BuildError::TableSize { expected: 1, found: 0 });
    }
    if coeffs.len() * l > 63 {
        return Err(BuildError::WidthTooLarge { n: coeffs.len() * l, max: 63 });
    }
    check_operand(p, 1 << l)?;
    coeffs.iter().try_for_each(|&c| check_operand(c, 1 << l))
}

/// GF(p^k) adder: `k = coeffs.len()` modular adders applied one after the
/// other, adder `i` adding `coeffs[i]` to the `i`-th `l`-qubit window of `z`.
pub fn adder_gfpk(
    coeffs: &[u64],
    p: u64,
    l: usize,
    family: AdderFamily,
    controls: usize,
) -> Result<Circuit, BuildError> {
    check_gfpk(coeffs, p, l, family)?;
    check_controls(controls, 2)?;
    let k = coeffs.len();
    let layout = Layout::new([("ctrl", controls), ("z", k * l), ("anc", gfpk_anc(l, k, family))]);
    let ctrl: Vec<usize> = (0..controls).collect();
    let mut ops = Ops::new();
    emit_adder_gfpk(&mut ops, coeffs, p, l, family, &layout.indices("z"), &layout.indices("anc"), &ctrl);
    Ok(ops.into_circuit(layout))
}

fn emit_addmult_gfpk(ops: &mut Ops, layout: &Layout, table: &[Vec<u64>], p: u64, l: usize, family: AdderFamily) {
    let z = layout.indices("z");
    let anc = layout.indices("anc");
    for (entry, xi) in table.iter().zip(layout.indices("x")) {
        emit_adder_gfpk(ops, entry, p, l, family, &z, &anc, &[0, xi]);
    }
}

fn check_pk_table(table: &[Vec<u64>], p: u64, l: usize, k: usize, family: AdderFamily) -> Result<(), BuildError> {
    check_table(table.len(), k * l)?;
    for entry in table {
        check_table(entry.len(), k)?;
        check_gfpk(entry, p, l, family)?;
    }
    Ok(())
}

/// GF(p^k) add-mult: the adder of `table[j]` controlled by `(c, x_j)` for
/// every qubit `j` of `x`. `table` has `k*l` entries of `k` coefficients.
pub fn addmult_gfpk(
    table: &[Vec<u64>],
    p: u64,
    l: usize,
    k: usize,
    family: AdderFamily,
) -> Result<Circuit, BuildError> {
    check_pk_table(table, p, l, k, family)?;
    let n = k * l;
    let layout = mult_layout(n, gfpk_anc(l, k, family));
    let mut ops = Ops::new();
    emit_addmult_gfpk(&mut ops, &layout, table, p, l, family);
    Ok(ops.into_circuit(layout))
}

/// GF(p^k) controlled multiplication from the shift tables of `a` and `a^-1`.
pub fn cmult_gfpk(
    table: &[Vec<u64>],
    inv_table: &[Vec<u64>],
    p: u64,
    l: usize,
    k: usize,
    family: AdderFamily,
) -> Result<Circuit, BuildError> {
    check_pk_table(table, p, l, k, family)?;
    check_pk_table(inv_table, p, l, k, family)?;
    let n = k * l;
    let layout = mult_layout(n, gfpk_anc(l, k, family));
    let mut ops = Ops::new();
    emit_addmult_gfpk(&mut ops, &layout, table, p, l, family);
    cswap(&mut ops, 0, &layout.indices("x"), &layout.indices("z"));
    let mut back = Ops::new();
    emit_addmult_gfpk(&mut back, &layout, inv_table, p, l, family);
    ops.extend_inverse(back);
    Ok(ops.into_circuit(layout))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{GateKind, Rational};

    #[test]
    fn widths() {
        for family in AdderFamily::ALL {
            let (w0, w2) = match family {
                AdderFamily::CarrySum => (7, 9),
                AdderFamily::Phi => (5, 7),
            };
            assert_eq!(mod_adder_gfp(3, 7, 3, family, 0).unwrap().qubit_count(), w0);
            assert_eq!(mod_adder_gfp(3, 7, 3, family, 2).unwrap().qubit_count(), w2);
        }
        assert_eq!(adder_gfpk(&[1, 2], 3, 2, AdderFamily::CarrySum, 2).unwrap().qubit_count(), 10);
        assert_eq!(adder_gfpk(&[1, 2], 3, 2, AdderFamily::Phi, 2).unwrap().qubit_count(), 8);
        assert_eq!(adder_gfpk(&[1, 2], 3, 2, AdderFamily::Phi, 0).unwrap().qubit_count(), 6);
    }

    #[test]
    fn table_sizes_are_checked() {
        assert_eq!(
            addmult_gfp(&[1, 2], 7, 3, AdderFamily::CarrySum),
            Err(BuildError::TableSize { expected: 3, found: 2 })
        );
        assert!(addmult_gf2n(&[1, 2, 8], 3).is_err());
    }

    #[test]
    fn uncontrolled_mod_adder_counts_match_on_fixed_bits() {
        // a = p = 0b111: every classically controlled gate is present.
        let c = mod_adder_gfp(7, 7, 3, AdderFamily::CarrySum, 0).unwrap();
        let h = c.tally();
        assert_eq!(h[GateKind::C3N], Rational::from_integer(1));
        assert!(h[GateKind::C4N] == Rational::from_integer(0));
    }
}
