//! Exact classical arithmetic over GF(p), GF(2^n) and GF(p^k).
//!
//! Everything the circuit builders hardwire (the operand `a`, its inverse,
//! the shifted multiples `x^i * a mod Q`) is computed here, and the same code
//! serves as the oracle the simulators are checked against.
//!
//! Elements are plain integers. For GF(2^n) bit `i` is the coefficient of
//! `x^i`. For GF(p^k) coefficient `c_i` lives in the bit window
//! `[i*l, (i+1)*l)` with `l = ceil(lg p)`, which is exactly the qubit layout of
//! a register made of `k` sub-registers.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::poly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus polynomial is reducible")]
    ReducibleModulus,
    #[error("modulus degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: u32, found: u32 },
    #[error("modulus polynomial is not monic")]
    NotMonic,
    #[error("modulus coefficient {coeff} is out of range for p = {p}")]
    CoefficientOutOfRange { coeff: u64, p: u64 },
    #[error("field too large for a 64-bit element encoding")]
    TooLarge,
    #[error("{0} is not a valid element of this field")]
    InvalidElement(u64),
    #[error("zero has no multiplicative inverse")]
    NotInvertible,
    #[error("invalid field specification `{input}`: {reason}")]
    Parse { input: String, reason: String },
}

/// A packed field element. See the module docs for the encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FieldElement(pub u64);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    pub fn value(self) -> u64 {
        self.0
    }
}

impl From<u64> for FieldElement {
    fn from(v: u64) -> Self {
        FieldElement(v)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Description of the target field.
///
/// `Binary::modulus` holds `Q` as a bit pattern including the `x^n` term.
/// `Extension::modulus` holds the coefficients of `Q` from `c_0` up to `c_k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    Prime { p: u64 },
    Binary { n: u32, modulus: u64 },
    Extension { p: u64, k: u32, modulus: Vec<u64> },
}

/// Classically precomputed multiples of the operand consumed by the add-mult
/// circuits.
///
/// GF(2^n): entry `i` is `x^i * a mod Q` for `0 <= i < n`.
/// GF(p^k): entry `i*l + j` is `2^j * x^i * a mod Q` for `0 <= i < k`,
/// `0 <= j < l`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShiftTable(pub Vec<FieldElement>);

impl ShiftTable {
    pub fn entries(&self) -> &[FieldElement] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Number of bits needed for values in `[0, p)`, i.e. `ceil(lg p)`.
pub fn ceil_log2(p: u64) -> u32 {
    if p <= 1 {
        0
    } else {
        u64::BITS - (p - 1).leading_zeros()
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &w in &WITNESSES {
        if n.is_multiple_of(w) {
            return n == w;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &w in &WITNESSES {
        let mut x = pow_mod(w, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Inverse of `a` modulo `m` by the extended Euclidean algorithm, if it exists.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(m as i128) as u64)
}

fn clmul(a: u64, b: u64) -> u128 {
    let mut acc = 0u128;
    let mut b = b;
    let mut shift = 0;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= (a as u128) << shift;
        }
        b >>= 1;
        shift += 1;
    }
    acc
}

fn reduce_binary(mut v: u128, n: u32, modulus: u64) -> u64 {
    let m = modulus as u128;
    for bit in (n..128).rev() {
        if (v >> bit) & 1 == 1 {
            v ^= m << (bit - n);
        }
    }
    v as u64
}

fn bits_to_poly(v: u64) -> Vec<u64> {
    let mut out: Vec<u64> = (0..64).map(|i| (v >> i) & 1).collect();
    poly::trim(&mut out);
    out
}

fn poly_to_bits(p: &[u64]) -> u64 {
    p.iter()
        .enumerate()
        .fold(0, |acc, (i, &c)| acc | ((c & 1) << i))
}

impl FieldSpec {
    /// Checks every standing assumption on the field description.
    pub fn validate(&self) -> Result<(), FieldError> {
        match self {
            FieldSpec::Prime { p } => {
                if *p < 3 || !is_prime(*p) {
                    return Err(FieldError::NotPrime(*p));
                }
                Ok(())
            }
            FieldSpec::Binary { n, modulus } => {
                if *n < 2 || *n > 63 {
                    return Err(FieldError::DegreeMismatch {
                        expected: (*n).clamp(2, 63),
                        found: *n,
                    });
                }
                let found = 63 - modulus.leading_zeros().min(63);
                if *modulus == 0 || found != *n {
                    return Err(FieldError::DegreeMismatch { expected: *n, found });
                }
                if !poly::is_irreducible(&bits_to_poly(*modulus), 2) {
                    return Err(FieldError::ReducibleModulus);
                }
                Ok(())
            }
            FieldSpec::Extension { p, k, modulus } => {
                if *p < 3 || !is_prime(*p) {
                    return Err(FieldError::NotPrime(*p));
                }
                if *k < 2 {
                    return Err(FieldError::DegreeMismatch { expected: 2, found: *k });
                }
                if let Some(&c) = modulus.iter().find(|&&c| c >= *p) {
                    return Err(FieldError::CoefficientOutOfRange { coeff: c, p: *p });
                }
                let mut q = modulus.clone();
                poly::trim(&mut q);
                let found = q.len().saturating_sub(1) as u32;
                if q.is_empty() || found != *k {
                    return Err(FieldError::DegreeMismatch { expected: *k, found });
                }
                if q[*k as usize] != 1 {
                    return Err(FieldError::NotMonic);
                }
                if (*k as u64) * ceil_log2(*p) as u64 > 63 {
                    return Err(FieldError::TooLarge);
                }
                if !poly::is_irreducible(&q, *p) {
                    return Err(FieldError::ReducibleModulus);
                }
                Ok(())
            }
        }
    }

    /// Characteristic of the field.
    pub fn characteristic(&self) -> u64 {
        match self {
            FieldSpec::Prime { p } | FieldSpec::Extension { p, .. } => *p,
            FieldSpec::Binary { .. } => 2,
        }
    }

    /// Number of elements, saturating at `u64::MAX`.
    pub fn order(&self) -> u64 {
        match self {
            FieldSpec::Prime { p } => *p,
            FieldSpec::Binary { n, .. } => 1u64.checked_shl(*n).unwrap_or(u64::MAX),
            FieldSpec::Extension { p, k, .. } => p.checked_pow(*k).unwrap_or(u64::MAX),
        }
    }

    /// Qubits in a register holding one element (`n` throughout the circuit
    /// descriptions).
    pub fn register_width(&self) -> u32 {
        match self {
            FieldSpec::Prime { p } => ceil_log2(*p),
            FieldSpec::Binary { n, .. } => *n,
            FieldSpec::Extension { p, k, .. } => k * ceil_log2(*p),
        }
    }

    /// Bits per coefficient: `ceil(lg p)` for GF(p^k), 1 for GF(2^n), the full
    /// width for GF(p).
    pub fn coefficient_bits(&self) -> u32 {
        match self {
            FieldSpec::Prime { p } | FieldSpec::Extension { p, .. } => ceil_log2(*p),
            FieldSpec::Binary { .. } => 1,
        }
    }

    /// Extension degree (1 for GF(p)).
    pub fn degree(&self) -> u32 {
        match self {
            FieldSpec::Prime { .. } => 1,
            FieldSpec::Binary { n, .. } => *n,
            FieldSpec::Extension { k, .. } => *k,
        }
    }

    pub fn is_valid_element(&self, a: FieldElement) -> bool {
        match self {
            FieldSpec::Prime { p } => a.0 < *p,
            FieldSpec::Binary { n, .. } => a.0 >> n == 0,
            FieldSpec::Extension { p, k, .. } => {
                let l = ceil_log2(*p);
                if a.0 >> (k * l) != 0 {
                    return false;
                }
                let mask = (1u64 << l) - 1;
                (0..*k).all(|i| (a.0 >> (i * l)) & mask < *p)
            }
        }
    }

    fn check(&self, a: FieldElement) -> Result<(), FieldError> {
        if self.is_valid_element(a) {
            Ok(())
        } else {
            Err(FieldError::InvalidElement(a.0))
        }
    }

    /// Splits a GF(p^k) element into its coefficients `[c_0, .., c_{k-1}]`.
    /// For the other variants this returns a single-coefficient (GF(p)) or
    /// per-bit (GF(2^n)) decomposition.
    pub fn coeff_decompose(&self, a: FieldElement) -> Result<Vec<u64>, FieldError> {
        self.check(a)?;
        Ok(match self {
            FieldSpec::Prime { .. } => vec![a.0],
            FieldSpec::Binary { n, .. } => (0..*n).map(|i| (a.0 >> i) & 1).collect(),
            FieldSpec::Extension { p, k, .. } => {
                let l = ceil_log2(*p);
                let mask = (1u64 << l) - 1;
                (0..*k).map(|i| (a.0 >> (i * l)) & mask).collect()
            }
        })
    }

    /// Inverse of [`coeff_decompose`](Self::coeff_decompose).
    pub fn pack(&self, coeffs: &[u64]) -> Result<FieldElement, FieldError> {
        let bits = self.coefficient_bits();
        let slots = match self {
            FieldSpec::Prime { .. } => 1,
            _ => self.degree() as usize,
        };
        if coeffs.len() > slots {
            return Err(FieldError::InvalidElement(u64::MAX));
        }
        let bound = self.characteristic();
        let mut v = 0u64;
        for (i, &c) in coeffs.iter().enumerate() {
            if c >= bound {
                return Err(FieldError::InvalidElement(c));
            }
            v |= c << (i as u32 * bits);
        }
        let e = FieldElement(v);
        self.check(e)?;
        Ok(e)
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, FieldError> {
        self.check(a)?;
        self.check(b)?;
        Ok(match self {
            FieldSpec::Prime { p } => FieldElement((a.0 + b.0) % p),
            FieldSpec::Binary { .. } => FieldElement(a.0 ^ b.0),
            FieldSpec::Extension { p, .. } => {
                let x = self.coeff_decompose(a)?;
                let y = self.coeff_decompose(b)?;
                let sum: Vec<u64> = x.iter().zip(&y).map(|(u, v)| (u + v) % p).collect();
                self.pack(&sum)?
            }
        })
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, FieldError> {
        self.check(a)?;
        self.check(b)?;
        Ok(match self {
            FieldSpec::Prime { p } => FieldElement(mul_mod(a.0, b.0, *p)),
            FieldSpec::Binary { n, modulus } => {
                FieldElement(reduce_binary(clmul(a.0, b.0), *n, *modulus))
            }
            FieldSpec::Extension { p, modulus, .. } => {
                let x = self.coeff_decompose(a)?;
                let y = self.coeff_decompose(b)?;
                let prod = poly::mul(&x, &y, *p);
                let r = poly::rem(&prod, modulus, *p);
                self.pack(&r)?
            }
        })
    }

    /// Multiplicative inverse by extended Euclid (integer or polynomial).
    pub fn inv(&self, a: FieldElement) -> Result<FieldElement, FieldError> {
        self.check(a)?;
        if a.0 == 0 {
            return Err(FieldError::NotInvertible);
        }
        match self {
            FieldSpec::Prime { p } => inv_mod(a.0, *p)
                .map(FieldElement)
                .ok_or(FieldError::NotInvertible),
            FieldSpec::Binary { modulus, .. } => {
                let inv = poly::inv_mod(&bits_to_poly(a.0), &bits_to_poly(*modulus), 2)
                    .ok_or(FieldError::NotInvertible)?;
                Ok(FieldElement(poly_to_bits(&inv)))
            }
            FieldSpec::Extension { p, modulus, .. } => {
                let x = self.coeff_decompose(a)?;
                let inv = poly::inv_mod(&x, modulus, *p).ok_or(FieldError::NotInvertible)?;
                self.pack(&inv)
            }
        }
    }

    /// The monomial `x^i` reduced into the field (GF(2^n) and GF(p^k)); for
    /// GF(p) this is `2^i mod p`, the analogous shift.
    pub fn monomial(&self, i: u32) -> FieldElement {
        match self {
            FieldSpec::Prime { p } => FieldElement(pow_mod(2, i as u64, *p)),
            FieldSpec::Binary { n, modulus } => {
                let mut v = 1u64;
                for _ in 0..i {
                    v = reduce_binary((v as u128) << 1, *n, *modulus);
                }
                FieldElement(v)
            }
            FieldSpec::Extension { p, modulus, .. } => {
                let mut m = vec![0u64; i as usize + 1];
                m[i as usize] = 1;
                let r = poly::rem(&m, modulus, *p);
                self.pack(&r).expect("reduced monomial is a valid element")
            }
        }
    }

    /// The shifted multiples of `a` hardwired into the add-mult circuits.
    ///
    /// For GF(p) the table holds `2^i a mod p` for `0 <= i < n`.
    pub fn shift_table(&self, a: FieldElement) -> Result<ShiftTable, FieldError> {
        self.check(a)?;
        let mut out = Vec::new();
        match self {
            FieldSpec::Prime { p } => {
                let mut cur = a.0;
                for _ in 0..self.register_width() {
                    out.push(FieldElement(cur));
                    cur = (cur * 2) % p;
                }
            }
            FieldSpec::Binary { n, modulus } => {
                let mut cur = a.0;
                for _ in 0..*n {
                    out.push(FieldElement(cur));
                    cur = reduce_binary((cur as u128) << 1, *n, *modulus);
                }
            }
            FieldSpec::Extension { p, k, modulus } => {
                let l = ceil_log2(*p);
                let mut cur = self.coeff_decompose(a)?;
                for _ in 0..*k {
                    let mut doubled = cur.clone();
                    for _ in 0..l {
                        out.push(self.pack(&doubled)?);
                        for c in doubled.iter_mut() {
                            *c = (*c * 2) % p;
                        }
                    }
                    let mut shifted = vec![0u64];
                    shifted.extend_from_slice(&cur);
                    let r = poly::rem(&shifted, modulus, *p);
                    cur = r;
                    cur.resize(*k as usize, 0);
                }
            }
        }
        Ok(ShiftTable(out))
    }

    /// All valid element encodings in increasing order of their coefficient
    /// index. Intended for exhaustive sweeps at desk scale.
    pub fn elements(&self) -> Vec<FieldElement> {
        match self {
            FieldSpec::Prime { p } => (0..*p).map(FieldElement).collect(),
            FieldSpec::Binary { n, .. } => (0..(1u64 << n)).map(FieldElement).collect(),
            FieldSpec::Extension { p, k, .. } => {
                let l = ceil_log2(*p);
                (0..self.order())
                    .map(|mut idx| {
                        let mut v = 0u64;
                        for i in 0..*k {
                            v |= (idx % p) << (i * l);
                            idx /= p;
                        }
                        FieldElement(v)
                    })
                    .collect()
            }
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Prime { p } => write!(f, "p:{p}"),
            FieldSpec::Binary { n, modulus } => {
                write!(f, "2^{n}:Q=")?;
                for i in (0..=*n).rev() {
                    write!(f, "{}", (modulus >> i) & 1)?;
                }
                Ok(())
            }
            FieldSpec::Extension { p, k, modulus } => {
                write!(f, "p^k:{p},{k},Q=")?;
                let mut first = true;
                for i in (0..=*k as usize).rev() {
                    if !first {
                        write!(f, ",")?;
                    }
                    first = false;
                    write!(f, "{}", modulus.get(i).copied().unwrap_or(0))?;
                }
                Ok(())
            }
        }
    }
}

impl FromStr for FieldSpec {
    type Err = FieldError;

    /// Parses `p:<prime>`, `2^<n>:Q=<bits, MSB first>` or
    /// `p^k:<p>,<k>,Q=<c_k,..,c_0>`. The result is not validated.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |reason: &str| FieldError::Parse {
            input: s.to_string(),
            reason: reason.to_string(),
        };
        let num = |t: &str| -> Result<u64, FieldError> {
            t.trim().parse::<u64>().map_err(|_| err("expected a decimal integer"))
        };
        if let Some(rest) = s.strip_prefix("p^k:") {
            let (head, q) = rest.split_once(",Q=").ok_or_else(|| err("missing `,Q=`"))?;
            let (p, k) = head.split_once(',').ok_or_else(|| err("expected `<p>,<k>`"))?;
            let p = num(p)?;
            let k = u32::try_from(num(k)?).map_err(|_| err("degree too large"))?;
            let mut modulus = q
                .split(',')
                .map(num)
                .collect::<Result<Vec<_>, _>>()?;
            if modulus.len() != k as usize + 1 {
                return Err(err("Q must list exactly k+1 coefficients"));
            }
            modulus.reverse();
            Ok(FieldSpec::Extension { p, k, modulus })
        } else if let Some(rest) = s.strip_prefix("2^") {
            let (n, q) = rest.split_once(":Q=").ok_or_else(|| err("missing `:Q=`"))?;
            let n = u32::try_from(num(n)?).map_err(|_| err("degree too large"))?;
            if q.len() != n as usize + 1 || !q.bytes().all(|b| b == b'0' || b == b'1') {
                return Err(err("Q must be a binary literal with n+1 digits"));
            }
            if n > 63 {
                return Err(err("degree too large"));
            }
            let modulus = u64::from_str_radix(q, 2).map_err(|_| err("bad binary literal"))?;
            Ok(FieldSpec::Binary { n, modulus })
        } else if let Some(rest) = s.strip_prefix("p:") {
            Ok(FieldSpec::Prime { p: num(rest)? })
        } else {
            Err(err("expected `p:`, `2^` or `p^k:` prefix"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf8() -> FieldSpec {
        FieldSpec::Binary { n: 3, modulus: 0b1011 }
    }

    fn gf9() -> FieldSpec {
        FieldSpec::Extension { p: 3, k: 2, modulus: vec![1, 0, 1] }
    }

    /// Schoolbook reference for GF(p^k) products, by direct convolution and
    /// long division written independently of `poly`.
    fn ext_mul_reference(p: u64, q: &[u64], a: &[u64], b: &[u64]) -> Vec<u64> {
        let k = q.len() - 1;
        let mut prod = vec![0u64; 2 * k];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        for d in (k..prod.len()).rev() {
            let c = prod[d];
            for i in 0..=k {
                prod[d - k + i] = (prod[d - k + i] + (p - c) * q[i]) % p;
            }
        }
        prod.truncate(k);
        prod
    }

    #[test]
    fn validation_examples() {
        assert_eq!(FieldSpec::Prime { p: 7 }.validate(), Ok(()));
        assert_eq!(gf8().validate(), Ok(()));
        assert_eq!(gf9().validate(), Ok(()));
        assert_eq!(
            FieldSpec::Binary { n: 2, modulus: 0b101 }.validate(),
            Err(FieldError::ReducibleModulus)
        );
        assert_eq!(FieldSpec::Prime { p: 9 }.validate(), Err(FieldError::NotPrime(9)));
        assert_eq!(FieldSpec::Prime { p: 2 }.validate(), Err(FieldError::NotPrime(2)));
        assert!(matches!(
            FieldSpec::Binary { n: 3, modulus: 0b111 }.validate(),
            Err(FieldError::DegreeMismatch { expected: 3, found: 2 })
        ));
        assert_eq!(
            FieldSpec::Extension { p: 3, k: 2, modulus: vec![1, 0, 2] }.validate(),
            Err(FieldError::NotMonic)
        );
        // x^2 + 2 = (x+1)(x+2) over GF(3)
        assert_eq!(
            FieldSpec::Extension { p: 3, k: 2, modulus: vec![2, 0, 1] }.validate(),
            Err(FieldError::ReducibleModulus)
        );
    }

    #[test]
    fn miller_rabin_matches_trial_division() {
        let trial = |n: u64| n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d));
        for n in 0..5000u64 {
            assert_eq!(is_prime(n), trial(n), "n = {n}");
        }
        assert!(is_prime(18446744073709551557));
        assert!(!is_prime(3215031751));
    }

    #[test]
    fn multiplication_examples() {
        let f7 = FieldSpec::Prime { p: 7 };
        assert_eq!(f7.mul(3.into(), 4.into()), Ok(FieldElement(5)));
        assert_eq!(gf8().mul(0b011.into(), 0b010.into()), Ok(FieldElement(0b110)));
        // (x+2) * x = 2x+2 in GF(9); packed as c_1 << 2 | c_0
        let a = gf9().pack(&[2, 1]).unwrap();
        let x = gf9().pack(&[0, 1]).unwrap();
        assert_eq!(gf9().mul(a, x), gf9().pack(&[2, 2]));
        for spec in [f7, gf8(), gf9()] {
            for a in spec.elements() {
                assert_eq!(spec.mul(a, FieldElement::ONE), Ok(a));
            }
        }
    }

    #[test]
    fn inverse_examples() {
        let f7 = FieldSpec::Prime { p: 7 };
        assert_eq!(f7.inv(3.into()), Ok(FieldElement(5)));
        assert_eq!(gf8().inv(0b010.into()), Ok(FieldElement(0b101)));
        assert_eq!(f7.inv(0.into()), Err(FieldError::NotInvertible));
        for spec in [f7, gf8(), gf9()] {
            assert_eq!(spec.inv(FieldElement::ONE), Ok(FieldElement::ONE));
        }
    }

    #[test]
    fn addition_and_decomposition() {
        let f7 = FieldSpec::Prime { p: 7 };
        assert_eq!(f7.add(5.into(), 4.into()), Ok(FieldElement(2)));
        for a in gf8().elements() {
            assert_eq!(gf8().add(a, a), Ok(FieldElement::ZERO));
        }
        // (c_1, c_0) = (2, 1)
        let e = FieldElement((2 << 2) | 1);
        assert_eq!(gf9().coeff_decompose(e), Ok(vec![1, 2]));
        assert_eq!(gf9().coeff_decompose(FieldElement(0b0011)), Err(FieldError::InvalidElement(3)));
    }

    #[test]
    fn shift_table_examples() {
        let t = gf8().shift_table(0b010.into()).unwrap();
        assert_eq!(t.0, vec![FieldElement(0b010), FieldElement(0b100), FieldElement(0b011)]);
        assert!(gf8().shift_table(0.into()).unwrap().0.iter().all(|e| e.0 == 0));

        let a = gf9().pack(&[2, 1]).unwrap();
        let t = gf9().shift_table(a).unwrap();
        assert_eq!(t.len(), 4);
        // entry (i = 1, j = 1) is row-major index 1*l + 1 = 3: 2 * (x * (x+2)) = x + 1
        assert_eq!(t.0[3], gf9().pack(&[1, 1]).unwrap());
    }

    #[test]
    fn shift_table_agrees_with_field_mul() {
        let specs = [
            gf8(),
            FieldSpec::Binary { n: 4, modulus: 0b10011 },
            gf9(),
            FieldSpec::Extension { p: 3, k: 3, modulus: vec![1, 2, 0, 1] },
            FieldSpec::Extension { p: 5, k: 2, modulus: vec![2, 0, 1] },
        ];
        for spec in &specs {
            spec.validate().unwrap();
            let l = spec.coefficient_bits();
            for a in spec.elements() {
                let t = spec.shift_table(a).unwrap();
                for i in 0..spec.degree() {
                    let xi = spec.monomial(i);
                    let ai = spec.mul(a, xi).unwrap();
                    match spec {
                        FieldSpec::Binary { .. } => assert_eq!(t.0[i as usize], ai),
                        _ => {
                            for j in 0..l {
                                let two_j = spec.pack(&[(1u64 << j) % spec.characteristic()]).unwrap();
                                let expect = spec.mul(ai, two_j).unwrap();
                                assert_eq!(t.0[(i * l + j) as usize], expect);
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn extension_mul_matches_reference() {
        let spec = FieldSpec::Extension { p: 5, k: 2, modulus: vec![2, 0, 1] };
        spec.validate().unwrap();
        for a in spec.elements() {
            for b in spec.elements() {
                let ca = spec.coeff_decompose(a).unwrap();
                let cb = spec.coeff_decompose(b).unwrap();
                let expect = spec.pack(&ext_mul_reference(5, &[2, 0, 1], &ca, &cb)).unwrap();
                assert_eq!(spec.mul(a, b).unwrap(), expect);
            }
        }
    }

    #[test]
    fn binary_inverse_by_search() {
        for n in 2..=8u32 {
            let spec = crate::field::tests::first_irreducible_binary(n);
            for a in spec.elements().into_iter().skip(1) {
                let brute = spec
                    .elements()
                    .into_iter()
                    .find(|&b| spec.mul(a, b).unwrap() == FieldElement::ONE)
                    .unwrap();
                assert_eq!(spec.inv(a).unwrap(), brute);
            }
        }
    }

    pub(crate) fn first_irreducible_binary(n: u32) -> FieldSpec {
        (1u64 << n..1u64 << (n + 1))
            .map(|modulus| FieldSpec::Binary { n, modulus })
            .find(|s| s.validate().is_ok())
            .unwrap()
    }

    #[test]
    fn spec_strings_round_trip() {
        for s in ["p:7", "2^3:Q=1011", "p^k:3,2,Q=1,0,1"] {
            let spec: FieldSpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s);
        }
        assert_eq!("p^k:3,2,Q=1,0,1".parse::<FieldSpec>().unwrap(), gf9());
        assert_eq!("2^3:Q=1011".parse::<FieldSpec>().unwrap(), gf8());
        assert!("2^3:Q=101".parse::<FieldSpec>().is_err());
        assert!("q:7".parse::<FieldSpec>().is_err());
    }

    #[test]
    fn elements_are_valid_and_distinct() {
        let spec = FieldSpec::Extension { p: 3, k: 3, modulus: vec![1, 2, 0, 1] };
        let els = spec.elements();
        assert_eq!(els.len(), 27);
        let mut sorted = els.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), 27);
        assert!(els.iter().all(|&e| spec.is_valid_element(e)));
    }
}
