#![allow(dead_code)]

use gfqc::builders::build_qft;
use gfqc::sim::{run_basis, BasisOutput};
use gfqc::{BasisState, Circuit, Layout};

pub const TOL: f64 = 1e-9;

/// Runs `c` on the named register values and returns the output basis state,
/// failing the test on a non-basis output.
pub fn run(c: &Circuit, values: &[(&str, u64)]) -> BasisState {
    let input = BasisState::from_registers(c.layout(), values).unwrap();
    match run_basis(c, &input, TOL).unwrap() {
        BasisOutput::Basis { state, probability } => {
            assert!(probability >= 1.0 - TOL, "fidelity {probability}");
            state
        }
        BasisOutput::NotBasis { max_probability } => {
            panic!("non-basis output (max probability {max_probability}) for {values:?}")
        }
    }
}

pub fn reg(c: &Circuit, s: &BasisState, name: &str) -> u64 {
    s.read_register(c.layout(), name).unwrap()
}

pub fn anc(c: &Circuit, s: &BasisState) -> u64 {
    if c.layout().get("anc").is_some() {
        reg(c, s, "anc")
    } else {
        0
    }
}

/// `qft(q) ; body ; qft^-1(q)` where `q` are qubits of `body`'s layout.
pub fn fourier_sandwich(body: &Circuit, q: &[usize]) -> Circuit {
    let qft = build_qft(q.len()).unwrap();
    let map = |g: &gfqc::Gate| g.relabel(|i| q[i]).unwrap();
    let mut gates: Vec<gfqc::Gate> = qft.gates().iter().map(map).collect();
    gates.extend(body.gates().iter().cloned());
    gates.extend(qft.inverse().gates().iter().map(map));
    Circuit::with_gates(body.layout().clone(), gates).unwrap()
}

/// Sequential composition of circuits sharing a layout.
pub fn then(a: &Circuit, b: &Circuit) -> Circuit {
    let mut c = a.clone();
    c.append(b).unwrap();
    c
}

pub fn layout_of(c: &Circuit) -> &Layout {
    c.layout()
}

/// Integer multiply modulo `p`.
pub fn gfp_mul(a: u64, b: u64, p: u64) -> u64 {
    a * b % p
}

/// Carry-less product of `a` and `b` reduced by the bit pattern `q` of degree `n`.
pub fn gf2n_mul(a: u64, b: u64, n: u32, q: u64) -> u64 {
    let mut acc: u128 = 0;
    for i in 0..64 {
        if (b >> i) & 1 == 1 {
            acc ^= (a as u128) << i;
        }
    }
    for d in (n..128).rev() {
        if (acc >> d) & 1 == 1 {
            acc ^= (q as u128) << (d - n);
        }
    }
    acc as u64
}

pub fn unpack(v: u64, l: u32, k: u32) -> Vec<u64> {
    (0..k).map(|i| (v >> (i * l)) & ((1 << l) - 1)).collect()
}

pub fn pack(c: &[u64], l: u32) -> u64 {
    c.iter().enumerate().fold(0, |acc, (i, &x)| acc | x << (i as u32 * l))
}

/// Product in GF(p)[x] / Q, with `q` listing `c_0..c_k` and `Q` monic.
pub fn gfpk_mul(a: u64, b: u64, p: u64, q: &[u64]) -> u64 {
    let k = (q.len() - 1) as u32;
    let l = 64 - (p - 1).leading_zeros();
    let (x, y) = (unpack(a, l, k), unpack(b, l, k));
    let mut prod = vec![0u64; 2 * k as usize];
    for i in 0..k as usize {
        for j in 0..k as usize {
            prod[i + j] = (prod[i + j] + x[i] * y[j]) % p;
        }
    }
    for d in (k as usize..prod.len()).rev() {
        let c = prod[d];
        for (i, &qi) in q.iter().enumerate() {
            let idx = d - k as usize + i;
            prod[idx] = (prod[idx] + (p - c) * qi % p) % p;
        }
    }
    pack(&prod[..k as usize], l)
}

pub fn gfpk_add(a: u64, b: u64, p: u64, l: u32, k: u32) -> u64 {
    let s: Vec<u64> = unpack(a, l, k).iter().zip(unpack(b, l, k)).map(|(x, y)| (x + y) % p).collect();
    pack(&s, l)
}

/// Every valid packed element of GF(p^k).
pub fn gfpk_elements(p: u64, k: u32) -> Vec<u64> {
    let l = 64 - (p - 1).leading_zeros();
    (0..p.pow(k))
        .map(|mut idx| {
            let mut c = Vec::new();
            for _ in 0..k {
                c.push(idx % p);
                idx /= p;
            }
            pack(&c, l)
        })
        .collect()
}
