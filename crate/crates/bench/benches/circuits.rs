use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use gfqc::builders::build_cmult;
use gfqc::sim::{run_permutation, run_statevector};
use gfqc::{AdderFamily, BasisState, FieldElement, StateVector};
use gfqc_bench::fields;

const FAMILIES: [AdderFamily; 2] = [AdderFamily::CarrySum, AdderFamily::Phi];

fn build(c: &mut Criterion) {
    let mut g = c.benchmark_group("build_cmult");
    for (name, spec) in fields() {
        for family in FAMILIES {
            g.bench_with_input(BenchmarkId::new(family.name(), name), &spec, |b, spec| {
                b.iter(|| build_cmult(spec, black_box(FieldElement(2)), family).unwrap())
            });
        }
    }
    g.finish();
}

fn depth_and_tally(c: &mut Criterion) {
    let mut g = c.benchmark_group("depth_tally");
    for (name, spec) in fields() {
        let circ = build_cmult(&spec, FieldElement(2), AdderFamily::CarrySum).unwrap();
        g.bench_function(name, |b| b.iter(|| (black_box(&circ).depth(), circ.tally())));
    }
    g.finish();
}

fn permutation(c: &mut Criterion) {
    let mut g = c.benchmark_group("simulate_permutation");
    for (name, spec) in fields() {
        let circ = build_cmult(&spec, FieldElement(2), AdderFamily::CarrySum).unwrap();
        let input = BasisState::from_registers(circ.layout(), &[("c", 1), ("x", 1)]).unwrap();
        g.bench_function(name, |b| b.iter(|| run_permutation(&circ, black_box(&input)).unwrap()));
    }
    g.finish();
}

fn statevector(c: &mut Criterion) {
    let mut g = c.benchmark_group("simulate_statevector");
    g.sample_size(10);
    for (name, spec) in fields().into_iter().filter(|(n, _)| *n != "gf251") {
        let circ = build_cmult(&spec, FieldElement(2), AdderFamily::Phi).unwrap();
        let input = BasisState::from_registers(circ.layout(), &[("c", 1), ("x", 1)]).unwrap();
        let v = StateVector::from_basis(&input).unwrap();
        g.bench_function(name, |b| b.iter(|| run_statevector(&circ, black_box(&v)).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, build, depth_and_tally, permutation, statevector);
criterion_main!(benches);
