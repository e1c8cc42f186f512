//! Fixtures shared by the benchmarks.

use gfqc::FieldSpec;

/// Fields used across the benchmark groups, smallest first.
pub fn fields() -> Vec<(&'static str, FieldSpec)> {
    vec![
        ("gf13", FieldSpec::Prime { p: 13 }),
        ("gf251", FieldSpec::Prime { p: 251 }),
        ("gf2_8", FieldSpec::Binary { n: 8, modulus: 0b1_0001_1011 }),
        ("gf3_3", FieldSpec::Extension { p: 3, k: 3, modulus: vec![1, 2, 0, 1] }),
    ]
}
