use std::path::Path;
use std::process::{Command, Output};

fn gfqc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gfqc")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn build(dir: &Path, name: &str, args: &[&str]) -> String {
    let path = dir.join(name);
    let p = path.to_str().unwrap().to_string();
    let mut full = vec!["build"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["-o", &p]);
    let o = gfqc(&full);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    p
}

#[test]
fn build_writes_header_with_width() {
    let dir = tempfile::tempdir().unwrap();
    let p = build(dir.path(), "c.qc", &["--field", "p:7", "--kind", "cmult", "--a", "3", "--family", "carry-sum"]);
    let text = std::fs::read_to_string(p).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "# kind=cmult field=p:7 a=3 family=carry-sum controls=0");
    assert!(lines.next().unwrap().starts_with("# width=11 "));
    assert_eq!(lines.next().unwrap(), "QUBITS 11");
}

#[test]
fn build_gf8_cmult_width() {
    let o = gfqc(&["build", "--field", "2^3:Q=1011", "--kind", "cmult", "--a", "3"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).lines().nth(1).unwrap().starts_with("# width=7 "));
}

#[test]
fn build_errors_exit_2() {
    let o = gfqc(&["build", "--field", "p:7", "--kind", "cmult", "--a", "0"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("NotInvertible"));
    let o = gfqc(&["build", "--field", "p:9", "--kind", "cmult", "--a", "1"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("NotPrime"));
    let o = gfqc(&["build", "--field", "p:7", "--kind", "adder", "--a", "7"]);
    assert_eq!(code(&o), 2);
    let o = gfqc(&["build", "--kind", "cmult", "--a", "1"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn simulate_cmult_both_families() {
    let dir = tempfile::tempdir().unwrap();
    for family in ["carry-sum", "phi"] {
        let p = build(dir.path(), &format!("{family}.qc"), &["--field", "p:7", "--kind", "cmult", "--a", "3", "--family", family]);
        let o = gfqc(&["simulate", &p, "c=1,x=4"]);
        assert_eq!(code(&o), 0, "{}", stderr(&o));
        assert_eq!(stdout(&o), "c=1 x=5 z=0 anc=0\n");
        let o = gfqc(&["simulate", &p, "c=0", "x=4"]);
        assert_eq!(stdout(&o), "c=0 x=4 z=0 anc=0\n");
    }
}

#[test]
fn simulate_addmult() {
    let dir = tempfile::tempdir().unwrap();
    let p = build(dir.path(), "am.qc", &["--field", "p:7", "--kind", "addmult", "--a", "3"]);
    let o = gfqc(&["simulate", &p, "c=1,x=4,z=2"]);
    assert!(stdout(&o).contains("z=0"), "{}", stdout(&o));
}

#[test]
fn simulate_phi_adder_is_basis_in_basis_out() {
    let dir = tempfile::tempdir().unwrap();
    let p = build(dir.path(), "add.qc", &["--field", "p:11", "--kind", "adder", "--a", "7", "--family", "phi", "--controls", "2"]);
    let o = gfqc(&["simulate", &p, "ctrl=3,z=9"]);
    assert_eq!(stdout(&o), "ctrl=3 z=5 anc=0\n");
}

#[test]
fn simulate_requires_c_and_x() {
    let dir = tempfile::tempdir().unwrap();
    let p = build(dir.path(), "c.qc", &["--field", "p:5", "--kind", "cmult", "--a", "2"]);
    assert_eq!(code(&gfqc(&["simulate", &p, "x=1"])), 2);
    assert_eq!(code(&gfqc(&["simulate", &p, "c=1", "x=9"])), 2);
    assert_eq!(code(&gfqc(&["simulate", &p, "c=1", "y=1", "x=1"])), 2);
}

#[test]
fn simulate_non_basis_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("h.qc");
    std::fs::write(&p, "QUBITS 1\nH 0\n").unwrap();
    let o = gfqc(&["simulate", p.to_str().unwrap(), "q=0"]);
    assert_eq!(code(&o), 3);
}

#[test]
fn simulate_width_cap_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("wide.qc");
    std::fs::write(&p, "QUBITS 30\nH 0\n").unwrap();
    let o = gfqc(&["simulate", p.to_str().unwrap()]);
    assert_eq!(code(&o), 4, "{}", stderr(&o));
    let o = Command::new(env!("CARGO_BIN_EXE_gfqc"))
        .args(["simulate", p.to_str().unwrap()])
        .env("GFQC_MAX_SV_QUBITS", "8")
        .output()
        .unwrap();
    assert_eq!(code(&o), 4);
}

#[test]
fn simulate_parse_error_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.qc");
    std::fs::write(&p, "QUBITS 2\nN 5\n").unwrap();
    assert_eq!(code(&gfqc(&["simulate", p.to_str().unwrap()])), 2);
}

#[test]
fn file_round_trip_matches_in_process() {
    use gfqc::builders::build_cmult;
    use gfqc::sim::run_permutation;
    use gfqc::{AdderFamily, BasisState, FieldElement, FieldSpec};
    let dir = tempfile::tempdir().unwrap();
    let spec: FieldSpec = "p^k:3,2,Q=1,0,1".parse().unwrap();
    let p = build(dir.path(), "k.qc", &["--field", "p^k:3,2,Q=1,0,1", "--kind", "cmult", "--a", "6"]);
    let c = build_cmult(&spec, FieldElement(6), AdderFamily::CarrySum).unwrap();
    for x in spec.elements() {
        let input = BasisState::from_registers(c.layout(), &[("c", 1), ("x", x.0)]).unwrap();
        let want = run_permutation(&c, &input).unwrap().read_register(c.layout(), "x").unwrap();
        let o = gfqc(&["simulate", &p, &format!("c=1,x={}", x.0)]);
        assert!(stdout(&o).contains(&format!("x={want} ")), "{}", stdout(&o));
    }
}

#[test]
fn verify_pass_cases() {
    let o = gfqc(&["verify", "--field", "p:7", "--family", "carry-sum", "--exhaustive"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("PASS oracle: 84/84"));
    let o = gfqc(&["verify", "--field", "p^k:3,2,Q=1,0,1", "--family", "phi", "--exhaustive", "--counts"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(!stdout(&o).contains("FAIL"));
    let o = gfqc(&["verify", "--field", "2^4:Q=10011", "--exhaustive", "--counts"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
}

#[test]
fn verify_rejects_reducible_modulus() {
    let o = gfqc(&["verify", "--field", "2^2:Q=101", "--exhaustive"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("ReducibleModulus"));
}

#[test]
fn verify_samples_are_deterministic() {
    let args = ["verify", "--field", "p:251", "--samples", "20", "--seed", "9"];
    let a = gfqc(&args);
    let b = gfqc(&args);
    assert_eq!(code(&a), 0, "{}", stdout(&a));
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).contains("seed=9"));
}

#[test]
fn verify_exhaustive_limit() {
    assert_eq!(code(&gfqc(&["verify", "--field", "p:8191", "--exhaustive"])), 2);
}

#[test]
fn estimate_examples() {
    let o = gfqc(&["estimate", "--field", "p:251", "--kind", "cmult", "--family", "phi", "--format", "csv"]);
    let row = stdout(&o).lines().nth(2).unwrap().to_string();
    assert!(row.starts_with("cmult-gfp,phi,0,19,"), "{row}");
    let o = gfqc(&["estimate", "--field", "2^8:Q=100011011", "--kind", "cmult", "--format", "csv"]);
    let row = stdout(&o).lines().nth(2).unwrap().to_string();
    assert_eq!(row, "cmult-gf2n,-,0,17,0/1,16/1,72/1,0/1,0/1,0/1,0/1,0/1,0/1,74/1");
}

#[test]
fn estimate_tables_match_golden() {
    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    for t in ["1", "2"] {
        let o = gfqc(&["estimate", "--table", t]);
        let want = std::fs::read(golden.join(format!("table{t}.txt"))).unwrap();
        assert_eq!(o.stdout, want, "table {t}");
    }
}

#[test]
fn estimate_concrete_tables() {
    let o = gfqc(&["estimate", "--table", "2", "--l", "4", "--k", "3", "--format", "csv"]);
    assert!(stdout(&o).contains("Controlled multiplication,Width,14,11,25,32,27"));
    let o = gfqc(&["estimate", "--table", "1", "--n", "8", "--format", "csv"]);
    assert!(stdout(&o).contains("Carry-sum adder,16,"));
}

#[test]
fn estimate_empirical_is_deterministic() {
    let args = ["estimate", "--field", "p:13", "--kind", "adder", "--controls", "2", "--empirical", "30", "--seed", "4"];
    let a = gfqc(&args);
    assert_eq!(code(&a), 0, "{}", stderr(&a));
    assert_eq!(a.stdout, gfqc(&args).stdout);
    assert!(stdout(&a).contains("samples=30"));
}

#[test]
fn estimate_out_of_domain() {
    assert_eq!(code(&gfqc(&["estimate", "--field", "p:13", "--kind", "adder", "--controls", "1"])), 2);
    assert_eq!(code(&gfqc(&["estimate", "--n", "1", "--kind", "int-adder"])), 2);
}

#[test]
fn field_free_kinds() {
    let o = gfqc(&["build", "--n", "4", "--kind", "qft"]);
    assert!(stdout(&o).contains("# width=5 "));
    let o = gfqc(&["build", "--n", "3", "--kind", "cswap"]);
    let meta = stdout(&o).lines().nth(1).unwrap().to_string();
    assert!(meta.starts_with("# width=7 ") && meta.ends_with(" depth=5"), "{meta}");
    let dir = tempfile::tempdir().unwrap();
    let p = build(dir.path(), "ia.qc", &["--n", "4", "--kind", "int-adder", "--a", "11", "--family", "phi"]);
    assert_eq!(stdout(&gfqc(&["simulate", &p, "z=9"])), "z=20\n");
}
