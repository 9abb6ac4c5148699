//! End-to-end tests of the command-line interface, spawning the real
//! binary.

use std::io::Write;
use std::process::{Command, Output, Stdio};

fn bddqsp(args: &[&str], stdin: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_bddqsp"));
    cmd.args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped());
    let mut child = cmd.spawn().expect("binary spawns");
    if let Some(text) = stdin {
        child
            .stdin
            .as_mut()
            .unwrap()
            .write_all(text.as_bytes())
            .unwrap();
    }
    drop(child.stdin.take());
    child.wait_with_output().expect("binary exits")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

const OR2: &str = "\
wfbdd v1
nvars 2
terminal0 0
terminal1 1
node 2 var 1 e0 3 e1 1
node 3 var 2 e0 0 e1 1
root 2
";

#[test]
fn validate_accepts_a_valid_file_and_rejects_a_broken_one() {
    let ok = bddqsp(&["validate", "-"], Some(OR2));
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(stdout_of(&ok).trim(), "valid");

    let broken = OR2.replace("e0 3", "e0 9");
    let bad = bddqsp(&["validate", "-"], Some(&broken));
    assert_eq!(bad.status.code(), Some(1));
    assert!(stdout_of(&bad).contains("dangling"));
}

#[test]
fn count_matches_the_function_and_uniform_emits_a_weighted_diagram() {
    let count = bddqsp(&["count", "-"], Some(OR2));
    assert_eq!(count.status.code(), Some(0));
    assert_eq!(stdout_of(&count).trim(), "3");

    let uniform = bddqsp(&["uniform", "-"], Some(OR2));
    assert_eq!(uniform.status.code(), Some(0));
    let weighted = stdout_of(&uniform);
    assert!(weighted.contains("1.4142135623730951e0"), "sqrt(2) weight");
    let revalidate = bddqsp(&["validate", "-"], Some(&weighted));
    assert_eq!(revalidate.status.code(), Some(0));
}

#[test]
fn eval_reads_explicit_input_bits() {
    for (x, expect) in [("00", "0"), ("01", "1"), ("10", "1"), ("11", "1")] {
        let out = bddqsp(&["eval", "-", "--x", x], Some(OR2));
        assert_eq!(out.status.code(), Some(0));
        assert_eq!(stdout_of(&out).trim(), expect, "x={x}");
    }
}

#[test]
fn reduce_contracts_and_reports_the_shrink() {
    let unreduced = "\
wfbdd v1
nvars 2
terminal0 0
terminal1 1
node 2 var 1 e0 3 e1 4
node 3 var 2 e0 0 e1 1
node 4 var 2 e0 0 e1 1
root 2
";
    let out = bddqsp(&["reduce", "-"], Some(unreduced));
    assert_eq!(out.status.code(), Some(0));
    let reduced = stdout_of(&out);
    // Node 4 merges into node 3, then the root becomes redundant.
    assert_eq!(
        reduced.matches("\nnode ").count(),
        1,
        "one internal node survives:\n{reduced}"
    );
}

#[test]
fn synth_then_sim_verifies_the_pipeline_against_the_oracle() {
    let fam = bddqsp(&["family", "binomial", "--n", "4", "--delta", "0.5"], None);
    assert_eq!(fam.status.code(), Some(0));
    let circuit = bddqsp(&["synth", "-"], Some(&stdout_of(&fam)));
    assert_eq!(circuit.status.code(), Some(0));
    let sim = bddqsp(&["sim", "-", "--compare-oracle"], Some(&stdout_of(&circuit)));
    assert_eq!(sim.status.code(), Some(0), "{}", String::from_utf8_lossy(&sim.stderr));
    let report = stdout_of(&sim);
    let fidelity: f64 = report
        .lines()
        .find_map(|l| l.strip_prefix("fidelity "))
        .unwrap()
        .parse()
        .unwrap();
    assert!(fidelity >= 1.0 - 1e-9);
    assert!(report.contains("ancillas_clean true"));
}

#[test]
fn sim_dense_check_agrees_with_the_sparse_backend() {
    let uniform = bddqsp(&["uniform", "-"], Some(OR2));
    let circuit = bddqsp(&["synth", "-"], Some(&stdout_of(&uniform)));
    let sim = bddqsp(
        &["sim", "-", "--compare-oracle", "--dense-check"],
        Some(&stdout_of(&circuit)),
    );
    assert_eq!(sim.status.code(), Some(0));
    let report = stdout_of(&sim);
    let diff: f64 = report
        .lines()
        .find_map(|l| l.strip_prefix("dense_max_diff "))
        .unwrap()
        .parse()
        .unwrap();
    assert!(diff <= 1e-12);
}

#[test]
fn sim_without_flags_dumps_the_state() {
    let circuit = "qubits 1\nprep 0 0\nH q0\n";
    let out = bddqsp(&["sim", "-"], Some(circuit));
    assert_eq!(out.status.code(), Some(0));
    let dump = stdout_of(&out);
    let lines: Vec<&str> = dump.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[0].starts_with("0 7.07106781"));
    assert!(lines[1].starts_with("1 7.07106781"));
}

#[test]
fn synth_is_byte_deterministic() {
    let uniform = stdout_of(&bddqsp(&["uniform", "-"], Some(OR2)));
    let a = bddqsp(&["synth", "-"], Some(&uniform));
    let b = bddqsp(&["synth", "-"], Some(&uniform));
    assert_eq!(a.stdout, b.stdout);
    assert!(!a.stdout.is_empty());
}

#[test]
fn synth_phase_circuit_drives_the_simulator() {
    let circuit = bddqsp(&["synth-phase", "-", "--theta", "3.141592653589793"], Some(OR2));
    assert_eq!(circuit.status.code(), Some(0));
    // Open inputs default to zero: f(00) = 0, so the state is |0...0> with
    // amplitude 1.
    let sim = bddqsp(&["sim", "-"], Some(&stdout_of(&circuit)));
    assert_eq!(sim.status.code(), Some(0));
    let dump = stdout_of(&sim);
    assert_eq!(dump.lines().count(), 1);
    assert!(dump.starts_with("00000 1.0"), "{dump}");
}

#[test]
fn ratio_reports_both_routes() {
    let out = bddqsp(&["ratio", "--n", "6", "--delta", "0.25", "--csv"], None);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    assert!(text.starts_with("n,delta,direct_ratio,closed_form,relative_difference"));
    assert!(text.lines().nth(1).unwrap().starts_with("6,0.25,"));
}

#[test]
fn blockenc_dumps_the_block_matrix() {
    let uniform = stdout_of(&bddqsp(&["uniform", "-"], Some(OR2)));
    let out = bddqsp(&["blockenc", "projector", "-"], Some(&uniform));
    assert_eq!(out.status.code(), Some(0));
    let dump = stdout_of(&out);
    assert_eq!(dump.lines().count(), 16, "4x4 block");
    // Entry (1, 1) of the projector onto the uniform or-state is 1/3.
    let line = dump
        .lines()
        .find(|l| l.starts_with("1 1 "))
        .expect("entry present");
    let re: f64 = line.split(' ').nth(2).unwrap().parse().unwrap();
    assert!((re - 1.0 / 3.0).abs() < 1e-9);
}

#[test]
fn bench_emits_the_stable_csv_schema() {
    let out = bddqsp(&["bench", "--suite", "random", "--csv", "--seed", "7"], None);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    assert!(text.starts_with(
        "name,n,nodes,edges,gates_1q,gates_2q,toffolis,ancillas,fidelity,wall_time_ms"
    ));
    assert_eq!(text.lines().count(), 21, "header plus twenty rows");
    let again = bddqsp(&["bench", "--suite", "random", "--csv", "--seed", "7"], None);
    let strip_times = |s: &str| {
        s.lines()
            .map(|l| l.rsplit_once(',').map(|(head, _)| head.to_owned()).unwrap_or_default())
            .collect::<Vec<_>>()
    };
    assert_eq!(strip_times(&text), strip_times(&stdout_of(&again)));
}

#[test]
fn compare_oracle_accepts_an_explicit_diagram_path() {
    let uniform = stdout_of(&bddqsp(&["uniform", "-"], Some(OR2)));
    let path = std::env::temp_dir().join(format!("bddqsp-oracle-{}.wfbdd", std::process::id()));
    std::fs::write(&path, &uniform).unwrap();
    let circuit = stdout_of(&bddqsp(&["synth", "-"], Some(&uniform)));
    // Strip the embedded source so only the explicit path can supply it.
    let bare: String = circuit.lines().filter(|l| !l.starts_with('#')).fold(
        String::new(),
        |mut acc, l| {
            acc.push_str(l);
            acc.push('\n');
            acc
        },
    );
    let no_oracle = bddqsp(&["sim", "-", "--compare-oracle"], Some(&bare));
    assert_eq!(no_oracle.status.code(), Some(1), "no embedded source to use");
    let arg = format!("--compare-oracle={}", path.display());
    let with_path = bddqsp(&["sim", "-", &arg], Some(&bare));
    assert_eq!(with_path.status.code(), Some(0));
    assert!(stdout_of(&with_path).contains("ancillas_clean true"));
    std::fs::remove_file(&path).ok();
}

#[test]
fn family_h_emits_a_free_diagram() {
    let fam = bddqsp(&["family", "h", "--n", "2"], None);
    assert_eq!(fam.status.code(), Some(0));
    let check = bddqsp(&["validate", "-"], Some(&stdout_of(&fam)));
    assert_eq!(check.status.code(), Some(0));
}

#[test]
fn bench_seed_falls_back_to_the_environment() {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_bddqsp"));
    cmd.args(["bench", "--suite", "random", "--csv"])
        .env("BDDQSP_SEED", "99")
        .stdin(Stdio::null())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped());
    let out = cmd.output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let via_env = stdout_of(&out);
    let via_flag = stdout_of(&bddqsp(
        &["bench", "--suite", "random", "--csv", "--seed", "99"],
        None,
    ));
    let strip_times = |s: &str| {
        s.lines()
            .map(|l| l.rsplit_once(',').map(|(head, _)| head.to_owned()).unwrap_or_default())
            .collect::<Vec<_>>()
    };
    assert_eq!(strip_times(&via_env), strip_times(&via_flag));
}

#[test]
fn usage_errors_exit_with_code_two() {
    let out = bddqsp(&["no-such-command"], None);
    assert_eq!(out.status.code(), Some(2));
    let out = bddqsp(&["family", "symmetric", "--n", "4"], None);
    assert_eq!(out.status.code(), Some(1), "missing --i is a data error");
}

#[test]
fn malformed_files_report_line_numbers() {
    let out = bddqsp(&["validate", "-"], Some("wfbdd v1\nnvars two\n"));
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}
