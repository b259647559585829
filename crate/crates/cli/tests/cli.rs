use std::path::PathBuf;
use std::process::Command;

fn data() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/v1")
}

fn qand(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_qand")).args(args).current_dir(data()).env("NO_COLOR", "1").output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

#[test]
fn distance_of_the_six_qutrit_code() {
    let (code, out, _) = qand(&["verify-code", "codes/622.code", "--max-weight", "3"]);
    assert_eq!(code, 0);
    assert!(out.contains("distance = 2"), "{out}");
}

#[test]
fn truth_table_matches_the_printed_left_table() {
    let (code, out, _) = qand(&["truth-table", "circuits/and_eq5.qc"]);
    assert_eq!(code, 0);
    let rows: Vec<Vec<u8>> = out
        .lines()
        .skip(1)
        .map(|l| l.split_whitespace().filter(|t| *t != "|").map(|t| t.parse().unwrap()).collect())
        .collect();
    let want: Vec<Vec<u8>> = qand::report::TABLE1_EQ5.iter().map(|r| r.to_vec()).collect();
    assert_eq!(rows, want);
}

#[test]
fn table2_report_passes() {
    let (code, out, _) = qand(&["report", "table2"]);
    assert_eq!(code, 0, "{out}");
    assert!(!out.contains("FAIL"));
    assert!(out.ends_with("verdict PASS\n"));
}

#[test]
fn reports_are_byte_deterministic() {
    let a = qand(&["--jobs", "1", "report", "table2"]);
    let b = qand(&["--jobs", "4", "report", "table2"]);
    assert_eq!(a.1, b.1);
}

#[test]
fn unknown_subcommand_prints_usage() {
    let (code, _, err) = qand(&["frobnicate"]);
    assert_eq!(code, 2);
    assert!(err.contains("Usage:") && err.contains("verify-protocol"), "{err}");
}

#[test]
fn malformed_input_is_exit_2() {
    let dir = tempdir();
    let bad = dir.join("bad.qc");
    std::fs::write(&bad, "DIM 3\nWIRES 1\nNOPE 1\n").unwrap();
    let (code, _, err) = qand(&["truth-table", bad.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.starts_with("error:"), "{err}");
    let (code, _, _) = qand(&["verify-code", "codes/missing.code"]);
    assert_eq!(code, 2);
    let (code, _, _) = qand(&["verify-protocol", "nonexistent"]);
    assert_eq!(code, 2);
}

#[test]
fn corrupted_table_is_exit_1() {
    let table = std::fs::read_to_string(data().join("protocols/zcz.corrections")).unwrap();
    let bad = qand::protocols::CorrectionTable::parse(&table).unwrap().corrupted(&[1, 2]);
    let dir = tempdir();
    let path = dir.join("zcz_bad.corrections");
    std::fs::write(&path, bad.to_text()).unwrap();
    let (code, out, _) = qand(&["verify-protocol", "zcz", "--table", path.to_str().unwrap()]);
    assert_eq!(code, 1, "{out}");
    assert!(out.contains("verdict FAIL (first failure at branch 5)"), "{out}");
    let (code, _, _) = qand(&["verify-protocol", "zcz", "--table", "protocols/zcz.corrections"]);
    assert_eq!(code, 0);
}

#[test]
fn wrong_logical_is_exit_1() {
    let (code, out, _) =
        qand(&["verify-transversal", "codes/622.code", "--layer", "circuits/layer_622.qc", "--logical", "circuits/ctrl0_z.qc"]);
    assert_eq!(code, 1, "{out}");
    let (code, _, _) =
        qand(&["verify-transversal", "codes/622.code", "--layer", "circuits/layer_622.qc", "--logical", "circuits/logical_and.qc"]);
    assert_eq!(code, 0);
}

#[test]
fn synth_counts_and_circuit() {
    let (code, out, _) = qand(&["synth", "nary-and", "--n", "4", "--emit", "counts"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("T 9\nR 0\nCX 12\n2Q 3\n"), "{out}");
    let (code, out, _) = qand(&["synth", "and", "--emit", "circuit"]);
    assert_eq!(code, 0);
    assert_eq!(out, std::fs::read_to_string(data().join("circuits/and_eq5.qc")).unwrap());
    let (code, out, _) = qand(&["synth", "s", "--emit", "counts"]);
    assert_eq!(code, 0);
    assert!(out.contains("injection-required"));
}

#[test]
fn concatenation_has_no_low_weight_logical() {
    let (code, out, _) = qand(&["verify-concat", "codes/622.code", "codes/812_qrm.code", "--max-weight", "3"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("code [[48,2]]") && out.contains("distance > 3"), "{out}");
}

#[test]
fn colors_only_wrap_verdict_words() {
    assert_eq!(qand_cli::colorize("verdict PASS\nx"), "verdict \x1b[32mPASS\x1b[0m\nx");
    assert_eq!(qand_cli::colorize("PASSED"), "PASSED");
}

fn tempdir() -> PathBuf {
    let dir = std::env::temp_dir().join(format!("qand-cli-{}-{:?}", std::process::id(), std::thread::current().id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}
