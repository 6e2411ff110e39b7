//! End-to-end tests of the `teqt` binary: subcommands, exit codes, and
//! byte-for-byte determinism of outputs.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn corpus(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("corpus")
        .join(name)
}

fn teqt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_teqt"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_on(file: &Path, sub: &str, extra: &[&str]) -> Output {
    let mut args = vec![sub, file.to_str().unwrap()];
    args.extend_from_slice(extra);
    teqt(&args)
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn check_prints_inferred_type() {
    let out = run_on(&corpus("plus.teqt"), "check", &["--effect", "!"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(
        text.contains("Pi ! x2 : nat . Pi ! x1 : nat . nat"),
        "unexpected output: {text}"
    );
}

#[test]
fn check_failure_exits_one() {
    let out = run_on(&corpus("neg_abort.teqt"), "check", &[]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("A_Abort"));
}

#[test]
fn parse_error_exits_two() {
    let dir = std::env::temp_dir();
    let bad = dir.join("teqt_cli_bad.teqt");
    std::fs::write(&bad, "def broken = \\! x nat . x\n").unwrap();
    let out = run_on(&bad, "check", &[]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn eval_reduces_to_five() {
    let out = run_on(&corpus("plus23.teqt"), "eval", &["--fuel", "100"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("Suc (Suc (Suc (Suc (Suc 0))))"));
}

#[test]
fn erase_prints_implicit_terms() {
    let out = run_on(&corpus("plus.teqt"), "erase", &[]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    // The successor branch loses its reflect annotation.
    assert!(text.contains("Suc (f x')"), "unexpected erasure: {text}");
    assert!(!text.contains("reflect"));
}

#[test]
fn translate_emits_reparseable_obligation() {
    let dir = std::env::temp_dir().join("teqt_cli_obl");
    std::fs::create_dir_all(&dir).unwrap();
    let out = run_on(
        &corpus("plus.teqt"),
        "translate",
        &["--out-dir", dir.to_str().unwrap()],
    );
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let obl = std::fs::read_to_string(dir.join("plus.obl")).unwrap();
    let seq = teqt::frontend::parse_sequent(obl.trim()).unwrap();
    assert!(seq.sig().is_empty() && seq.hyps().is_empty());

    // The goal is the obligation the library computes for the judgment.
    let program =
        teqt::frontend::parse_program(&std::fs::read_to_string(corpus("plus.teqt")).unwrap())
            .unwrap()
            .link()
            .unwrap();
    let term = program.def("plus").unwrap();
    let ty = teqt::typecheck::infer(
        &teqt::syntax::Context::new(),
        term,
        teqt::syntax::Effect::Total,
        &teqt::typecheck::CheckConfig::default(),
    )
    .unwrap();
    let want = teqt::logic::make_obligation(
        &teqt::syntax::Context::new(),
        &term.erase(),
        &ty.erase(),
        teqt::syntax::Effect::Total,
    );
    assert!(seq.goal().alpha_eq(want.goal()));
}

#[test]
fn obligation_can_be_proved_and_checked() {
    // translate emits an obligation whose header, with a proof appended,
    // is a complete script that wp-check accepts.
    let dir = std::env::temp_dir().join("teqt_cli_pipeline");
    std::fs::create_dir_all(&dir).unwrap();
    let out = run_on(
        &corpus("simple.teqt"),
        "translate",
        &["--out-dir", dir.to_str().unwrap()],
    );
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let mut script = std::fs::read_to_string(dir.join("zero.obl")).unwrap();
    script.push_str("(andi (term0) (truei))\n");
    let wp = dir.join("zero.wp");
    std::fs::write(&wp, script).unwrap();
    let out = run_on(&wp, "wp-check", &[]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stdout(&out).contains("ok"));
}

#[test]
fn wp_check_roundtrip_exit_codes() {
    let ok = run_on(&corpus("sym.wp"), "wp-check", &[]);
    assert_eq!(ok.status.code(), Some(0), "{}", stderr(&ok));
    let bad = run_on(&corpus("bad_fuel.wp"), "wp-check", &[]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(stderr(&bad).contains("Pv_OpSem"));
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    for (file, sub) in [
        ("plus.teqt", "check"),
        ("plustotal.teqt", "check"),
        ("div.teqt", "check"),
        ("plus23.teqt", "eval"),
        ("plus.teqt", "erase"),
    ] {
        let a = run_on(&corpus(file), sub, &[]);
        let b = run_on(&corpus(file), sub, &[]);
        assert_eq!(a.stdout, b.stdout, "{sub} {file} differs between runs");
        assert_eq!(a.status.code(), b.status.code());
    }
}
