use std::path::Path;
use std::process::{Command, Output};

use regtourn::canon::are_isomorphic;
use regtourn::families::{forbidden, Forbidden};
use regtourn::io::parse_trn;
use regtourn_cli::report::{ResultEntry, RunReport};

fn regtourn(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_regtourn")).current_dir(dir).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

const NON_REGULAR: &str = r#"{"m":2,"weights":["1/2","1/2"],"blocks":[["1/2","3/4"],["1/4","1/2"]]}"#;

#[test]
fn generated_carousel_is_the_forbidden_c5() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&regtourn(dir.path(), &["gen", "carousel", "5", "-o", "c.trn"])), 0);
    let t = parse_trn(&std::fs::read_to_string(dir.path().join("c.trn")).unwrap()).unwrap();
    assert!(are_isomorphic(&t, &forbidden(Forbidden::C5)));
}

#[test]
fn exit_codes_follow_the_outcome() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(code(&regtourn(d, &["gen", "constant", "-o", "k.stw"])), 0);
    let ok = regtourn(d, &["verify", "forcing-b", "--w", "k.stw"]);
    assert_eq!(code(&ok), 0);
    assert!(stdout(&ok).contains("holds on 1/1"));

    std::fs::write(d.join("nr.stw"), NON_REGULAR).unwrap();
    let err = regtourn(d, &["verify", "forcing-b", "--w", "nr.stw"]);
    assert_eq!(code(&err), 2);
    assert!(String::from_utf8_lossy(&err.stderr).contains("not regular"));
    assert_eq!(code(&regtourn(d, &["verify", "cabk", "--w", "nr.stw"])), 0);

    assert_eq!(code(&regtourn(d, &["gen", "transitive", "4", "-o", "tt4.trn"])), 0);
    let below = regtourn(d, &["search", "tt4.trn", "--restarts", "2", "--bound", "1/32", "--samples", "4"]);
    assert_eq!(code(&below), 1);
    assert!(stdout(&below).contains("VIOLATED"));
    let tight = regtourn(d, &["search", "tt4.trn", "--restarts", "2", "--bound", "1/64", "--samples", "4"]);
    assert_eq!(code(&tight), 0);

    assert_eq!(code(&regtourn(d, &["density", "missing.dgr", "k.stw"])), 2);
    assert_eq!(code(&regtourn(d, &["verify", "no-such-claim"])), 2);
    assert_eq!(code(&regtourn(d, &["gen", "carousel", "4"])), 2);
}

#[test]
fn seeded_verification_holds() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        ["verify", "cb-half", "--seeds", "20"].as_slice(),
        &["verify", "main-cabc", "--a", "1", "--b", "1", "--c", "2", "--seeds", "20"],
        &["verify", "partition-unity", "--k", "3", "--seeds", "10"],
        &["verify", "propmax", "--n", "10", "--seeds", "2"],
    ] {
        let out = regtourn(dir.path(), args);
        assert_eq!(code(&out), 0, "{args:?}: {}", stdout(&out));
    }
}

#[test]
fn exact_density_of_the_constant() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    regtourn(d, &["gen", "cabc", "2", "1", "1", "-o", "h.dgr"]);
    regtourn(d, &["gen", "constant", "-o", "k.stw"]);
    let out = regtourn(d, &["density", "h.dgr", "k.stw"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("1/32"), "{}", stdout(&out));
}

#[test]
fn json_report_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    regtourn(d, &["gen", "forbidden", "W4", "-o", "w4.trn"]);
    let out = regtourn(d, &["classify", "w4.trn", "--json"]);
    assert_eq!(code(&out), 0);
    let report: RunReport = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(report.holds);
    assert_eq!(report.inputs.len(), 1);
    assert_eq!(report.inputs[0].sha256.len(), 64);
    match &report.results[..] {
        [ResultEntry::Classification(c)] => {
            assert_eq!(c.forbidden.as_deref(), Some("W4"));
            assert_eq!(c.forcing, "not-minimizer");
        }
        other => panic!("unexpected results {other:?}"),
    }
    let again: RunReport = serde_json::from_str(&serde_json::to_string(&report).unwrap()).unwrap();
    assert_eq!(again, report);

    let gen = regtourn(d, &["gen", "carousel", "7", "--json"]);
    let report: RunReport = serde_json::from_str(&stdout(&gen)).unwrap();
    assert!(matches!(&report.results[..], [ResultEntry::Generated(g)] if g.family == "carousel"));
}

#[test]
fn runs_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let strip = |o: Output| {
        let mut r: RunReport = serde_json::from_str(&stdout(&o)).unwrap();
        r.elapsed_seconds = 0.0;
        r
    };
    let args = ["verify", "main-tabc", "--seeds", "12", "--seed", "7", "--json"];
    assert_eq!(strip(regtourn(d, &args)), strip(regtourn(d, &args)));
}

#[test]
fn lemma_sub_suite_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = regtourn(dir.path(), &["suite", "lemma-sub"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("PASS lemma-sub"));
}
