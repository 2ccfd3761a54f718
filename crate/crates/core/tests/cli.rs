use std::path::PathBuf;
use std::process::{Command, Output};

use koshliakov::driver::{cases_from_csv, report_from_json};

fn kosh(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kosh")).args(args).output().expect("kosh runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("kosh-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn lambda_prints_fifteen_digits() {
    let o = kosh(&["lambda", "--p", "1", "--n", "5"]);
    assert_eq!(o.status.code(), Some(0));
    // bisection oracle (mpmath findroot): 4.56859174556457563990
    assert_eq!(stdout(&o).trim(), "4.56859174556458");
    let o = kosh(&["lambda", "--p", "inf", "--n", "5"]);
    assert_eq!(stdout(&o).trim(), "5.00000000000000");
    let o = kosh(&["lambda", "--p", "0", "--n", "5"]);
    assert_eq!(stdout(&o).trim(), "4.50000000000000");
}

#[test]
fn verify_known_pass_exits_zero() {
    let o = kosh(&["verify", "--id", "L11"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.starts_with("L11 [variant=1]"), "{text}");
    assert!(text.contains("1 cases: 1 pass, 0 fail, 0 skipped"), "{text}");
}

#[test]
fn broken_identity_exits_one() {
    // a tolerance no floating-point evaluation can meet
    let o = kosh(&["verify", "--id", "W8", "--p", "1", "--x", "1", "--tol", "1e-300"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("0 pass, 1 fail"));
    let o = kosh(&["suite", "--filter", "L9,L11", "--tol", "1e-300"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn evaluation_errors_exit_one() {
    let o = kosh(&["zeta", "--p", "1", "--s", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("pole"), "{}", stderr(&o));
}

#[test]
fn usage_errors_exit_two_and_name_the_flag() {
    for (args, flag) in [
        (&["lambda", "--p", "1"][..], "--n"),
        (&["lambda", "--p", "-3", "--n", "2"][..], "--p"),
        (&["zeta", "--p", "1", "--s", "1+"][..], "--s"),
        (&["verify", "--id", "W8", "--p", "1", "--x", "1", "--s", "2"][..], "--s"),
        (&["verify", "--p", "1"][..], "--id"),
        (&["suite", "--grid", "p"][..], "--grid"),
        (&["suite", "--tol", "-1"][..], "--tol"),
        (&["suite", "--filter", "W8", "--format", "xml"][..], "--format"),
        (&["lambda", "--p", "1", "--n", "2", "--bogus", "3"][..], "--bogus"),
    ] {
        let o = kosh(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(stderr(&o).contains(flag), "{args:?}: {}", stderr(&o));
        assert!(stdout(&o).is_empty(), "{args:?}");
    }
}

#[test]
fn suite_writes_reports() {
    let json = scratch("report.json");
    let o = kosh(&["suite", "--filter", "W8,W9", "--grid", "x=0.5,1.5", "--out", json.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let report = report_from_json(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(report.cases.len(), 12);
    assert_eq!(report.summary.pass, 12);

    let csv = scratch("report.csv");
    let o = kosh(&["suite", "--filter", "W8,W9", "--grid", "x=0.5,1.5", "--out", csv.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 13);
    assert_eq!(cases_from_csv(&text).unwrap(), report.cases);
}

#[test]
fn config_file_is_overridden_by_flags() {
    let cfg = scratch("run.cfg");
    std::fs::write(&cfg, "# suite settings\nfilter = W9\ngrid = x=2\nseries_n = 150\n").unwrap();
    let o = kosh(&["suite", "--config", cfg.to_str().unwrap(), "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let a = report_from_json(&stdout(&o)).unwrap();
    assert!(a.cases.iter().all(|c| c.id == "W9"));
    let o = kosh(&["suite", "--config", cfg.to_str().unwrap(), "--filter", "W8", "--format", "json"]);
    let b = report_from_json(&stdout(&o)).unwrap();
    assert!(b.cases.iter().all(|c| c.id == "W8"));
    assert_eq!(a.config_fingerprint, b.config_fingerprint);
    let o = kosh(&["suite", "--filter", "W8", "--grid", "x=2", "--format", "json"]);
    let c = report_from_json(&stdout(&o)).unwrap();
    assert_ne!(c.config_fingerprint, b.config_fingerprint);

    std::fs::write(&cfg, "series_n = 3\n").unwrap();
    let o = kosh(&["lambda", "--config", cfg.to_str().unwrap(), "--p", "1", "--n", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--config"));
}

#[test]
fn quantity_subcommands_run() {
    for args in [
        &["zeta", "--p", "1", "--s", "2"][..],
        &["eta", "--p", "0.5", "--s", "0.3+1i"][..],
        &["coeff", "--p", "1", "--s", "1.5", "--n", "3"][..],
        &["kernel", "--p", "1", "--x", "0.7", "--nu", "0.25", "--s", "1.5"][..],
        &["epstein", "--p", "1", "--pprime", "inf", "--c", "2", "--s", "2"][..],
        &["constants", "--p", "2"][..],
    ] {
        let o = kosh(args);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stderr(&o));
        assert!(!stdout(&o).trim().is_empty());
    }
    let o = kosh(&["zeta", "--p", "1", "--s", "2"]);
    let v: f64 = stdout(&o).trim().parse().unwrap();
    assert!((v - koshliakov::koshzeta::zeta_p_two_closed_form(koshliakov::ShapeParam::Finite(1.0))).abs() < 1e-13);
}
