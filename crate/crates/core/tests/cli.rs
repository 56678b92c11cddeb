use std::process::{Command, Output};

use ordsum::gsum::{DecompositionReport, GrowthRow};

fn ordsum(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ordsum"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn ordsum_env(args: &[&str], threads: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ordsum"))
        .args(args)
        .env("ORDSUM_THREADS", threads)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn gsum_csv_schema() {
    let o = ordsum(&["gsum", "--a", "2", "--x", "1000", "--alpha", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "x,g_exact,term_I,term_II,term_II1,term_II2,term_III,ell_lo,ell_hi,t_lo,t_hi,card_S,card_I,card_II,card_III,card_H,card_J"
    );
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row.len(), 17);
    assert_eq!(row[0], "1000");
    assert!(lines.next().is_none());
    assert!(!text.contains('\r'));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(
        ordsum(&["gsum", "--a", "1", "--x", "10", "--alpha", "2"]).status.code(),
        Some(2)
    );
    assert_eq!(ordsum(&["gsum", "--a", "1", "--x", "10"]).status.code(), Some(2));
    assert_eq!(
        ordsum(&["gsum", "--a", "2", "--x", "10", "--alpha", "3"]).status.code(),
        Some(2)
    );
    assert_eq!(
        ordsum(&["pksum", "--d", "9", "--x", "10", "--alpha", "2"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        ordsum(&["gsum-table", "--a", "2", "--alpha", "2", "--xs", "10,5"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(ordsum(&["frobnicate"]).status.code(), Some(2));
    let o = ordsum_env(&["class-number", "--d", "2"], "zero");
    assert_eq!(o.status.code(), Some(2));
    let o = ordsum(&["gsum", "--a", "1", "--x", "10", "--alpha", "2"]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("--a"));
}

#[test]
fn json_round_trips() {
    let o = ordsum(&["gsum", "--a", "3", "--x", "500", "--alpha", "5/2", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let r: DecompositionReport = serde_json::from_str(&stdout(&o)).unwrap();
    r.check_invariants().unwrap();
    assert_eq!(serde_json::to_string_pretty(&r).unwrap() + "\n", stdout(&o));

    let o = ordsum(&[
        "gsum-table",
        "--a",
        "2",
        "--alpha",
        "2",
        "--xs",
        "1,10,100",
        "--format",
        "json",
    ]);
    let rows: Vec<GrowthRow> = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(rows.iter().map(|r| r.x).collect::<Vec<_>>(), vec![1, 10, 100]);
}

#[test]
fn output_is_thread_independent() {
    let args = ["pksum", "--d", "5", "--x", "3000", "--alpha", "3/2"];
    let one = ordsum_env(&args, "1");
    let four = ordsum_env(&args, "4");
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn output_file() {
    let dir = std::env::temp_dir().join(format!("ordsum-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("delta.csv");
    let o = ordsum(&["delta", "--x", "10", "--output", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    assert_eq!(
        std::fs::read_to_string(&path).unwrap(),
        "field,x,delta,hnar_sum\nQ,10,17,32\n"
    );
    let bad = dir.join("missing").join("x.csv");
    let o = ordsum(&["delta", "--x", "10", "--output", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("missing"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn verification_subcommands() {
    let o = ordsum(&[
        "verify-lemmas",
        "--kmax",
        "60",
        "--xmax",
        "80",
        "--nmax",
        "30",
        "--matrices",
        "10",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("grid,range,checked,holds,fails,undecided,first_exception\n"));
    assert_eq!(text.lines().count(), 6);

    let o = ordsum(&["field-info", "--d", "6", "--kmax", "10"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("\n6,24,sqrt(6),5 + 2ω,1,"));
}

#[test]
fn small_tables() {
    let o = ordsum(&["hnar", "--d", "2", "--x", "4"]);
    assert_eq!(
        stdout(&o),
        "a,b,c,norm,phi,unit_index,narrow_unit_index,hnar\n1,0,1,1,1,1,4,1\n2,0,1,2,1,1,4,1\n2,0,2,4,2,2,4,2\n"
    );
    let o = ordsum(&["jk", "--d", "2", "--x", "10"]);
    assert!(stdout(&o).lines().nth(1).unwrap().starts_with("2,10,6,"));
    let o = ordsum(&["class-number", "--d", "79", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!((v["h"].as_u64(), v["h_plus"].as_u64()), (Some(3), Some(6)));
}

#[test]
fn decimals_columns() {
    let o = ordsum(&["gsum", "--a", "2", "--x", "10", "--alpha", "2", "--decimals"]);
    let text = stdout(&o);
    let header = text.lines().next().unwrap();
    assert!(header.ends_with(",card_J,g_exact_dec,term_I_dec,term_II_dec,term_II1_dec,term_II2_dec,term_III_dec"));
}

#[test]
fn selftests_pass() {
    for cmd in [
        "gsum",
        "gsum-table",
        "verify-lemmas",
        "field-info",
        "pksum",
        "hnar",
        "delta",
        "jk",
        "class-number",
    ] {
        let o = ordsum(&[cmd, "--selftest"]);
        assert_eq!(
            o.status.code(),
            Some(0),
            "{cmd}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
        assert_eq!(stdout(&o), format!("selftest {cmd}: ok\n"));
    }
}
