//! End-to-end tests of the binary: exit codes, output shape, file formats.

use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_magic-groups"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn decide_examples() {
    let out = run(&["decide", "C4 x C8"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("Magic (rule C4xC8)"));

    let out = run(&["decide", "C2^5 x C3"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("NotMagic (rule C2K_C3_FAIL)"));

    let out = run(&["decide", "Z"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("Magic (rule INFINITE)"));

    let out = run(&["decide", "C8"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("NotMagic (rule MIN_ORDER)"));

    let out = run(&["decide", "C16", "--n", "2"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("NotMagic (rule NO_2MAGIC)"));
}

#[test]
fn decide_parse_error_is_exit_2() {
    let out = run(&["decide", "C4 y C8"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("syntax error"));

    let out = run(&["decide", "C1"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn decide_json_and_witness() {
    let out = run(&["decide", "C4 x C8", "--json", "--witness"]);
    assert_eq!(code(&out), 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["status"], "Magic");
    assert_eq!(doc["rule"], "C4xC8");
    let witness = &doc["witness"];
    assert_eq!(witness["group"], "C4 x C8");
    assert_eq!(witness["n"], 3);
    assert_eq!(witness["entries"].as_array().unwrap().len(), 3);
}

#[test]
fn search_examples() {
    let out = run(&["search", "(C7:C3|4)", "--n", "3"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("Found"));
    assert!(stdout(&out).contains("product: a^0*b^0"));

    let out = run(&["search", "C8", "--n", "3"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("ExhaustedNone"));

    let out = run(&["search", "C16", "--n", "2"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("ExhaustedNone"));
}

#[test]
fn search_budget_exhaustion_is_exit_3() {
    let out = run(&["search", "C16", "--n", "4", "--budget", "1000"]);
    assert_eq!(code(&out), 3);
    assert!(stdout(&out).contains("BudgetExceeded"));
}

#[test]
fn search_infinite_needs_window() {
    let out = run(&["search", "Z", "--n", "3"]);
    assert_eq!(code(&out), 2);

    let out = run(&["search", "Z", "--n", "3", "--window", "16"]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    assert!(stdout(&out).contains("Found"));
    assert!(stderr(&out).contains("window"));

    // a bare --window defaults to B = 16: same square, modulo the timing line
    let bare = run(&["search", "Z", "--n", "3", "--window"]);
    assert_eq!(code(&bare), 0, "stderr: {}", stderr(&bare));
    let grid = |s: &str| s.lines().skip(1).map(String::from).collect::<Vec<_>>();
    assert_eq!(grid(&stdout(&bare)), grid(&stdout(&out)));
}

#[test]
fn search_pruning_flag_keeps_outcome() {
    let with = run(&["search", "C9", "--n", "3", "--json"]);
    let without = run(&["search", "C9", "--n", "3", "--json", "--all-off-pruning"]);
    assert_eq!(code(&with), 0);
    assert_eq!(code(&without), 0);
    let a: serde_json::Value = serde_json::from_str(&stdout(&with)).unwrap();
    let b: serde_json::Value = serde_json::from_str(&stdout(&without)).unwrap();
    assert_eq!(a["outcome"], "Found");
    assert_eq!(a["square"], b["square"]);
}

#[test]
fn verify_documents() {
    let dir = tempfile::tempdir().unwrap();

    let lo_shu = dir.path().join("lo_shu.json");
    std::fs::write(
        &lo_shu,
        r#"{
          "group": "Z",
          "n": 3,
          "entries": [["(;8)", "(;1)", "(;6)"],
                      ["(;3)", "(;5)", "(;7)"],
                      ["(;4)", "(;9)", "(;2)"]],
          "product": "(;15)"
        }"#,
    )
    .unwrap();
    let out = run(&["verify", lo_shu.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    assert!(stdout(&out).contains("is_magic: true (product (;15))"));

    // the C4 x C8 grid from the witness catalog
    let c4c8 = dir.path().join("c4c8.json");
    std::fs::write(
        &c4c8,
        r#"{
          "group": "C4 x C8",
          "n": 3,
          "entries": [["(0,1;)", "(3,6;)", "(1,1;)"],
                      ["(1,0;)", "(0,0;)", "(3,0;)"],
                      ["(3,7;)", "(1,2;)", "(0,7;)"]],
          "product": null
        }"#,
    )
    .unwrap();
    let out = run(&["verify", c4c8.to_str().unwrap(), "--json"]);
    assert_eq!(code(&out), 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["is_magic"], true);
    assert_eq!(doc["magic_product"], "(0,0;)");
    assert_eq!(doc["line_products"].as_array().unwrap().len(), 8);

    // duplicates fail with exit 1 and the pairs listed
    let dup = dir.path().join("dup.json");
    std::fs::write(
        &dup,
        r#"{
          "group": "C9",
          "n": 3,
          "entries": [["(0;)", "(0;)", "(0;)"],
                      ["(0;)", "(0;)", "(0;)"],
                      ["(0;)", "(0;)", "(0;)"]],
          "product": null
        }"#,
    )
    .unwrap();
    let out = run(&["verify", dup.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("entries_distinct: false"));

    // malformed documents exit 2
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    let out = run(&["verify", bad.to_str().unwrap()]);
    assert_eq!(code(&out), 2);

    let missing = dir.path().join("missing.json");
    let out = run(&["verify", missing.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
}

#[test]
fn verify_round_trips_search_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["search", "C12", "--n", "3", "--json"]);
    assert_eq!(code(&out), 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let square = dir.path().join("found.json");
    std::fs::write(&square, serde_json::to_string(&doc["square"]).unwrap()).unwrap();
    let out = run(&["verify", square.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
}

#[test]
fn construct_examples() {
    let out = run(&["construct", "C2 x C9"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("product:"));

    let out = run(&["construct", "C2^4"]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("NotMagic"));

    let out = run(&["construct", "(C7:C3|4)"]);
    assert_eq!(code(&out), 2);

    // constructed squares verify
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["construct", "C6 x C6", "--json"]);
    assert_eq!(code(&out), 0);
    let path = dir.path().join("w.json");
    std::fs::write(&path, stdout(&out)).unwrap();
    let out = run(&["verify", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
}

#[test]
fn construct_uses_the_cache() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("witness.cache");
    let first = run(&["construct", "C2 x C9", "--cache", cache.to_str().unwrap()]);
    assert_eq!(code(&first), 0);
    let after_first = std::fs::read_to_string(&cache).unwrap();
    assert_eq!(after_first.lines().count(), 1);
    let record: serde_json::Value =
        serde_json::from_str(after_first.lines().next().unwrap()).unwrap();
    assert_eq!(record["invariant_factors"], serde_json::json!([18]));

    // a second run hits the cache and appends nothing
    let second = run(&["construct", "C2 x C9", "--cache", cache.to_str().unwrap()]);
    assert_eq!(code(&second), 0);
    assert_eq!(stdout(&first), stdout(&second));
    let after_second = std::fs::read_to_string(&cache).unwrap();
    assert_eq!(after_second, after_first);
}

#[test]
fn sweep_reports() {
    let out = run(&["sweep", "--max-order", "30"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("0 disagreements"));
    assert!(text.contains("order=9 factors=[3,3] oracle=Magic(ODD_ORDER) search=Found agree=yes"));

    let out = run(&["sweep", "--max-order", "12", "--json"]);
    assert_eq!(code(&out), 0);
    for line in stdout(&out).lines() {
        let doc: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(doc["agree"], true);
    }

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.txt");
    let out = run(&["sweep", "--max-order", "10", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(std::fs::read_to_string(&path).unwrap().contains("0 disagreements"));
}

#[test]
fn sweep_is_jobs_independent_at_cli_level() {
    let a = run(&["sweep", "--max-order", "25", "--json"]);
    let b = run(&["sweep", "--max-order", "25", "--json", "--jobs", "3"]);
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn info_examples() {
    let out = run(&["info", "C2^2 x C4 x C3"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("order: 48"));
    assert!(text.contains("invariant factors: [2, 2, 12]"));
    assert!(text.contains("alpha: [2, 1]"));

    let out = run(&["info", "Z x C5", "--json"]);
    assert_eq!(code(&out), 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["order"], "infinite");
    assert_eq!(doc["free_rank"], 1);

    let out = run(&["info", "(C7:C3|4)"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("commutative: false"));
}

#[test]
fn cayley_table_files_flow_through_decide_and_search() {
    let dir = tempfile::tempdir().unwrap();

    // C9 as a table file
    let c9 = dir.path().join("c9.cayley");
    let mut text = String::from("9\n");
    for i in 0..9 {
        let row: Vec<String> = (0..9).map(|j| ((i + j) % 9).to_string()).collect();
        text.push_str(&row.join(" "));
        text.push('\n');
    }
    std::fs::write(&c9, text).unwrap();
    let spec = format!("table({})", c9.display());
    let out = run(&["decide", &spec]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    assert!(stdout(&out).contains("Magic"));
    let out = run(&["search", &spec, "--n", "3", "--json"]);
    assert_eq!(code(&out), 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["outcome"], "Found");
    // a table-group square document round-trips through verify
    let square = dir.path().join("table_square.json");
    std::fs::write(&square, serde_json::to_string(&doc["square"]).unwrap()).unwrap();
    let out = run(&["verify", square.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));

    // an invalid table is rejected with a location
    let bad = dir.path().join("bad.cayley");
    std::fs::write(&bad, "3\n0 1 2\n1 2 0\n2 0 x\n").unwrap();
    let out = run(&["decide", &format!("table({})", bad.display())]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("line 4"));
    assert!(stderr(&out).contains("column 3"));
}
