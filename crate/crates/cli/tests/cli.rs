use std::process::{Command, Output};

fn avoidstat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_avoidstat"))
        .args(args)
        .env_remove("AVOIDSTAT_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn closed_a_single_value() {
    let o = avoidstat(&["closed-a", "--n", "4"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "11\n");
}

#[test]
fn closed_a_below_three_is_usage_error() {
    let o = avoidstat(&["closed-a", "--n", "2"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("n >= 3"));
}

#[test]
fn series_csv() {
    let o = avoidstat(&["series", "--which", "A", "--order", "5", "--format", "csv"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "n,value\n0,0\n1,0\n2,0\n3,1\n4,11\n5,81\n");
}

#[test]
fn series_json_uses_strings() {
    let o = avoidstat(&["series", "--which", "d", "--order", "3", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["coefficients"], serde_json::json!(["0", "0", "1", "8"]));
}

#[test]
fn verify_triple_rows_equal() {
    let o = avoidstat(&["verify-triple", "--n-max", "10", "--format", "csv"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    let rows: Vec<&str> = out.lines().collect();
    assert_eq!(rows[0], "n,S(231),S(312),S(213),equal");
    assert_eq!(rows.len(), 11);
    assert_eq!(rows[3], "3,1,1,1,true");
    assert!(rows[1..].iter().all(|r| r.ends_with(",true")));
}

#[test]
fn verify_general_nine_letter_pair() {
    let o = avoidstat(&["verify-general", "--q", "3 1 2 4", "--t", "2 1 3", "--u", "2", "--n", "9..11", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 3);
    for r in rows {
        assert_eq!(r["S(645721389)"], r["S(645789213)"]);
        assert_eq!(r["equal"], "true");
    }
    assert_eq!(rows[0]["S(645721389)"], "1");
}

#[test]
fn verify_general_with_bijection() {
    let o = avoidstat(&["verify-general", "--q", "12", "--t", "12", "--u", "2", "--n", "6..8", "--bijection"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert_eq!(stdout(&o).matches(" ok").count(), 3);
}

#[test]
fn verify_general_rejects_bad_pair() {
    let o = avoidstat(&["verify-general", "--q", "21", "--t", "1", "--u", "1"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn bijection_report_passes() {
    let o = avoidstat(&["bijection", "--n", "3..7", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let reports = v["reports"].as_array().unwrap();
    assert_eq!(reports[3]["a_count"], "500");
    assert!(reports.iter().all(|r| r["passed"] == true));
}

#[test]
fn bijection_apply_and_invert() {
    let o = avoidstat(&["bijection", "--apply", "(((..)(..)).);1,3,4;1,1,1"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    let image = out.lines().next().unwrap().to_string();
    assert_eq!(out.lines().nth(1), Some("2341"));
    let o = avoidstat(&["bijection", "--invert", &image]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("(((..)(..)).);1,3,4;1,1,1\n"));
}

#[test]
fn bijection_wrong_side_is_usage_error() {
    let o = avoidstat(&["bijection", "--apply", "(((..).)(..));1,2,4;1,1,1"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn malformed_permutation() {
    for args in [&["total", "--q", "12a", "--n", "3"][..], &["total", "--q", "122", "--n", "3"], &["count", "--p", "", "--q", "1"]] {
        let o = avoidstat(args);
        assert_eq!(code(&o), 2, "{args:?}");
    }
}

#[test]
fn guard_and_force() {
    let o = avoidstat(&["total", "--q", "21", "--n", "15"]);
    assert_eq!(code(&o), 2);
    let o = avoidstat(&["search", "--h", "7"]);
    assert_eq!(code(&o), 2);
    let o = avoidstat(&["total", "--q", "1", "--n", "15", "--force"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "145422675\n");
}

#[test]
fn enumerate_with_limit() {
    let o = avoidstat(&["enumerate", "--n", "3"]);
    assert_eq!(stdout(&o), "123\n213\n231\n312\n321\n");
    let o = avoidstat(&["enumerate", "--n", "4", "--limit", "2", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v, serde_json::json!(["1234", "2134"]));
    let o = avoidstat(&["enumerate", "--n", "5"]);
    assert_eq!(stdout(&o).lines().count(), 42);
}

#[test]
fn count_and_list() {
    let o = avoidstat(&["count", "--p", "2314", "--q", "213", "--list"]);
    assert_eq!(stdout(&o), "2\n1,3,4\n2,3,4\n");
    let o = avoidstat(&["count", "--p", "4321", "--q", "21"]);
    assert_eq!(stdout(&o), "6\n");
}

#[test]
fn totals_and_signatures() {
    let o = avoidstat(&["total", "--q", "213", "--n", "3..5", "--format", "csv"]);
    assert_eq!(stdout(&o), "n,total\n3,1\n4,11\n5,81\n");
    let o = avoidstat(&["signature", "--q", "132", "--n", "3..6", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["values"], serde_json::json!(["0", "0", "0", "0"]));
    let o = avoidstat(&["catalan", "--n", "12"]);
    assert_eq!(stdout(&o), "208012\n");
}

#[test]
fn search_classes() {
    let o = avoidstat(&["search", "--h", "3", "--n", "3..8", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let members: Vec<serde_json::Value> = v["classes"].as_array().unwrap().iter().map(|c| c["members"].clone()).collect();
    assert_eq!(
        members,
        vec![
            serde_json::json!(["123"]),
            serde_json::json!(["132"]),
            serde_json::json!(["213", "231", "312"]),
            serde_json::json!(["321"])
        ]
    );
    assert_eq!(v["n_max"], "8");
}

#[test]
fn explain_tags_and_verdicts() {
    let o = avoidstat(&["explain", "231", "312", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["explanation"]["tag"], "inverse-trivial");
    let o = avoidstat(&["explain", "213", "231", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["explanation"]["witness"], serde_json::json!({"q": "1", "t": "1", "u": "1"}));
    let o = avoidstat(&["explain", "123", "321"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("n = 4"));
}

#[test]
fn threads_do_not_change_output() {
    let one = avoidstat(&["--threads", "1", "search", "--h", "4", "--format", "json"]);
    let many = avoidstat(&["search", "--h", "4", "--format", "json", "--threads", "4"]);
    assert_eq!(code(&one), 0);
    assert_eq!(one.stdout, many.stdout);
    let env = Command::new(env!("CARGO_BIN_EXE_avoidstat"))
        .args(["search", "--h", "4", "--format", "json"])
        .env("AVOIDSTAT_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(env.stdout, one.stdout);
}

#[test]
fn help_and_unknown_subcommand() {
    let o = avoidstat(&["--help"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("verify-general"));
    let o = avoidstat(&["frobnicate"]);
    assert_eq!(code(&o), 2);
}
