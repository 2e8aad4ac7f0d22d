use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn optimin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_optimin")).args(args).env_remove("OPTIMIN_THREADS").output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name).to_string_lossy().into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn json(args: &[&str]) -> serde_json::Value {
    let mut all = vec!["--format", "json"];
    all.extend_from_slice(args);
    let out = optimin(&all);
    assert!(out.status.success(), "{}", stderr(&out));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn figure1_optimin_table() {
    let out = optimin(&["optimin", "--game", "figure1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("mode: pure"));
    assert!(text.contains("(Top,Left)  value (100, 100)"));
}

#[test]
fn nash_json_is_exact() {
    let v = json(&["nash", "--game", "figure1"]);
    assert_eq!(v["nash"][0]["profile"], serde_json::json!(["Bottom", "Right"]));
    assert_eq!(v["nash"][0]["payoff"], serde_json::json!(["5", "5"]));
}

#[test]
fn mixed_grid_reports_approximation() {
    let out = optimin(&["optimin", "--game", "motivating", "--mixed-grid", "2"]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).contains("grid-approximate"));
}

#[test]
fn bulmer_solve_and_check() {
    let v = json(&["zerosum", "solve", "--game", "bulmer"]);
    assert_eq!(v["value"], "3/5");
    let out = optimin(&["zerosum", "check", "--game", "bulmer", "--profile", "1/5,0,0,4/5;2/5,3/5"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("is an optimin"));
}

#[test]
fn coop_commands() {
    let out = optimin(&["coop", "core", "--game", "coop_120"]);
    assert!(stdout(&out).contains("core: single point, contains (50, 40, 30)"));
    let out = optimin(&["coop", "value", "--game", "coop_empty_core", "--alloc", "40,30,40"]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).contains("(40, 30, 25)"));
    let out = optimin(&["coop", "nucleolus", "--game", "coop_empty_core"]);
    assert!(stdout(&out).contains("140/3"));
}

#[test]
fn match_and_decide_files() {
    let out = optimin(&["match", "--problem", &data("marriage.json")]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).contains("optimin matchings: 2"));
    let out = optimin(&["decide", "--problem", &data("mortgage.json")]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).contains("optimin acts: {buy}"));
}

#[test]
fn gen_round_trips_through_optimin() {
    let path = scratch("travelers.json");
    let out = optimin(&["gen", "travelers", "r=2", "max=10", "--out", path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    let written = fs::read_to_string(&path).unwrap();
    let out = optimin(&["gen", "travelers", "r=2", "max=10"]);
    assert_eq!(stdout(&out), written);
    let out = optimin(&["optimin", "--game", path.to_str().unwrap()]);
    assert!(stdout(&out).contains("(10,10)"));
}

#[test]
fn sweep_prints_threshold() {
    let out = optimin(&["sweep", "travelers", "--param", "r", "--range", "2:4", "max=6"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.starts_with("# family: travelers"));
    assert!(text.contains("r\toptimin\tnash"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(optimin(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(optimin(&["optimin", "--game", "figure1", "--pure", "--mixed-grid", "2"]).status.code(), Some(2));
    assert_eq!(optimin(&["optimin", "--game", "/nonexistent/game.json"]).status.code(), Some(2));
}

#[test]
fn malformed_file_names_the_path() {
    let path = scratch("bad.json");
    fs::write(&path, r#"{"players":["1","2"],"strategies":[["a"],["b"]],"payoffs":[[[1,"x"]]]}"#).unwrap();
    let out = optimin(&["optimin", "--game", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("$.payoffs[0][0][1]"), "{}", stderr(&out));
}

#[test]
fn domain_errors_exit_1() {
    assert_eq!(optimin(&["coop", "optimin", "--game", "coop_120", "--step", "0"]).status.code(), Some(1));
    assert_eq!(optimin(&["optimin", "--game", "coop_120"]).status.code(), Some(1));
    assert_eq!(optimin(&["value", "--game", "figure1", "--profile", "Top,Nowhere"]).status.code(), Some(1));
}

#[test]
fn bad_thread_count_exits_2() {
    let out =
        Command::new(env!("CARGO_BIN_EXE_optimin")).args(["selftest"]).env("OPTIMIN_THREADS", "many").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn thread_count_does_not_change_output() {
    let one = optimin(&["--threads", "1", "coop", "optimin", "--game", "coop_empty_core"]);
    let four = optimin(&["--threads", "4", "coop", "optimin", "--game", "coop_empty_core"]);
    assert!(one.status.success());
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn selftest_passes() {
    let out = optimin(&["selftest"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("0 failed"));
}
