use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
        .to_str()
        .unwrap()
        .to_owned()
}

fn rsd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rsd")).args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn rsd_json_reports_exact_fractions() {
    let out = rsd(&["rsd", "--profile", &fixture("paired.txt"), "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["matrix"][0][0], "5/12");
    assert_eq!(v["matrix"][3][3], "5/12");
    assert_eq!(v["matrix"][0][1], "1/12");
    assert_eq!(v["objects"][3], "o4");
}

#[test]
fn prio_follows_the_given_order() {
    let out = rsd(&["prio", "--profile", &fixture("paired.txt"), "--order", "1,2,3,4", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let ones: Vec<usize> = (0..4)
        .map(|i| (0..4).find(|&j| v["matrix"][i][j] == "1/1").unwrap())
        .collect();
    assert_eq!(ones, [0, 1, 3, 2]);

    let bad = rsd(&["prio", "--profile", &fixture("paired.txt"), "--order", "1,2,2,4"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn sweep_small_spaces() {
    let out = rsd(&["sweep", "--n", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("216 profiles, 0 disagreements"));

    let windowed = rsd(&["sweep", "--n", "3", "--start", "10", "--end", "20", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&windowed.stdout).unwrap();
    assert_eq!(v["profiles_checked"], 10);

    assert_eq!(rsd(&["sweep", "--n", "5"]).status.code(), Some(2));
    assert_eq!(rsd(&["sweep", "--n", "3", "--start", "5", "--end", "999"]).status.code(), Some(2));
}

#[test]
fn usage_and_input_errors_exit_2() {
    let ragged = rsd(&["rsd", "--profile", &fixture("ragged.txt")]);
    assert_eq!(ragged.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&ragged.stderr).contains("ragged"));

    let no_seed = rsd(&["rsd", "--profile", &fixture("paired.txt"), "--samples", "10"]);
    assert_eq!(no_seed.status.code(), Some(2));

    assert_eq!(rsd(&["ps", "--profile", "/nonexistent/profile.txt"]).status.code(), Some(2));
    assert_eq!(rsd(&["mine", "--n", "4", "--trials", "3"]).status.code(), Some(2));
    assert_eq!(rsd(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn check_theorem_shows_both_witnesses() {
    let out = rsd(&["check-theorem", "--profile", &fixture("paired.txt")]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("RSD trading cycle: o1 (agent 3) -> o2 (agent 1) -> o1"));
    assert!(text.contains("mixture trading cycle:"));
    assert!(text.contains("agree: yes"));

    let opposed = rsd(&["check-theorem", "--profile", &fixture("opposed.txt"), "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&opposed.stdout).unwrap();
    assert_eq!(v["agree"], true);
}

#[test]
fn check_sd_and_find_cycle() {
    let profile = fixture("paired.txt");
    let out = rsd(&["check-sd", "--profile", &profile, "--oracle", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["sd_efficient"], false);
    assert_eq!(v["oracle_sd_efficient"], false);

    let ps = rsd(&["check-sd", "--profile", &profile, "--mechanism", "ps", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&ps.stdout).unwrap();
    assert_eq!(v["sd_efficient"], true);

    let none = rsd(&["find-cycle", "--profile", &profile, "--mechanism", "ps"]);
    assert_eq!(none.status.code(), Some(0));
    assert!(stdout(&none).contains("no trading cycle"));
}

#[test]
fn decompose_a_supplied_assignment() {
    let dir = tempfile::tempdir().unwrap();
    let profile = fixture("paired.txt");
    let quarter = r#"{"agents":["1","2","3","4"],"objects":["o1","o2","o3","o4"],"matrix":[
        ["1/4","1/4","1/4","1/4"],["1/4","1/4","1/4","1/4"],
        ["1/4","1/4","1/4","1/4"],["1/4","1/4","1/4","1/4"]]}"#;
    let path = dir.path().join("quarter.json");
    std::fs::write(&path, quarter).unwrap();
    let out = rsd(&["decompose", "--profile", &profile, "--assignment", path.to_str().unwrap(), "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["ex_post_efficient"], true);

    // a Pareto-dominated vertex: agents 1 and 3 would rather swap
    let dominated = r#"{"agents":["1","2","3","4"],"objects":["o1","o2","o3","o4"],"matrix":[
        ["0/1","1/1","0/1","0/1"],["0/1","0/1","1/1","0/1"],
        ["1/1","0/1","0/1","0/1"],["0/1","0/1","0/1","1/1"]]}"#;
    std::fs::write(&path, dominated).unwrap();
    let out = rsd(&["decompose", "--profile", &profile, "--assignment", path.to_str().unwrap(), "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["ex_post_efficient"], false);

    std::fs::write(&path, "{not json").unwrap();
    let out = rsd(&["decompose", "--profile", &profile, "--assignment", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn mine_writes_a_bundle_per_counterexample() {
    let dir = tempfile::tempdir().unwrap();
    let out = rsd(&[
        "mine", "--n", "4", "--trials", "30", "--seed", "3", "--format", "json", "--out-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let found: Vec<serde_json::Value> = serde_json::from_slice(&out.stdout).unwrap();
    assert!(!found.is_empty());
    for k in 1..=found.len() {
        let text = std::fs::read_to_string(dir.path().join(format!("{k}.txt"))).unwrap();
        assert_eq!(text.lines().count(), 4);
        assert!(dir.path().join(format!("{k}.json")).exists());
    }
}

#[test]
fn sampled_rsd_is_reproducible() {
    let args = ["rsd", "--profile", &fixture("paired.txt"), "--samples", "1000", "--seed", "9"];
    let a = rsd(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, rsd(&args).stdout);
}
