use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn pcf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pcf")).args(args).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn chi_of_c5_is_five() {
    let out = pcf(&["chi", "--named", "C5"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out).trim(), "5");
    let out = pcf(&["--json", "chi", "--named", "C7"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["chi"], 4);
}

#[test]
fn verify_reports_the_improper_edge() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.el");
    let phi = dir.path().join("phi.json");
    fs::write(&g, "p 3 2\ne 0 1\ne 1 2\n").unwrap();
    fs::write(&phi, r#"{"colors":{"0":1,"1":1,"2":2}}"#).unwrap();
    let out = pcf(&["verify", path(&g), path(&phi)]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("improper edge 0-1"));

    fs::write(&phi, r#"{"colors":{"0":1,"1":2,"2":3}}"#).unwrap();
    assert_eq!(code(&pcf(&["verify", path(&g), path(&phi)])), 0);
}

#[test]
fn usage_and_io_errors_exit_2() {
    assert_eq!(code(&pcf(&["bogus"])), 2);
    assert_eq!(code(&pcf(&["chi", "/nonexistent/graph.el"])), 2);
    assert_eq!(code(&pcf(&["chi", "--named", "Q9"])), 2);
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("bad.el");
    fs::write(&g, "p 2 1\ne 0 0\n").unwrap();
    let out = pcf(&["chi", path(&g)]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
    assert_eq!(
        code(&pcf(&["color", "--named", "K4", "--class", "k4mf", "--seed", "1"])),
        2
    );
}

#[test]
fn solve_and_refute_verdicts() {
    assert_eq!(code(&pcf(&["solve", "--named", "C5", "--uniform", "4"])), 1);
    let out = pcf(&["--json", "solve", "--named", "C5", "--uniform", "5"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("\"status\":\"sat\""));
    let out = pcf(&["--json", "refute", "--named", "C5", "-k", "2", "--universe", "4"]);
    assert_eq!(code(&out), 1);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["result"], "found");
    assert_eq!(v["lists"]["lists"]["0"], serde_json::json!([1, 2, 3, 4]));
}

#[test]
fn gen_then_color_detect_and_discharge() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.el");
    let out = pcf(&["gen", "--class", "girth12", "--n", "5", "--seed", "7", "-o", path(&g)]);
    assert_eq!(code(&out), 0);
    assert!(dir.path().join("g.el.cert.json").exists());

    let trace = dir.path().join("trace.json");
    let out = pcf(&["--json", "color", path(&g), "--seed", "3", "--trace", path(&trace)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let phi = dir.path().join("phi.json");
    fs::write(&phi, v["coloring"].to_string()).unwrap();
    assert_eq!(code(&pcf(&["verify", path(&g), path(&phi)])), 0);
    let steps: serde_json::Value = serde_json::from_str(&fs::read_to_string(&trace).unwrap()).unwrap();
    assert!(!steps["steps"].as_array().unwrap().is_empty());

    let out = pcf(&["detect", path(&g), "--ids", "T1,T5,T8,T11,T12,T36"]);
    assert_eq!(code(&out), 0);
    assert_eq!(code(&pcf(&["discharge", path(&g)])), 0);
}

#[test]
fn unseeded_runs_print_their_seed() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.el");
    let out = pcf(&["gen", "--class", "k4mf", "--n", "10", "-o", path(&g)]);
    assert_eq!(code(&out), 0);
    let err = String::from_utf8_lossy(&out.stderr);
    let seed: u64 = err.trim().strip_prefix("seed: ").unwrap().parse().unwrap();
    let again = dir.path().join("h.el");
    let s = seed.to_string();
    assert_eq!(
        code(&pcf(&[
            "gen",
            "--class",
            "k4mf",
            "--n",
            "10",
            "--seed",
            &s,
            "-o",
            path(&again)
        ])),
        0
    );
    assert_eq!(fs::read(&g).unwrap(), fs::read(&again).unwrap());
}

#[test]
fn detect_without_a_match_exits_1() {
    let out = pcf(&["detect", "--named", "K4", "--ids", "T1"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn accept_quick_is_green() {
    let out = pcf(&["accept", "--quick"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    let text = stdout(&out);
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS")).count(), 8);
}

#[test]
fn exhausted_budget_exits_3() {
    let run = |args: &[&str]| {
        Command::new(env!("CARGO_BIN_EXE_pcf"))
            .env("PCF_BUDGET", "1")
            .args(args)
            .output()
            .unwrap()
    };
    assert_eq!(code(&run(&["solve", "--named", "C7", "--uniform", "4"])), 3);
    assert_eq!(
        code(&run(&["color", "--named", "C7", "--class", "k4mf", "--seed", "1"])),
        3
    );
}

#[test]
fn exploration_failures_are_verdicts() {
    // C5 needs five colors, so uniform 3-lists cannot work
    let out = pcf(&[
        "color",
        "--named",
        "C5",
        "--class",
        "any",
        "--regime",
        "uniform-3",
        "--universe",
        "3",
        "--seed",
        "1",
    ]);
    assert_eq!(code(&out), 1);
}
