use std::path::Path;
use std::process::{Command, Output};

fn lcaforge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lcaforge")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn tree_matches_golden() {
    let o = lcaforge(&["tree", "--r", "3", "--delta", "4"]);
    assert!(o.status.success());
    let golden = include_str!("golden/tree_r3_d4.json");
    assert_eq!(stdout(&o).trim_end(), golden.trim_end());
}

#[test]
fn exit_codes() {
    // clap parse error
    assert_eq!(lcaforge(&["couple", "--r", "1"]).status.code(), Some(2));
    // stochastic command without a seed
    assert_eq!(lcaforge(&["couple", "--r", "1", "--delta", "3", "--length", "4"]).status.code(), Some(2));
    // infeasible parameters are a usage error
    assert_eq!(lcaforge(&["blueprint", "--r", "1", "--delta", "1"]).status.code(), Some(2));
    // a missing input file is a runtime error
    let o = lcaforge(&["explore", "--graph", "/nonexistent/g.bin", "--prompt", "0", "--plan", "walk:3", "--prompt-kind", "vertex"]);
    assert_eq!(o.status.code(), Some(1), "{}", String::from_utf8_lossy(&o.stderr));
    // a corrupted tree is reported as a failed verification
    assert_eq!(lcaforge(&["verify", "--r-max", "2", "--delta-max", "4", "--mutate", "2,4,3,0"]).status.code(), Some(1));
    assert_eq!(lcaforge(&["verify", "--r-max", "2", "--delta-max", "4"]).status.code(), Some(0));
}

#[test]
fn csv_header_and_config_line() {
    let o = lcaforge(&["--seed", "3", "couple", "--r", "1", "--delta", "3", "--length", "4", "--trials", "200"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "# lcaforge-csv v1");
    assert!(lines[1].starts_with("# config: {"));
    let cfg: serde_json::Value = serde_json::from_str(lines[1].trim_start_matches("# config: ")).unwrap();
    assert_eq!(cfg["seed"], 3);
    assert_eq!(cfg["command"], "couple");
    assert_eq!(lines[2], "step,mc_failures,mc_rate,exact_rate");
    assert_eq!(lines.len(), 3 + 4);
}

#[test]
fn json_format() {
    let o = lcaforge(&["--seed", "3", "--format", "json", "couple", "--r", "1", "--delta", "3", "--length", "4", "--trials", "50"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v.is_object());
}

#[test]
fn gen_then_explore() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.bin");
    let el = dir.path().join("g.json");
    let o = lcaforge(&[
        "--seed", "9", "--out", g.to_str().unwrap(), "gen", "--r", "1", "--delta", "3", "--edge-list", el.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(Path::new(&g).exists() && Path::new(&el).exists());
    let o = lcaforge(&["explore", "--graph", g.to_str().unwrap(), "--prompt", "0", "--plan", "walk:5", "--prompt-kind", "vertex"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).lines().count() >= 3 + 6);

    // same seed, same bytes
    let g2 = dir.path().join("g2.bin");
    let o = lcaforge(&["--seed", "9", "--out", g2.to_str().unwrap(), "gen", "--r", "1", "--delta", "3"]);
    assert!(o.status.success());
    assert_eq!(std::fs::read(&g).unwrap(), std::fs::read(&g2).unwrap());
}

#[test]
fn workers_do_not_change_results() {
    let run = |w: &str| {
        let o = lcaforge(&["--seed", "5", "--workers", w, "couple", "--r", "2", "--delta", "3", "--length", "6", "--trials", "2000"]);
        assert!(o.status.success());
        stdout(&o).lines().filter(|l| !l.starts_with('#')).map(str::to_owned).collect::<Vec<_>>()
    };
    assert_eq!(run("1"), run("3"));
}
