//! Black-box checks of the command-line binary.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn berelay(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_berelay"))
        .args(args)
        .output()
        .expect("binary should spawn")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn scratch(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("berelay-cli-{tag}-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn solve_pair_prints_full_allocation() {
    let out = berelay(&[
        "solve-pair", "--w-s", "1", "--w-f", "1", "--power", "100", "--rho-s0", "0.01",
        "--rho-f0", "0.15", "--rho-sf", "0.15", "--alpha", "0",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("r_s_in = 1 Mbps"));
    assert!(text.contains("r_f_in = 4 Mbps"));
    for field in ["w_s_be", "w_f_be", "r_s_be", "r_f_be", "r_c", "gain"] {
        assert!(text.contains(field), "missing {field} in:\n{text}");
    }
    assert!(text.contains("gain   = 1.3369667"), "unexpected gain in:\n{text}");
}

#[test]
fn solve_pair_reports_infeasible_floor() {
    let out = berelay(&[
        "solve-pair", "--w-s", "1", "--w-f", "1", "--power", "100", "--rho-s0", "0.01",
        "--rho-f0", "0.15", "--rho-sf", "0.15", "--objective", "minrate", "--r-min", "50",
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("infeasible"));
}

#[test]
fn match_subcommand_runs_all_algorithms() {
    let dir = scratch("match");
    let file = dir.join("edges.txt");
    fs::write(&file, "1 2 5.0\n2 3 4.0\n1 3 3.0\n").unwrap();
    let path = file.to_str().unwrap();

    for algorithm in ["blossom", "enumerate"] {
        let out = berelay(&["match", path, "--algorithm", algorithm]);
        assert!(out.status.success());
        let text = stdout(&out);
        assert!(text.contains("1 2\n"), "{algorithm}:\n{text}");
        assert!(text.contains("total_weight = 5"), "{algorithm}:\n{text}");
    }

    let out = berelay(&["match", path, "--algorithm", "greedy"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("total_weight = 5"));
    assert!(text.contains("messages = 5"));
    assert!(text.contains("1 1 2 add"));
    assert!(text.contains("1 1 3 drop"));

    fs::remove_dir_all(&dir).ok();
}

#[test]
fn spectral_runs_are_reproducible_on_disk() {
    let dir = scratch("spectral");
    let args = |out_dir: &str| {
        vec![
            "spectral".to_string(), "--n-nodes".into(), "5".into(), "--trials".into(),
            "2".into(), "--seed".into(), "3".into(), "--out".into(), out_dir.into(),
        ]
    };
    for run in 0..2 {
        let out_dir = dir.join(format!("run{run}"));
        let argv = args(out_dir.to_str().unwrap());
        let argv: Vec<&str> = argv.iter().map(String::as_str).collect();
        let out = berelay(&argv);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    for name in ["trials.csv", "summary.csv"] {
        let a = fs::read(dir.join("run0").join(name)).unwrap();
        let b = fs::read(dir.join("run1").join(name)).unwrap();
        assert_eq!(a, b, "{name} differs between identical runs");
    }
    fs::remove_dir_all(&dir).ok();
}

#[test]
fn unknown_config_key_is_rejected_by_name() {
    let dir = scratch("conf");
    let file = dir.join("bad.conf");
    fs::write(&file, "bogus_key = 3\n").unwrap();
    let out = berelay(&["--config", file.to_str().unwrap(), "spectral"]);
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("bogus_key"), "stderr was: {err}");
    fs::remove_dir_all(&dir).ok();
}

#[test]
fn three_node_sweep_emits_csv_header() {
    let out = berelay(&["three-node", "--max-distance", "250", "--step", "50"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let header = text.lines().next().unwrap();
    assert!(header.starts_with("sender_distance_m,direct_sender,direct_forwarder"));
    assert_eq!(text.lines().count(), 1 + 2);
}

#[test]
fn sweep_below_forwarder_distance_fails() {
    let out = berelay(&["three-node", "--min-distance", "100", "--max-distance", "120"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
}
