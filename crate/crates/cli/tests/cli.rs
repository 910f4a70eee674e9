//! End-to-end checks of the `hitstand` binary: output shape, exit
//! codes, and the config-file merge.

use std::process::{Command, Output};

fn hitstand(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hitstand"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf-8 output")
}

#[test]
fn strategy_markdown_has_all_rows() {
    let out = hitstand(&["strategy", "--visibility", "no-up"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 4 + 26);
    assert!(text.contains("| hard 15 | S |"));
    assert!(text.contains("| soft 17 | H |"));
}

#[test]
fn strategy_csv_has_one_row_per_cell() {
    let out = hitstand(&["strategy", "--visibility", "one-up", "--format", "csv"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 1 + 260);
    assert!(text.starts_with("player,dealer,decision,asterisk,ev_hit,ev_stand"));
}

#[test]
fn overall_reports_the_exact_no_up_numbers() {
    let out = hitstand(&["overall", "--visibility", "no-up"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("0.454128"));
    assert!(text.contains("0.008902"));

    let json = hitstand(&["overall", "--visibility", "no-up", "--format", "json-lines"]);
    let line = stdout(&json);
    assert!(line.trim_start().starts_with('{'));
    assert!(line.contains("\"ev\""));
}

#[test]
fn cell_prints_exact_fractions_with_decimals() {
    let out = hitstand(&["cell", "--player", "soft13", "--dealer", "hard14"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("27679/115056"));
    assert!(text.contains("-2/51"));
    assert!(text.contains("| decision | H |"));
}

#[test]
fn stage1_prints_the_worked_layout() {
    let out = hitstand(&["stage1", "--player", "A,2", "--dealer", "6,8"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("| stand | 23/48 | 0 | 25/48 | -1/24 |"));
}

#[test]
fn sweep_decks_rejects_the_replacement_model() {
    let out = hitstand(&["sweep-decks", "--decks", "replacement"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_flags_are_usage_errors() {
    let out = hitstand(&["overall", "--no-such-flag"]);
    assert_eq!(out.status.code(), Some(2));
    let out = hitstand(&["overall", "--visibility", "sideways"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_suite_passes_with_exit_zero() {
    let out = hitstand(&["verify-paper", "--suite", "worked-example"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("10 checks, 0 failed"));
    assert!(!text.contains("FAIL"));

    let out = hitstand(&["verify-paper", "--suite", "no-such-suite"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn config_file_merges_under_flags() {
    let dir = std::env::temp_dir().join("hitstand-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("variant.conf");
    std::fs::write(&path, "visibility = no-up\npayout = 6:5\n").unwrap();
    let path = path.to_str().unwrap();

    let out = hitstand(&["overall", "--config-file", path]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("no-up, 1-deck, dealer H17, naturals 6:5"));

    // a flag beats the file
    let out = hitstand(&["overall", "--config-file", path, "--payout", "3:2"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("naturals 3:2"));

    std::fs::write(dir.join("bad.conf"), "cards = 53\n").unwrap();
    let out = hitstand(&["overall", "--config-file", dir.join("bad.conf").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn simulate_is_deterministic_per_seed() {
    let args =
        ["simulate", "--visibility", "no-up", "--trials", "2000", "--seed", "5", "--format", "json-lines"];
    let a = hitstand(&args);
    let b = hitstand(&args);
    assert!(a.status.success());
    assert_eq!(stdout(&a), stdout(&b));
    assert!(stdout(&a).contains("\"rng\":\"chacha8\""));
}

#[test]
fn sweep_outputs_cover_rules_and_decks() {
    let out = hitstand(&["sweep-rules", "--visibility", "no-up", "--format", "csv"]);
    assert!(out.status.success());
    // 8 thresholds + always-hit + always-stand, plus the header
    assert_eq!(stdout(&out).lines().count(), 11);

    let out =
        hitstand(&["sweep-decks", "--visibility", "no-up", "--n-list", "1,2", "--format", "csv"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 4);
    assert!(text.lines().last().unwrap().starts_with("limit,"));
}
