//! Byte-exact output checks. Set `TNN_UPDATE_GOLDEN=1` to rewrite the files.

use std::path::PathBuf;
use std::process::Command;

fn dir(sub: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join(sub)
}

fn check(name: &str, args: &[&str]) {
    let out = Command::new(env!("CARGO_BIN_EXE_tnn-cells"))
        .args(args)
        .current_dir(dir("data"))
        .env_remove("TNN_CELLS_THREADS")
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{name}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let path = dir("golden").join(name);
    if std::env::var_os("TNN_UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, &out.stdout).unwrap();
        return;
    }
    let want = std::fs::read(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert!(
        out.stdout == want,
        "{name} differs:\n{}",
        String::from_utf8_lossy(&out.stdout)
    );
}

#[test]
fn diagrams_listing() {
    check("diagrams_2_2.json", &["diagrams", "2", "2"]);
}

#[test]
fn mw_of_three_by_four_example() {
    check("mw_3_4.json", &["mw", "3", "4", "--w", "3,1,4,2,7,6,5"]);
}

#[test]
fn mc_of_three_by_three_diagram() {
    check("mc_3_3.json", &["mc", "diagram_3x3.json"]);
}

#[test]
fn match_two_by_two() {
    check("match_2_2.json", &["match", "2", "2"]);
}

#[test]
fn match_two_by_two_table() {
    check("match_2_2.txt", &["match", "2", "2", "--format", "table"]);
}

#[test]
fn restore_trace() {
    check("restore_4_4.json", &["restore", "restore_input.csv"]);
}

#[test]
fn restore_trace_table() {
    check(
        "restore_4_4.txt",
        &["restore", "restore_input.csv", "--format", "table"],
    );
}

#[test]
fn classify_restored_example() {
    check("classify_4_4.json", &["classify", "restored.csv", "--match-perm"]);
}

#[test]
fn verify_reports_are_seeded() {
    check(
        "verify_roundtrip_3_3.json",
        &["verify", "tnn-roundtrip", "3", "3", "--n", "30", "--seed", "7"],
    );
    check(
        "verify_deletion_3_3.json",
        &["verify", "deletion", "3", "3", "--n", "30", "--seed", "7"],
    );
}
