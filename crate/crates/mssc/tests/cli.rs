//! End-to-end tests of the `mssc` binary: flag handling, config-file
//! merging, report emission, determinism, and the error contract.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn mssc() -> Command {
    Command::new(env!("CARGO_BIN_EXE_mssc"))
}

fn data_file(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
}

fn stdout_of(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

#[test]
fn run_reports_best_known_match() {
    let output = mssc()
        .args(["run", "--dataset"])
        .arg(data_file("ruspini75.txt"))
        .args(["--k", "4", "--starter", "merging", "--alpha", "1.5"])
        .args(["--restarts", "50", "--seed", "9", "--threads", "2"])
        .output()
        .unwrap();
    assert!(output.status.success(), "{output:?}");
    let text = stdout_of(&output);
    assert!(text.contains("ruspini75"), "{text}");
    assert!(text.contains("1.288105E4"), "{text}");
}

#[test]
fn csv_output_is_reproducible_except_time() {
    let dir = tempfile::tempdir().unwrap();
    let run = |path: &Path| {
        let output = mssc()
            .args(["run", "--dataset"])
            .arg(data_file("ruspini75.txt"))
            .args([
                "--k",
                "3",
                "--restarts",
                "40",
                "--seed",
                "123",
                "--emit",
                "csv",
                "--out",
            ])
            .arg(path)
            .output()
            .unwrap();
        assert!(output.status.success(), "{output:?}");
        std::fs::read_to_string(path).unwrap()
    };
    let first = run(&dir.path().join("a.csv"));
    let second = run(&dir.path().join("b.csv"));

    let strip_time = |text: &str| -> Vec<String> {
        text.lines()
            .map(|line| {
                let fields: Vec<&str> = line.split(',').collect();
                // mean_time_s is the second-to-last column.
                fields
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i != fields.len() - 2)
                    .map(|(_, f)| f.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect()
    };
    assert_eq!(strip_time(&first), strip_time(&second));
}

#[test]
fn config_file_is_merged_and_overridden() {
    let dir = tempfile::tempdir().unwrap();
    let config_path = dir.path().join("run.conf");
    std::fs::write(
        &config_path,
        format!(
            "# experiment defaults\ndataset = {}\nk = 4\nstarter = merging\nrestarts = 30\nseed = 5\nemit = csv\n",
            data_file("ruspini75.txt").display()
        ),
    )
    .unwrap();

    // The CLI flag overrides the file's k = 4.
    let output = mssc()
        .args(["run", "--config"])
        .arg(&config_path)
        .args(["--k", "2"])
        .output()
        .unwrap();
    assert!(output.status.success(), "{output:?}");
    let text = stdout_of(&output);
    let row = text.lines().nth(1).unwrap();
    assert!(row.starts_with("ruspini75,2,merging"), "{row}");
}

#[test]
fn errors_are_machine_readable_and_nonzero() {
    let output = mssc()
        .args(["run", "--dataset", "/nonexistent/file.txt", "--k", "3"])
        .output()
        .unwrap();
    assert!(!output.status.success());
    let stderr = String::from_utf8_lossy(&output.stderr);
    let parsed: serde_json::Value = serde_json::from_str(stderr.lines().last().unwrap()).unwrap();
    assert!(parsed.get("error").is_some(), "{stderr}");
    assert!(parsed.get("message").is_some(), "{stderr}");

    let output = mssc()
        .args(["run", "--dataset"])
        .arg(data_file("ruspini75.txt"))
        .args(["--k", "0"])
        .output()
        .unwrap();
    assert!(!output.status.success());
}

#[test]
fn table_preset_runs_on_available_datasets() {
    // Only ruspini75 and fisher exist in a scratch dir; gr202/gr666 are
    // reported as skipped on stderr.
    let dir = tempfile::tempdir().unwrap();
    for name in ["ruspini75.txt", "fisher.txt"] {
        std::fs::copy(data_file(name), dir.path().join(name)).unwrap();
    }
    let csv_path = dir.path().join("rows.csv");
    let output = mssc()
        .args(["table", "--preset", "small", "--data-dir"])
        .arg(dir.path())
        .args(["--restarts", "5", "--threads", "2", "--seed", "4", "--out"])
        .arg(&csv_path)
        .output()
        .unwrap();
    assert!(output.status.success(), "{output:?}");
    let text = stdout_of(&output);
    // 2 datasets x 9 ks x 2 starters = 36 rows plus the header.
    assert_eq!(text.lines().count(), 37, "{text}");
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("gr202"), "{stderr}");

    let rows = std::fs::read_to_string(&csv_path).unwrap();
    assert_eq!(rows.lines().count(), 37); // header + 36
}

#[test]
fn verify_suite_passes() {
    let output = mssc().args(["verify", "--seed", "2"]).output().unwrap();
    assert!(output.status.success(), "{output:?}");
    let text = stdout_of(&output);
    assert!(text.contains("PASS incremental-deltas"), "{text}");
    assert!(text.contains("all checks passed"), "{text}");
    assert!(!text.contains("FAIL"), "{text}");
}
