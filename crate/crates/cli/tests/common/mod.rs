//! Golden replay shared by the test targets.

use std::path::{Path, PathBuf};
use std::process::Command;

pub struct Case {
    pub name: String,
    pub args: Vec<String>,
}

pub fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

pub fn cases() -> Vec<Case> {
    let text = std::fs::read_to_string(golden_dir().join("cases.txt")).expect("golden manifest");
    text.lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|l| {
            let (name, args) = l.split_once(':').expect("`name: args`");
            Case { name: name.trim().to_string(), args: args.split_whitespace().map(String::from).collect() }
        })
        .collect()
}

/// Exit code line followed by stdout, from the built binary.
pub fn replay(case: &Case) -> String {
    let out = Command::new(env!("CARGO_BIN_EXE_dercat"))
        .args(&case.args)
        .current_dir(golden_dir())
        .env_remove("DERCAT_BUDGET")
        .output()
        .expect("binary runs");
    format!("exit {}\n{}", out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout))
}

pub fn expected_path(case: &Case) -> PathBuf {
    golden_dir().join("cases").join(format!("{}.out", case.name))
}

/// Names of cases whose replay differs from the recorded output. With
/// `UPDATE_GOLDEN` set, records instead.
pub fn mismatches() -> Vec<String> {
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    let mut bad = Vec::new();
    for case in cases() {
        let got = replay(&case);
        let path = expected_path(&case);
        if update {
            std::fs::write(&path, &got).expect("write golden");
            continue;
        }
        match std::fs::read_to_string(&path) {
            Ok(want) if want == got => {}
            _ => bad.push(case.name),
        }
    }
    bad
}

pub fn exit_code(recorded: &str) -> i32 {
    recorded.lines().next().and_then(|l| l.strip_prefix("exit ")).and_then(|c| c.parse().ok()).expect("exit line")
}
