#![allow(dead_code)]

use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

pub fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

pub struct Case {
    pub name: String,
    pub args: Vec<String>,
}

pub fn cases() -> Vec<Case> {
    let text = fs::read_to_string(golden_dir().join("cases.txt")).expect("cases.txt");
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| {
            let (name, args) = l.split_once(':').expect("`name: args`");
            Case { name: name.trim().to_string(), args: args.split_whitespace().map(String::from).collect() }
        })
        .collect()
}

/// Run the binary and record `# exit N` followed by stdout.
pub fn record(case: &Case) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_ramlab"))
        .args(&case.args)
        .current_dir(golden_dir())
        .output()
        .expect("run ramlab");
    let code = out.status.code().expect("exit code");
    (code, format!("# exit {code}\n{}", String::from_utf8(out.stdout).expect("utf-8 stdout")))
}

pub fn expected_path(case: &Case) -> PathBuf {
    golden_dir().join("expected").join(format!("{}.out", case.name))
}

pub fn blessing() -> bool {
    std::env::var_os("RAMLAB_BLESS").is_some()
}

/// Names of cases whose output differs from the recorded file. With
/// `bless`, the recorded files are rewritten instead.
pub fn mismatches(bless: bool) -> Vec<String> {
    let mut bad = Vec::new();
    for case in cases() {
        let (_, got) = record(&case);
        let path = expected_path(&case);
        if bless {
            fs::write(&path, &got).expect("write golden file");
            continue;
        }
        match fs::read_to_string(&path) {
            Ok(want) if want == got => {}
            _ => bad.push(case.name),
        }
    }
    bad
}
