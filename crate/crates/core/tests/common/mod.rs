//! Fixture discovery shared by the golden and acceptance suites.
//!
//! * `*.form`: `formlin parse <contents>`
//! * `*.op`: `formlin decompose --op <contents>`
//! * `*.args`: one argument per line
//!
//! Lines starting with `#!` hold extra whitespace-separated arguments.
//! The expected output sits next to the input with `.json` appended.

#![allow(dead_code)]

use std::fs;
use std::path::{Path, PathBuf};

pub fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

pub fn argv_for(path: &Path) -> Vec<String> {
    let text = fs::read_to_string(path).unwrap();
    let (header, body): (Vec<&str>, Vec<&str>) = text.lines().partition(|l| l.starts_with("#!"));
    let body = body.join("\n");
    let mut argv: Vec<String> = match path.extension().and_then(|e| e.to_str()) {
        Some("form") => vec!["parse".into(), body],
        Some("op") => vec!["decompose".into(), "--op".into(), body],
        Some("args") => body.lines().map(str::to_string).collect(),
        _ => unreachable!(),
    };
    for line in header {
        argv.extend(line[2..].split_whitespace().map(str::to_string));
    }
    if !argv.iter().any(|a| a == "--format") {
        argv.extend(["--format".to_string(), "json".to_string()]);
    }
    argv
}

pub fn inputs() -> Vec<PathBuf> {
    let mut paths: Vec<PathBuf> = fs::read_dir(fixtures())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| {
            matches!(
                p.extension().and_then(|e| e.to_str()),
                Some("form" | "op" | "args")
            )
        })
        .collect();
    paths.sort();
    paths
}

pub fn expected_path(input: &Path) -> PathBuf {
    let mut name = input.file_name().unwrap().to_os_string();
    name.push(".json");
    input.with_file_name(name)
}

pub fn run(argv: &[String]) -> (i32, String) {
    formlin::frontend::run(std::iter::once("formlin".to_string()).chain(argv.iter().cloned()))
}

/// Inputs whose output differs from the stored golden, with a diff-style message each.
pub fn golden_mismatches() -> Vec<String> {
    let mut mismatches = Vec::new();
    for input in inputs() {
        let (_, out) = run(&argv_for(&input));
        let expected = expected_path(&input);
        match fs::read_to_string(&expected) {
            Ok(want) if want == out => {}
            Ok(want) => mismatches.push(format!(
                "{}\n--- expected\n{want}--- actual\n{out}",
                input.display()
            )),
            Err(_) => mismatches.push(format!("missing golden {}", expected.display())),
        }
    }
    mismatches
}
