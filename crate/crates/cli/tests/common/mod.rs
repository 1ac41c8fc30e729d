//! Shared plumbing for driving the compiled binary in integration tests.

use std::process::Command;

// Not every test target reads every captured stream.
#[allow(dead_code)]
pub struct Run {
    pub status: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Run the binary with the given arguments and capture everything.
pub fn run(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_orthoclone"))
        .args(args)
        .output()
        .expect("binary should spawn");
    Run {
        status: out
            .status
            .code()
            .expect("binary should exit, not be signaled"),
        stdout: String::from_utf8(out.stdout).expect("stdout should be UTF-8"),
        stderr: String::from_utf8(out.stderr).expect("stderr should be UTF-8"),
    }
}

/// Split CSV output into (header cells, data rows).
pub fn csv_table(stdout: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = stdout.lines();
    let header: Vec<String> = lines
        .next()
        .expect("output should have a header row")
        .split(',')
        .map(str::to_owned)
        .collect();
    let rows = lines
        .map(|l| l.split(',').map(str::to_owned).collect())
        .collect();
    (header, rows)
}

/// Parse one CSV cell as a float.
pub fn cell(row: &[String], idx: usize) -> f64 {
    row[idx]
        .parse()
        .unwrap_or_else(|_| panic!("cell {idx} should be numeric: {:?}", row[idx]))
}
