// Produce the same JSON and CSV reports as `eigenid check`, without going
// through the binary.

use eigenid::cli::{self, CheckOptions, ClusterSelection, MatrixFile, Report};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let file: MatrixFile = cli::gen("0:2,1:1,4:1", 11)?;
    let bytes = file.to_json();

    let opts = CheckOptions {
        cluster: ClusterSelection::One(1),
        ..CheckOptions::default()
    };
    let report = cli::check(bytes.as_bytes(), &opts)?;
    println!("input {}", report.input_digest);
    println!(
        "{} records, max rel_err {:.2e}, passed: {}",
        report.summary.record_count, report.summary.max_rel_err, report.summary.passed
    );

    let json = report.to_json();
    assert_eq!(Report::from_json(&json)?, report);

    let mut csv = Vec::new();
    report.write_csv(&mut csv)?;
    print!("{}", String::from_utf8(csv)?);

    if !report.summary.passed {
        return Err("report did not pass".into());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
