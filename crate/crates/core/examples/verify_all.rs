// The bounded verification sweep, summarised per suite.

use ffdist::verify::verify_all;

pub fn run_example() -> ffdist::Result<()> {
    let report = verify_all(5, 2, 1)?;
    print!("{}", report.tables["suites"].to_csv());
    println!(
        "{} checks, {} failures",
        report.checks.len(),
        report.failures().count()
    );
    assert!(report.pass());
    Ok(())
}

#[allow(dead_code)]
fn main() -> ffdist::Result<()> {
    run_example()
}
