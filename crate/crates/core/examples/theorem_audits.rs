//! Randomized audits of the ordering inequalities, printed as JSON lines.

use obsergo::verifier::{audit_all, AuditConfig};
use obsergo::Result;

pub fn run_example() -> Result<usize> {
    let cfg = AuditConfig::new(3, 4, 200, 2024);
    let results = audit_all(&cfg)?;
    for r in &results {
        println!("{}", r.to_json_line());
    }
    Ok(results.iter().map(|r| r.violations).sum())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    let violations = run_example()?;
    eprintln!("total violations: {violations}");
    Ok(())
}
