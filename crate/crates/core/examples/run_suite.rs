//! Selecting and running registered checks from code; the same registry
//! backs `opcalc verify`.

use opcalc::registry::{run_checks, select, Params};

fn main() -> opcalc::Result<()> {
    let pattern = std::env::args().nth(1).unwrap_or_else(|| "g2.*".into());
    let checks = select(&pattern)?;
    let reports = run_checks(&checks, &Params::default(), 4);
    for r in &reports {
        println!("{:<5} {}", r.status, r.check);
    }
    let failed = reports.iter().filter(|r| !r.passed()).count();
    println!("{} checks, {failed} not passing", reports.len());
    Ok(())
}
