//! Run every catalog entry and print its certificates.
use mbkit::catalog;

fn main() -> mbkit::Result<()> {
    for run in catalog::run_all()? {
        let dual = run
            .corollary
            .as_ref()
            .map_or("n/a".to_string(), |r| r.quotient.to_string());
        println!(
            "{:<22} R = {:<8} R_dual = {:<6} {}",
            run.entry,
            run.main.quotient.to_string(),
            dual,
            if run.passed() { "ok" } else { "MISMATCH" }
        );
    }
    Ok(())
}
