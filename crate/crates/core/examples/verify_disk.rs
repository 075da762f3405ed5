//! Certify the height function on the disk, maximum at the centre.
use mbkit::catalog;
use mbkit::counting::{mb_polynomial_n, verify_main};

fn main() -> mbkit::Result<()> {
    let d = catalog::get("disk_max")?.descriptor;
    println!("MB^N_t = {}", mb_polynomial_n(&d)?);
    println!("P_t    = {}", d.manifold_poincare()?);
    let report = verify_main(&d)?;
    println!("R(t)   = {} ({})", report.quotient, report.verdict);
    Ok(())
}
