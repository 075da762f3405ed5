//! The dual inequality, computed directly and through the negated function.
use mbkit::catalog;
use mbkit::counting::{cross_check_negation, lefschetz_relative_polynomial, verify_corollary, verify_main};

fn main() -> mbkit::Result<()> {
    for name in ["disk_max", "disk_min", "solid_torus_core_max"] {
        let d = catalog::get(name)?.descriptor;
        let dual = verify_corollary(&d)?;
        let neg = verify_main(&d.negate()?)?;
        println!(
            "{name}: P(M,dM) = {}, R_dual = {}, R(-f) = {}, agree = {}",
            lefschetz_relative_polynomial(&d)?,
            dual.quotient,
            neg.quotient,
            cross_check_negation(&d)?
        );
    }
    Ok(())
}
