//! Perturb each critical torus of the flat-torus function to a Morse function.
use mbkit::catalog;
use mbkit::morsify::{check_counting_identity, morse_counting_n, morsify, verify_main_via_morsification};

fn main() -> mbkit::Result<()> {
    let entry = catalog::get("flat_torus")?;
    let md = morsify(&entry.descriptor, &entry.choices)?;
    print!("{}", md.to_table());
    println!("M^N_t(h) = {}", morse_counting_n(&md));
    println!(
        "identity holds: {}",
        check_counting_identity(&entry.descriptor, &entry.choices)?
    );
    let report = verify_main_via_morsification(&entry.descriptor, &entry.choices)?;
    println!("R_h = {}, R = {}", report.h_report.quotient, report.difference);
    Ok(())
}
