//! Build the flow complex of a fixture and run every audit on it.
use mbkit::catalog;
use mbkit::flow::{audit_all, boundary_entries, build_complex};

fn main() -> mbkit::Result<()> {
    for f in catalog::all_flows() {
        let cc = build_complex(&f.dataset)?;
        let audit = audit_all(&f.dataset, Some(&f.expected_homology), f.restricted.as_ref())?;
        println!("{}: generators {:?}", f.name, cc.generators);
        println!("  boundaries {:?}", boundary_entries(&cc));
        match &audit.failure_detail {
            Some(why) => println!("  {} ({why})", audit.verdict),
            None => println!("  {}", audit.verdict),
        }
    }
    Ok(())
}
