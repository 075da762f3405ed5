//! Homology of the circle with and without a nontrivial local system.
use mbkit::catalog::models;
use mbkit::homology::{homology_profile, smith_normal_form, SignCocycle};

fn main() -> mbkit::Result<()> {
    let circle = models::circle();
    let twist = SignCocycle::new([(0, 1, -1)])?;
    println!("untwisted: {}", homology_profile(&circle, None)?);
    println!("twisted:   {}", homology_profile(&circle, Some(&twist))?);
    let complex = mbkit::homology::boundary_matrices(&circle, Some(&twist))?;
    let snf = smith_normal_form(&complex.boundary(1));
    let divisors: Vec<String> = snf.elementary_divisors.iter().map(ToString::to_string).collect();
    println!("elementary divisors of d_1: [{}]", divisors.join(", "));
    Ok(())
}
