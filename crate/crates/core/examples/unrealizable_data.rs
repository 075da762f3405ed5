//! Critical data that no function on the disk can have.
use mbkit::catalog::models;
use mbkit::counting::verify_main;
use mbkit::descriptor::{CriticalSubmanifold, HomologySource, MorseBottDescriptor, OrientationSystem};
use mbkit::IntPolynomial;

fn main() -> mbkit::Result<()> {
    // A single interior critical point of index one.
    let d = MorseBottDescriptor {
        name: "impossible".into(),
        ambient_dim: 2,
        manifold_oriented: true,
        manifold_homology: HomologySource::CellModel(models::disk()),
        relative_homology: None,
        interior: vec![CriticalSubmanifold {
            name: "saddle".into(),
            dim: 0,
            index: 1,
            topology: HomologySource::Polynomial(IntPolynomial::one()),
            orientation_system: OrientationSystem::Oriented,
            oriented_bundle: true,
        }],
        boundary_n: vec![],
        boundary_d: vec![],
    };
    let report = verify_main(&d)?;
    println!("lhs = {}, verdict = {}", report.lhs, report.verdict);
    println!("{}", report.failure_detail.unwrap_or_default());
    Ok(())
}
