//! Homology of the boundary-weighted barycenter spaces of a disk and an annulus.

use qmorse::barycenter::TableRegistry;
use qmorse::boundary::{topology_report, BoundaryBarycenterInput};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let registry = TableRegistry::new();

    let disk = BoundaryBarycenterInput::new(registry.resolve("S1")?, registry.resolve("S2")?, 1, 2)?;
    println!("disk:");
    for r in topology_report(&disk, 3)? {
        println!("  l = {}: {}  chi {} ({:?})", r.order, r.betti, r.euler, r.consistency);
    }

    let annulus = BoundaryBarycenterInput::new(registry.resolve("S1+S1")?, registry.resolve("S2vS1")?, 0, 2)?;
    println!("annulus:");
    for r in topology_report(&annulus, 3)? {
        println!("  l = {}: {}  chi {} ({:?})", r.order, r.betti, r.euler, r.consistency);
    }
    Ok(())
}
