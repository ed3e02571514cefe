//! End to end: search, boundary topology and certification for k = 2 on the disk.

use qmorse::barycenter::TableRegistry;
use qmorse::boundary::{boundary_betti, unreduced_c_array, BoundaryBarycenterInput};
use qmorse::certify::{c_array_len, certify};
use qmorse::critical::{summarize, SearchConfig};
use qmorse::graded::euler_characteristic;
use qmorse::model::{Domain, FlatSlab};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let model = FlatSlab::from_strs(
        Domain::unit(),
        "1 + exp(-4*((x1-0.1)^2 + (x2+0.2)^2 + x3^2)) * (1 + 0.5*x4)",
        "0",
        true,
    )?;
    let k = 2;
    let cfg = SearchConfig {
        starts: 24,
        seed: 0,
        ..SearchConfig::default()
    };
    let (summary, _) = summarize(&model, k, 0, 1, &cfg);
    println!("{} critical point(s) recorded", summary.records.len());

    let registry = TableRegistry::new();
    let disk = BoundaryBarycenterInput::new(registry.resolve("S1")?, registry.resolve("S2")?, 1, 2)?;
    let c = unreduced_c_array(&disk, k - 1, c_array_len(k))?;
    let target = 1 - euler_characteristic(&boundary_betti(&disk, k - 1)?);
    let report = certify(&summary, &c, target)?;
    println!("c = {:?}, Euler sum {} vs target {}", report.c_array, report.hopf.sum, report.hopf.target);
    println!("verdict: {}", report.verdict);
    Ok(())
}
