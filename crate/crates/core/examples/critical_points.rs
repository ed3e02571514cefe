//! Multi-start search for critical points at infinity of a two-bump curvature.

use qmorse::critical::{summarize, SearchConfig};
use qmorse::model::{Domain, FlatSlab};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let k = "1 + exp(-6*((x1-0.4)^2 + x2^2 + x3^2)) * (1 - 0.3*x4) \
             + exp(-6*((x1+0.4)^2 + x2^2 + x3^2)) * (1 + 0.3*x4)";
    let model = FlatSlab::from_strs(Domain::unit(), k, "0", true)?;
    let cfg = SearchConfig {
        starts: 32,
        seed: 42,
        ..SearchConfig::default()
    };
    let (summary, outcomes) = summarize(&model, 1, 0, 1, &cfg);
    for o in &outcomes {
        println!("(p, q) = ({}, {}): {} of {} starts converged", o.p, o.q, o.converged_starts, o.starts);
        for pt in &o.points {
            println!(
                "  at {:?}: F = {:.6}, Morse index {}, i_inf {}, L_K {:+.4}",
                pt.config.boundary[0], pt.f_value, pt.morse_index, pt.i_inf, pt.lk_value
            );
        }
    }
    println!("summary: {}", serde_json::to_string(&summary)?);
    Ok(())
}
