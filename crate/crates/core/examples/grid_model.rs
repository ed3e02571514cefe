//! A curvature given by samples on a boundary grid plus a normal derivative.

use qmorse::critical::{find_critical_points, SearchConfig};
use qmorse::interp::Grid3;
use qmorse::model::{Domain, GridModel};
use qmorse::expr::Expr;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let bump = |u: [f64; 3]| 1.0 + (-3.0 * ((u[0] - 0.2).powi(2) + u[1].powi(2) + (u[2] + 0.1).powi(2))).exp();
    let k = Grid3::sample([-1.0; 3], [1.0; 3], [21, 21, 21], bump)?;
    let dkdn = Grid3::sample([-1.0; 3], [1.0; 3], [5, 5, 5], |_| 0.4)?;
    let model = GridModel::new(Domain::unit(), k, Some(dkdn), Expr::parse("0")?, true)?;

    let cfg = SearchConfig {
        starts: 16,
        seed: 5,
        grad_tol: 1e-8,
        ..SearchConfig::default()
    };
    let out = find_critical_points(&model, 0, 1, &cfg);
    for pt in &out.points {
        println!(
            "max near {:?}: Morse index {}, L_K sign {:+}",
            pt.config.boundary[0], pt.morse_index, pt.lk_sign
        );
    }
    for d in &out.diagnostics {
        println!("note: {d}");
    }
    Ok(())
}
