//! Bubbles: finite-difference check of `Δ²δ = 6e^{4δ}` and the expansion terms.

use qmorse::bubble::{pde_convergence, Bubble, ExpansionKind, Expander, matching_gap};
use qmorse::model::{Domain, FlatSlab, PointKind};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for lambda in [1.0, 4.0] {
        let b = Bubble::new([0.0; 4], lambda)?;
        let h = 0.04 / lambda;
        let r = pde_convergence(&b, h)?;
        println!(
            "lambda = {lambda}: residual {:.3e} at h = {h}, {:.3e} at h/2, order {:.3}",
            r.residual_h, r.residual_half, r.order
        );
    }

    let model = FlatSlab::from_strs(Domain::unit(), "1", "0.2*(x1*y1 + x2*y2 + x3*y3)", false)?;
    let ex = Expander::new(0.1, 10.0)?;
    let a = [0.1, 0.0, -0.1, 0.6];
    for lambda in [20.0, 40.0, 80.0] {
        let s = ex.scalar(&model, ExpansionKind::SelfInteraction, PointKind::Interior, &a, lambda)?;
        let gap = matching_gap(&ex, &model, PointKind::Interior, &a, lambda)?;
        println!("lambda = {lambda}: <P phi, phi> ~ {:.4}, inner/outer gap at 2 rho {gap:.2e}", s.value);
    }
    Ok(())
}
