//! The reduced functional `F_{p,q}` on the flat half-space model.

use qmorse::functional::{energy_at_infinity, f_pq, fd_gradient, grad_f_pq, lk, Configuration};
use qmorse::model::{Domain, FlatSlab};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let model = FlatSlab::from_strs(
        Domain::unit(),
        "2 + 0.3*sin(x1)*cos(x2) + 0.1*x4",
        "0.1*(x1*y1 + x2*y2 + x3*y3)",
        false,
    )?;
    let cfg = Configuration::new(vec![[0.1, 0.2, -0.3, 0.5]], vec![[-0.4, 0.1, 0.2], [0.5, -0.3, 0.0]]);

    let f = f_pq(&model, &cfg)?;
    let g = grad_f_pq(&model, &cfg)?;
    let fd = fd_gradient(&model, &cfg, 1e-5)?;
    let defect = g.iter().zip(&fd).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    println!("F_(1,2) = {f:.12}");
    println!("|grad - fd|_inf = {defect:.2e}");

    let l = lk(&model, &cfg)?;
    println!("L_K = {:.6} ({:?} branch, caveat: {})", l.value, l.branch, l.caveat);
    println!("energy at infinity (k = {}): {:.6}", cfg.k(), energy_at_infinity(f, cfg.k()));
    Ok(())
}
