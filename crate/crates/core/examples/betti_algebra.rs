//! Graded Betti-table algebra: wedges, smash products, joins and suspensions.

use qmorse::graded::{self, euler_characteristic, BettiTable, PoincarePolynomial};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let s1 = BettiTable::sphere(1);
    let s2 = BettiTable::sphere(2);

    let wedge = graded::direct_sum(&s1, &s2)?;
    let smash = graded::tensor(&s1, &s2)?;
    let join = graded::join(&s1, &s2)?;
    let torus = graded::product_homology(&s1, &s1)?;

    println!("S1 v S2      reduced {wedge}  chi {}", euler_characteristic(&wedge));
    println!("S1 ^ S2      reduced {smash}");
    println!("S1 * S2      reduced {join}  (a 4-sphere)");
    println!("S1 x S1      reduced {torus}  chi {}", euler_characteristic(&torus));
    println!("Sigma^3 S1   reduced {}", graded::suspend(&s1, 3));

    let p = PoincarePolynomial::new(torus.to_unreduced().iter());
    println!("P_torus(-1) = {}", p.eval(-1));
    Ok(())
}
