//! Euler characteristics and homology tables of barycenter spaces `B_l(X)`.

use qmorse::barycenter::{chi_barycenter, disjoint_union_barycenter, BarycenterProvider, TableRegistry};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("chi(B_l(X)) for chi(X) in -2..=3:");
    for chi in -2..=3 {
        let row: Vec<i64> = (1..=6).map(|l| chi_barycenter(chi, l)).collect::<Result<_, _>>()?;
        println!("  chi = {chi:>2}: {row:?}");
    }

    let circle = BarycenterProvider::circle();
    for l in 1..=4 {
        println!("B_{l}(S1) = {}", circle.table(l)?);
    }
    for l in 2..=4 {
        println!("B_{l}(S1 + S1) = {}", disjoint_union_barycenter(&circle, &circle, l)?);
    }

    // user tables extend a space known only through its homology
    let mut registry = TableRegistry::new();
    registry.load_str(
        r#"{"space": "S2", "dimension": 2, "orders": {"1": {"2": 1}, "2": {"4": 1, "5": 1}}}"#,
        "inline",
    )?;
    let s2 = registry.resolve("S2")?;
    println!("B_2(S2) from user tables = {}", s2.table(2)?);
    Ok(())
}
