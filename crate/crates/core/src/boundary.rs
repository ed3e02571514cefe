//! Boundary-weighted barycenter spaces `B_l^∂(M)`.
//!
//! A point of `B_l^∂(M)` is a formal barycenter of interior points (weight
//! two) and boundary points (weight one) with total weight `l`. Its reduced
//! homology over Z₂ splits into barycenter spaces of `∂M` and of `M/∂M`:
//!
//! ```text
//! H̃B_{2m}^∂   = H̃B_{2m}(∂M) ⊕ H̃B_m(M/∂M) ⊕ σ ⊕_{i=1}^{m−1} H̃B_i(M/∂M) ⊗ H̃B_{2m−2i}(∂M)
//! H̃B_{2m−1}^∂ = H̃B_{2m−1}(∂M) ⊕ σ ⊕_{i=1}^{m−1} H̃B_i(M/∂M) ⊗ H̃B_{2m−2i−1}(∂M)
//! ```

use serde::{Deserialize, Serialize};

use crate::barycenter::{chi_barycenter, BarycenterProvider, TopologyError};
use crate::graded::{self, euler_characteristic, BettiTable};

/// Inputs for the boundary barycenter tables of a compact manifold `M`.
#[derive(Clone, Debug)]
pub struct BoundaryBarycenterInput {
    boundary: BarycenterProvider,
    quotient: BarycenterProvider,
    chi_m: i64,
    dim_m: usize,
}

impl BoundaryBarycenterInput {
    pub fn new(
        boundary: BarycenterProvider,
        quotient: BarycenterProvider,
        chi_m: i64,
        dim_m: usize,
    ) -> Result<Self, TopologyError> {
        if dim_m < 2 {
            return Err(TopologyError::Domain(format!(
                "manifold dimension must be ≥ 2, got {dim_m}"
            )));
        }
        if dim_m % 2 == 0 && boundary.base().euler != 0 {
            return Err(TopologyError::Descriptor {
                space: boundary.base().name.clone(),
                reason: format!(
                    "the boundary of an even-dimensional manifold has χ = 0, got {}",
                    boundary.base().euler
                ),
            });
        }
        Ok(BoundaryBarycenterInput {
            boundary,
            quotient,
            chi_m,
            dim_m,
        })
    }

    /// The closed disk: `∂D = S¹`, `D/∂D = S²`.
    pub fn disk(quotient: BarycenterProvider) -> Result<Self, TopologyError> {
        Self::new(BarycenterProvider::circle(), quotient, 1, 2)
    }

    pub fn boundary(&self) -> &BarycenterProvider {
        &self.boundary
    }

    pub fn quotient(&self) -> &BarycenterProvider {
        &self.quotient
    }

    pub fn chi_m(&self) -> i64 {
        self.chi_m
    }

    pub fn dim_m(&self) -> usize {
        self.dim_m
    }

    pub fn is_even_dimensional(&self) -> bool {
        self.dim_m % 2 == 0
    }
}

/// Reduced homology of `B_l^∂(M)`.
pub fn boundary_betti(input: &BoundaryBarycenterInput, l: usize) -> Result<BettiTable, TopologyError> {
    if l == 0 {
        return Err(TopologyError::Domain("order must be ≥ 1".into()));
    }
    let bd = |n: usize| input.boundary.table(n);
    let qt = |n: usize| input.quotient.table(n);
    let mut terms = Vec::new();
    let mut cross = Vec::new();
    if l % 2 == 0 {
        let m = l / 2;
        terms.push(bd(l)?);
        terms.push(qt(m)?);
        for i in 1..m {
            cross.push(graded::tensor(&qt(i)?, &bd(l - 2 * i)?)?);
        }
    } else {
        let m = (l + 1) / 2;
        terms.push(bd(l)?);
        for i in 1..m {
            cross.push(graded::tensor(&qt(i)?, &bd(l - 2 * i)?)?);
        }
    }
    let cross = graded::suspend(&graded::direct_sum_all(&cross)?, 1);
    terms.push(cross);
    Ok(graded::direct_sum_all(&terms)?)
}

/// Reduced homology of the intermediate colimit
/// `T_i = B_{l+i}(∂M) ∨ ⋁_{j=1}^{i} B_j(M/∂M) * B_{l+i−2j}(∂M)`.
pub fn t_i_betti(
    input: &BoundaryBarycenterInput,
    l: usize,
    i: usize,
) -> Result<BettiTable, TopologyError> {
    if l == 0 || i > l {
        return Err(TopologyError::Domain(format!(
            "T_i needs 0 ≤ i ≤ l and l ≥ 1, got l = {l}, i = {i}"
        )));
    }
    let mut terms = vec![input.boundary.table(l + i)?];
    for j in 1..=i {
        let q = input.quotient.table(j)?;
        let b = input.boundary.table(l + i - 2 * j)?;
        terms.push(graded::join(&q, &b)?);
    }
    Ok(graded::direct_sum_all(&terms)?)
}

/// `χ(B_l^∂(M))` for even-dimensional `M`:
/// `χ(B_{2m}^∂) = χ(B_m(M))`, `χ(B_{2m−1}^∂) = χ(B_{m−1}(M))`, `χ(B_0) = 0`.
pub fn euler_boundary(chi_m: i64, l: usize, dim_even: bool) -> Result<i64, TopologyError> {
    if !dim_even {
        return Err(TopologyError::Unsupported(
            "the Euler characteristic formula for B_l^∂ holds for even-dimensional manifolds only"
                .into(),
        ));
    }
    if l == 0 {
        return Err(TopologyError::Domain("order must be ≥ 1".into()));
    }
    let m = if l % 2 == 0 { l / 2 } else { (l - 1) / 2 };
    if m == 0 {
        Ok(0)
    } else {
        chi_barycenter(chi_m, m as i64)
    }
}

/// `χ(B_q^p) = χ(B_p(M))`, with `χ(B_0^q) = χ(B_q(∂M)) = 0`.
///
/// `q = 0` is accepted too, since `B_0^p = B_p(M)`.
pub fn bqp_euler(chi_m: i64, p: usize, q: usize) -> Result<i64, TopologyError> {
    let _ = q;
    if p == 0 {
        Ok(0)
    } else {
        chi_barycenter(chi_m, p as i64)
    }
}

/// `χ(B_{2l}^∂)` assembled stratum by stratum by inclusion-exclusion.
pub fn euler_boundary_by_strata(chi_m: i64, l: usize) -> Result<i64, TopologyError> {
    let mut total = 0i64;
    for i in 0..=l {
        total += bqp_euler(chi_m, i, 2 * l - 2 * i)?;
    }
    for i in 0..l {
        total -= bqp_euler(chi_m, i, 2 * l - 1 - 2 * i)?;
    }
    Ok(total)
}

/// Reduced homology of `B̄_q^p / B_1^{p−1}`, which is
/// `B_p(M/∂M) * (B_q(∂M) ∨ ΣB_{q−1}(∂M))`.
pub fn bqp_closure_quotient_betti(
    p: usize,
    q: usize,
    boundary: &BarycenterProvider,
    quotient: &BarycenterProvider,
) -> Result<BettiTable, TopologyError> {
    if p == 0 || q == 0 {
        return Err(TopologyError::Domain(format!(
            "B̄_q^p needs p, q ≥ 1, got p = {p}, q = {q}"
        )));
    }
    let lower = boundary.table(q - 1)?;
    let mut right = boundary.table(q)?;
    if !lower.is_empty_space() {
        right = graded::direct_sum(&right, &graded::suspend(&lower, 1))?;
    }
    Ok(graded::join(&quotient.table(p)?, &right)?)
}

/// Connectivity bounds for `B_l^∂(M)` when `M` and `∂M` are both
/// `r`-connected, `r ≥ 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryConnectivity {
    pub order: usize,
    pub r: i64,
    /// `l + r − 2`.
    pub even_formula: i64,
    /// `min(l + 2r − 2, 2l + r − 2)`.
    pub odd_formula: i64,
    /// The smaller of the two.
    pub reported: i64,
    pub note: String,
}

pub fn boundary_connectivity(l: usize, r: i64) -> Result<BoundaryConnectivity, TopologyError> {
    if r < 1 {
        return Err(TopologyError::Domain(format!(
            "connectivity bound needs r ≥ 1, got {r}"
        )));
    }
    if l == 0 {
        return Err(TopologyError::Domain("order must be ≥ 1".into()));
    }
    let li = l as i64;
    let even_formula = li + r - 2;
    let odd_formula = (li + 2 * r - 2).min(2 * li + r - 2);
    let (reported, note) = if even_formula == odd_formula {
        (even_formula, "both parity formulas agree".to_string())
    } else {
        let parity = if l % 2 == 0 { "even" } else { "odd" };
        (
            even_formula.min(odd_formula),
            format!(
                "parity formulas disagree ({even_formula} vs {odd_formula}) at {parity} order {l}; reporting the smaller"
            ),
        )
    };
    Ok(BoundaryConnectivity {
        order: l,
        r,
        even_formula,
        odd_formula,
        reported,
        note,
    })
}

/// Outcome of comparing a Betti table against the Euler closed form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Consistency {
    Pass,
    Fail,
    /// Odd-dimensional manifold: no closed form to compare against.
    NotApplicable,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrderReport {
    pub order: usize,
    pub betti: BettiTable,
    /// Euler characteristic of the computed table.
    pub euler: i64,
    /// Closed-form value when defined.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub euler_closed_form: Option<i64>,
    pub consistency: Consistency,
    /// Top degree allowed by `H_*(B_l^∂) = 0` for `* ≥ l·dim M`.
    pub degree_bound_ok: bool,
}

/// Tables and Euler checks for every order `1..=max_order`.
pub fn topology_report(
    input: &BoundaryBarycenterInput,
    max_order: usize,
) -> Result<Vec<OrderReport>, TopologyError> {
    (1..=max_order).map(|l| order_report(input, l)).collect()
}

pub fn order_report(input: &BoundaryBarycenterInput, l: usize) -> Result<OrderReport, TopologyError> {
    let betti = boundary_betti(input, l)?;
    let euler = euler_characteristic(&betti);
    let closed = if input.is_even_dimensional() {
        Some(euler_boundary(input.chi_m, l, true)?)
    } else {
        None
    };
    let consistency = match closed {
        Some(c) if c == euler => Consistency::Pass,
        Some(_) => Consistency::Fail,
        None => Consistency::NotApplicable,
    };
    let degree_bound_ok = betti
        .top_degree()
        .map_or(true, |d| d < l * input.dim_m);
    Ok(OrderReport {
        order: l,
        betti,
        euler,
        euler_closed_form: closed,
        consistency,
        degree_bound_ok,
    })
}

/// `c_n = dim H_n(B_l^∂(M))` (unreduced) for `n = 0..len`.
pub fn unreduced_c_array(
    input: &BoundaryBarycenterInput,
    l: usize,
    len: usize,
) -> Result<Vec<u64>, TopologyError> {
    let table = boundary_betti(input, l)?.to_unreduced();
    Ok(table.dense(len))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::barycenter::SpaceDescriptor;
    use std::collections::BTreeMap;

    fn r(entries: &[(usize, u64)]) -> BettiTable {
        BettiTable::reduced(entries.iter().copied())
    }

    fn s2_provider() -> BarycenterProvider {
        // test tables that pass the Euler and connectivity checks
        let tables = BTreeMap::from([
            (1, r(&[(2, 1)])),
            (2, r(&[(4, 1), (5, 1)])),
            (3, r(&[(6, 1), (7, 1)])),
        ]);
        BarycenterProvider::from_tables(SpaceDescriptor::sphere(2), tables).unwrap()
    }

    fn disk() -> BoundaryBarycenterInput {
        BoundaryBarycenterInput::disk(s2_provider()).unwrap()
    }

    #[test]
    fn disk_order_two() {
        assert_eq!(boundary_betti(&disk(), 2).unwrap(), r(&[(2, 1), (3, 1)]));
    }

    #[test]
    fn disk_order_one_is_the_circle() {
        assert_eq!(boundary_betti(&disk(), 1).unwrap(), r(&[(1, 1)]));
    }

    #[test]
    fn disk_orders_agree_with_euler() {
        let d = disk();
        for l in 1..=6 {
            let rep = order_report(&d, l).unwrap();
            assert_eq!(rep.consistency, Consistency::Pass, "order {l}: {:?}", rep);
            assert!(rep.degree_bound_ok);
        }
    }

    #[test]
    fn annulus_order_two() {
        let bd = BarycenterProvider::disjoint_union(
            BarycenterProvider::circle(),
            BarycenterProvider::circle(),
        )
        .unwrap();
        let quotient = SpaceDescriptor::new(
            "S2vS1",
            2,
            BettiTable::unreduced([(0, 1), (1, 1), (2, 1)]),
            0,
        )
        .unwrap();
        let input =
            BoundaryBarycenterInput::new(bd.clone(), BarycenterProvider::base_only(quotient), 0, 2)
                .unwrap();
        let expected = graded::direct_sum(&bd.table(2).unwrap(), &r(&[(1, 1), (2, 1)])).unwrap();
        assert_eq!(boundary_betti(&input, 2).unwrap(), expected);
        assert_eq!(euler_characteristic(&expected), 0);
    }

    #[test]
    fn even_dimension_needs_zero_boundary_euler() {
        let bad = BoundaryBarycenterInput::new(
            BarycenterProvider::base_only(SpaceDescriptor::sphere(2)),
            s2_provider(),
            2,
            2,
        );
        assert!(bad.is_err());
        assert!(BoundaryBarycenterInput::new(
            BarycenterProvider::circle(),
            s2_provider(),
            1,
            1
        )
        .is_err());
    }

    #[test]
    fn t_i_endpoints() {
        let d = disk();
        for l in 1..=3 {
            assert_eq!(t_i_betti(&d, l, 0).unwrap(), d.boundary().table(l).unwrap());
            assert_eq!(t_i_betti(&d, l, l).unwrap(), boundary_betti(&d, 2 * l).unwrap());
            assert_eq!(
                t_i_betti(&d, l, l - 1).unwrap(),
                boundary_betti(&d, 2 * l - 1).unwrap()
            );
        }
        assert!(t_i_betti(&d, 2, 3).is_err());
    }

    #[test]
    fn euler_boundary_examples() {
        for l in 1..10 {
            assert_eq!(euler_boundary(0, l, true).unwrap(), 0);
        }
        assert_eq!(euler_boundary(1, 2, true).unwrap(), 1);
        assert_eq!(euler_boundary(2, 4, true).unwrap(), 1);
        assert_eq!(euler_boundary(5, 1, true).unwrap(), 0);
        assert!(matches!(
            euler_boundary(1, 2, false),
            Err(TopologyError::Unsupported(_))
        ));
    }

    #[test]
    fn bqp_euler_examples() {
        assert_eq!(bqp_euler(7, 0, 3).unwrap(), 0);
        for q in 1..5 {
            assert_eq!(bqp_euler(-3, 1, q).unwrap(), -3);
        }
        assert_eq!(bqp_euler(1, 2, 1).unwrap(), 1);
    }

    #[test]
    fn strata_sum_matches_closed_form() {
        for chi in -4..=4 {
            for l in 1..=6 {
                assert_eq!(
                    euler_boundary_by_strata(chi, l).unwrap(),
                    euler_boundary(chi, 2 * l, true).unwrap(),
                    "chi {chi}, l {l}"
                );
            }
        }
    }

    #[test]
    fn closure_quotient_examples() {
        let c = BarycenterProvider::circle();
        let s2 = s2_provider();
        assert_eq!(bqp_closure_quotient_betti(1, 1, &c, &s2).unwrap(), r(&[(4, 1)]));
        assert_eq!(
            bqp_closure_quotient_betti(1, 2, &c, &s2).unwrap(),
            r(&[(6, 1), (5, 1)])
        );
        assert!(bqp_closure_quotient_betti(0, 2, &c, &s2).is_err());
    }

    #[test]
    fn connectivity_reports_both_formulas() {
        let c = boundary_connectivity(4, 2).unwrap();
        assert_eq!(c.even_formula, 4);
        assert_eq!(c.odd_formula, 6);
        assert_eq!(c.reported, 4);
        let c = boundary_connectivity(3, 1).unwrap();
        assert_eq!((c.even_formula, c.odd_formula), (2, 3));
        assert!(boundary_connectivity(3, 0).is_err());
    }

    #[test]
    fn c_array_is_unreduced() {
        let c = unreduced_c_array(&disk(), 1, 5).unwrap();
        assert_eq!(c, vec![1, 1, 0, 0, 0]);
    }
}
