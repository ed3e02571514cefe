//! Classical barycenter spaces `B_n(X)`.
//!
//! Only what can be stated in closed form is built in: the Euler
//! characteristic of `B_n(X)` for any finite complex, the homotopy types
//! `B_n(S¹) ≃ S^{2n-1}`, `B_n(pt) = pt`, `B_1(X) = X`, and the wedge
//! decomposition of `B_n(A ⊔ B)` for two connected pieces. Everything else
//! (e.g. `B_n(S²)` for `n ≥ 2`) must come from a user table file, which is
//! validated against the closed forms before use.

use std::collections::BTreeMap;
use std::path::Path;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graded::{self, euler_characteristic, AlgebraError, BettiTable};

#[derive(Debug, Error)]
pub enum TopologyError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("no table for B_{order}({space})")]
    MissingOrder { space: String, order: usize },
    #[error("inconsistent table for B_{order}({space}): {reason}")]
    Inconsistent {
        space: String,
        order: usize,
        reason: String,
    },
    #[error("invalid space descriptor `{space}`: {reason}")]
    Descriptor { space: String, reason: String },
    #[error("unknown space `{0}`")]
    UnknownSpace(String),
    #[error("integer overflow evaluating {0}")]
    Overflow(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("reading {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("parsing {path}: {source}")]
    Json {
        path: String,
        source: serde_json::Error,
    },
}

/// Named topological input: a compact space known through its homology.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceDescriptor {
    pub name: String,
    pub dimension: usize,
    pub euler: i64,
    /// Unreduced Betti numbers.
    pub betti: BettiTable,
    /// `r` such that the space is `r`-connected; −1 means only nonempty.
    pub connectivity: i64,
}

impl SpaceDescriptor {
    pub fn new(
        name: impl Into<String>,
        dimension: usize,
        betti: BettiTable,
        connectivity: i64,
    ) -> Result<Self, TopologyError> {
        let name = name.into();
        let betti = betti.to_unreduced();
        if betti.rank(0) == 0 {
            return Err(TopologyError::Descriptor {
                space: name,
                reason: "a nonempty space has rank ≥ 1 in degree 0".into(),
            });
        }
        if connectivity < -1 || connectivity > dimension as i64 {
            return Err(TopologyError::Descriptor {
                space: name,
                reason: format!("connectivity {connectivity} outside [-1, {dimension}]"),
            });
        }
        if let Some(top) = betti.top_degree() {
            if top > dimension {
                return Err(TopologyError::Descriptor {
                    space: name,
                    reason: format!("homology in degree {top} exceeds dimension {dimension}"),
                });
            }
        }
        let euler = euler_characteristic(&betti);
        Ok(SpaceDescriptor {
            name,
            dimension,
            euler,
            betti,
            connectivity,
        })
    }

    pub fn point() -> Self {
        Self::new("point", 0, BettiTable::unreduced([(0, 1)]), 0).expect("point")
    }

    pub fn sphere(n: usize) -> Self {
        let betti = BettiTable::unreduced([(0, 1), (n, 1)]);
        // S⁰ is not connected
        let conn = if n == 0 { -1 } else { n as i64 - 1 };
        Self::new(format!("S{n}"), n, betti, conn).expect("sphere")
    }

    pub fn circle() -> Self {
        Self::sphere(1)
    }

    pub fn reduced_betti(&self) -> BettiTable {
        self.betti.to_reduced().expect("descriptor is nonempty")
    }

    pub fn is_connected(&self) -> bool {
        self.betti.rank(0) == 1 && self.connectivity >= 0
    }

    /// Checks the stored Euler characteristic against the Betti table.
    pub fn validate(&self) -> Result<(), TopologyError> {
        let chi = euler_characteristic(&self.betti);
        if chi != self.euler {
            return Err(TopologyError::Descriptor {
                space: self.name.clone(),
                reason: format!("euler {} but betti table gives {chi}", self.euler),
            });
        }
        if self.connectivity > self.dimension as i64 {
            return Err(TopologyError::Descriptor {
                space: self.name.clone(),
                reason: "connectivity exceeds dimension".into(),
            });
        }
        Ok(())
    }
}

/// Where the tables of `B_n(X)` come from.
#[derive(Clone, Debug)]
pub enum TableSource {
    /// `B_n(S¹) ≃ S^{2n−1}`.
    BuiltinCircle,
    /// `B_n(pt) = pt`.
    BuiltinPoint,
    /// Only `B_1(X) = X` is known.
    BaseOnly,
    /// Validated user tables, keyed by order.
    UserFile(BTreeMap<usize, BettiTable>),
    /// `B_n(A ⊔ B)` assembled from the two connected pieces.
    DisjointUnion(Box<BarycenterProvider>, Box<BarycenterProvider>),
}

/// Supplies reduced tables of `B_n(X)` for a fixed base space `X`.
#[derive(Clone, Debug)]
pub struct BarycenterProvider {
    base: SpaceDescriptor,
    source: TableSource,
}

impl BarycenterProvider {
    pub fn circle() -> Self {
        BarycenterProvider {
            base: SpaceDescriptor::circle(),
            source: TableSource::BuiltinCircle,
        }
    }

    pub fn point() -> Self {
        BarycenterProvider {
            base: SpaceDescriptor::point(),
            source: TableSource::BuiltinPoint,
        }
    }

    pub fn base_only(base: SpaceDescriptor) -> Self {
        BarycenterProvider {
            base,
            source: TableSource::BaseOnly,
        }
    }

    /// Builds a provider from user tables, rejecting any table that violates
    /// the Euler closed form, the connectivity bound or the dimension bound.
    pub fn from_tables(
        base: SpaceDescriptor,
        tables: BTreeMap<usize, BettiTable>,
    ) -> Result<Self, TopologyError> {
        base.validate()?;
        let mut clean = BTreeMap::new();
        for (n, table) in tables {
            if n == 0 {
                return Err(TopologyError::Inconsistent {
                    space: base.name.clone(),
                    order: 0,
                    reason: "B_0 is the empty space by convention and cannot be supplied".into(),
                });
            }
            let table = table.to_reduced()?;
            if table.is_empty_space() {
                return Err(TopologyError::Inconsistent {
                    space: base.name.clone(),
                    order: n,
                    reason: "B_n of a nonempty space is nonempty".into(),
                });
            }
            validate_order_table(&base, n, &table)?;
            clean.insert(n, table);
        }
        Ok(BarycenterProvider {
            base,
            source: TableSource::UserFile(clean),
        })
    }

    /// `B_n(A ⊔ B)` for connected `A`, `B`.
    pub fn disjoint_union(a: BarycenterProvider, b: BarycenterProvider) -> Result<Self, TopologyError> {
        for p in [&a, &b] {
            if !p.base.is_connected() {
                return Err(TopologyError::Unsupported(format!(
                    "disjoint-union tables need connected pieces; `{}` is not connected",
                    p.base.name
                )));
            }
        }
        let betti = graded::direct_sum(&a.base.betti, &b.base.betti)?;
        let base = SpaceDescriptor::new(
            format!("{}+{}", a.base.name, b.base.name),
            a.base.dimension.max(b.base.dimension),
            betti,
            -1,
        )?;
        Ok(BarycenterProvider {
            base,
            source: TableSource::DisjointUnion(Box::new(a), Box::new(b)),
        })
    }

    pub fn base(&self) -> &SpaceDescriptor {
        &self.base
    }

    pub fn source(&self) -> &TableSource {
        &self.source
    }

    /// Reduced table of `B_n(X)`; `B_0(X)` is the empty-space sentinel.
    pub fn table(&self, n: usize) -> Result<BettiTable, TopologyError> {
        if n == 0 {
            return Ok(BettiTable::empty_space());
        }
        if n == 1 {
            if let TableSource::UserFile(tables) = &self.source {
                if let Some(t) = tables.get(&1) {
                    return Ok(t.clone());
                }
            }
            return Ok(self.base.reduced_betti());
        }
        match &self.source {
            TableSource::BuiltinCircle => circle_barycenter_table(n as i64),
            TableSource::BuiltinPoint => Ok(BettiTable::point()),
            TableSource::BaseOnly => Err(self.missing(n)),
            TableSource::UserFile(tables) => tables.get(&n).cloned().ok_or_else(|| self.missing(n)),
            TableSource::DisjointUnion(a, b) => disjoint_union_barycenter(a, b, n),
        }
    }

    /// Largest order this provider can resolve, `None` when unbounded.
    pub fn max_order(&self) -> Option<usize> {
        match &self.source {
            TableSource::BuiltinCircle | TableSource::BuiltinPoint => None,
            TableSource::BaseOnly => Some(1),
            TableSource::UserFile(tables) => {
                let mut n = 1;
                while tables.contains_key(&(n + 1)) {
                    n += 1;
                }
                Some(n)
            }
            TableSource::DisjointUnion(a, b) => match (a.max_order(), b.max_order()) {
                (None, None) => None,
                (Some(x), None) | (None, Some(x)) => Some(x),
                (Some(x), Some(y)) => Some(x.min(y)),
            },
        }
    }

    fn missing(&self, order: usize) -> TopologyError {
        TopologyError::MissingOrder {
            space: self.base.name.clone(),
            order,
        }
    }
}

fn validate_order_table(
    base: &SpaceDescriptor,
    n: usize,
    table: &BettiTable,
) -> Result<(), TopologyError> {
    let bad = |reason: String| TopologyError::Inconsistent {
        space: base.name.clone(),
        order: n,
        reason,
    };
    let expected = chi_barycenter(base.euler, n as i64)?;
    let got = euler_characteristic(table);
    if got != expected {
        return Err(bad(format!(
            "Euler characteristic {got}, closed form gives {expected}"
        )));
    }
    if n == 1 && *table != base.reduced_betti() {
        return Err(bad(format!(
            "B_1 must equal the base space, got {table} vs {}",
            base.reduced_betti()
        )));
    }
    if base.connectivity >= 1 {
        let conn = connectivity_of_barycenter(base.connectivity, n as i64)?;
        if let Some(low) = table.bottom_degree() {
            if (low as i64) <= conn {
                return Err(bad(format!(
                    "homology in degree {low} but B_{n} is {conn}-connected"
                )));
            }
        }
    }
    let hdim = n * base.dimension + n - 1;
    if let Some(top) = table.top_degree() {
        if top > hdim {
            return Err(bad(format!(
                "homology in degree {top} above the bound {hdim}"
            )));
        }
    }
    Ok(())
}

/// `χ(B_l(X)) = 1 − (1−χ)(2−χ)⋯(l−χ)/l!`, evaluated exactly.
pub fn chi_barycenter(chi: i64, l: i64) -> Result<i64, TopologyError> {
    if l <= 0 {
        return Err(TopologyError::Domain(format!(
            "barycenter order must be ≥ 1, got {l}"
        )));
    }
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for j in 1..=l {
        num *= BigInt::from(j) - BigInt::from(chi);
        den *= BigInt::from(j);
    }
    debug_assert!((&num % &den) == BigInt::from(0));
    let value = BigInt::one() - num / den;
    value
        .to_i64()
        .ok_or_else(|| TopologyError::Overflow(format!("chi_barycenter({chi}, {l})")))
}

/// `B_n(S¹) ≃ S^{2n−1}`.
pub fn circle_barycenter_table(n: i64) -> Result<BettiTable, TopologyError> {
    if n <= 0 {
        return Err(TopologyError::Domain(format!(
            "barycenter order must be ≥ 1, got {n}"
        )));
    }
    Ok(BettiTable::sphere(2 * n as usize - 1))
}

/// Reduced homology of `B_l(A ⊔ B)`, `l ≥ 2`, for connected `A`, `B`:
///
/// ```text
/// B_l(A) ∨ ΣB_{l−1}(A) ∨ B_l(B) ∨ ΣB_{l−1}(B)
///   ∨ ⋁_{i=1}^{l−1} B_{l−i}(A) * B_i(B) ∨ ⋁_{i=2}^{l−1} Σ(B_{l−i}(A) * B_{i−1}(B))
/// ```
pub fn disjoint_union_barycenter(
    a: &BarycenterProvider,
    b: &BarycenterProvider,
    l: usize,
) -> Result<BettiTable, TopologyError> {
    if l < 2 {
        return Err(TopologyError::Domain(format!(
            "disjoint-union formula needs l ≥ 2, got {l}"
        )));
    }
    let mut terms = vec![
        a.table(l)?,
        graded::suspend(&a.table(l - 1)?, 1),
        b.table(l)?,
        graded::suspend(&b.table(l - 1)?, 1),
    ];
    for i in 1..l {
        terms.push(graded::join(&a.table(l - i)?, &b.table(i)?)?);
    }
    for i in 2..l {
        let j = graded::join(&a.table(l - i)?, &b.table(i - 1)?)?;
        terms.push(graded::suspend(&j, 1));
    }
    Ok(graded::direct_sum_all(&terms)?)
}

/// `B_2(A) ∨ Σ(A × B) ∨ B_2(B)`, the two-point case computed independently
/// of [`disjoint_union_barycenter`].
pub fn disjoint_union_order_two(
    a: &BarycenterProvider,
    b: &BarycenterProvider,
) -> Result<BettiTable, TopologyError> {
    let prod = graded::product_homology(&a.base().reduced_betti(), &b.base().reduced_betti())?;
    Ok(graded::direct_sum_all(&[
        a.table(2)?,
        graded::suspend(&prod, 1),
        b.table(2)?,
    ])?)
}

/// `B_n(M)` is `(2n + r − 2)`-connected when `M` is `r`-connected, `r ≥ 1`.
pub fn connectivity_of_barycenter(r: i64, n: i64) -> Result<i64, TopologyError> {
    if r < 1 {
        return Err(TopologyError::Domain(format!(
            "connectivity bound needs r ≥ 1, got {r}"
        )));
    }
    if n < 1 {
        return Err(TopologyError::Domain(format!(
            "barycenter order must be ≥ 1, got {n}"
        )));
    }
    Ok(2 * n + r - 2)
}

/// One entry of a user table file.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpaceTablesDoc {
    pub space: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dimension: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub euler: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub connectivity: Option<i64>,
    /// Order → reduced ranks of `B_n`.
    pub orders: BTreeMap<usize, BTreeMap<usize, u64>>,
}

impl SpaceTablesDoc {
    /// Validates the entry and turns it into a provider.
    pub fn into_provider(self) -> Result<BarycenterProvider, TopologyError> {
        let first = self
            .orders
            .get(&1)
            .map(|ranks| BettiTable::reduced(ranks.iter().map(|(&d, &r)| (d, r))));
        let base_reduced = match first {
            Some(t) => t,
            None => {
                return Err(TopologyError::Descriptor {
                    space: self.space,
                    reason: "order 1 (the space itself) must be listed".into(),
                })
            }
        };
        let dimension = self
            .dimension
            .unwrap_or_else(|| base_reduced.top_degree().unwrap_or(0));
        let base = SpaceDescriptor::new(
            self.space.clone(),
            dimension,
            base_reduced.to_unreduced(),
            self.connectivity.unwrap_or(-1),
        )?;
        if let Some(chi) = self.euler {
            if chi != base.euler {
                return Err(TopologyError::Descriptor {
                    space: self.space,
                    reason: format!("euler {chi} but order-1 table gives {}", base.euler),
                });
            }
        }
        let tables = self
            .orders
            .into_iter()
            .map(|(n, ranks)| (n, BettiTable::reduced(ranks)))
            .collect();
        BarycenterProvider::from_tables(base, tables)
    }
}

/// Named providers: built-ins plus anything loaded from table files.
#[derive(Clone, Debug, Default)]
pub struct TableRegistry {
    user: BTreeMap<String, BarycenterProvider>,
}

impl TableRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, provider: BarycenterProvider) {
        self.user.insert(provider.base().name.clone(), provider);
    }

    /// Reads a table file holding one entry or a list of entries.
    pub fn load(&mut self, path: &Path) -> Result<(), TopologyError> {
        let text = std::fs::read_to_string(path).map_err(|source| TopologyError::Io {
            path: path.display().to_string(),
            source,
        })?;
        self.load_str(&text, &path.display().to_string())
    }

    pub fn load_str(&mut self, text: &str, origin: &str) -> Result<(), TopologyError> {
        let json_err = |source| TopologyError::Json {
            path: origin.to_string(),
            source,
        };
        let value: serde_json::Value = serde_json::from_str(text).map_err(json_err)?;
        let entries: Vec<SpaceTablesDoc> = if value.is_array() {
            serde_json::from_value(value).map_err(json_err)?
        } else {
            vec![serde_json::from_value(value).map_err(json_err)?]
        };
        for e in entries {
            self.insert(e.into_provider()?);
        }
        Ok(())
    }

    /// Resolves a name. User entries shadow built-ins. `A+B` is the disjoint
    /// union of two connected spaces; `S<n>` is a sphere known only at order 1.
    pub fn resolve(&self, name: &str) -> Result<BarycenterProvider, TopologyError> {
        if let Some(p) = self.user.get(name) {
            return Ok(p.clone());
        }
        if let Some((a, b)) = name.split_once('+') {
            return BarycenterProvider::disjoint_union(self.resolve(a.trim())?, self.resolve(b.trim())?);
        }
        match name {
            "circle" | "S1" => Ok(BarycenterProvider::circle()),
            "point" | "pt" => Ok(BarycenterProvider::point()),
            "S2vS1" | "S2∨S1" => {
                let base = SpaceDescriptor::new(
                    "S2vS1",
                    2,
                    BettiTable::unreduced([(0, 1), (1, 1), (2, 1)]),
                    0,
                )?;
                Ok(BarycenterProvider::base_only(base))
            }
            _ => {
                if let Some(n) = name.strip_prefix('S').and_then(|s| s.parse::<usize>().ok()) {
                    Ok(BarycenterProvider::base_only(SpaceDescriptor::sphere(n)))
                } else {
                    Err(TopologyError::UnknownSpace(name.to_string()))
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(entries: &[(usize, u64)]) -> BettiTable {
        BettiTable::reduced(entries.iter().copied())
    }

    #[test]
    fn chi_barycenter_examples() {
        for l in 1..=10 {
            assert_eq!(chi_barycenter(0, l).unwrap(), 0);
        }
        assert_eq!(chi_barycenter(2, 1).unwrap(), 2);
        assert_eq!(chi_barycenter(1, 2).unwrap(), 1);
        assert!(matches!(chi_barycenter(2, 0), Err(TopologyError::Domain(_))));
    }

    #[test]
    fn chi_barycenter_of_sphere_pairs() {
        // χ(S²) = 2: 1 − (−1)(0)/2 = 1
        assert_eq!(chi_barycenter(2, 2).unwrap(), 1);
        // χ = −1: 1 − (2·3·4)/6 = −3
        assert_eq!(chi_barycenter(-1, 3).unwrap(), -3);
    }

    #[test]
    fn chi_barycenter_large_orders_stay_exact() {
        // χ = −3, l = 30: 1 − C(33, 30)
        assert_eq!(chi_barycenter(-3, 30).unwrap(), 1 - 5456);
    }

    #[test]
    fn circle_tables() {
        assert_eq!(circle_barycenter_table(1).unwrap(), r(&[(1, 1)]));
        assert_eq!(circle_barycenter_table(2).unwrap(), r(&[(3, 1)]));
        assert_eq!(circle_barycenter_table(3).unwrap(), r(&[(5, 1)]));
        assert!(circle_barycenter_table(0).is_err());
    }

    #[test]
    fn two_circles() {
        let c = BarycenterProvider::circle();
        assert_eq!(disjoint_union_barycenter(&c, &c, 3).unwrap(), r(&[(5, 4), (4, 3)]));
        assert_eq!(disjoint_union_barycenter(&c, &c, 2).unwrap(), r(&[(3, 3), (2, 2)]));
        assert_eq!(
            disjoint_union_order_two(&c, &c).unwrap(),
            disjoint_union_barycenter(&c, &c, 2).unwrap()
        );
    }

    #[test]
    fn two_points_are_contractible() {
        let p = BarycenterProvider::point();
        for l in 2..6 {
            assert_eq!(disjoint_union_barycenter(&p, &p, l).unwrap(), BettiTable::point());
        }
    }

    #[test]
    fn union_needs_order_two() {
        let c = BarycenterProvider::circle();
        assert!(disjoint_union_barycenter(&c, &c, 1).is_err());
    }

    #[test]
    fn union_provider_order_one_is_disconnected() {
        let u = BarycenterProvider::disjoint_union(
            BarycenterProvider::circle(),
            BarycenterProvider::circle(),
        )
        .unwrap();
        assert_eq!(u.table(1).unwrap(), r(&[(0, 1), (1, 2)]));
        assert_eq!(u.base().euler, 0);
    }

    #[test]
    fn connectivity_examples() {
        assert_eq!(connectivity_of_barycenter(1, 1).unwrap(), 1);
        assert_eq!(connectivity_of_barycenter(2, 3).unwrap(), 6);
        assert_eq!(connectivity_of_barycenter(1, 2).unwrap(), 3);
        assert!(connectivity_of_barycenter(0, 2).is_err());
    }

    #[test]
    fn user_tables_are_validated() {
        let s2 = SpaceDescriptor::sphere(2);
        // χ(B_2(S²)) = 1 so the reduced table must have zero alternating sum.
        let good = BTreeMap::from([(2, r(&[(4, 1), (5, 1)]))]);
        assert!(BarycenterProvider::from_tables(s2.clone(), good).is_ok());
        let bad_euler = BTreeMap::from([(2, r(&[(4, 1)]))]);
        assert!(matches!(
            BarycenterProvider::from_tables(s2.clone(), bad_euler),
            Err(TopologyError::Inconsistent { .. })
        ));
        // S² is 1-connected so B_2(S²) is 3-connected.
        let bad_conn = BTreeMap::from([(2, r(&[(3, 1), (4, 1)]))]);
        assert!(matches!(
            BarycenterProvider::from_tables(s2, bad_conn),
            Err(TopologyError::Inconsistent { .. })
        ));
    }

    #[test]
    fn registry_resolves_builtins_and_files() {
        let mut reg = TableRegistry::new();
        assert!(matches!(reg.resolve("circle").unwrap().source(), TableSource::BuiltinCircle));
        assert!(reg.resolve("S2").unwrap().table(2).is_err());
        reg.load_str(
            r#"{"space":"S2","dimension":2,"connectivity":1,"orders":{"1":{"2":1},"2":{"4":1,"5":1}}}"#,
            "inline",
        )
        .unwrap();
        assert_eq!(reg.resolve("S2").unwrap().table(2).unwrap(), r(&[(4, 1), (5, 1)]));
        assert!(reg.resolve("torus").is_err());
        let u = reg.resolve("circle+circle").unwrap();
        assert_eq!(u.table(3).unwrap(), r(&[(5, 4), (4, 3)]));
    }
}
