//! Graded Z₂ vector spaces.
//!
//! A [`BettiTable`] records the ranks of a finitely supported graded vector
//! space over Z₂, i.e. the (reduced or unreduced) Betti numbers of a space.
//! All the homological bookkeeping of the crate goes through the operations in
//! this module: wedge (direct sum), smash (tensor), suspension, join, product
//! and quotients by subspaces that are contractible in the ambient space.
//!
//! Coefficients are a field, so the Künneth formula holds without Tor terms and
//! wedge summands cancel freely.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("cannot combine a reduced table with an unreduced one")]
    FlagMismatch,
    #[error("operation `{0}` requires reduced tables")]
    NotReduced(&'static str),
    #[error("operation `{0}` is undefined for the empty space")]
    EmptyOperand(&'static str),
    #[error("unreduced table has rank 0 in degree 0 and cannot describe a nonempty space")]
    NoBasepoint,
    #[error("malformed table text at line {line}: {reason}")]
    Parse { line: usize, reason: String },
}

/// Whether a table holds reduced or unreduced homology, or stands for ∅.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Flavor {
    Unreduced,
    Reduced,
    /// The empty space. Kept apart from the zero reduced table (a point) so
    /// that `X * ∅ = X` and `B₀(Y) = ∅` never collide with contractible spaces.
    Empty,
}

/// Finitely supported degree → rank map over Z₂.
///
/// Zero ranks are never stored, so structural equality is table equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BettiTable {
    ranks: BTreeMap<usize, u64>,
    flavor: Flavor,
}

impl BettiTable {
    fn from_map(mut ranks: BTreeMap<usize, u64>, flavor: Flavor) -> Self {
        ranks.retain(|_, r| *r != 0);
        if flavor == Flavor::Empty {
            ranks.clear();
        }
        BettiTable { ranks, flavor }
    }

    pub fn reduced<I: IntoIterator<Item = (usize, u64)>>(entries: I) -> Self {
        Self::from_map(accumulate(entries), Flavor::Reduced)
    }

    pub fn unreduced<I: IntoIterator<Item = (usize, u64)>>(entries: I) -> Self {
        Self::from_map(accumulate(entries), Flavor::Unreduced)
    }

    /// Reduced homology of a contractible space.
    pub fn point() -> Self {
        Self::reduced([])
    }

    /// The empty-space sentinel.
    pub fn empty_space() -> Self {
        Self::from_map(BTreeMap::new(), Flavor::Empty)
    }

    /// Reduced homology of `S^n` (`S^0` gives `{0:1}`).
    pub fn sphere(n: usize) -> Self {
        Self::reduced([(n, 1)])
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn is_reduced(&self) -> bool {
        self.flavor == Flavor::Reduced
    }

    pub fn is_empty_space(&self) -> bool {
        self.flavor == Flavor::Empty
    }

    pub fn rank(&self, degree: usize) -> u64 {
        self.ranks.get(&degree).copied().unwrap_or(0)
    }

    pub fn ranks(&self) -> &BTreeMap<usize, u64> {
        &self.ranks
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.ranks.iter().map(|(&d, &r)| (d, r))
    }

    pub fn total_rank(&self) -> u64 {
        self.ranks.values().sum()
    }

    /// Highest degree carrying a nonzero rank.
    pub fn top_degree(&self) -> Option<usize> {
        self.ranks.keys().next_back().copied()
    }

    /// Lowest degree carrying a nonzero rank.
    pub fn bottom_degree(&self) -> Option<usize> {
        self.ranks.keys().next().copied()
    }

    /// True when every rank vanishes (a point, if reduced).
    pub fn is_zero(&self) -> bool {
        self.ranks.is_empty()
    }

    /// Ranks as a dense vector `0..len`, zero padded or truncated.
    pub fn dense(&self, len: usize) -> Vec<u64> {
        (0..len).map(|d| self.rank(d)).collect()
    }

    /// Drops one generator from degree 0.
    pub fn to_reduced(&self) -> Result<BettiTable, AlgebraError> {
        match self.flavor {
            Flavor::Reduced | Flavor::Empty => Ok(self.clone()),
            Flavor::Unreduced => {
                let r0 = self.rank(0);
                if r0 == 0 {
                    return Err(AlgebraError::NoBasepoint);
                }
                let mut ranks = self.ranks.clone();
                ranks.insert(0, r0 - 1);
                Ok(Self::from_map(ranks, Flavor::Reduced))
            }
        }
    }

    /// Adds one generator in degree 0; the empty space has no homology at all.
    pub fn to_unreduced(&self) -> BettiTable {
        match self.flavor {
            Flavor::Unreduced => self.clone(),
            Flavor::Empty => Self::unreduced([]),
            Flavor::Reduced => {
                let mut ranks = self.ranks.clone();
                *ranks.entry(0).or_insert(0) += 1;
                Self::from_map(ranks, Flavor::Unreduced)
            }
        }
    }

    /// Alternating sum `Σ (−1)^d rank(d)` of the stored ranks.
    pub fn alternating_sum(&self) -> i64 {
        self.iter()
            .map(|(d, r)| if d % 2 == 0 { r as i64 } else { -(r as i64) })
            .sum()
    }

    /// Line-oriented `degree rank` text, headed by a flavor comment.
    pub fn to_text(&self) -> String {
        let mut out = match self.flavor {
            Flavor::Reduced => "# reduced\n".to_string(),
            Flavor::Unreduced => "# unreduced\n".to_string(),
            Flavor::Empty => "# empty\n".to_string(),
        };
        for (d, r) in self.iter() {
            out.push_str(&format!("{d} {r}\n"));
        }
        out
    }

    /// Parses [`BettiTable::to_text`] output. A missing header means reduced.
    pub fn from_text(text: &str) -> Result<BettiTable, AlgebraError> {
        let mut flavor = Flavor::Reduced;
        let mut entries = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(comment) = line.strip_prefix('#') {
                match comment.trim() {
                    "reduced" => flavor = Flavor::Reduced,
                    "unreduced" => flavor = Flavor::Unreduced,
                    "empty" => flavor = Flavor::Empty,
                    _ => {}
                }
                continue;
            }
            let mut parts = line.split_whitespace();
            let parse_err = |reason: &str| AlgebraError::Parse {
                line: idx + 1,
                reason: reason.to_string(),
            };
            let degree = parts
                .next()
                .ok_or_else(|| parse_err("missing degree"))?
                .parse::<usize>()
                .map_err(|e| parse_err(&e.to_string()))?;
            let rank = parts
                .next()
                .ok_or_else(|| parse_err("missing rank"))?
                .parse::<u64>()
                .map_err(|e| parse_err(&e.to_string()))?;
            if parts.next().is_some() {
                return Err(parse_err("trailing tokens"));
            }
            entries.push((degree, rank));
        }
        Ok(Self::from_map(accumulate(entries), flavor))
    }
}

impl fmt::Debug for BettiTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for BettiTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.flavor == Flavor::Empty {
            return write!(f, "∅");
        }
        write!(f, "{{")?;
        for (i, (d, r)) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{d}:{r}")?;
        }
        write!(f, "}}")?;
        if self.flavor == Flavor::Unreduced {
            write!(f, "ᵘ")?;
        }
        Ok(())
    }
}

impl FromStr for BettiTable {
    type Err = AlgebraError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        BettiTable::from_text(s)
    }
}

#[derive(Serialize, Deserialize)]
struct TableDoc {
    reduced: bool,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    empty: bool,
    ranks: BTreeMap<usize, u64>,
}

impl Serialize for BettiTable {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        TableDoc {
            reduced: self.flavor != Flavor::Unreduced,
            empty: self.flavor == Flavor::Empty,
            ranks: self.ranks.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for BettiTable {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let doc = TableDoc::deserialize(deserializer)?;
        let flavor = match (doc.empty, doc.reduced) {
            (true, _) => Flavor::Empty,
            (false, true) => Flavor::Reduced,
            (false, false) => Flavor::Unreduced,
        };
        if flavor == Flavor::Empty && doc.ranks.values().any(|&r| r != 0) {
            return Err(serde::de::Error::custom("the empty space carries no ranks"));
        }
        Ok(BettiTable::from_map(doc.ranks, flavor))
    }
}

fn accumulate<I: IntoIterator<Item = (usize, u64)>>(entries: I) -> BTreeMap<usize, u64> {
    let mut map = BTreeMap::new();
    for (d, r) in entries {
        *map.entry(d).or_insert(0) += r;
    }
    map
}

fn require_reduced(op: &'static str, t: &BettiTable) -> Result<(), AlgebraError> {
    match t.flavor {
        Flavor::Reduced => Ok(()),
        Flavor::Unreduced => Err(AlgebraError::NotReduced(op)),
        Flavor::Empty => Err(AlgebraError::EmptyOperand(op)),
    }
}

/// Degreewise sum; homology of a wedge (reduced) or disjoint union (unreduced).
///
/// The empty space is the identity for this operation.
pub fn direct_sum(a: &BettiTable, b: &BettiTable) -> Result<BettiTable, AlgebraError> {
    match (a.flavor, b.flavor) {
        (Flavor::Empty, _) => return Ok(b.clone()),
        (_, Flavor::Empty) => return Ok(a.clone()),
        (fa, fb) if fa != fb => return Err(AlgebraError::FlagMismatch),
        _ => {}
    }
    let mut ranks = a.ranks.clone();
    for (d, r) in b.iter() {
        *ranks.entry(d).or_insert(0) += r;
    }
    Ok(BettiTable::from_map(ranks, a.flavor))
}

/// Sum of a list of tables sharing a flavor; an empty list gives a point.
pub fn direct_sum_all<'a, I>(tables: I) -> Result<BettiTable, AlgebraError>
where
    I: IntoIterator<Item = &'a BettiTable>,
{
    tables
        .into_iter()
        .try_fold(BettiTable::point(), |acc, t| direct_sum(&acc, t))
}

/// Graded tensor product of reduced tables (homology of the smash product).
pub fn tensor(a: &BettiTable, b: &BettiTable) -> Result<BettiTable, AlgebraError> {
    require_reduced("tensor", a)?;
    require_reduced("tensor", b)?;
    let mut ranks = BTreeMap::new();
    for (i, ra) in a.iter() {
        for (j, rb) in b.iter() {
            *ranks.entry(i + j).or_insert(0) += ra * rb;
        }
    }
    Ok(BettiTable::from_map(ranks, Flavor::Reduced))
}

/// Degree shift by `times` (σ^times). Suspending ∅ leaves ∅, so wedge terms
/// of the form `ΣB₀` drop out of every sum.
pub fn suspend(a: &BettiTable, times: usize) -> BettiTable {
    match a.flavor {
        Flavor::Empty => a.clone(),
        flavor => BettiTable::from_map(a.iter().map(|(d, r)| (d + times, r)).collect(), flavor),
    }
}

/// Join `X * Y`, homologically `σ(H̃X ⊗ H̃Y)`, with `X * ∅ = X`.
pub fn join(a: &BettiTable, b: &BettiTable) -> Result<BettiTable, AlgebraError> {
    if a.is_empty_space() {
        return Ok(b.clone());
    }
    if b.is_empty_space() {
        return Ok(a.clone());
    }
    require_reduced("join", a)?;
    require_reduced("join", b)?;
    Ok(suspend(&tensor(a, b)?, 1))
}

/// `H̃(X ⋉ ΣY) ≅ H̃(X * Y) ⊕ H̃(ΣY)`.
pub fn half_smash_suspension(x: &BettiTable, y: &BettiTable) -> Result<BettiTable, AlgebraError> {
    if x.is_empty_space() {
        return Err(AlgebraError::EmptyOperand("half_smash_suspension"));
    }
    require_reduced("half_smash_suspension", x)?;
    if !y.is_empty_space() {
        require_reduced("half_smash_suspension", y)?;
    }
    direct_sum(&join(x, y)?, &suspend(y, 1))
}

/// Künneth: `H̃(A × B) ≅ H̃A ⊕ H̃B ⊕ (H̃A ⊗ H̃B)`. A product with ∅ is ∅.
pub fn product_homology(a: &BettiTable, b: &BettiTable) -> Result<BettiTable, AlgebraError> {
    if a.is_empty_space() || b.is_empty_space() {
        return Ok(BettiTable::empty_space());
    }
    require_reduced("product_homology", a)?;
    require_reduced("product_homology", b)?;
    direct_sum(&direct_sum(a, b)?, &tensor(a, b)?)
}

/// `X/A ≃ X ∨ ΣA` when `A` is contractible inside `X`.
///
/// Contractibility of the inclusion cannot be checked from homology; the
/// caller vouches for it.
pub fn quotient_by_contractible_subspace(
    x: &BettiTable,
    a: &BettiTable,
) -> Result<BettiTable, AlgebraError> {
    require_reduced("quotient_by_contractible_subspace", x)?;
    if !a.is_empty_space() {
        require_reduced("quotient_by_contractible_subspace", a)?;
    }
    direct_sum(x, &suspend(a, 1))
}

/// Unreduced Euler characteristic of the space the table describes.
pub fn euler_characteristic(a: &BettiTable) -> i64 {
    match a.flavor {
        Flavor::Empty => 0,
        Flavor::Unreduced => a.alternating_sum(),
        Flavor::Reduced => 1 + a.alternating_sum(),
    }
}

/// Poincaré polynomial `Σ b_d t^d`.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct PoincarePolynomial {
    pub coefficients: BTreeMap<usize, u64>,
}

impl PoincarePolynomial {
    pub fn new<I: IntoIterator<Item = (usize, u64)>>(coefficients: I) -> Self {
        let mut map = accumulate(coefficients);
        map.retain(|_, c| *c != 0);
        PoincarePolynomial { coefficients: map }
    }

    pub fn coefficient(&self, degree: usize) -> u64 {
        self.coefficients.get(&degree).copied().unwrap_or(0)
    }

    /// Exact evaluation at an integer.
    pub fn eval(&self, t: i64) -> i128 {
        self.coefficients
            .iter()
            .map(|(&d, &c)| c as i128 * (t as i128).pow(d as u32))
            .sum()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coefficients.keys().next_back().copied()
    }
}

impl From<&BettiTable> for PoincarePolynomial {
    fn from(t: &BettiTable) -> Self {
        PoincarePolynomial::new(t.iter())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(entries: &[(usize, u64)]) -> BettiTable {
        BettiTable::reduced(entries.iter().copied())
    }

    #[test]
    fn direct_sum_examples() {
        let t = r(&[(1, 2), (4, 1)]);
        assert_eq!(direct_sum(&BettiTable::point(), &t).unwrap(), t);
        assert_eq!(direct_sum(&r(&[(2, 1)]), &r(&[(3, 1)])).unwrap(), r(&[(2, 1), (3, 1)]));
        assert_eq!(direct_sum(&r(&[(1, 2)]), &r(&[(1, 3)])).unwrap(), r(&[(1, 5)]));
    }

    #[test]
    fn direct_sum_rejects_mixed_flags() {
        let u = BettiTable::unreduced([(0, 1)]);
        assert_eq!(direct_sum(&u, &r(&[(1, 1)])), Err(AlgebraError::FlagMismatch));
    }

    #[test]
    fn tensor_examples() {
        assert_eq!(tensor(&r(&[(1, 1)]), &r(&[(2, 1)])).unwrap(), r(&[(3, 1)]));
        let t = r(&[(1, 3), (5, 2)]);
        assert_eq!(tensor(&r(&[(0, 1)]), &t).unwrap(), t);
        assert_eq!(tensor(&r(&[(1, 2)]), &r(&[(1, 2)])).unwrap(), r(&[(2, 4)]));
        assert!(matches!(
            tensor(&BettiTable::unreduced([(0, 1)]), &t),
            Err(AlgebraError::NotReduced(_))
        ));
    }

    #[test]
    fn suspend_examples() {
        assert_eq!(suspend(&r(&[(1, 1)]), 1), r(&[(2, 1)]));
        assert_eq!(suspend(&r(&[(0, 1)]), 2), r(&[(2, 1)]));
        assert_eq!(suspend(&r(&[(1, 1), (2, 3)]), 1), r(&[(2, 1), (3, 3)]));
    }

    #[test]
    fn join_examples() {
        let s1 = BettiTable::sphere(1);
        assert_eq!(join(&s1, &s1).unwrap(), BettiTable::sphere(3));
        assert_eq!(join(&s1, &BettiTable::empty_space()).unwrap(), s1);
        assert_eq!(join(&BettiTable::empty_space(), &s1).unwrap(), s1);
        assert_eq!(join(&s1, &r(&[(0, 1)])).unwrap(), r(&[(2, 1)]));
    }

    #[test]
    fn half_smash_examples() {
        let s1 = BettiTable::sphere(1);
        assert_eq!(half_smash_suspension(&BettiTable::point(), &s1).unwrap(), r(&[(2, 1)]));
        assert_eq!(half_smash_suspension(&s1, &s1).unwrap(), r(&[(2, 1), (3, 1)]));
        assert_eq!(
            half_smash_suspension(&BettiTable::empty_space(), &s1),
            Err(AlgebraError::EmptyOperand("half_smash_suspension"))
        );
    }

    #[test]
    fn product_examples() {
        let s1 = BettiTable::sphere(1);
        let s2 = BettiTable::sphere(2);
        assert_eq!(product_homology(&s1, &s1).unwrap(), r(&[(1, 2), (2, 1)]));
        assert_eq!(product_homology(&BettiTable::point(), &s2).unwrap(), s2);
        assert_eq!(product_homology(&s1, &s2).unwrap(), r(&[(1, 1), (2, 1), (3, 1)]));
    }

    #[test]
    fn quotient_examples() {
        let s3 = BettiTable::sphere(3);
        let s1 = BettiTable::sphere(1);
        assert_eq!(quotient_by_contractible_subspace(&s3, &s1).unwrap(), r(&[(3, 1), (2, 1)]));
        assert_eq!(quotient_by_contractible_subspace(&s3, &BettiTable::point()).unwrap(), s3);
        assert_eq!(
            quotient_by_contractible_subspace(&r(&[(2, 1)]), &r(&[(0, 1)])).unwrap(),
            r(&[(2, 1), (1, 1)])
        );
    }

    #[test]
    fn euler_examples() {
        assert_eq!(euler_characteristic(&BettiTable::unreduced([(0, 1), (3, 1)])), 0);
        assert_eq!(euler_characteristic(&r(&[(2, 1), (3, 1)])), 1);
        assert_eq!(euler_characteristic(&BettiTable::point()), 1);
        assert_eq!(euler_characteristic(&BettiTable::empty_space()), 0);
    }

    #[test]
    fn reduced_unreduced_conversion_touches_degree_zero_only() {
        let t = r(&[(0, 2), (3, 1)]);
        let u = t.to_unreduced();
        assert_eq!(u.rank(0), 3);
        assert_eq!(u.rank(3), 1);
        assert_eq!(u.to_reduced().unwrap(), t);
        assert_eq!(euler_characteristic(&u), euler_characteristic(&t));
        assert_eq!(
            BettiTable::unreduced([(2, 1)]).to_reduced(),
            Err(AlgebraError::NoBasepoint)
        );
    }

    #[test]
    fn text_format() {
        let t = r(&[(2, 1), (3, 4)]);
        let text = t.to_text();
        assert_eq!(text, "# reduced\n2 1\n3 4\n");
        assert_eq!(BettiTable::from_text(&text).unwrap(), t);
        let u: BettiTable = "# unreduced\n0 1\n\n3 1\n".parse().unwrap();
        assert_eq!(u, BettiTable::unreduced([(0, 1), (3, 1)]));
        assert!(matches!(
            BettiTable::from_text("2 x"),
            Err(AlgebraError::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn structured_form() {
        let t = r(&[(2, 1), (3, 1)]);
        let json = serde_json::to_string(&t).unwrap();
        assert_eq!(json, r#"{"reduced":true,"ranks":{"2":1,"3":1}}"#);
        let back: BettiTable = serde_json::from_str(&json).unwrap();
        assert_eq!(back, t);
        let e: BettiTable =
            serde_json::from_str(r#"{"reduced":true,"empty":true,"ranks":{}}"#).unwrap();
        assert!(e.is_empty_space());
    }

    #[test]
    fn zero_ranks_are_dropped() {
        let t = r(&[(1, 0), (2, 3)]);
        assert_eq!(t.ranks().len(), 1);
        assert_eq!(t, r(&[(2, 3)]));
    }

    #[test]
    fn poincare_at_minus_one_is_alternating_sum() {
        let t = r(&[(0, 2), (1, 5), (4, 1)]);
        let p = PoincarePolynomial::from(&t);
        assert_eq!(p.eval(-1), t.alternating_sum() as i128);
        assert_eq!(p.eval(1), 8);
        assert_eq!(p.degree(), Some(4));
    }
}
