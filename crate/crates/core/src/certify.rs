//! Morse-theoretic existence certificates from critical points at infinity.
//!
//! A [`CritSummary`] lists the critical points of the reduced functionals
//! together with their index at infinity and the sign of `ℒ_K`. Only records
//! with `ℒ_K < 0` are genuine critical points at infinity. From their counts
//! `m_i` the Morse relations
//!
//! ```text
//! k = 1:  m_0 = 1 + n_0,   m_i = n_i + n_{i−1}             (i = 1..3)
//! k ≥ 2:  m_0 = n_0,  m_1 = n_0 + n_1,
//!         m_i = c_{i−1} + n_i + n_{i−1}                    (i = 2..4k−4)
//!         m_i = n_i + n_{i−1}                              (i = 4k−3..4k−1)
//! ```
//!
//! with the last `n` forced to zero must admit a nonnegative solution if no
//! solution of the PDE exists. Each chain has at most one solution, found by
//! forward substitution, so infeasibility is decided exactly.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CertifyError {
    #[error("record {index} has ℒ_K = 0, which the nondegeneracy condition forbids")]
    Degenerate { index: usize },
    #[error("record {index}: {reason}")]
    InvalidRecord { index: usize, reason: String },
    #[error("c-array has {got} entries, the system for k = {k} needs {need}")]
    ShortCArray { k: usize, need: usize, got: usize },
    #[error("domain error: {0}")]
    Domain(String),
}

/// One critical point of `F_{p,q}` seen as a critical point at infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CritRecord {
    pub p: usize,
    pub q: usize,
    pub i_inf: i64,
    pub lk_sign: i8,
}

impl CritRecord {
    pub fn new(p: usize, q: usize, i_inf: i64, lk_sign: i8) -> Self {
        CritRecord { p, q, i_inf, lk_sign }
    }

    /// `ℒ_K < 0`.
    pub fn at_infinity(&self) -> bool {
        self.lk_sign < 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CritSummary {
    pub k: usize,
    #[serde(default)]
    pub kbar: usize,
    #[serde(rename = "chi_M")]
    pub chi_m: i64,
    pub records: Vec<CritRecord>,
}

impl CritSummary {
    pub fn new(k: usize, kbar: usize, chi_m: i64, records: Vec<CritRecord>) -> Self {
        CritSummary {
            k,
            kbar,
            chi_m,
            records,
        }
    }

    pub fn validate(&self) -> Result<(), CertifyError> {
        if self.k == 0 {
            return Err(CertifyError::Domain("k must be ≥ 1".into()));
        }
        for (index, r) in self.records.iter().enumerate() {
            let bad = |reason: String| CertifyError::InvalidRecord { index, reason };
            if 2 * r.p + r.q != self.k {
                return Err(bad(format!("2p + q = {} but k = {}", 2 * r.p + r.q, self.k)));
            }
            if r.lk_sign == 0 {
                return Err(CertifyError::Degenerate { index });
            }
            if r.lk_sign.abs() != 1 {
                return Err(bad(format!("lk_sign must be ±1, got {}", r.lk_sign)));
            }
            let lo = (r.p + r.q) as i64 - 1;
            let hi = (5 * r.p + 4 * r.q) as i64 - 1;
            if r.i_inf < lo || r.i_inf > hi {
                return Err(bad(format!("i_inf = {} outside [{lo}, {hi}]", r.i_inf)));
            }
        }
        Ok(())
    }

    /// Records with `ℒ_K < 0`.
    pub fn at_infinity(&self) -> impl Iterator<Item = &CritRecord> {
        self.records.iter().filter(|r| r.at_infinity())
    }
}

/// `M_∞ = i_∞ + k̄`.
pub fn index_shift(i_inf: i64, kbar: usize) -> i64 {
    i_inf + kbar as i64
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorseCounts {
    pub k: usize,
    pub m: Vec<u64>,
}

impl MorseCounts {
    /// Zero counts for `k`, indices `0..4k−1`.
    pub fn zeros(k: usize) -> Self {
        MorseCounts {
            k,
            m: vec![0; 4 * k],
        }
    }

    /// `M(t) = Σ m_i tⁱ` at `t = −1`.
    pub fn morse_at_minus_one(&self) -> i64 {
        self.m
            .iter()
            .enumerate()
            .map(|(i, &c)| if i % 2 == 0 { c as i64 } else { -(c as i64) })
            .sum()
    }
}

/// Counts `ℒ_K < 0` records by shifted index `i_∞ + k̄`.
pub fn assemble_counts(summary: &CritSummary) -> Result<MorseCounts, CertifyError> {
    summary.validate()?;
    let mut counts = MorseCounts {
        k: summary.k,
        m: vec![0; 4 * summary.k + summary.kbar],
    };
    for r in summary.at_infinity() {
        let idx = index_shift(r.i_inf, summary.kbar) as usize;
        counts.m[idx] += 1;
    }
    Ok(counts)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViolationKind {
    /// `n_i` forced negative.
    Negative,
    /// Last `n` forced nonzero.
    Terminal,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub index: usize,
    pub kind: ViolationKind,
    pub value: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeasibilityVerdict {
    pub feasible: bool,
    /// The forced sequence `n_0, n_1, …`.
    pub n: Vec<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub first_violation: Option<Violation>,
}

/// Solves `m_i = offset_i + n_i + n_{i−1}` (`n_{−1} = 0`) and requires every
/// `n_i ≥ 0` and the last one to vanish.
pub fn solve_chain(m: &[u64], offsets: &[u64]) -> FeasibilityVerdict {
    assert_eq!(m.len(), offsets.len(), "one offset per equation");
    let mut n = Vec::with_capacity(m.len());
    let mut prev = 0i64;
    let mut first_violation = None;
    for (i, (&mi, &oi)) in m.iter().zip(offsets).enumerate() {
        let ni = mi as i64 - oi as i64 - prev;
        if ni < 0 && first_violation.is_none() {
            first_violation = Some(Violation {
                index: i,
                kind: ViolationKind::Negative,
                value: ni,
            });
        }
        n.push(ni);
        prev = ni;
    }
    if first_violation.is_none() {
        if let Some(&last) = n.last() {
            if last != 0 {
                first_violation = Some(Violation {
                    index: n.len() - 1,
                    kind: ViolationKind::Terminal,
                    value: last,
                });
            }
        }
    }
    FeasibilityVerdict {
        feasible: first_violation.is_none(),
        n,
        first_violation,
    }
}

/// The `k = 1` system; `m` has indices `0..=3`.
pub fn check_system_k1(m: &MorseCounts) -> Result<FeasibilityVerdict, CertifyError> {
    if m.m.len() < 4 {
        return Err(CertifyError::Domain(format!(
            "k = 1 needs 4 counts, got {}",
            m.m.len()
        )));
    }
    let mut offsets = vec![0; m.m.len()];
    offsets[0] = 1;
    Ok(solve_chain(&m.m, &offsets))
}

/// Offsets `c_{i−1}` placed at `i = 2..=top` for a chain of length `len`.
fn c_offsets(c: &[u64], len: usize, top: usize) -> Vec<u64> {
    let mut offsets = vec![0; len];
    for i in 2..=top.min(len.saturating_sub(1)) {
        offsets[i] = c[i - 1];
    }
    offsets
}

/// Entries of `c` the `k ≥ 2` system reads when `k̄ = 0`: indices `0..=4k−5`.
pub fn c_array_len(k: usize) -> usize {
    4 * k - 4
}

/// The `k ≥ 2` system. `c[n] = dim H_n(B_{k−1}^∂(M))`, unreduced.
pub fn check_system_k(
    m: &MorseCounts,
    c: &[u64],
    k: usize,
) -> Result<FeasibilityVerdict, CertifyError> {
    if k < 2 {
        return Err(CertifyError::Domain(format!("system needs k ≥ 2, got {k}")));
    }
    let len = m.m.len().max(4 * k);
    let need = len - 4;
    if c.len() < need {
        return Err(CertifyError::ShortCArray {
            k,
            need,
            got: c.len(),
        });
    }
    let mut counts = m.m.clone();
    counts.resize(len, 0);
    let top = len - 4;
    Ok(solve_chain(&counts, &c_offsets(c, len, top)))
}

/// Same system with the `c` range cut at `i = 4k−5`, as in the Poincaré
/// polynomial `P(t) = Σ_{i=2}^{4k−5} c_{i−1} tⁱ`.
fn check_system_k_short(m: &MorseCounts, c: &[u64], k: usize) -> FeasibilityVerdict {
    let len = m.m.len().max(4 * k);
    let mut counts = m.m.clone();
    counts.resize(len, 0);
    solve_chain(&counts, &c_offsets(c, len, len - 5))
}

/// `P(t) = Σ_{i=2}^{4k−5} c_{i−1} tⁱ` at `t = −1`; `P = 1` for `k = 1`.
pub fn poincare_at_minus_one(c: &[u64], k: usize) -> i64 {
    if k == 1 {
        return 1;
    }
    (2..=4 * k - 5)
        .map(|i| {
            let v = c.get(i - 1).copied().unwrap_or(0) as i64;
            if i % 2 == 0 {
                v
            } else {
                -v
            }
        })
        .sum()
}

/// `Σ_{A ∈ F_∞} (−1)^{i_∞(A)}`.
pub fn hopf_sum(summary: &CritSummary) -> i64 {
    summary
        .at_infinity()
        .map(|r| if r.i_inf.rem_euclid(2) == 0 { 1 } else { -1 })
        .sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "EXISTENCE_CERTIFIED")]
    ExistenceCertified,
    #[serde(rename = "INCONCLUSIVE")]
    Inconclusive,
}

impl Verdict {
    pub fn from_bool(certified: bool) -> Self {
        if certified {
            Verdict::ExistenceCertified
        } else {
            Verdict::Inconclusive
        }
    }

    pub fn is_certified(self) -> bool {
        self == Verdict::ExistenceCertified
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::ExistenceCertified => "EXISTENCE_CERTIFIED",
            Verdict::Inconclusive => "INCONCLUSIVE",
        })
    }
}

/// Certified iff the Euler sum over `F_∞` misses the target.
pub fn hopf_criterion(summary: &CritSummary, chi_target: i64) -> Verdict {
    Verdict::from_bool(hopf_sum(summary) != chi_target)
}

/// Certified iff no point of `F_∞` has index `l`, some point has index
/// `≤ l − 1`, and the truncated Euler sum misses the target.
pub fn jump_criterion(summary: &CritSummary, l: i64, chi_target: i64) -> Verdict {
    let mut hits_l = false;
    let mut below = 0usize;
    let mut sum = 0i64;
    for r in summary.at_infinity() {
        if r.i_inf == l {
            hits_l = true;
        }
        if r.i_inf <= l - 1 {
            below += 1;
            sum += if r.i_inf.rem_euclid(2) == 0 { 1 } else { -1 };
        }
    }
    Verdict::from_bool(!hits_l && below > 0 && sum != chi_target)
}

/// Range of `l` for the jump criterion: `1..=3` for `k = 1`, `1..=4k−1` after.
pub fn jump_range(k: usize) -> std::ops::RangeInclusive<i64> {
    if k == 1 {
        1..=3
    } else {
        1..=(4 * k as i64 - 1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HopfReport {
    pub sum: i64,
    pub target: i64,
    pub certified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JumpReport {
    pub l: i64,
    pub certified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertifyReport {
    pub k: usize,
    pub kbar: usize,
    pub counts: Vec<u64>,
    pub c_array: Vec<u64>,
    pub system_verdict: FeasibilityVerdict,
    /// `M(−1)` and `P(−1)`.
    pub morse_at_minus_one: i64,
    pub poincare_at_minus_one: i64,
    pub hopf: HopfReport,
    pub jump: Vec<JumpReport>,
    pub verdict: Verdict,
    #[serde(default)]
    pub warnings: Vec<String>,
    #[serde(default)]
    pub diagnostics: Vec<String>,
}

/// Runs the Morse system, the Euler-sum criterion and every jump criterion.
///
/// `c` holds unreduced Betti numbers of `B_{k−1}^∂(M)` (ignored for `k = 1`);
/// `hopf_target` is `1` for `k = 1` and `1 − χ(B_{k−1}^∂(M))` otherwise.
pub fn certify(
    summary: &CritSummary,
    c: &[u64],
    hopf_target: i64,
) -> Result<CertifyReport, CertifyError> {
    let counts = assemble_counts(summary)?;
    let k = summary.k;
    let mut warnings = Vec::new();
    let mut diagnostics = Vec::new();
    if summary.kbar > 0 {
        warnings.push(format!(
            "k̄ = {}: indices shifted by k̄; the sublevel topology for k̄ ≥ 1 is not computed, so the c-array must be supplied for the shifted chain",
            summary.kbar
        ));
    }
    let (system_verdict, c_array) = if k == 1 {
        (check_system_k1(&counts)?, Vec::new())
    } else {
        let v = check_system_k(&counts, c, k)?;
        let short = check_system_k_short(&counts, c, k);
        if short.feasible != v.feasible {
            diagnostics.push(format!(
                "system verdict depends on c_{} (the i = 4k−4 term): feasible = {} with it, {} without",
                4 * k - 5,
                v.feasible,
                short.feasible
            ));
        }
        (v, c[..counts.m.len().max(4 * k) - 4].to_vec())
    };
    let sum = hopf_sum(summary);
    let hopf = HopfReport {
        sum,
        target: hopf_target,
        certified: sum != hopf_target,
    };
    let jump: Vec<JumpReport> = jump_range(k)
        .map(|l| JumpReport {
            l,
            certified: jump_criterion(summary, l, hopf_target).is_certified(),
        })
        .collect();
    let certified = !system_verdict.feasible || hopf.certified || jump.iter().any(|j| j.certified);
    Ok(CertifyReport {
        k,
        kbar: summary.kbar,
        morse_at_minus_one: counts.morse_at_minus_one(),
        poincare_at_minus_one: poincare_at_minus_one(&c_array, k),
        counts: counts.m,
        c_array,
        system_verdict,
        hopf,
        jump,
        verdict: Verdict::from_bool(certified),
        warnings,
        diagnostics,
    })
}
