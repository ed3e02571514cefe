#![allow(dead_code)]

use std::collections::BTreeMap;

use qmorse::barycenter::{chi_barycenter, BarycenterProvider, SpaceDescriptor};
use qmorse::boundary::BoundaryBarycenterInput;
use qmorse::certify::{CritRecord, CritSummary};
use qmorse::functional::Configuration;
use qmorse::graded::BettiTable;
use qmorse::model::{Domain, FlatSlab};
use rand::Rng;

/// One linear equation `lhs = constant + Σ n_v`.
#[derive(Clone, Debug)]
pub struct Equation {
    pub lhs: i64,
    pub constant: i64,
    pub vars: Vec<usize>,
}

/// The feasibility system written out equation by equation.
pub fn system(k: usize, m: &[u64], c: &[u64]) -> (usize, Vec<Equation>) {
    let mi = |i: usize| m.get(i).copied().unwrap_or(0) as i64;
    let ci = |i: usize| c.get(i).copied().unwrap_or(0) as i64;
    let mut eqs = Vec::new();
    if k == 1 {
        eqs.push(Equation { lhs: mi(0), constant: 1, vars: vec![0] });
        for i in 1..=3 {
            eqs.push(Equation { lhs: mi(i), constant: 0, vars: vec![i, i - 1] });
        }
        eqs.push(Equation { lhs: 0, constant: 0, vars: vec![3] });
        return (4, eqs);
    }
    let top = 4 * k - 1;
    eqs.push(Equation { lhs: mi(0), constant: 0, vars: vec![0] });
    eqs.push(Equation { lhs: mi(1), constant: 0, vars: vec![0, 1] });
    for i in 2..=4 * k - 4 {
        eqs.push(Equation { lhs: mi(i), constant: ci(i - 1), vars: vec![i, i - 1] });
    }
    for i in 4 * k - 3..=top {
        eqs.push(Equation { lhs: mi(i), constant: 0, vars: vec![i, i - 1] });
    }
    eqs.push(Equation { lhs: 0, constant: 0, vars: vec![top] });
    (top + 1, eqs)
}

/// Depth-first enumeration of every `n ∈ [0, bound]^len`, rejecting a branch
/// as soon as an equation whose variables are all assigned fails.
pub fn enumerate_feasible(k: usize, m: &[u64], c: &[u64]) -> bool {
    let (len, eqs) = system(k, m, c);
    let bound: i64 = m.iter().chain(c).map(|&v| v as i64).sum();
    let mut ready: Vec<Vec<&Equation>> = vec![Vec::new(); len];
    for e in &eqs {
        ready[*e.vars.iter().max().unwrap()].push(e);
    }
    fn dfs(depth: usize, n: &mut Vec<i64>, bound: i64, ready: &[Vec<&Equation>]) -> bool {
        if depth == ready.len() {
            return true;
        }
        for v in 0..=bound {
            n[depth] = v;
            let ok = ready[depth]
                .iter()
                .all(|e| e.lhs == e.constant + e.vars.iter().map(|&j| n[j]).sum::<i64>());
            if ok && dfs(depth + 1, n, bound, ready) {
                return true;
            }
        }
        false
    }
    dfs(0, &mut vec![0; len], bound, &ready)
}

/// Random `(m, c)`; half of the instances are built from a nonnegative `n`
/// so that feasible systems are well represented.
pub fn random_instance(rng: &mut impl Rng) -> (usize, Vec<u64>, Vec<u64>) {
    let k = rng.random_range(1..=4usize);
    let clen = if k == 1 { 0 } else { 4 * k - 4 };
    let c: Vec<u64> = (0..clen).map(|_| rng.random_range(0..=10)).collect();
    let m: Vec<u64> = if rng.random_bool(0.5) {
        (0..4 * k).map(|_| rng.random_range(0..=10)).collect()
    } else {
        let mut n: Vec<u64> = (0..4 * k).map(|_| rng.random_range(0..=3)).collect();
        n[4 * k - 1] = 0;
        let (_, eqs) = system(k, &vec![0; 4 * k], &c);
        let mut m: Vec<u64> = eqs
            .iter()
            .take(4 * k)
            .map(|e| (e.constant + e.vars.iter().map(|&j| n[j] as i64).sum::<i64>()) as u64)
            .collect();
        if rng.random_bool(0.3) {
            let i = rng.random_range(0..4 * k);
            m[i] = (m[i] + rng.random_range(0..=2)).min(10);
        }
        m.into_iter().map(|v| v.min(10)).collect()
    };
    (k, m, c)
}

pub fn random_summary(rng: &mut impl Rng) -> CritSummary {
    let k = rng.random_range(1..=4usize);
    let mut records = Vec::new();
    for _ in 0..rng.random_range(0..12) {
        let p = rng.random_range(0..=k / 2);
        let q = k - 2 * p;
        let lo = (p + q) as i64 - 1;
        let hi = (5 * p + 4 * q) as i64 - 1;
        let i_inf = rng.random_range(lo..=hi);
        let s = if rng.random_bool(0.5) { 1 } else { -1 };
        records.push(CritRecord::new(p, q, i_inf, s));
    }
    CritSummary::new(k, 0, rng.random_range(-3..=3), records)
}

/// A reduced table with reduced Euler characteristic `chi` for `B_n` of a
/// 2-dimensional space: the rank goes to degree `2n` when positive and `2n + 1`
/// when negative.
fn table_with_euler(n: usize, chi: i64, spread: u64) -> BettiTable {
    let mut entries = Vec::new();
    if chi >= 0 {
        entries.push((2 * n, chi as u64 + spread));
        if spread > 0 {
            entries.push((2 * n + 1, spread));
        }
    } else {
        entries.push((2 * n + 1, (-chi) as u64 + spread));
        if spread > 0 {
            entries.push((2 * n, spread));
        }
    }
    BettiTable::reduced(entries.into_iter().filter(|&(_, r)| r > 0))
}

/// A surface-like quotient `M/∂M` with `χ = chi_m + 1` and tables up to order 3.
pub fn synthetic_quotient(chi_m: i64, spread: u64) -> BarycenterProvider {
    let chi_q = chi_m + 1;
    let base_reduced = table_with_euler(0, chi_q - 1, 0);
    let mut betti = vec![(0usize, 1u64)];
    for (d, r) in base_reduced.iter() {
        betti.push((if d == 0 { 2 } else { 1 }, r));
    }
    let base = SpaceDescriptor::new(format!("Q{chi_m}"), 2, BettiTable::unreduced(betti), 0).unwrap();
    let mut tables = BTreeMap::new();
    for n in 2..=3 {
        let chi = chi_barycenter(chi_q, n as i64).unwrap() - 1;
        tables.insert(n, table_with_euler(n, chi, spread));
    }
    BarycenterProvider::from_tables(base, tables).unwrap()
}

/// Even-dimensional inputs: one or two boundary circles, several `χ_M`.
pub fn synthetic_inputs() -> Vec<(String, BoundaryBarycenterInput)> {
    let mut out = Vec::new();
    for chi_m in -5i64..=5 {
        for (label, boundary) in [
            ("S1", BarycenterProvider::circle()),
            ("S1+S1", BarycenterProvider::disjoint_union(BarycenterProvider::circle(), BarycenterProvider::circle()).unwrap()),
        ] {
            let spread = (chi_m.unsigned_abs() % 3) as u64;
            let input = BoundaryBarycenterInput::new(boundary, synthetic_quotient(chi_m, spread), chi_m, 2).unwrap();
            out.push((format!("{label}, chi_M = {chi_m}"), input));
        }
    }
    out
}

pub fn gradient_model() -> FlatSlab {
    FlatSlab::from_strs(
        Domain::unit(),
        "2 + 0.3*sin(x1)*cos(x2) + 0.2*x3*x4 + 0.1*x4",
        "0.1*(x1*y1 + x2*y2 + x3*y3) + 0.05*(x4 + y4)",
        false,
    )
    .unwrap()
}

/// Uniform configuration with pairwise separation at least `sep`.
pub fn random_configuration(domain: &Domain, p: usize, q: usize, sep: f64, rng: &mut impl Rng) -> Configuration {
    loop {
        let interior = (0..p)
            .map(|_| {
                [
                    rng.random_range(domain.lo[0]..domain.hi[0]),
                    rng.random_range(domain.lo[1]..domain.hi[1]),
                    rng.random_range(domain.lo[2]..domain.hi[2]),
                    rng.random_range(domain.rho_floor.max(0.2)..domain.x4_max),
                ]
            })
            .collect();
        let boundary = (0..q)
            .map(|_| std::array::from_fn(|a| rng.random_range(domain.lo[a]..domain.hi[a])))
            .collect();
        let cfg = Configuration::new(interior, boundary);
        if cfg.len() < 2 || cfg.min_separation() >= sep {
            return cfg;
        }
    }
}

pub fn bump_model(dkdn: f64) -> FlatSlab {
    let k = format!("1 + exp(-4*((x1-0.1)^2 + (x2+0.2)^2 + x3^2)) * (1 + {dkdn}*x4)");
    FlatSlab::from_strs(Domain::unit(), &k, "0", true).unwrap()
}
