//! Critical points of `F_{p,q}` and their data at infinity.
//!
//! Each start is drawn from its own ChaCha stream (`seed + start index`).
//! Starts cycle through three pre-phases (gradient ascent on `F`, gradient
//! descent on `F`, none) and are then driven to a zero of `∇F_{p,q}` by
//! minimizing `½|∇F|²`: Newton steps when they decrease the residual,
//! steepest descent on the residual (`−H∇F`) otherwise. Starts run in parallel; results are collected in start order,
//! so the output does not depend on scheduling.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::certify::{CritRecord, CritSummary};
use crate::functional::{self, energy_at_infinity, f_pq, grad_f_pq, Configuration};
use crate::model::{random_point, Domain, ManifoldModel};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SearchConfig {
    pub starts: usize,
    pub seed: u64,
    /// Convergence threshold on `|∇F|` in chart units.
    pub grad_tol: f64,
    /// Iterations of the gradient-flow pre-phase; also added to the
    /// refinement budget.
    pub descent_iters: usize,
    pub max_newton: usize,
    pub dedup_radius: f64,
    pub hessian_step: f64,
    /// Hessian eigenvalues closer to zero than this are degenerate.
    pub nd_floor_hessian: f64,
    /// `|ℒ_K|` below this is degenerate.
    pub nd_floor_lk: f64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            starts: 64,
            seed: 0,
            grad_tol: 1e-9,
            descent_iters: 200,
            max_newton: 50,
            dedup_radius: 1e-3,
            hessian_step: 1e-4,
            nd_floor_hessian: 1e-8,
            nd_floor_lk: 1e-10,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CritPointAtInfinity {
    pub p: usize,
    pub q: usize,
    pub config: Configuration,
    pub f_value: f64,
    pub grad_norm: f64,
    pub hessian_eigenvalues: Vec<f64>,
    pub morse_index: usize,
    pub i_inf: i64,
    pub lk_value: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lk_alternate: Option<f64>,
    pub lk_sign: i8,
    pub energy: f64,
    pub nondegenerate: bool,
    /// Index of the first start that reached this point.
    pub start: usize,
}

impl CritPointAtInfinity {
    pub fn record(&self) -> CritRecord {
        CritRecord::new(self.p, self.q, self.i_inf, self.lk_sign)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub p: usize,
    pub q: usize,
    /// Nondegenerate critical points.
    pub points: Vec<CritPointAtInfinity>,
    /// Converged points failing the nondegeneracy floors.
    pub degenerate: Vec<CritPointAtInfinity>,
    pub nd: bool,
    pub starts: usize,
    pub converged_starts: usize,
    pub diagnostics: Vec<String>,
}

/// Symmetrized finite-difference Hessian of `F_{p,q}` from the analytic gradient.
pub fn hessian(
    model: &dyn ManifoldModel,
    p: usize,
    q: usize,
    x: &[f64],
    h: f64,
) -> Result<DMatrix<f64>, functional::FunctionalError> {
    let n = x.len();
    let mut m = DMatrix::zeros(n, n);
    for j in 0..n {
        let mut a = x.to_vec();
        let mut b = x.to_vec();
        a[j] += h;
        b[j] -= h;
        let ga = grad_f_pq(model, &Configuration::from_slice(p, q, &a)?)?;
        let gb = grad_f_pq(model, &Configuration::from_slice(p, q, &b)?)?;
        for i in 0..n {
            m[(i, j)] = (ga[i] - gb[i]) / (2.0 * h);
        }
    }
    Ok((&m + m.transpose()) * 0.5)
}

fn grad_at(model: &dyn ManifoldModel, p: usize, q: usize, x: &[f64]) -> Option<Vec<f64>> {
    let c = Configuration::from_slice(p, q, x).ok()?;
    let g = grad_f_pq(model, &c).ok()?;
    g.iter().all(|v| v.is_finite()).then_some(g)
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Clamps every coordinate into the search box; interior points stay at
/// least `rho_floor` away from the boundary.
fn project(domain: &Domain, p: usize, q: usize, x: &mut [f64]) {
    for i in 0..p {
        for a in 0..3 {
            x[4 * i + a] = x[4 * i + a].clamp(domain.lo[a], domain.hi[a]);
        }
        x[4 * i + 3] = x[4 * i + 3].clamp(domain.rho_floor, domain.x4_max);
    }
    for j in 0..q {
        for a in 0..3 {
            let k = 4 * p + 3 * j + a;
            x[k] = x[k].clamp(domain.lo[a], domain.hi[a]);
        }
    }
}

fn random_config(domain: &Domain, p: usize, q: usize, rng: &mut ChaCha8Rng) -> Option<Configuration> {
    for _ in 0..1000 {
        let interior = (0..p).map(|_| random_point(domain, rng)).collect();
        let boundary = (0..q)
            .map(|_| std::array::from_fn(|a| rng.random_range(domain.lo[a]..domain.hi[a])))
            .collect();
        let c = Configuration::new(interior, boundary);
        if c.min_separation() >= domain.eta_floor {
            return Some(c);
        }
    }
    None
}

/// Which way a start is pre-conditioned before refinement.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Flow {
    Ascent,
    Descent,
    None,
}

impl Flow {
    fn for_start(s: usize) -> Self {
        match s % 3 {
            0 => Flow::Ascent,
            1 => Flow::Descent,
            _ => Flow::None,
        }
    }
}

/// Normalized gradient flow on `F` with an adaptive step, stopped once the
/// gradient is small enough for Newton refinement to take over.
fn gradient_flow(
    model: &dyn ManifoldModel,
    p: usize,
    q: usize,
    mut x: Vec<f64>,
    flow: Flow,
    iters: usize,
) -> Vec<f64> {
    let sign = match flow {
        Flow::Ascent => 1.0,
        Flow::Descent => -1.0,
        Flow::None => return x,
    };
    let domain = model.domain();
    let value = |x: &[f64]| {
        Configuration::from_slice(p, q, x)
            .ok()
            .and_then(|c| f_pq(model, &c).ok())
            .filter(|v| v.is_finite())
    };
    let Some(mut f) = value(&x) else { return x };
    let mut alpha = 0.05;
    for _ in 0..iters {
        let Some(g) = grad_at(model, p, q, &x) else { break };
        let gn = norm(&g);
        if gn < 1e-4 || alpha < 1e-10 {
            break;
        }
        let mut trial: Vec<f64> = x.iter().zip(&g).map(|(a, d)| a + sign * alpha * d / gn).collect();
        project(domain, p, q, &mut trial);
        let sep_ok = Configuration::from_slice(p, q, &trial)
            .map(|c| c.min_separation() >= domain.eta_floor)
            .unwrap_or(false);
        match value(&trial) {
            Some(ft) if sep_ok && sign * (ft - f) > 0.0 => {
                x = trial;
                f = ft;
                alpha = (alpha * 1.5).min(0.5);
            }
            _ => alpha *= 0.5,
        }
    }
    x
}

/// Drives one start to a critical point; returns the point and `|∇F|`.
pub fn refine(
    model: &dyn ManifoldModel,
    p: usize,
    q: usize,
    start: &Configuration,
    cfg: &SearchConfig,
) -> Option<(Vec<f64>, f64)> {
    let domain = model.domain();
    let mut x = start.to_vec();
    let mut g = grad_at(model, p, q, &x)?;
    let mut gn = norm(&g);
    let budget = cfg.descent_iters + cfg.max_newton;
    for _ in 0..budget {
        if gn <= cfg.grad_tol {
            return Some((x, gn));
        }
        let h = hessian(model, p, q, &x, cfg.hessian_step).ok()?;
        let gv = DVector::from_column_slice(&g);
        let newton = h.clone().lu().solve(&(-&gv));
        let steepest = -(&h * &gv);
        let mut moved = false;
        for dir in newton.into_iter().chain(std::iter::once(steepest)) {
            if !dir.iter().all(|v| v.is_finite()) {
                continue;
            }
            let mut t = 1.0;
            for _ in 0..40 {
                let mut trial: Vec<f64> = x.iter().zip(dir.iter()).map(|(a, d)| a + t * d).collect();
                project(domain, p, q, &mut trial);
                if let Some(gt) = grad_at(model, p, q, &trial) {
                    let nt = norm(&gt);
                    if nt < gn {
                        x = trial;
                        g = gt;
                        gn = nt;
                        moved = true;
                        break;
                    }
                }
                t *= 0.5;
            }
            if moved {
                break;
            }
        }
        if !moved {
            break;
        }
    }
    (gn <= cfg.grad_tol).then_some((x, gn))
}

/// Morse index, `i_∞`, `ℒ_K`, energy and nondegeneracy at a critical point.
pub fn classify(
    model: &dyn ManifoldModel,
    p: usize,
    q: usize,
    x: &[f64],
    grad_norm: f64,
    start: usize,
    cfg: &SearchConfig,
) -> Result<CritPointAtInfinity, functional::FunctionalError> {
    let config = Configuration::from_slice(p, q, x)?;
    let f_value = f_pq(model, &config)?;
    let h = hessian(model, p, q, x, cfg.hessian_step)?;
    let eig = SymmetricEigen::new(h).eigenvalues;
    let mut eigenvalues: Vec<f64> = eig.iter().copied().collect();
    eigenvalues.sort_by(|a, b| a.total_cmp(b));
    let morse_index = eigenvalues.iter().filter(|&&v| v < 0.0).count();
    let spectrum_ok = eigenvalues.iter().all(|v| v.abs() >= cfg.nd_floor_hessian);
    let lk = functional::lk(model, &config)?;
    let lk_sign = if lk.value.abs() < cfg.nd_floor_lk {
        0
    } else if lk.value < 0.0 {
        -1
    } else {
        1
    };
    let i_inf = (5 * p + 4 * q) as i64 - 1 - morse_index as i64;
    Ok(CritPointAtInfinity {
        p,
        q,
        config,
        f_value,
        grad_norm,
        hessian_eigenvalues: eigenvalues,
        morse_index,
        i_inf,
        lk_value: lk.value,
        lk_alternate: lk.alternate,
        lk_sign,
        energy: energy_at_infinity(f_value, 2 * p + q),
        nondegenerate: spectrum_ok && lk_sign != 0,
        start,
    })
}

fn config_distance(a: &Configuration, b: &Configuration) -> f64 {
    let (x, y) = (a.canonical().to_vec(), b.canonical().to_vec());
    x.iter().zip(&y).map(|(u, v)| (u - v) * (u - v)).sum::<f64>().sqrt()
}

/// Multi-start search for the critical points of `F_{p,q}`.
pub fn find_critical_points(model: &dyn ManifoldModel, p: usize, q: usize, cfg: &SearchConfig) -> SearchOutcome {
    let mut diagnostics = Vec::new();
    if p + q == 0 {
        diagnostics.push("p = q = 0: nothing to search".into());
        return SearchOutcome {
            p,
            q,
            points: vec![],
            degenerate: vec![],
            nd: true,
            starts: 0,
            converged_starts: 0,
            diagnostics,
        };
    }
    let domain = model.domain().clone();
    let results: Vec<Option<(Vec<f64>, f64)>> = (0..cfg.starts)
        .into_par_iter()
        .map(|s| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(s as u64));
            let start = random_config(&domain, p, q, &mut rng)?;
            let x = gradient_flow(model, p, q, start.to_vec(), Flow::for_start(s), cfg.descent_iters);
            refine(model, p, q, &Configuration::from_slice(p, q, &x).ok()?, cfg)
        })
        .collect();
    let converged_starts = results.iter().filter(|r| r.is_some()).count();
    let mut found: Vec<CritPointAtInfinity> = Vec::new();
    for (s, r) in results.into_iter().enumerate() {
        let Some((x, gn)) = r else { continue };
        let Ok(c) = Configuration::from_slice(p, q, &x) else { continue };
        if c.min_separation() < domain.eta_floor {
            continue;
        }
        if found.iter().any(|f| config_distance(&f.config, &c) < cfg.dedup_radius) {
            continue;
        }
        match classify(model, p, q, &x, gn, s, cfg) {
            Ok(pt) => found.push(pt),
            Err(e) => diagnostics.push(format!("start {s}: classification failed: {e}")),
        }
    }
    if converged_starts == 0 {
        diagnostics.push(format!(
            "none of the {} starts converged to |∇F| ≤ {:e}",
            cfg.starts, cfg.grad_tol
        ));
    }
    let (points, degenerate): (Vec<_>, Vec<_>) = found.into_iter().partition(|pt| pt.nondegenerate);
    for d in &degenerate {
        diagnostics.push(format!(
            "degenerate critical point near {:?}: min |eigenvalue| = {:.3e}, ℒ_K = {:.3e}; excluded",
            d.config.to_vec(),
            d.hessian_eigenvalues.iter().map(|v| v.abs()).fold(f64::INFINITY, f64::min),
            d.lk_value
        ));
    }
    SearchOutcome {
        p,
        q,
        nd: degenerate.is_empty(),
        points,
        degenerate,
        starts: cfg.starts,
        converged_starts,
        diagnostics,
    }
}

/// `true` iff every point is nondegenerate (vacuous for an empty list).
pub fn nd_check(points: &[CritPointAtInfinity], cfg: &SearchConfig) -> bool {
    points.iter().all(|pt| {
        pt.hessian_eigenvalues.iter().all(|v| v.abs() >= cfg.nd_floor_hessian) && pt.lk_value.abs() >= cfg.nd_floor_lk
    })
}

/// All `(p, q)` with `2p + q = k`.
pub fn strata(k: usize) -> Vec<(usize, usize)> {
    (0..=k / 2).map(|p| (p, k - 2 * p)).collect()
}

/// Searches every stratum of level `k` and gathers the certifier input.
pub fn summarize(
    model: &dyn ManifoldModel,
    k: usize,
    kbar: usize,
    chi_m: i64,
    cfg: &SearchConfig,
) -> (CritSummary, Vec<SearchOutcome>) {
    let outcomes: Vec<SearchOutcome> = strata(k)
        .into_iter()
        .map(|(p, q)| find_critical_points(model, p, q, cfg))
        .collect();
    let records = outcomes
        .iter()
        .flat_map(|o| o.points.iter().map(|pt| pt.record()))
        .collect();
    (CritSummary::new(k, kbar, chi_m, records), outcomes)
}
