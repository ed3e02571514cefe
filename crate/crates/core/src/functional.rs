//! Reduced functionals `F_{p,q}` on configurations of `p` interior and `q`
//! boundary points.
//!
//! ```text
//! F_p^M  = Σ_i H(a_i,a_i) + Σ_{j≠i} G(a_i,a_j) + ½ ln K(a_i)
//! F_q^∂  = Σ_i H(a_i,a_i) + Σ_{j≠i} G(a_i,a_j) +   ln K(a_i)
//! F_{p,q} = 2 F_{p,q}^M + ½ F_{p,q}^∂ = 2 F_p^M + ½ F_q^∂ + 2 Σ_{i≤p<j} G(a_i,a_j)
//! ```
//!
//! The partial functionals `F_i^A = exp(4 E_i)` carry the dependence of
//! `F_{p,q}` on one point; `∂F/∂a_i = 4∇E_i(a_i)` for interior points and
//! `2∇_tan E_i(a_i)` for boundary points.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{distance, lift, ManifoldModel, Point3, Point4, PointKind};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FunctionalError {
    #[error("points {i} and {j} coincide; the functional is singular there")]
    Singular { i: usize, j: usize },
    #[error("point index {index} out of range for {len} points")]
    Index { index: usize, len: usize },
    #[error("the two evaluations of F_pq disagree: {a} vs {b}")]
    Mismatch { a: f64, b: f64 },
    #[error("configuration has {got} coordinates, expected {expected}")]
    Shape { expected: usize, got: usize },
    #[error("value is not finite")]
    NonFinite,
}

/// `p` interior points followed by `q` boundary points.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Configuration {
    pub interior: Vec<Point4>,
    pub boundary: Vec<Point3>,
}

impl Configuration {
    pub fn new(interior: Vec<Point4>, boundary: Vec<Point3>) -> Self {
        Configuration { interior, boundary }
    }

    pub fn p(&self) -> usize {
        self.interior.len()
    }

    pub fn q(&self) -> usize {
        self.boundary.len()
    }

    pub fn k(&self) -> usize {
        2 * self.p() + self.q()
    }

    pub fn len(&self) -> usize {
        self.p() + self.q()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Number of chart coordinates, `4p + 3q`.
    pub fn dim(&self) -> usize {
        4 * self.p() + 3 * self.q()
    }

    /// Point `i` as a point of the half-space.
    pub fn point(&self, i: usize) -> (Point4, PointKind) {
        if i < self.p() {
            (self.interior[i], PointKind::Interior)
        } else {
            (lift(&self.boundary[i - self.p()]), PointKind::Boundary)
        }
    }

    pub fn points(&self) -> impl Iterator<Item = (Point4, PointKind)> + '_ {
        (0..self.len()).map(move |i| self.point(i))
    }

    pub fn to_vec(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(self.dim());
        for x in &self.interior {
            v.extend_from_slice(x);
        }
        for u in &self.boundary {
            v.extend_from_slice(u);
        }
        v
    }

    pub fn from_slice(p: usize, q: usize, v: &[f64]) -> Result<Self, FunctionalError> {
        let expected = 4 * p + 3 * q;
        if v.len() != expected {
            return Err(FunctionalError::Shape {
                expected,
                got: v.len(),
            });
        }
        let interior = (0..p)
            .map(|i| [v[4 * i], v[4 * i + 1], v[4 * i + 2], v[4 * i + 3]])
            .collect();
        let off = 4 * p;
        let boundary = (0..q)
            .map(|i| [v[off + 3 * i], v[off + 3 * i + 1], v[off + 3 * i + 2]])
            .collect();
        Ok(Configuration { interior, boundary })
    }

    /// Interior and boundary points each sorted lexicographically, so that
    /// relabelings of the same configuration compare equal.
    pub fn canonical(&self) -> Self {
        let mut c = self.clone();
        c.interior.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
        c.boundary.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
        c
    }

    /// Smallest distance between two of the points, `∞` for fewer than two.
    pub fn min_separation(&self) -> f64 {
        let pts: Vec<Point4> = self.points().map(|(x, _)| x).collect();
        let mut best = f64::INFINITY;
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                best = best.min(distance(&pts[i], &pts[j]));
            }
        }
        best
    }
}

fn check_distinct(pts: &[Point4], offset: usize) -> Result<(), FunctionalError> {
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            if distance(&pts[i], &pts[j]) == 0.0 {
                return Err(FunctionalError::Singular {
                    i: i + offset,
                    j: j + offset,
                });
            }
        }
    }
    Ok(())
}

fn self_sum(model: &dyn ManifoldModel, pts: &[Point4], kind: PointKind, ln_k_weight: f64) -> f64 {
    let mut total = 0.0;
    for (i, a) in pts.iter().enumerate() {
        total += model.regular(a, kind, a) + ln_k_weight * model.ln_k(a);
        for (j, b) in pts.iter().enumerate() {
            if j != i {
                total += model.green(a, b);
            }
        }
    }
    total
}

/// `F_p^M`.
pub fn f_interior(model: &dyn ManifoldModel, points: &[Point4]) -> Result<f64, FunctionalError> {
    check_distinct(points, 0)?;
    finite(self_sum(model, points, PointKind::Interior, 0.5))
}

/// `F_q^∂`.
pub fn f_boundary(model: &dyn ManifoldModel, points: &[Point3]) -> Result<f64, FunctionalError> {
    let lifted: Vec<Point4> = points.iter().map(lift).collect();
    check_distinct(&lifted, 0)?;
    finite(self_sum(model, &lifted, PointKind::Boundary, 1.0))
}

/// `Σ_{i ≤ p < j} G(a_i, a_j)`.
pub fn cross_sum(model: &dyn ManifoldModel, cfg: &Configuration) -> f64 {
    let mut total = 0.0;
    for a in &cfg.interior {
        for u in &cfg.boundary {
            total += model.green(a, &lift(u));
        }
    }
    total
}

fn finite(v: f64) -> Result<f64, FunctionalError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(FunctionalError::NonFinite)
    }
}

/// The three pieces `(F_p^M, F_q^∂, Σ G(interior, boundary))`.
pub fn f_pq_parts(model: &dyn ManifoldModel, cfg: &Configuration) -> Result<(f64, f64, f64), FunctionalError> {
    let all: Vec<Point4> = cfg.points().map(|(x, _)| x).collect();
    check_distinct(&all, 0)?;
    Ok((
        f_interior(model, &cfg.interior)?,
        f_boundary(model, &cfg.boundary)?,
        finite(cross_sum(model, cfg))?,
    ))
}

/// `F_{p,q}`, evaluated as `2F_{p,q}^M + ½F_{p,q}^∂` and as
/// `2F_p^M + ½F_q^∂ + 2ΣG`; the two must agree to `1e−12` relative.
pub fn f_pq(model: &dyn ManifoldModel, cfg: &Configuration) -> Result<f64, FunctionalError> {
    let (fm, fb, cross) = f_pq_parts(model, cfg)?;
    let f_pq_m = fm + 0.5 * cross;
    let f_pq_b = fb + 2.0 * cross;
    let a = 2.0 * f_pq_m + 0.5 * f_pq_b;
    let b = 2.0 * fm + 0.5 * fb + 2.0 * cross;
    let scale = 1.0f64.max(fm.abs()).max(fb.abs()).max(cross.abs());
    if (a - b).abs() > 1e-12 * scale {
        return Err(FunctionalError::Mismatch { a, b });
    }
    Ok(a)
}

/// Exponent `E_i(x)` of the partial functional `F_i^A = exp(4E_i)`.
pub fn partial_exponent(
    model: &dyn ManifoldModel,
    cfg: &Configuration,
    i: usize,
    x: &Point4,
) -> Result<f64, FunctionalError> {
    let n = cfg.len();
    if i >= n {
        return Err(FunctionalError::Index { index: i, len: n });
    }
    let (a, kind) = cfg.point(i);
    let mut e = 0.25 * model.ln_k(x);
    let (own, same, other) = match kind {
        PointKind::Interior => (1.0, 1.0, 0.5),
        PointKind::Boundary => (0.5, 0.5, 1.0),
    };
    e += own * model.regular(&a, kind, x);
    for j in 0..n {
        if j == i {
            continue;
        }
        let (b, kind_j) = cfg.point(j);
        let w = if kind_j == kind { same } else { other };
        e += w * model.green(&b, x);
    }
    finite(e)
}

/// `∇E_i(x)`.
pub fn grad_partial_exponent(
    model: &dyn ManifoldModel,
    cfg: &Configuration,
    i: usize,
    x: &Point4,
) -> Result<Point4, FunctionalError> {
    let n = cfg.len();
    if i >= n {
        return Err(FunctionalError::Index { index: i, len: n });
    }
    let (a, kind) = cfg.point(i);
    let (own, same, other) = match kind {
        PointKind::Interior => (1.0, 1.0, 0.5),
        PointKind::Boundary => (0.5, 0.5, 1.0),
    };
    let mut g = model.grad_ln_k(x).map(|v| 0.25 * v);
    axpy(&mut g, own, &model.grad_regular(&a, kind, x));
    for j in 0..n {
        if j == i {
            continue;
        }
        let (b, kind_j) = cfg.point(j);
        let w = if kind_j == kind { same } else { other };
        axpy(&mut g, w, &model.grad_green(&b, x));
    }
    Ok(g)
}

fn axpy(y: &mut Point4, a: f64, x: &Point4) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

/// `F_i^A(a_i)`.
pub fn partial_f(model: &dyn ManifoldModel, cfg: &Configuration, i: usize) -> Result<f64, FunctionalError> {
    if i >= cfg.len() {
        return Err(FunctionalError::Index { index: i, len: cfg.len() });
    }
    let (a, _) = cfg.point(i);
    partial_f_at(model, cfg, i, &a)
}

/// `F_i^A(x)`.
pub fn partial_f_at(
    model: &dyn ManifoldModel,
    cfg: &Configuration,
    i: usize,
    x: &Point4,
) -> Result<f64, FunctionalError> {
    Ok((4.0 * partial_exponent(model, cfg, i, x)?).exp())
}

/// Gradient of `F_{p,q}` in chart coordinates, laid out like
/// [`Configuration::to_vec`]: four entries per interior point, then three
/// per boundary point.
pub fn grad_f_pq(model: &dyn ManifoldModel, cfg: &Configuration) -> Result<Vec<f64>, FunctionalError> {
    let mut out = Vec::with_capacity(cfg.dim());
    for i in 0..cfg.len() {
        let (a, kind) = cfg.point(i);
        let g = grad_partial_exponent(model, cfg, i, &a)?;
        match kind {
            PointKind::Interior => out.extend(g.iter().map(|v| 4.0 * v)),
            PointKind::Boundary => out.extend(g[..3].iter().map(|v| 2.0 * v)),
        }
    }
    Ok(out)
}

/// Central differences of `F_{p,q}` with step `h`.
pub fn fd_gradient(model: &dyn ManifoldModel, cfg: &Configuration, h: f64) -> Result<Vec<f64>, FunctionalError> {
    let x = cfg.to_vec();
    let (p, q) = (cfg.p(), cfg.q());
    let mut out = Vec::with_capacity(x.len());
    for i in 0..x.len() {
        let mut a = x.clone();
        let mut b = x.clone();
        a[i] += h;
        b[i] -= h;
        let fa = f_pq(model, &Configuration::from_slice(p, q, &a)?)?;
        let fb = f_pq(model, &Configuration::from_slice(p, q, &b)?)?;
        out.push((fa - fb) / (2.0 * h));
    }
    Ok(out)
}

/// `ℒ_K(A)` together with how it was obtained.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LkValue {
    pub value: f64,
    /// `"boundary"` for `q ≠ 0`, `"interior"` for `q = 0`.
    pub branch: String,
    /// For `q = 0`: `l_K/4` from `√F_i (4ΔE_i + 16|∇E_i|²)`, an independent
    /// evaluation of the same quantity.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alternate: Option<f64>,
    /// `q = 0` away from a critical point: `l_K = 4ℒ_K` is not guaranteed.
    #[serde(default)]
    pub caveat: bool,
}

/// Step for the finite-difference Laplacian of `F_i^A`.
pub const LAPLACIAN_STEP: f64 = 1e-3;

/// `ℒ_K(A)`. For `q ≠ 0` it is `Σ_{boundary i} (F_i^A)^{1/4}(a_i) ∂ln K/∂n(a_i)`;
/// for `q = 0` it is `l_K(A)/4` with
/// `l_K = Σ_i ΔF_i^A(a_i)/√F_i^A(a_i) − (2/3) R(a_i) √F_i^A(a_i)`.
pub fn lk(model: &dyn ManifoldModel, cfg: &Configuration) -> Result<LkValue, FunctionalError> {
    if cfg.q() > 0 {
        let mut total = 0.0;
        for j in 0..cfg.q() {
            let i = cfg.p() + j;
            let f = partial_f(model, cfg, i)?;
            total += f.powf(0.25) * model.dn_ln_k(&cfg.boundary[j]);
        }
        return Ok(LkValue {
            value: total,
            branch: "boundary".into(),
            alternate: None,
            caveat: false,
        });
    }
    let h = LAPLACIAN_STEP;
    let mut l_fd = 0.0;
    let mut l_exact = 0.0;
    let mut grad_sq_max = 0.0f64;
    for i in 0..cfg.p() {
        let a = cfg.interior[i];
        let f0 = partial_f_at(model, cfg, i, &a)?;
        let mut lap = 0.0;
        let mut lap_e = 0.0;
        for d in 0..4 {
            let mut xp = a;
            let mut xm = a;
            xp[d] += h;
            xm[d] -= h;
            lap += (partial_f_at(model, cfg, i, &xp)? - 2.0 * f0 + partial_f_at(model, cfg, i, &xm)?) / (h * h);
            let gp = grad_partial_exponent(model, cfg, i, &xp)?;
            let gm = grad_partial_exponent(model, cfg, i, &xm)?;
            lap_e += (gp[d] - gm[d]) / (2.0 * h);
        }
        let g = grad_partial_exponent(model, cfg, i, &a)?;
        let g2: f64 = g.iter().map(|v| v * v).sum();
        grad_sq_max = grad_sq_max.max(g2);
        let r = model.scalar_curvature(&a);
        let s = f0.sqrt();
        l_fd += lap / s - (2.0 / 3.0) * r * s;
        l_exact += s * (4.0 * lap_e + 16.0 * g2) - (2.0 / 3.0) * r * s;
    }
    Ok(LkValue {
        value: 0.25 * l_fd,
        branch: "interior".into(),
        alternate: Some(0.25 * l_exact),
        caveat: grad_sq_max.sqrt() > 1e-6,
    })
}

/// Energy of a critical point at infinity at level `k`:
/// `−(20/3)kπ² − 4kπ² ln(kπ²/6) − 8π² F`.
pub fn energy_at_infinity(f_value: f64, k: usize) -> f64 {
    let k = k as f64;
    let pi2 = PI * PI;
    -(20.0 / 3.0) * k * pi2 - 4.0 * k * pi2 * (k * pi2 / 6.0).ln() - 8.0 * pi2 * f_value
}
