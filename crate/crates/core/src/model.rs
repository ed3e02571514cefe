//! Manifold models: Green function, regular part, curvature data.
//!
//! Both built-in models live on the flat upper half-space `x4 ≥ 0` with
//! boundary `x4 = 0`. A boundary point is given by its chart coordinates
//! `(u1, u2, u3)` and sits at `(u1, u2, u3, 0)`; the normal derivative is
//! `∂/∂x4`. The Green function is the Neumann one built from the image
//! point `x̄ = (x1, x2, x3, −x4)`:
//!
//! ```text
//! G(x, y) = −2 ln|x − y| − 2 ln|x − ȳ| + H_user(x, y)
//! ```

use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::expr::{Expr, ExprError, NVARS};
use crate::interp::{Grid3, GridError};

pub type Point4 = [f64; 4];
pub type Point3 = [f64; 3];

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("expression for {field}: {source}")]
    Expr {
        field: &'static str,
        source: ExprError,
    },
    #[error("grid {path}: {source}")]
    Grid { path: String, source: GridError },
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
    #[error("invalid model: {0}")]
    Invalid(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PointKind {
    Interior,
    Boundary,
}

/// Search box and separation floors.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Domain {
    /// Bounds of the boundary chart `(u1, u2, u3)`.
    pub lo: Point3,
    pub hi: Point3,
    /// Interior points live in `rho_floor ≤ x4 ≤ x4_max`.
    pub x4_max: f64,
    pub rho_floor: f64,
    /// Minimal pairwise distance.
    pub eta_floor: f64,
}

impl Domain {
    pub fn validate(&self) -> Result<(), ModelError> {
        for a in 0..3 {
            if !(self.lo[a] < self.hi[a]) {
                return Err(ModelError::Invalid(format!("box axis {a}: lo must be below hi")));
            }
        }
        if !(self.rho_floor > 0.0 && self.rho_floor < self.x4_max) {
            return Err(ModelError::Invalid("need 0 < rho_floor < x4_max".into()));
        }
        if !(self.eta_floor > 0.0) {
            return Err(ModelError::Invalid("eta_floor must be positive".into()));
        }
        Ok(())
    }

    pub fn unit() -> Self {
        Domain {
            lo: [-1.0; 3],
            hi: [1.0; 3],
            x4_max: 1.0,
            rho_floor: 0.05,
            eta_floor: 0.05,
        }
    }
}

pub fn lift(u: &Point3) -> Point4 {
    [u[0], u[1], u[2], 0.0]
}

pub fn reflect(x: &Point4) -> Point4 {
    [x[0], x[1], x[2], -x[3]]
}

pub fn distance(x: &Point4, y: &Point4) -> f64 {
    x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt()
}

/// What the reduced functionals need to know about `(M, g, K)`.
pub trait ManifoldModel: Send + Sync {
    fn name(&self) -> &str;
    fn domain(&self) -> &Domain;

    fn ln_k(&self, x: &Point4) -> f64;
    fn grad_ln_k(&self, x: &Point4) -> Point4;

    fn k(&self, x: &Point4) -> f64 {
        self.ln_k(x).exp()
    }

    /// `∂ ln K / ∂n` at a boundary point.
    fn dn_ln_k(&self, u: &Point3) -> f64 {
        self.grad_ln_k(&lift(u))[3]
    }

    /// `G(a, x)`.
    fn green(&self, a: &Point4, x: &Point4) -> f64;
    /// Gradient of `G(a, ·)` at `x`.
    fn grad_green(&self, a: &Point4, x: &Point4) -> Point4;

    /// Regular part `H(a, x)` for a base point of the given kind.
    fn regular(&self, a: &Point4, kind: PointKind, x: &Point4) -> f64;
    fn grad_regular(&self, a: &Point4, kind: PointKind, x: &Point4) -> Point4;

    fn scalar_curvature(&self, _x: &Point4) -> f64 {
        0.0
    }

    fn boundary_distance(&self, x: &Point4) -> f64 {
        x[3]
    }

    /// Relative tolerance for analytic-vs-difference gradient checks.
    fn gradient_tolerance(&self) -> f64 {
        1e-6
    }
}

/// Neumann Green function of the half-space plus a smooth symmetric `H_user`.
#[derive(Clone, Debug)]
pub struct SlabGreen {
    h_user: Expr,
    zero: bool,
}

impl SlabGreen {
    pub fn new(h_user: Expr, zero: bool) -> Self {
        SlabGreen { h_user, zero }
    }

    fn vars(a: &Point4, x: &Point4) -> [f64; NVARS] {
        [a[0], a[1], a[2], a[3], x[0], x[1], x[2], x[3]]
    }

    fn h(&self, a: &Point4, x: &Point4) -> f64 {
        self.h_user.eval(&Self::vars(a, x))
    }

    fn grad_h(&self, a: &Point4, x: &Point4) -> Point4 {
        let d = self.h_user.eval_dual(&Self::vars(a, x));
        [d.d[4], d.d[5], d.d[6], d.d[7]]
    }

    pub fn green(&self, a: &Point4, x: &Point4) -> f64 {
        if self.zero {
            return 0.0;
        }
        -2.0 * distance(a, x).ln() - 2.0 * distance(&reflect(a), x).ln() + self.h(a, x)
    }

    pub fn grad_green(&self, a: &Point4, x: &Point4) -> Point4 {
        if self.zero {
            return [0.0; 4];
        }
        let mut g = self.grad_h(a, x);
        add_log_gradient(&mut g, a, x, -2.0);
        add_log_gradient(&mut g, &reflect(a), x, -2.0);
        g
    }

    pub fn regular(&self, a: &Point4, kind: PointKind, x: &Point4) -> f64 {
        if self.zero {
            return 0.0;
        }
        match kind {
            PointKind::Interior => -2.0 * distance(&reflect(a), x).ln() + self.h(a, x),
            PointKind::Boundary => self.h(a, x),
        }
    }

    pub fn grad_regular(&self, a: &Point4, kind: PointKind, x: &Point4) -> Point4 {
        if self.zero {
            return [0.0; 4];
        }
        let mut g = self.grad_h(a, x);
        if kind == PointKind::Interior {
            add_log_gradient(&mut g, &reflect(a), x, -2.0);
        }
        g
    }

    /// Largest `|H_user(x, y) − H_user(y, x)|` over random pairs.
    pub fn symmetry_defect(&self, domain: &Domain, samples: usize, seed: u64) -> f64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..samples)
            .map(|_| {
                let x = random_point(domain, &mut rng);
                let y = random_point(domain, &mut rng);
                (self.h(&x, &y) - self.h(&y, &x)).abs()
            })
            .fold(0.0, f64::max)
    }
}

/// Adds `c ∇_x ln|x − a|`.
fn add_log_gradient(g: &mut Point4, a: &Point4, x: &Point4, c: f64) {
    let r2: f64 = x.iter().zip(a).map(|(p, q)| (p - q) * (p - q)).sum();
    for i in 0..4 {
        g[i] += c * (x[i] - a[i]) / r2;
    }
}

pub fn random_point(domain: &Domain, rng: &mut impl Rng) -> Point4 {
    [
        rng.random_range(domain.lo[0]..domain.hi[0]),
        rng.random_range(domain.lo[1]..domain.hi[1]),
        rng.random_range(domain.lo[2]..domain.hi[2]),
        rng.random_range(domain.rho_floor..domain.x4_max),
    ]
}

/// Flat half-space with `K` and `H_user` given as expressions.
#[derive(Clone, Debug)]
pub struct FlatSlab {
    domain: Domain,
    k: Expr,
    green: SlabGreen,
    curvature: f64,
}

impl FlatSlab {
    pub fn new(domain: Domain, k: Expr, h_user: Expr, zero_green: bool) -> Result<Self, ModelError> {
        domain.validate()?;
        let slab = FlatSlab {
            domain,
            k,
            green: SlabGreen::new(h_user, zero_green),
            curvature: 0.0,
        };
        slab.check(256, 7)?;
        Ok(slab)
    }

    pub fn from_strs(domain: Domain, k: &str, h_user: &str, zero_green: bool) -> Result<Self, ModelError> {
        let k = Expr::parse_with_vars(k, &["x1", "x2", "x3", "x4"])
            .map_err(|source| ModelError::Expr { field: "K", source })?;
        let h = Expr::parse_with_vars(h_user, &["x1", "x2", "x3", "x4", "y1", "y2", "y3", "y4"])
            .map_err(|source| ModelError::Expr { field: "H", source })?;
        Self::new(domain, k, h, zero_green)
    }

    /// Constant scalar curvature used in the `q = 0` branch of `ℒ_K`.
    pub fn with_scalar_curvature(mut self, r: f64) -> Self {
        self.curvature = r;
        self
    }

    fn check(&self, samples: usize, seed: u64) -> Result<(), ModelError> {
        let defect = self.green.symmetry_defect(&self.domain, samples, seed);
        if defect > 1e-10 {
            return Err(ModelError::Invalid(format!(
                "H is not symmetric: defect {defect:.3e} on sampled pairs"
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5a5a);
        for _ in 0..samples {
            let mut x = random_point(&self.domain, &mut rng);
            if rng.random_bool(0.5) {
                x[3] = 0.0;
            }
            let k = self.k.eval(&[x[0], x[1], x[2], x[3], 0.0, 0.0, 0.0, 0.0]);
            if !(k > 0.0 && k.is_finite()) {
                return Err(ModelError::Invalid(format!("K = {k} at {x:?}; K must be positive")));
            }
        }
        Ok(())
    }
}

impl ManifoldModel for FlatSlab {
    fn name(&self) -> &str {
        "flat-slab"
    }

    fn domain(&self) -> &Domain {
        &self.domain
    }

    fn ln_k(&self, x: &Point4) -> f64 {
        self.k.eval(&[x[0], x[1], x[2], x[3], 0.0, 0.0, 0.0, 0.0]).ln()
    }

    fn grad_ln_k(&self, x: &Point4) -> Point4 {
        let d = self.k.eval_dual(&[x[0], x[1], x[2], x[3], 0.0, 0.0, 0.0, 0.0]);
        [d.d[0] / d.v, d.d[1] / d.v, d.d[2] / d.v, d.d[3] / d.v]
    }

    fn green(&self, a: &Point4, x: &Point4) -> f64 {
        self.green.green(a, x)
    }

    fn grad_green(&self, a: &Point4, x: &Point4) -> Point4 {
        self.green.grad_green(a, x)
    }

    fn regular(&self, a: &Point4, kind: PointKind, x: &Point4) -> f64 {
        self.green.regular(a, kind, x)
    }

    fn grad_regular(&self, a: &Point4, kind: PointKind, x: &Point4) -> Point4 {
        self.green.grad_regular(a, kind, x)
    }

    fn scalar_curvature(&self, _x: &Point4) -> f64 {
        self.curvature
    }
}

/// Half-space with `K(x) = K_grid(u) + x4 · dKdn_grid(u)` from boundary samples.
#[derive(Clone, Debug)]
pub struct GridModel {
    domain: Domain,
    k: Grid3,
    dkdn: Option<Grid3>,
    green: SlabGreen,
}

impl GridModel {
    pub fn new(domain: Domain, k: Grid3, dkdn: Option<Grid3>, h_user: Expr, zero_green: bool) -> Result<Self, ModelError> {
        domain.validate()?;
        let model = GridModel {
            domain,
            k,
            dkdn,
            green: SlabGreen::new(h_user, zero_green),
        };
        let defect = model.green.symmetry_defect(&model.domain, 256, 7);
        if defect > 1e-10 {
            return Err(ModelError::Invalid(format!(
                "H is not symmetric: defect {defect:.3e} on sampled pairs"
            )));
        }
        if model.k.min_value() <= 0.0 {
            return Err(ModelError::Invalid("K grid must be positive".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..256 {
            let x = random_point(&model.domain, &mut rng);
            let v = model.k_raw(&x).0;
            if !(v > 0.0) {
                return Err(ModelError::Invalid(format!("K = {v} at {x:?}; K must be positive")));
            }
        }
        Ok(model)
    }

    fn k_raw(&self, x: &Point4) -> (f64, Point4) {
        let u = [x[0], x[1], x[2]];
        let (k0, g0) = self.k.eval_grad(u);
        match &self.dkdn {
            None => (k0, [g0[0], g0[1], g0[2], 0.0]),
            Some(d) => {
                let (k1, g1) = d.eval_grad(u);
                (
                    k0 + x[3] * k1,
                    [g0[0] + x[3] * g1[0], g0[1] + x[3] * g1[1], g0[2] + x[3] * g1[2], k1],
                )
            }
        }
    }
}

impl ManifoldModel for GridModel {
    fn name(&self) -> &str {
        "grid"
    }

    fn domain(&self) -> &Domain {
        &self.domain
    }

    fn ln_k(&self, x: &Point4) -> f64 {
        self.k_raw(x).0.ln()
    }

    fn grad_ln_k(&self, x: &Point4) -> Point4 {
        let (k, g) = self.k_raw(x);
        g.map(|v| v / k)
    }

    fn green(&self, a: &Point4, x: &Point4) -> f64 {
        self.green.green(a, x)
    }

    fn grad_green(&self, a: &Point4, x: &Point4) -> Point4 {
        self.green.grad_green(a, x)
    }

    fn regular(&self, a: &Point4, kind: PointKind, x: &Point4) -> f64 {
        self.green.regular(a, kind, x)
    }

    fn grad_regular(&self, a: &Point4, kind: PointKind, x: &Point4) -> Point4 {
        self.green.grad_regular(a, kind, x)
    }

    fn gradient_tolerance(&self) -> f64 {
        1e-3
    }
}

/// `K` in a model file: an expression or grid files.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum KSpec {
    Expr(String),
    Grid {
        grid: PathBuf,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        dkdn_grid: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelType {
    FlatSlab,
    Grid,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoxSpec {
    pub lo: Point3,
    pub hi: Point3,
    pub x4_max: f64,
}

/// Model file contents.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    #[serde(rename = "type")]
    pub kind: ModelType,
    #[serde(rename = "box")]
    pub bbox: BoxSpec,
    pub rho_floor: f64,
    pub eta_floor: f64,
    #[serde(rename = "K")]
    pub k: KSpec,
    #[serde(rename = "H", default = "zero_expr")]
    pub h: serde_json::Value,
    #[serde(default)]
    pub zero_green: bool,
    #[serde(rename = "R", default)]
    pub scalar_curvature: f64,
}

fn zero_expr() -> serde_json::Value {
    serde_json::Value::String("0".into())
}

impl ModelSpec {
    pub fn domain(&self) -> Domain {
        Domain {
            lo: self.bbox.lo,
            hi: self.bbox.hi,
            x4_max: self.bbox.x4_max,
            rho_floor: self.rho_floor,
            eta_floor: self.eta_floor,
        }
    }

    pub fn load(path: &Path) -> Result<Self, ModelError> {
        let text = std::fs::read_to_string(path).map_err(|source| ModelError::Io {
            path: path.display().to_string(),
            source,
        })?;
        serde_json::from_str(&text).map_err(|source| ModelError::Json {
            path: path.display().to_string(),
            source,
        })
    }

    fn h_expr(&self) -> Result<Expr, ModelError> {
        match &self.h {
            serde_json::Value::String(s) => {
                Expr::parse_with_vars(s, &["x1", "x2", "x3", "x4", "y1", "y2", "y3", "y4"])
                    .map_err(|source| ModelError::Expr { field: "H", source })
            }
            serde_json::Value::Number(n) => Ok(Expr::parse(&n.to_string())
                .map_err(|source| ModelError::Expr { field: "H", source })?),
            _ => Err(ModelError::Unsupported(
                "H must be an expression; gridded H (8-dimensional samples) is not supported".into(),
            )),
        }
    }

    /// Builds the model; relative grid paths resolve against `base_dir`.
    pub fn build(&self, base_dir: &Path) -> Result<Box<dyn ManifoldModel>, ModelError> {
        let domain = self.domain();
        let h = self.h_expr()?;
        match (&self.kind, &self.k) {
            (ModelType::FlatSlab, KSpec::Expr(k)) => {
                let k = Expr::parse_with_vars(k, &["x1", "x2", "x3", "x4"])
                    .map_err(|source| ModelError::Expr { field: "K", source })?;
                Ok(Box::new(
                    FlatSlab::new(domain, k, h, self.zero_green)?.with_scalar_curvature(self.scalar_curvature),
                ))
            }
            (ModelType::Grid, KSpec::Grid { grid, dkdn_grid }) => {
                let k = load_grid(&base_dir.join(grid))?;
                let d = match dkdn_grid {
                    Some(p) => Some(load_grid(&base_dir.join(p))?),
                    None => None,
                };
                Ok(Box::new(GridModel::new(domain, k, d, h, self.zero_green)?))
            }
            (ModelType::FlatSlab, KSpec::Grid { .. }) => Err(ModelError::Invalid(
                "flat-slab needs K as an expression; use type grid for sampled K".into(),
            )),
            (ModelType::Grid, KSpec::Expr(_)) => Err(ModelError::Invalid(
                "grid model needs K = {\"grid\": path}".into(),
            )),
        }
    }
}

pub fn load_grid(path: &Path) -> Result<Grid3, ModelError> {
    let text = std::fs::read_to_string(path).map_err(|source| ModelError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let g: Grid3 = serde_json::from_str(&text).map_err(|source| ModelError::Json {
        path: path.display().to_string(),
        source,
    })?;
    g.validate().map_err(|source| ModelError::Grid {
        path: path.display().to_string(),
        source,
    })?;
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn slab(k: &str, h: &str) -> FlatSlab {
        FlatSlab::from_strs(Domain::unit(), k, h, false).unwrap()
    }

    #[test]
    fn green_is_symmetric_and_neumann() {
        let m = slab("1", "0.1*(x1*y1 + x4*y4)");
        let x = [0.1, 0.2, -0.3, 0.4];
        let y = [-0.2, 0.5, 0.1, 0.25];
        assert!((m.green(&x, &y) - m.green(&y, &x)).abs() < 1e-14);
        let on_boundary = [0.3, -0.1, 0.2, 0.0];
        let g = m.grad_green(&x, &on_boundary);
        // the H_user term contributes 0.1 * x4 = 0.04 to ∂/∂y4
        assert!((g[3] - 0.1 * x[3]).abs() < 1e-14);
    }

    #[test]
    fn green_splits_into_singular_and_regular_parts() {
        let m = slab("1", "0");
        let a = [0.0, 0.0, 0.0, 0.3];
        let x = [0.1, 0.0, 0.0, 0.3];
        let s = -2.0 * distance(&a, &x).ln();
        assert!((m.green(&a, &x) - s - m.regular(&a, PointKind::Interior, &x)).abs() < 1e-14);
        assert!((m.regular(&a, PointKind::Interior, &a) + 2.0 * (0.6f64).ln()).abs() < 1e-14);
        let b = [0.0, 0.0, 0.0, 0.0];
        let s = -4.0 * distance(&b, &x).ln();
        assert!((m.green(&b, &x) - s - m.regular(&b, PointKind::Boundary, &x)).abs() < 1e-14);
    }

    #[test]
    fn regular_part_stays_bounded_near_the_diagonal() {
        let m = slab("1", "0");
        let a = [0.0, 0.0, 0.0, 0.5];
        let reference = m.regular(&a, PointKind::Interior, &a);
        for n in 1..10 {
            let eps = 10f64.powi(-n);
            let x = [eps, 0.0, 0.0, 0.5];
            let h = m.green(&a, &x) + 2.0 * distance(&a, &x).ln();
            assert!((h - reference).abs() < 10.0 * eps);
        }
    }

    #[test]
    fn gradients_match_differences() {
        let m = slab("2 + sin(x1) * exp(x4) + x2^2", "0.3*(x1+y1)^2 + x3*y3");
        let a = [0.1, -0.2, 0.3, 0.4];
        let x = [-0.3, 0.25, 0.1, 0.15];
        let h = 1e-6;
        let g = m.grad_green(&a, &x);
        let r = m.grad_regular(&a, PointKind::Interior, &x);
        let k = m.grad_ln_k(&x);
        for i in 0..4 {
            let mut p = x;
            let mut q = x;
            p[i] += h;
            q[i] -= h;
            let fd = |f: &dyn Fn(&Point4) -> f64| (f(&p) - f(&q)) / (2.0 * h);
            assert!((fd(&|y| m.green(&a, y)) - g[i]).abs() < 1e-7);
            assert!((fd(&|y| m.regular(&a, PointKind::Interior, y)) - r[i]).abs() < 1e-7);
            assert!((fd(&|y| m.ln_k(y)) - k[i]).abs() < 1e-7);
        }
    }

    #[test]
    fn rejects_asymmetric_h_and_nonpositive_k() {
        assert!(matches!(
            FlatSlab::from_strs(Domain::unit(), "1", "x1", false),
            Err(ModelError::Invalid(_))
        ));
        assert!(matches!(
            FlatSlab::from_strs(Domain::unit(), "x1", "0", false),
            Err(ModelError::Invalid(_))
        ));
        assert!(matches!(
            FlatSlab::from_strs(Domain::unit(), "y1", "0", false),
            Err(ModelError::Expr { .. })
        ));
    }

    #[test]
    fn zero_green_data() {
        let m = FlatSlab::from_strs(Domain::unit(), "1", "0", true).unwrap();
        let a = [0.0, 0.0, 0.0, 0.3];
        assert_eq!(m.green(&a, &[0.1, 0.0, 0.0, 0.2]), 0.0);
        assert_eq!(m.regular(&a, PointKind::Interior, &a), 0.0);
    }

    #[test]
    fn grid_model_interpolates_k() {
        let d = Domain::unit();
        let f = |u: [f64; 3]| 2.0 + 0.5 * u[0] - 0.25 * u[1] * u[1];
        let k = Grid3::sample(d.lo, d.hi, [21, 21, 21], f).unwrap();
        let n = Grid3::sample(d.lo, d.hi, [5, 5, 5], |_| 0.3).unwrap();
        let m = GridModel::new(d, k, Some(n), Expr::parse("0").unwrap(), false).unwrap();
        let x = [0.13, 0.31, -0.2, 0.4];
        let expected = f([x[0], x[1], x[2]]) + 0.3 * x[3];
        assert!((m.k(&x) - expected).abs() < 1e-12);
        assert!((m.dn_ln_k(&[0.13, 0.31, -0.2]) - 0.3 / f([0.13, 0.31, -0.2])).abs() < 1e-12);
    }

    #[test]
    fn model_file_round_trip_and_build() {
        let text = r#"{"type":"flat-slab","box":{"lo":[-1,-1,-1],"hi":[1,1,1],"x4_max":1.0},
            "rho_floor":0.05,"eta_floor":0.05,"K":"1 + exp(-(x1^2+x2^2+x3^2))"}"#;
        let spec: ModelSpec = serde_json::from_str(text).unwrap();
        let m = spec.build(Path::new(".")).unwrap();
        assert!((m.k(&[0.0; 4]) - 2.0).abs() < 1e-15);
        let back: ModelSpec = serde_json::from_str(&serde_json::to_string(&spec).unwrap()).unwrap();
        assert_eq!(back, spec);
        let mut grid_h = spec.clone();
        grid_h.h = serde_json::json!({"grid": "h.json"});
        assert!(matches!(grid_h.build(Path::new(".")), Err(ModelError::Unsupported(_))));
    }
}
