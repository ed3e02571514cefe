//! Standard and truncated bubbles, a finite-difference check of the bubble
//! equation `Δ²δ = 6e^{4δ}`, and the leading terms of the bubble expansions.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{distance, ManifoldModel, Point4, PointKind};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BubbleError {
    #[error("bubble scale must be positive and finite, got {0}")]
    Scale(f64),
    #[error("cutoff radius must be positive and finite, got {0}")]
    Radius(f64),
    #[error("step {h} does not fit: the stencil reaches {reach} but the sample box allows {room}")]
    Stencil { h: f64, reach: f64, room: f64 },
    #[error("scale {lambda} is below the expansion floor {floor}")]
    BelowFloor { lambda: f64, floor: f64 },
    #[error("{0} needs a distinct point, got the centre itself")]
    AtCentre(&'static str),
}

/// `δ_{b,λ}(y) = ln(2λ / (1 + λ²|y − b|²))`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bubble {
    pub center: Point4,
    pub lambda: f64,
}

impl Bubble {
    pub fn new(center: Point4, lambda: f64) -> Result<Self, BubbleError> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(BubbleError::Scale(lambda));
        }
        Ok(Bubble { center, lambda })
    }

    pub fn unit() -> Self {
        Bubble {
            center: [0.0; 4],
            lambda: 1.0,
        }
    }

    /// Gradient of `δ` at `y`. On the hyperplane `y4 = b4` the last entry vanishes.
    pub fn gradient(&self, y: &Point4) -> Point4 {
        let l2 = self.lambda * self.lambda;
        let r2 = dist2(y, &self.center);
        let c = -2.0 * l2 / (1.0 + l2 * r2);
        std::array::from_fn(|i| c * (y[i] - self.center[i]))
    }
}

pub fn eval_bubble(bubble: &Bubble, y: &Point4) -> f64 {
    let l = bubble.lambda;
    (2.0 * l).ln() - (l * l * dist2(y, &bubble.center)).ln_1p()
}

fn dist2(a: &Point4, b: &Point4) -> f64 {
    a.iter().zip(b).map(|(p, q)| (p - q) * (p - q)).sum()
}

/// Second-order 4-D Laplacian stencil (9 points).
pub fn fd_laplacian(f: &impl Fn(&Point4) -> f64, y: &Point4, h: f64) -> f64 {
    let mut acc = -8.0 * f(y);
    for i in 0..4 {
        let mut p = *y;
        p[i] += h;
        acc += f(&p);
        p[i] = y[i] - h;
        acc += f(&p);
    }
    acc / (h * h)
}

/// `Δ_h ∘ Δ_h`, reaching `2h` along each axis.
pub fn fd_bilaplacian(f: &impl Fn(&Point4) -> f64, y: &Point4, h: f64) -> f64 {
    fd_laplacian(&|p: &Point4| fd_laplacian(f, p, h), y, h)
}

/// Pointwise `Δ_h²δ − 6e^{4δ}`.
pub fn pde_residual_at(bubble: &Bubble, h: f64, y: &Point4) -> f64 {
    let f = |p: &Point4| eval_bubble(bubble, p);
    fd_bilaplacian(&f, y, h) - 6.0 * (4.0 * f(y)).exp()
}

/// Where the PDE residual is sampled. The sample box is the cube of
/// half-width `box_half_width / λ` around the centre. Sample points form a
/// lattice with `points_per_axis` nodes per axis on the inner cube of half the
/// width, so the stencil reach `2h` must not exceed that margin.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PdeSampling {
    pub box_half_width: f64,
    pub points_per_axis: usize,
}

impl Default for PdeSampling {
    fn default() -> Self {
        PdeSampling {
            box_half_width: 2.0,
            points_per_axis: 5,
        }
    }
}

impl PdeSampling {
    pub fn points(&self, bubble: &Bubble) -> Vec<Point4> {
        let w = 0.5 * self.box_half_width / bubble.lambda;
        let n = self.points_per_axis.max(1);
        let coord = |j: usize| {
            if n == 1 {
                0.0
            } else {
                -w + 2.0 * w * j as f64 / (n - 1) as f64
            }
        };
        let mut out = Vec::with_capacity(n.pow(4));
        for i0 in 0..n {
            for i1 in 0..n {
                for i2 in 0..n {
                    for i3 in 0..n {
                        let off = [coord(i0), coord(i1), coord(i2), coord(i3)];
                        out.push(std::array::from_fn(|a| bubble.center[a] + off[a]));
                    }
                }
            }
        }
        out
    }

    fn check_step(&self, bubble: &Bubble, h: f64) -> Result<(), BubbleError> {
        let room = 0.5 * self.box_half_width / bubble.lambda;
        let reach = 2.0 * h;
        if !(h > 0.0) || reach > room {
            return Err(BubbleError::Stencil { h, reach, room });
        }
        Ok(())
    }
}

/// Largest `|Δ_h²δ − 6e^{4δ}|` over the default sample lattice.
pub fn bubble_pde_residual(bubble: &Bubble, h: f64) -> Result<f64, BubbleError> {
    bubble_pde_residual_with(bubble, h, &PdeSampling::default())
}

pub fn bubble_pde_residual_with(bubble: &Bubble, h: f64, sampling: &PdeSampling) -> Result<f64, BubbleError> {
    sampling.check_step(bubble, h)?;
    Ok(sampling
        .points(bubble)
        .iter()
        .map(|y| pde_residual_at(bubble, h, y).abs())
        .fold(0.0, f64::max))
}

/// Residuals at `h` and `h/2` and the observed order `log2(r(h) / r(h/2))`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub lambda: f64,
    pub h: f64,
    pub residual_h: f64,
    pub residual_half: f64,
    pub order: f64,
}

pub fn pde_convergence(bubble: &Bubble, h: f64) -> Result<ConvergenceReport, BubbleError> {
    let residual_h = bubble_pde_residual(bubble, h)?;
    let residual_half = bubble_pde_residual(bubble, 0.5 * h)?;
    Ok(ConvergenceReport {
        lambda: bubble.lambda,
        h,
        residual_h,
        residual_half,
        order: (residual_h / residual_half).log2(),
    })
}

/// Monotone `C¹` cutoff: `χ(s) = s` on `[0, ρ]`, `2ρ` beyond `2ρ`, and the
/// cubic `ρ(−t³ + t² + t + 1)` with `t = (s − ρ)/ρ` in between.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cutoff {
    pub rho: f64,
}

impl Cutoff {
    pub fn new(rho: f64) -> Result<Self, BubbleError> {
        if !(rho > 0.0 && rho.is_finite()) {
            return Err(BubbleError::Radius(rho));
        }
        Ok(Cutoff { rho })
    }

    pub fn eval(&self, s: f64) -> f64 {
        let rho = self.rho;
        if s <= rho {
            s
        } else if s >= 2.0 * rho {
            2.0 * rho
        } else {
            let t = (s - rho) / rho;
            rho * (((-t + 1.0) * t + 1.0) * t + 1.0)
        }
    }

    pub fn derivative(&self, s: f64) -> f64 {
        let rho = self.rho;
        if s <= rho {
            1.0
        } else if s >= 2.0 * rho {
            0.0
        } else {
            let t = (s - rho) / rho;
            -3.0 * t * t + 2.0 * t + 1.0
        }
    }
}

/// `δ̂_{a,λ}(x) = ln(2λ / (1 + λ²χ_ρ²(d(a, x))))` with the flat distance.
pub fn truncated_bubble(cutoff: &Cutoff, a: &Point4, lambda: f64, x: &Point4) -> f64 {
    let c = cutoff.eval(distance(a, x));
    (2.0 * lambda).ln() - (lambda * lambda * c * c).ln_1p()
}

/// Step of the finite-difference Laplacian used on `H` and `G`.
pub const EXPANSION_LAPLACIAN_STEP: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExpansionKind {
    /// `φ_{a,λ}` near `a`.
    Profile,
    /// `φ_{a,λ}` away from `a`.
    Exterior,
    /// `⟨Pφ, φ⟩`.
    SelfInteraction,
    /// `⟨Pφ, λ∂_λφ⟩`.
    SelfScaleDerivative,
}

/// A closed-form expansion split into its `λ`-independent-order part and the
/// `1/λ²` correction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Expansion {
    pub kind: ExpansionKind,
    pub center_kind: PointKind,
    pub lambda: f64,
    pub leading: f64,
    pub correction: f64,
    pub value: f64,
    pub laplacian_step: f64,
}

/// Evaluates expansions for `λ ≥ lambda_floor` with cutoff radius `ρ`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Expander {
    pub cutoff: Cutoff,
    pub lambda_floor: f64,
}

impl Expander {
    pub fn new(rho: f64, lambda_floor: f64) -> Result<Self, BubbleError> {
        Ok(Expander {
            cutoff: Cutoff::new(rho)?,
            lambda_floor,
        })
    }

    fn check(&self, lambda: f64) -> Result<(), BubbleError> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(BubbleError::Scale(lambda));
        }
        if lambda < self.lambda_floor {
            return Err(BubbleError::BelowFloor {
                lambda,
                floor: self.lambda_floor,
            });
        }
        Ok(())
    }

    /// Leading terms of `φ_{a,λ}(x)`, for `x` near (`Profile`) or away from
    /// (`Exterior`) the centre. A boundary centre carries half of `H` and `G`.
    pub fn field(
        &self,
        model: &dyn ManifoldModel,
        kind: ExpansionKind,
        center_kind: PointKind,
        a: &Point4,
        lambda: f64,
        x: &Point4,
    ) -> Result<Expansion, BubbleError> {
        self.check(lambda)?;
        let share = match center_kind {
            PointKind::Interior => 1.0,
            PointKind::Boundary => 0.5,
        };
        let step = EXPANSION_LAPLACIAN_STEP;
        let (leading, lap) = match kind {
            ExpansionKind::Profile => {
                let h = |p: &Point4| model.regular(a, center_kind, p);
                let lead = truncated_bubble(&self.cutoff, a, lambda, x) + (0.5 * lambda).ln() + share * h(x);
                (lead, fd_laplacian(&h, x, step))
            }
            ExpansionKind::Exterior => {
                if distance(a, x) < 4.0 * step {
                    return Err(BubbleError::AtCentre("exterior expansion"));
                }
                let g = |p: &Point4| model.green(a, p);
                (share * g(x), fd_laplacian(&g, x, step))
            }
            _ => return self.scalar(model, kind, center_kind, a, lambda),
        };
        let correction = share * lap / (4.0 * lambda * lambda);
        Ok(Expansion {
            kind,
            center_kind,
            lambda,
            leading,
            correction,
            value: leading + correction,
            laplacian_step: step,
        })
    }

    /// Leading terms of the self-interaction `⟨Pφ, φ⟩` and of `⟨Pφ, λ∂_λφ⟩`.
    pub fn scalar(
        &self,
        model: &dyn ManifoldModel,
        kind: ExpansionKind,
        center_kind: PointKind,
        a: &Point4,
        lambda: f64,
    ) -> Result<Expansion, BubbleError> {
        self.check(lambda)?;
        let h_aa = model.regular(a, center_kind, a);
        let lap = fd_laplacian(&|p: &Point4| model.regular(a, center_kind, p), a, EXPANSION_LAPLACIAN_STEP);
        let pi2 = PI * PI;
        let l2 = lambda * lambda;
        let (leading, correction) = match (kind, center_kind) {
            (ExpansionKind::SelfInteraction, PointKind::Interior) => (
                32.0 * pi2 * lambda.ln() - 40.0 * pi2 / 3.0 + 16.0 * pi2 * h_aa,
                8.0 * pi2 * lap / l2,
            ),
            (ExpansionKind::SelfInteraction, PointKind::Boundary) => (
                16.0 * pi2 * lambda.ln() - 20.0 * pi2 / 3.0 + 4.0 * pi2 * h_aa,
                2.0 * pi2 * lap / l2,
            ),
            (ExpansionKind::SelfScaleDerivative, PointKind::Interior) => (16.0 * pi2, -8.0 * pi2 * lap / l2),
            (ExpansionKind::SelfScaleDerivative, PointKind::Boundary) => (8.0 * pi2, -2.0 * pi2 * lap / l2),
            _ => unreachable!("field expansions are handled by Expander::field"),
        };
        Ok(Expansion {
            kind,
            center_kind,
            lambda,
            leading,
            correction,
            value: leading + correction,
            laplacian_step: EXPANSION_LAPLACIAN_STEP,
        })
    }
}

/// Largest `|profile − exterior|` on the sphere `d(a, x) = 2ρ`, sampled along
/// the coordinate directions that stay in the half-space.
pub fn matching_gap(
    expander: &Expander,
    model: &dyn ManifoldModel,
    center_kind: PointKind,
    a: &Point4,
    lambda: f64,
) -> Result<f64, BubbleError> {
    let r = 2.0 * expander.cutoff.rho;
    let mut gap: f64 = 0.0;
    for axis in 0..4 {
        for sign in [-1.0, 1.0] {
            let mut x = *a;
            x[axis] += sign * r;
            if x[3] < 0.0 {
                continue;
            }
            let inner = expander.field(model, ExpansionKind::Profile, center_kind, a, lambda, &x)?;
            let outer = expander.field(model, ExpansionKind::Exterior, center_kind, a, lambda, &x)?;
            gap = gap.max((inner.value - outer.value).abs());
        }
    }
    Ok(gap)
}
