//! The bisimplicial manifold `Γᵖ × F × ℝ^q` resolving both the left
//! `Γ`-action and the right `ℝ`-action on the frame bundle `F ≅ S¹ × ℝ₊ˣ`,
//! with 1-forms on its levels, their coboundaries, and fiber integration
//! over `S¹`.
//!
//! Tangent vectors are carried alongside points as dual numbers, so a face
//! map pushes tangents forward by the same code that maps points.

mod forms;
mod lemma;

use std::fmt;
use std::sync::Arc;

pub use forms::{coboundary, LevelOneForm};
pub use lemma::{
    fiber_integrate, transgress, transgress_with_quadrature, verify_lemma_cochains,
    verify_main_lemma, FiberIntegral, LemmaCochains, LemmaResiduals,
};

use rand::Rng;

use crate::diffeo::{CircleDiffeo, WittField};
use crate::dual::Dual;
use crate::error::{Error, Result};
use crate::sampling::{
    random_angle, random_diffeo, random_field, DEFAULT_AMPLITUDE, DEFAULT_ORDER,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    /// Face maps resolving the `Γ`-action; change `p`.
    Horizontal,
    /// Face maps resolving the `ℝ`-action; change `q`.
    Vertical,
}

/// Bidegree `(p, q)` of the level `Γᵖ × F × ℝ^q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Level {
    pub p: usize,
    pub q: usize,
}

impl Level {
    pub const fn new(p: usize, q: usize) -> Self {
        Self { p, q }
    }

    /// The level whose `i`-th face maps land in `self`.
    pub fn above(self, dir: Direction) -> Self {
        match dir {
            Direction::Horizontal => Self::new(self.p + 1, self.q),
            Direction::Vertical => Self::new(self.p, self.q + 1),
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.p, self.q)
    }
}

/// `(γ₁, …, γₚ; θ, v; x₁, …, x_q)`.
#[derive(Debug, Clone)]
pub struct BisimplicialPoint {
    pub gammas: Vec<CircleDiffeo>,
    pub theta: f64,
    pub v: f64,
    pub xs: Vec<f64>,
}

impl BisimplicialPoint {
    pub fn new(gammas: Vec<CircleDiffeo>, theta: f64, v: f64, xs: Vec<f64>) -> Result<Self> {
        if v.is_nan() || v <= 0.0 {
            return Err(Error::InvalidElement(format!(
                "frame scale must be positive, got {v}"
            )));
        }
        Ok(Self {
            gammas,
            theta,
            v,
            xs,
        })
    }

    pub fn level(&self) -> Level {
        Level::new(self.gammas.len(), self.xs.len())
    }
}

/// First-order variation `δγ = u` of a diffeomorphism.
#[derive(Clone, Default)]
pub enum TangentField {
    #[default]
    Zero,
    Witt(WittField),
    /// Variation of `γ₁∘γ₂`: `u₁∘γ₂ + (γ₁′∘γ₂)·u₂`.
    Composite(Arc<(DualDiffeo, DualDiffeo)>),
}

impl fmt::Debug for TangentField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Zero => f.write_str("Zero"),
            Self::Witt(w) => f.debug_tuple("Witt").field(w).finish(),
            Self::Composite(_) => f.write_str("Composite(..)"),
        }
    }
}

impl From<WittField> for TangentField {
    fn from(w: WittField) -> Self {
        Self::Witt(w)
    }
}

impl TangentField {
    /// `(u(θ), u′(θ))`.
    pub fn eval(&self, theta: f64) -> Result<(f64, f64)> {
        match self {
            Self::Zero => Ok((0.0, 0.0)),
            Self::Witt(w) => {
                let (u, u1, _) = w.eval(theta);
                Ok((u, u1))
            }
            Self::Composite(pair) => {
                let (outer, inner) = pair.as_ref();
                let (vi, di) = inner.eval(Dual::constant(theta))?;
                let (vo, dout) = outer.eval(vi)?;
                Ok((vo.eps, (dout * di).eps))
            }
        }
    }
}

/// A diffeomorphism together with a first-order variation.
#[derive(Debug, Clone)]
pub struct DualDiffeo {
    pub base: CircleDiffeo,
    pub field: TangentField,
}

impl DualDiffeo {
    pub fn new(base: CircleDiffeo, field: TangentField) -> Self {
        Self { base, field }
    }

    /// `(γ(θ), γ′(θ))` at a dual argument, including the variation of `γ`.
    pub fn eval(&self, theta: Dual) -> Result<(Dual, Dual)> {
        let j = self.base.jet(theta.re)?;
        let (u, u1) = self.field.eval(theta.re)?;
        Ok((
            Dual::new(j.value, j.d1 * theta.eps + u),
            Dual::new(j.d1, j.d2 * theta.eps + u1),
        ))
    }

    pub fn compose(outer: &DualDiffeo, inner: &DualDiffeo) -> Self {
        Self {
            base: CircleDiffeo::compose(&outer.base, &inner.base),
            field: TangentField::Composite(Arc::new((outer.clone(), inner.clone()))),
        }
    }
}

/// `(u₁, …, uₚ; δθ, δv; δx₁, …, δx_q)`.
#[derive(Debug, Clone, Default)]
pub struct Tangent {
    pub fields: Vec<TangentField>,
    pub d_theta: f64,
    pub d_v: f64,
    pub d_xs: Vec<f64>,
}

impl Tangent {
    pub fn zero(level: Level) -> Self {
        Self {
            fields: vec![TangentField::Zero; level.p],
            d_theta: 0.0,
            d_v: 0.0,
            d_xs: vec![0.0; level.q],
        }
    }

    /// Unit vector along the circle fiber.
    pub fn fiber(level: Level) -> Self {
        Self {
            d_theta: 1.0,
            ..Self::zero(level)
        }
    }

    pub fn level(&self) -> Level {
        Level::new(self.fields.len(), self.d_xs.len())
    }
}

/// A point with a tangent vector attached.
#[derive(Debug, Clone)]
pub struct JetPoint {
    pub gammas: Vec<DualDiffeo>,
    pub theta: Dual,
    pub v: Dual,
    pub xs: Vec<Dual>,
}

impl JetPoint {
    pub fn new(point: &BisimplicialPoint, tangent: &Tangent) -> Result<Self> {
        if point.level() != tangent.level() {
            return Err(Error::Usage(format!(
                "tangent at level {} does not match point at level {}",
                tangent.level(),
                point.level()
            )));
        }
        Ok(Self {
            gammas: point
                .gammas
                .iter()
                .zip(&tangent.fields)
                .map(|(g, u)| DualDiffeo::new(g.clone(), u.clone()))
                .collect(),
            theta: Dual::new(point.theta, tangent.d_theta),
            v: Dual::new(point.v, tangent.d_v),
            xs: point
                .xs
                .iter()
                .zip(&tangent.d_xs)
                .map(|(&x, &dx)| Dual::new(x, dx))
                .collect(),
        })
    }

    pub fn level(&self) -> Level {
        Level::new(self.gammas.len(), self.xs.len())
    }

    pub fn point(&self) -> BisimplicialPoint {
        BisimplicialPoint {
            gammas: self.gammas.iter().map(|g| g.base.clone()).collect(),
            theta: self.theta.re,
            v: self.v.re,
            xs: self.xs.iter().map(|x| x.re).collect(),
        }
    }

    pub fn tangent(&self) -> Tangent {
        Tangent {
            fields: self.gammas.iter().map(|g| g.field.clone()).collect(),
            d_theta: self.theta.eps,
            d_v: self.v.eps,
            d_xs: self.xs.iter().map(|x| x.eps).collect(),
        }
    }

    /// Left action `(γ, θ, v) ↦ (γ(θ), γ′(θ)·v)`.
    fn act(gamma: &DualDiffeo, theta: Dual, v: Dual) -> Result<(Dual, Dual)> {
        let (value, deriv) = gamma.eval(theta)?;
        Ok((value, deriv * v))
    }

    /// The `i`-th face map in direction `dir`.
    pub fn face(&self, dir: Direction, i: usize) -> Result<JetPoint> {
        let level = self.level();
        let top = match dir {
            Direction::Horizontal => level.p,
            Direction::Vertical => level.q,
        };
        if top == 0 || i > top {
            return Err(Error::Usage(format!(
                "no {dir:?} face {i} at level {level}"
            )));
        }
        let mut out = self.clone();
        match dir {
            Direction::Horizontal if i == 0 => {
                out.gammas.remove(0);
            }
            Direction::Horizontal if i == top => {
                let g = out.gammas.pop().expect("p ≥ 1");
                (out.theta, out.v) = Self::act(&g, self.theta, self.v)?;
            }
            Direction::Horizontal => {
                let inner = out.gammas.remove(i);
                out.gammas[i - 1] = DualDiffeo::compose(&self.gammas[i - 1], &inner);
            }
            Direction::Vertical if i == 0 => {
                let x = out.xs.remove(0);
                out.v = x.exp() * self.v;
            }
            Direction::Vertical if i == top => {
                out.xs.pop();
            }
            Direction::Vertical => {
                let x = out.xs.remove(i);
                out.xs[i - 1] += x;
            }
        }
        Ok(out)
    }
}

/// Image of a point under the `i`-th face map.
pub fn face_map(dir: Direction, i: usize, point: &BisimplicialPoint) -> Result<BisimplicialPoint> {
    Ok(JetPoint::new(point, &Tangent::zero(point.level()))?
        .face(dir, i)?
        .point())
}

/// Image of a point and tangent under the `i`-th face map and its differential.
pub fn pushforward(
    dir: Direction,
    i: usize,
    point: &BisimplicialPoint,
    tangent: &Tangent,
) -> Result<(BisimplicialPoint, Tangent)> {
    let image = JetPoint::new(point, tangent)?.face(dir, i)?;
    Ok((image.point(), image.tangent()))
}

/// A random point at `level` with a random tangent: small Fourier diffeos
/// and fields, `v ∈ [e⁻¹, e]`, coordinates and tangent components in `[−1, 1]`.
pub fn random_sample<R: Rng + ?Sized>(rng: &mut R, level: Level) -> (BisimplicialPoint, Tangent) {
    let gammas = (0..level.p)
        .map(|_| random_diffeo(rng, DEFAULT_ORDER, DEFAULT_AMPLITUDE))
        .collect();
    let point = BisimplicialPoint {
        gammas,
        theta: random_angle(rng),
        v: rng.random_range(-1.0..1.0_f64).exp(),
        xs: (0..level.q).map(|_| rng.random_range(-1.0..1.0)).collect(),
    };
    let tangent = Tangent {
        fields: (0..level.p)
            .map(|_| random_field(rng, DEFAULT_ORDER, DEFAULT_AMPLITUDE).into())
            .collect(),
        d_theta: rng.random_range(-1.0..1.0),
        d_v: rng.random_range(-1.0..1.0),
        d_xs: (0..level.q).map(|_| rng.random_range(-1.0..1.0)).collect(),
    };
    (point, tangent)
}

#[cfg(test)]
mod tests;
