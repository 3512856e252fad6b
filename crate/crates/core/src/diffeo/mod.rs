//! Orientation-preserving circle diffeomorphisms, represented by lifts
//! `f: ℝ → ℝ` with `f(θ + 2π) = f(θ) + 2π`.
//!
//! Explicit lifts are truncated Fourier series or real Möbius maps. Products
//! and inverses are kept as lazy trees and evaluated pointwise by the chain
//! rule, so no projection error enters compositions. Every lift is
//! normalized so that `f(0) ∈ [0, 2π)`.

mod field;
mod flow;
mod fourier;
mod mobius;

use std::f64::consts::TAU;
use std::fmt;
use std::sync::{Arc, OnceLock};

pub use field::{ComplexWittField, WittField};
pub use flow::MAX_STEP as FLOW_MAX_STEP;
pub use fourier::{FourierLift, ORIENTATION_EPS};
pub use mobius::MobiusMap;

use crate::dual::Dual;
use crate::error::{Error, Result};

/// Default truncation order of projected lifts.
pub const DEFAULT_FOURIER_ORDER: usize = 16;
/// Step tolerance of the inverse solver.
pub const INVERSE_TOL: f64 = 1e-12;
pub const INVERSE_MAX_ITER: usize = 100;

/// Value and first two derivatives of a lift at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
}

impl Jet {
    pub const fn identity(theta: f64) -> Self {
        Self {
            value: theta,
            d1: 1.0,
            d2: 0.0,
        }
    }
}

#[derive(Debug)]
enum Node {
    Fourier(FourierLift),
    Mobius(MobiusMap),
    Compose {
        outer: CircleDiffeo,
        inner: CircleDiffeo,
        shift: OnceLock<f64>,
    },
    Invert {
        base: CircleDiffeo,
        shift: f64,
    },
}

/// An element of `Diff⁺(S¹)`. Cheap to clone; immutable.
#[derive(Clone)]
pub struct CircleDiffeo {
    node: Arc<Node>,
}

impl fmt::Debug for CircleDiffeo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.node.as_ref() {
            Node::Fourier(l) => f.debug_tuple("Fourier").field(l).finish(),
            Node::Mobius(m) => f.debug_tuple("Mobius").field(&m.matrix()).finish(),
            Node::Compose { outer, inner, .. } => {
                f.debug_tuple("Compose").field(outer).field(inner).finish()
            }
            Node::Invert { base, .. } => f.debug_tuple("Invert").field(base).finish(),
        }
    }
}

fn normalizing_shift(at_zero: f64) -> f64 {
    -TAU * (at_zero / TAU).floor()
}

impl CircleDiffeo {
    fn from_node(node: Node) -> Self {
        Self {
            node: Arc::new(node),
        }
    }

    pub fn from_lift(lift: FourierLift) -> Self {
        Self::from_node(Node::Fourier(lift))
    }

    pub fn identity() -> Self {
        Self::from_lift(FourierLift::identity())
    }

    /// `θ ↦ θ + a`.
    pub fn rotation(angle: f64) -> Self {
        Self::from_lift(
            FourierLift::new(angle, Vec::new(), Vec::new())
                .expect("a rotation is a diffeomorphism"),
        )
    }

    /// `θ ↦ θ + a₀ + Σ (aₖ cos kθ + bₖ sin kθ)`.
    pub fn fourier(offset: f64, cos: Vec<f64>, sin: Vec<f64>) -> Result<Self> {
        FourierLift::new(offset, cos, sin).map(Self::from_lift)
    }

    /// The map induced by `[[a, b], [c, d]]` on `ℝP¹`; needs `ad − bc > 0`.
    pub fn mobius(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        MobiusMap::new(a, b, c, d).map(|m| Self::from_node(Node::Mobius(m)))
    }

    /// Time-`t` flow of `u`, projected to a Fourier lift of order `order`.
    pub fn flow(field: &WittField, t: f64, order: usize) -> Result<Self> {
        flow::flow(field, t, order)
    }

    /// `outer ∘ inner`.
    pub fn compose(outer: &CircleDiffeo, inner: &CircleDiffeo) -> Self {
        Self::from_node(Node::Compose {
            outer: outer.clone(),
            inner: inner.clone(),
            shift: OnceLock::new(),
        })
    }

    pub fn inverse(&self) -> Result<Self> {
        let raw = solve_inverse(self, 0.0)?;
        Ok(Self::from_node(Node::Invert {
            base: self.clone(),
            shift: normalizing_shift(raw),
        }))
    }

    pub fn as_fourier(&self) -> Option<&FourierLift> {
        match self.node.as_ref() {
            Node::Fourier(l) => Some(l),
            _ => None,
        }
    }

    pub fn jet(&self, theta: f64) -> Result<Jet> {
        match self.node.as_ref() {
            Node::Fourier(l) => Ok(l.jet(theta)),
            Node::Mobius(m) => Ok(m.jet(theta)),
            Node::Compose {
                outer,
                inner,
                shift,
            } => {
                let shift = match shift.get() {
                    Some(s) => *s,
                    None => {
                        let at_zero = compose_jet(outer, inner, 0.0)?.value;
                        *shift.get_or_init(|| normalizing_shift(at_zero))
                    }
                };
                let mut j = compose_jet(outer, inner, theta)?;
                j.value += shift;
                Ok(j)
            }
            Node::Invert { base, shift } => {
                // Solving on one fundamental domain keeps the lift exactly
                // equivariant under θ ↦ θ + 2π.
                let turns = (theta / TAU).floor();
                let x = solve_inverse(base, theta - TAU * turns)?;
                let j = base.jet(x)?;
                Ok(Jet {
                    value: x + TAU * turns + shift,
                    d1: 1.0 / j.d1,
                    d2: -j.d2 / (j.d1 * j.d1 * j.d1),
                })
            }
        }
    }

    pub fn value(&self, theta: f64) -> Result<f64> {
        Ok(self.jet(theta)?.value)
    }

    /// Evaluation at a dual argument: `(f(θ), f′(θ))` with their tangents.
    pub fn eval_dual(&self, theta: Dual) -> Result<(Dual, Dual)> {
        let j = self.jet(theta.re)?;
        Ok((
            Dual::new(j.value, j.d1 * theta.eps),
            Dual::new(j.d1, j.d2 * theta.eps),
        ))
    }

    /// Fourier projection of order `order` from `4·order` samples.
    pub fn project(&self, order: usize) -> Result<Self> {
        let grid = 4 * order.max(1);
        let samples = (0..grid)
            .map(|j| {
                let theta = TAU * j as f64 / grid as f64;
                Ok(self.value(theta)? - theta)
            })
            .collect::<Result<Vec<_>>>()?;
        let (a0, cos, sin) = flow::fourier_fit(&samples, order);
        Self::fourier(a0, cos, sin)
    }

    /// Minimum of `f′` on a uniform grid.
    pub fn min_derivative(&self, grid: usize) -> Result<f64> {
        let mut min = f64::INFINITY;
        for j in 0..grid {
            min = min.min(self.jet(TAU * j as f64 / grid as f64)?.d1);
        }
        Ok(min)
    }

    /// `sup |f(θ) − g(θ)|` over a uniform grid, measured on the circle.
    pub fn distance(&self, other: &Self, grid: usize) -> Result<f64> {
        let mut sup: f64 = 0.0;
        for j in 0..grid {
            let theta = TAU * j as f64 / grid as f64;
            sup = sup.max(circle_distance(self.value(theta)?, other.value(theta)?));
        }
        Ok(sup)
    }
}

/// Distance between two angles in `ℝ/2πℤ`.
pub fn circle_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

fn compose_jet(outer: &CircleDiffeo, inner: &CircleDiffeo, theta: f64) -> Result<Jet> {
    let ji = inner.jet(theta)?;
    let jo = outer.jet(ji.value)?;
    Ok(Jet {
        value: jo.value,
        d1: jo.d1 * ji.d1,
        d2: jo.d2 * ji.d1 * ji.d1 + jo.d1 * ji.d2,
    })
}

/// Solves `f(x) = θ` for the lift `f` by Newton's method, falling back to
/// bisection whenever a step leaves the current bracket.
fn solve_inverse(f: &CircleDiffeo, theta: f64) -> Result<f64> {
    let guess = 2.0 * theta - f.value(theta)?;
    // The displacement f(x) − x oscillates by less than 2π, so the root
    // lies within 2π of the guess.
    let (mut lo, mut hi) = (guess - TAU, guess + TAU);
    let mut widen = 0;
    while f.value(lo)? > theta || f.value(hi)? < theta {
        widen += 1;
        if widen > 8 {
            return Err(Error::Solver(format!(
                "could not bracket the preimage of {theta}"
            )));
        }
        lo -= TAU;
        hi += TAU;
    }
    let mut x = guess.clamp(lo, hi);
    for _ in 0..INVERSE_MAX_ITER {
        let j = f.jet(x)?;
        let g = j.value - theta;
        if g == 0.0 {
            return Ok(x);
        }
        if g > 0.0 {
            hi = x;
        } else {
            lo = x;
        }
        let newton = x - g / j.d1;
        let next = if newton > lo && newton < hi && j.d1 > 0.0 {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if (next - x).abs() < INVERSE_TOL {
            // A bisection exit leaves an error of order the tolerance; one
            // Newton step brings it down to rounding.
            let j = f.jet(next)?;
            return Ok(next - (j.value - theta) / j.d1);
        }
        x = next;
    }
    Err(Error::Solver(format!(
        "inverse did not converge within {INVERSE_MAX_ITER} iterations at θ = {theta}"
    )))
}
