use std::fmt;
use std::sync::Arc;

use super::{BisimplicialPoint, Direction, JetPoint, Level, Tangent};
use crate::error::{Error, Result};

type FormFn = dyn Fn(&JetPoint) -> Result<f64> + Send + Sync;

/// A 1-form on one level of the bisimplicial manifold, evaluated on a point
/// carrying a tangent vector.
#[derive(Clone)]
pub struct LevelOneForm {
    level: Level,
    name: Arc<str>,
    eval: Arc<FormFn>,
}

impl fmt::Debug for LevelOneForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LevelOneForm({} at {})", self.name, self.level)
    }
}

impl LevelOneForm {
    /// `f` must be linear in the tangent part of its argument.
    pub fn new<F>(level: Level, name: impl Into<Arc<str>>, f: F) -> Self
    where
        F: Fn(&JetPoint) -> Result<f64> + Send + Sync + 'static,
    {
        Self {
            level,
            name: name.into(),
            eval: Arc::new(f),
        }
    }

    pub fn level(&self) -> Level {
        self.level
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn evaluate(&self, point: &BisimplicialPoint, tangent: &Tangent) -> Result<f64> {
        self.evaluate_jet(&JetPoint::new(point, tangent)?)
    }

    pub fn evaluate_jet(&self, jet: &JetPoint) -> Result<f64> {
        if jet.level() != self.level {
            return Err(Error::Usage(format!(
                "form {} lives at level {}, evaluated at level {}",
                self.name,
                self.level,
                jet.level()
            )));
        }
        (self.eval)(jet)
    }

    /// Pullback along the `i`-th face map into this form's level.
    pub fn pullback(&self, dir: Direction, i: usize) -> Result<Self> {
        let source = self.level.above(dir);
        let top = match dir {
            Direction::Horizontal => source.p,
            Direction::Vertical => source.q,
        };
        if i > top {
            return Err(Error::Usage(format!(
                "no {dir:?} face {i} at level {source}"
            )));
        }
        let inner = self.clone();
        Ok(Self::new(
            source,
            format!("d{i}*{}", self.name),
            move |jet| inner.evaluate_jet(&jet.face(dir, i)?),
        ))
    }

    pub fn scaled(&self, c: f64) -> Self {
        let inner = self.clone();
        Self::new(self.level, format!("{c}·{}", self.name), move |jet| {
            Ok(c * inner.evaluate_jet(jet)?)
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.combine(other, 1.0, "+")
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.combine(other, -1.0, "−")
    }

    fn combine(&self, other: &Self, sign: f64, op: &str) -> Result<Self> {
        if self.level != other.level {
            return Err(Error::Usage(format!(
                "cannot combine forms at levels {} and {}",
                self.level, other.level
            )));
        }
        let (a, b) = (self.clone(), other.clone());
        Ok(Self::new(
            self.level,
            format!("({} {op} {})", self.name, other.name),
            move |jet| Ok(a.evaluate_jet(jet)? + sign * b.evaluate_jet(jet)?),
        ))
    }

    /// `z₁ = x₁ dx₂` at level `(0, 2)`.
    pub fn x1_dx2() -> Self {
        Self::new(Level::new(0, 2), "x1 dx2", |jet| {
            Ok(jet.xs[0].re * jet.xs[1].eps)
        })
    }

    /// `z₂ = log γ₁′(γ₂θ) · d log γ₂′(θ)` at level `(2, 0)`.
    pub fn bott_thurston_integrand() -> Self {
        Self::new(Level::new(2, 0), "log g1'(g2) dlog g2'", |jet| {
            let (value, deriv) = jet.gammas[1].eval(jet.theta)?;
            let outer = jet.gammas[0].base.jet(value.re)?;
            Ok(outer.d1.ln() * deriv.dlog())
        })
    }

    /// `β₁ = −log v dx` at level `(0, 1)`.
    pub fn neg_log_v_dx() -> Self {
        Self::new(Level::new(0, 1), "-log v dx", |jet| {
            Ok(-jet.v.re.ln() * jet.xs[0].eps)
        })
    }

    /// `β₂ = log γ′(θ) d log v` at level `(1, 0)`.
    pub fn log_gamma_dlog_v() -> Self {
        Self::new(Level::new(1, 0), "log g' dlog v", |jet| {
            Ok(jet.gammas[0].base.jet(jet.theta.re)?.d1.ln() * jet.v.dlog())
        })
    }

    /// `log γ′(θ) dx` at level `(1, 1)`.
    pub fn log_gamma_dx() -> Self {
        Self::new(Level::new(1, 1), "log g' dx", |jet| {
            Ok(jet.gammas[0].base.jet(jet.theta.re)?.d1.ln() * jet.xs[0].eps)
        })
    }
}

/// `δω = Σᵢ (−1)ⁱ dᵢ*ω` in direction `dir`.
pub fn coboundary(dir: Direction, form: &LevelOneForm) -> Result<LevelOneForm> {
    let source = form.level.above(dir);
    let top = match dir {
        Direction::Horizontal => source.p,
        Direction::Vertical => source.q,
    };
    let faces = (0..=top)
        .map(|i| form.pullback(dir, i))
        .collect::<Result<Vec<_>>>()?;
    let tag = match dir {
        Direction::Horizontal => "dh",
        Direction::Vertical => "dv",
    };
    Ok(LevelOneForm::new(
        source,
        format!("{tag} {}", form.name),
        move |jet| {
            faces.iter().enumerate().try_fold(0.0, |acc, (i, f)| {
                let term = f.evaluate_jet(jet)?;
                Ok(if i % 2 == 0 { acc + term } else { acc - term })
            })
        },
    ))
}
