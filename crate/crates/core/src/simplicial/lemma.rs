use rand::Rng;

use super::{random_sample, BisimplicialPoint, Direction, LevelOneForm, Tangent};
use crate::cocycle::{GroupCocycle, DEFAULT_QUADRATURE_POINTS};
use crate::diffeo::CircleDiffeo;
use crate::error::{Error, Result};
use crate::quadrature::trapezoid;
use crate::sampling::seeded;

/// Tolerance for the basic-ness check in fiber integration.
pub const BASIC_TOL: f64 = 1e-10;
const BASIC_SAMPLES: usize = 16;
const BASIC_SEED: u64 = 0xba51c;

/// Cochains `z₁, z₂, β₁, β₂` in the identities
/// `δᵛβ₁ = −z₁`, `δʰβ₁ = δᵛβ₂`, `δʰβ₂ = z₂`.
#[derive(Debug, Clone)]
pub struct LemmaCochains {
    pub z1: LevelOneForm,
    pub z2: LevelOneForm,
    pub beta1: LevelOneForm,
    pub beta2: LevelOneForm,
}

impl LemmaCochains {
    pub fn standard() -> Self {
        Self {
            z1: LevelOneForm::x1_dx2(),
            z2: LevelOneForm::bott_thurston_integrand(),
            beta1: LevelOneForm::neg_log_v_dx(),
            beta2: LevelOneForm::log_gamma_dlog_v(),
        }
    }

    pub fn with_beta1(self, beta1: LevelOneForm) -> Self {
        Self { beta1, ..self }
    }

    pub fn with_beta2(self, beta2: LevelOneForm) -> Self {
        Self { beta2, ..self }
    }
}

/// Largest absolute residual of each identity over the sampled tangents.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LemmaResiduals {
    /// `δᵛβ₁ + z₁` at level `(0, 2)`.
    pub vertical: f64,
    /// `δʰβ₁ − δᵛβ₂` at level `(1, 1)`.
    pub mixed: f64,
    /// `δʰβ₂ − z₂` at level `(2, 0)`.
    pub horizontal: f64,
    pub samples: usize,
}

impl LemmaResiduals {
    pub fn max(&self) -> f64 {
        self.vertical.max(self.mixed).max(self.horizontal)
    }
}

pub fn verify_main_lemma(samples: usize, seed: u64) -> Result<LemmaResiduals> {
    verify_lemma_cochains(&LemmaCochains::standard(), samples, seed)
}

pub fn verify_lemma_cochains(
    c: &LemmaCochains,
    samples: usize,
    seed: u64,
) -> Result<LemmaResiduals> {
    if samples == 0 {
        return Err(Error::Usage("need at least one sample".into()));
    }
    let vertical = super::coboundary(Direction::Vertical, &c.beta1)?.add(&c.z1)?;
    let mixed = super::coboundary(Direction::Horizontal, &c.beta1)?
        .sub(&super::coboundary(Direction::Vertical, &c.beta2)?)?;
    let horizontal = super::coboundary(Direction::Horizontal, &c.beta2)?.sub(&c.z2)?;
    let mut rng = seeded(seed);
    let worst = |form: &LevelOneForm, rng: &mut rand_chacha::ChaCha8Rng| -> Result<f64> {
        let (point, tangent) = random_sample(rng, form.level());
        Ok(form.evaluate(&point, &tangent)?.abs())
    };
    let mut out = LemmaResiduals {
        vertical: 0.0,
        mixed: 0.0,
        horizontal: 0.0,
        samples,
    };
    for _ in 0..samples {
        out.vertical = out.vertical.max(worst(&vertical, &mut rng)?);
        out.mixed = out.mixed.max(worst(&mixed, &mut rng)?);
        out.horizontal = out.horizontal.max(worst(&horizontal, &mut rng)?);
    }
    Ok(out)
}

/// Integration of a basic form at level `(p, 0)` over the circle fiber,
/// giving a function of `p` diffeomorphisms.
#[derive(Debug, Clone)]
pub struct FiberIntegral {
    form: LevelOneForm,
    quadrature_points: usize,
}

impl FiberIntegral {
    /// Fails unless the form annihilates `∂ᵥ` and its `∂_θ` component is
    /// independent of `v`.
    pub fn new(form: LevelOneForm, quadrature_points: usize) -> Result<Self> {
        let level = form.level();
        if level.q != 0 {
            return Err(Error::Usage(format!(
                "fiber integration needs q = 0, form is at level {level}"
            )));
        }
        let mut rng = seeded(BASIC_SEED);
        for _ in 0..BASIC_SAMPLES {
            let (point, _) = random_sample(&mut rng, level);
            let radial = Tangent {
                d_v: 1.0,
                ..Tangent::zero(level)
            };
            let along_v = form.evaluate(&point, &radial)?;
            let here = form.evaluate(&point, &Tangent::fiber(level))?;
            let moved = BisimplicialPoint {
                v: point.v * rng.random_range(0.2..5.0),
                ..point.clone()
            };
            let there = form.evaluate(&moved, &Tangent::fiber(level))?;
            let drift = (here - there).abs();
            if along_v.abs() > BASIC_TOL * (1.0 + here.abs())
                || drift > BASIC_TOL * (1.0 + here.abs())
            {
                return Err(Error::Usage(format!(
                    "form {} is not basic: ω(∂v) = {along_v:e}, v-drift of ω(∂θ) = {drift:e}",
                    form.name()
                )));
            }
        }
        Ok(Self {
            form,
            quadrature_points,
        })
    }

    pub fn form(&self) -> &LevelOneForm {
        &self.form
    }

    pub fn evaluate(&self, gammas: &[CircleDiffeo]) -> Result<f64> {
        let level = self.form.level();
        if gammas.len() != level.p {
            return Err(Error::Usage(format!(
                "expected {} diffeomorphisms, got {}",
                level.p,
                gammas.len()
            )));
        }
        let fiber = Tangent::fiber(level);
        trapezoid(self.quadrature_points, |theta| {
            let point = BisimplicialPoint {
                gammas: gammas.to_vec(),
                theta,
                v: 1.0,
                xs: Vec::new(),
            };
            self.form.evaluate(&point, &fiber)
        })
    }
}

pub fn fiber_integrate(
    form: &LevelOneForm,
    gammas: &[CircleDiffeo],
    quadrature_points: usize,
) -> Result<f64> {
    FiberIntegral::new(form.clone(), quadrature_points)?.evaluate(gammas)
}

/// `scale · ∫_{S¹} z₂` as a group cocycle.
pub fn transgress(scale: f64) -> Result<GroupCocycle> {
    transgress_with_quadrature(scale, DEFAULT_QUADRATURE_POINTS)
}

pub fn transgress_with_quadrature(scale: f64, quadrature_points: usize) -> Result<GroupCocycle> {
    let integral = FiberIntegral::new(LevelOneForm::bott_thurston_integrand(), quadrature_points)?;
    Ok(
        GroupCocycle::custom(move |g1, g2| integral.evaluate(&[g1.clone(), g2.clone()]))
            .scaled(scale)
            .with_quadrature(quadrature_points),
    )
}
