//! Witt and Virasoro Lie algebras: exact mode arithmetic, diagonal and
//! numerically extracted Lie 2-cocycles, and central-charge measurement.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::cocycle::GroupCocycle;
use crate::diffeo::{CircleDiffeo, WittField, DEFAULT_FOURIER_ORDER};
use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rational(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

fn integer(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `Σ cₘ L_m + c·(central)` with exact rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ModeElement {
    modes: BTreeMap<i64, Rational>,
    central: Rational,
}

impl ModeElement {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `L_m`.
    pub fn generator(m: i64) -> Self {
        Self::term(m, integer(1))
    }

    pub fn term(m: i64, c: Rational) -> Self {
        let mut e = Self::zero();
        e.add_mode(m, c);
        e
    }

    /// The central element.
    pub fn central_unit() -> Self {
        Self {
            modes: BTreeMap::new(),
            central: integer(1),
        }
    }

    fn add_mode(&mut self, m: i64, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.modes.entry(m).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.modes.remove(&m);
        }
    }

    pub fn coefficient(&self, m: i64) -> Rational {
        self.modes.get(&m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn central(&self) -> &Rational {
        &self.central
    }

    pub fn modes(&self) -> impl Iterator<Item = (i64, &Rational)> {
        self.modes.iter().map(|(m, c)| (*m, c))
    }

    pub fn is_zero(&self) -> bool {
        self.modes.is_empty() && self.central.is_zero()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in other.modes() {
            out.add_mode(m, c.clone());
        }
        out.central += &other.central;
        out
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero();
        for (m, x) in self.modes() {
            out.add_mode(m, x * c);
        }
        out.central = &self.central * c;
        out
    }
}

impl fmt::Display for ModeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (m, c) in self.modes() {
            if !first {
                f.write_str(" + ")?;
            }
            write!(f, "({c})L[{m}]")?;
            first = false;
        }
        if !self.central.is_zero() {
            if !first {
                f.write_str(" + ")?;
            }
            write!(f, "({})c", self.central)?;
        }
        Ok(())
    }
}

type Beta = dyn Fn(i64) -> Option<Rational> + Send + Sync;

/// Lie cocycle supported on `m + n = 0`: `b(L_m, L_n) = β(m) δ_{m,−n}`.
#[derive(Clone)]
pub struct DiagonalCocycle {
    name: String,
    beta: Arc<Beta>,
}

impl fmt::Debug for DiagonalCocycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DiagonalCocycle")
            .field("name", &self.name)
            .finish()
    }
}

impl DiagonalCocycle {
    pub fn from_fn<F>(name: impl Into<String>, beta: F) -> Self
    where
        F: Fn(i64) -> Rational + Send + Sync + 'static,
    {
        Self {
            name: name.into(),
            beta: Arc::new(move |m| Some(beta(m))),
        }
    }

    /// Standard representative `λ/12 · m(m² − 1)`; vanishes on `m ∈ {−1, 0, 1}`.
    pub fn standard(lambda: Rational) -> Self {
        Self::from_fn("standard λ/12·m(m²−1)", move |m| {
            &lambda * integer(m * m * m - m) / integer(12)
        })
    }

    /// `λ/12 · m²(m − 1)`, evaluated at the first argument. Neither
    /// antisymmetric nor a cocycle; kept to exhibit the Jacobi failure.
    pub fn non_antisymmetric(lambda: Rational) -> Self {
        Self::from_fn("λ/12·m²(m−1)", move |m| {
            &lambda * integer(m * m * (m - 1)) / integer(12)
        })
    }

    /// Odd extension of sampled values `β(1), …, β(K)`; undefined beyond `K`.
    pub fn from_samples(name: impl Into<String>, samples: &[f64]) -> Result<Self> {
        let values = samples
            .iter()
            .map(|&x| {
                Rational::from_float(x)
                    .ok_or_else(|| Error::Numeric(format!("non-finite sample {x}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            name: name.into(),
            beta: Arc::new(move |m| {
                if m == 0 {
                    return Some(Rational::zero());
                }
                let v = values.get(m.unsigned_abs() as usize - 1)?;
                Some(if m > 0 { v.clone() } else { -v.clone() })
            }),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn beta(&self, m: i64) -> Result<Rational> {
        (self.beta)(m)
            .ok_or_else(|| Error::Usage(format!("cocycle '{}' undefined at mode {m}", self.name)))
    }

    pub fn beta_f64(&self, m: i64) -> Result<f64> {
        self.beta(m)?
            .to_f64()
            .ok_or_else(|| Error::Numeric("β not representable".into()))
    }

    /// `b(L_m, L_n)`.
    pub fn evaluate(&self, m: i64, n: i64) -> Result<Rational> {
        if m + n == 0 {
            self.beta(m)
        } else {
            Ok(Rational::zero())
        }
    }
}

type FieldPairing = dyn Fn(&WittField, &WittField) -> Result<f64> + Send + Sync;

/// Real bilinear form on vector fields, antisymmetrized on evaluation.
#[derive(Clone)]
pub struct NumericCocycle {
    pairing: Arc<FieldPairing>,
}

impl fmt::Debug for NumericCocycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("NumericCocycle(..)")
    }
}

impl NumericCocycle {
    pub fn new<F>(pairing: F) -> Self
    where
        F: Fn(&WittField, &WittField) -> Result<f64> + Send + Sync + 'static,
    {
        Self {
            pairing: Arc::new(pairing),
        }
    }

    /// The Lie cocycle obtained by differentiating a group cocycle at the identity.
    pub fn from_group(c: GroupCocycle, config: ExtractionConfig) -> Self {
        Self::new(move |u, w| extract_lie_cocycle(&c, u, w, &config))
    }

    pub fn evaluate(&self, u: &WittField, w: &WittField) -> Result<f64> {
        Ok(0.5 * ((self.pairing)(u, w)? - (self.pairing)(w, u)?))
    }

    /// `β(m) = ω(cos mθ ∂θ, sin mθ ∂θ)` for `m = 1..=max_mode`.
    pub fn diagonal_profile(&self, max_mode: i64) -> Result<DiagonalCocycle> {
        let samples = (1..=max_mode)
            .map(|m| self.evaluate(&WittField::cos_mode(m), &WittField::sin_mode(m)))
            .collect::<Result<Vec<_>>>()?;
        DiagonalCocycle::from_samples("extracted", &samples)
    }
}

#[derive(Debug, Clone)]
pub enum LieCocycle {
    Diagonal(DiagonalCocycle),
    Numeric(NumericCocycle),
}

impl LieCocycle {
    pub fn zero() -> Self {
        Self::Diagonal(DiagonalCocycle::from_fn("zero", |_| Rational::zero()))
    }

    pub fn standard(lambda: Rational) -> Self {
        Self::Diagonal(DiagonalCocycle::standard(lambda))
    }
}

/// `[(x₁, y₁), (x₂, y₂)] = (b(y₁, y₂), [y₁, y₂])` with `[L_m, L_n] = (m − n)L_{m+n}`.
///
/// The central term needs exact values of `b` on generators, so only
/// diagonal cocycles are accepted.
pub fn virasoro_bracket(e1: &ModeElement, e2: &ModeElement, b: &LieCocycle) -> Result<ModeElement> {
    let LieCocycle::Diagonal(b) = b else {
        return Err(Error::Usage(
            "exact brackets need a diagonal cocycle".into(),
        ));
    };
    let mut out = ModeElement::zero();
    for (m, cm) in e1.modes() {
        for (n, cn) in e2.modes() {
            let c = cm * cn;
            out.add_mode(m + n, &c * integer(m - n));
            out.central += &c * b.evaluate(m, n)?;
        }
    }
    Ok(out)
}

/// `[[e₁,e₂],e₃] + [[e₂,e₃],e₁] + [[e₃,e₁],e₂]`.
pub fn jacobi_defect(
    e1: &ModeElement,
    e2: &ModeElement,
    e3: &ModeElement,
    b: &LieCocycle,
) -> Result<ModeElement> {
    let t1 = virasoro_bracket(&virasoro_bracket(e1, e2, b)?, e3, b)?;
    let t2 = virasoro_bracket(&virasoro_bracket(e2, e3, b)?, e1, b)?;
    let t3 = virasoro_bracket(&virasoro_bracket(e3, e1, b)?, e2, b)?;
    Ok(t1.add(&t2).add(&t3))
}

/// Settings of the finite-difference extraction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtractionConfig {
    pub step: f64,
    /// Fourier order of the projected flows.
    pub fourier_order: usize,
    /// Maximal relative disagreement between steps `h` and `h/2`.
    pub agreement: f64,
}

impl Default for ExtractionConfig {
    fn default() -> Self {
        Self {
            step: 1e-3,
            fourier_order: DEFAULT_FOURIER_ORDER,
            agreement: 0.05,
        }
    }
}

/// Absolute slack of the Richardson agreement test, for values near zero.
const AGREEMENT_FLOOR: f64 = 1e-9;
/// Below this the perturbation `h·u` drowns in rounding.
const MIN_PERTURBATION: f64 = 1e-10;

fn field_size(u: &WittField) -> f64 {
    u.constant_term().abs()
        + u.cos_coefficients()
            .iter()
            .chain(u.sin_coefficients())
            .map(|c| c.abs())
            .sum::<f64>()
}

struct Flows {
    plus: CircleDiffeo,
    minus: CircleDiffeo,
}

fn flows(u: &WittField, h: f64, order: usize) -> Result<Flows> {
    Ok(Flows {
        plus: CircleDiffeo::flow(u, h, order)?,
        minus: CircleDiffeo::flow(u, -h, order)?,
    })
}

fn mixed_derivative(c: &GroupCocycle, a: &Flows, b: &Flows, h: f64) -> Result<f64> {
    let pp = c.evaluate(&a.plus, &b.plus)?;
    let pm = c.evaluate(&a.plus, &b.minus)?;
    let mp = c.evaluate(&a.minus, &b.plus)?;
    let mm = c.evaluate(&a.minus, &b.minus)?;
    Ok((pp - pm - mp + mm) / (4.0 * h * h))
}

fn antisymmetric_stencil(
    c: &GroupCocycle,
    u: &WittField,
    w: &WittField,
    h: f64,
    order: usize,
) -> Result<f64> {
    let fu = flows(u, h, order)?;
    let fw = flows(w, h, order)?;
    Ok(0.5 * (mixed_derivative(c, &fu, &fw, h)? - mixed_derivative(c, &fw, &fu, h)?))
}

/// `½ ∂ₛ∂ₜ|₀ [C(φᵘₛ, φʷₜ) − C(φʷₜ, φᵘₛ)]` by the four-point central stencil at
/// steps `h` and `h/2`, combined by one Richardson step.
///
/// Fails if the two steps disagree beyond `config.agreement`, which is how
/// cancellation at too small a step shows up.
pub fn extract_lie_cocycle(
    c: &GroupCocycle,
    u: &WittField,
    w: &WittField,
    config: &ExtractionConfig,
) -> Result<f64> {
    let h = config.step;
    if h <= 0.0 || !h.is_finite() {
        return Err(Error::Usage(format!(
            "finite-difference step must be positive, got {h}"
        )));
    }
    if h * field_size(u).max(field_size(w)) < MIN_PERTURBATION {
        return Err(Error::Numeric(format!(
            "step {h:e} too small to resolve the perturbation"
        )));
    }
    let coarse = antisymmetric_stencil(c, u, w, h, config.fourier_order)?;
    let fine = antisymmetric_stencil(c, u, w, 0.5 * h, config.fourier_order)?;
    if !coarse.is_finite() || !fine.is_finite() {
        return Err(Error::Numeric("non-finite stencil value".into()));
    }
    let gap = (coarse - fine).abs();
    if gap > config.agreement * coarse.abs().max(fine.abs()) + AGREEMENT_FLOOR {
        return Err(Error::Numeric(format!(
            "Richardson disagreement at h = {h:e}: {coarse:e} vs {fine:e}"
        )));
    }
    Ok((4.0 * fine - coarse) / 3.0 + 0.0)
}

/// `β_C(m) = ω_C(cos mθ ∂θ, sin mθ ∂θ)`.
pub fn diagonal_beta(c: &GroupCocycle, m: i64, config: &ExtractionConfig) -> Result<f64> {
    extract_lie_cocycle(c, &WittField::cos_mode(m), &WittField::sin_mode(m), config)
}

/// Cubic coefficient `a` of `β(m) = a m³ + b m` from `β(1), β(2)`.
pub fn cubic_coefficient(beta1: f64, beta2: f64) -> f64 {
    (beta2 - 2.0 * beta1) / 6.0
}

/// Cubic coefficient from `β(2), β(3)`.
pub fn cubic_coefficient_upper(beta2: f64, beta3: f64) -> f64 {
    (2.0 * beta3 - 3.0 * beta2) / 30.0
}

/// Cubic coefficient of a group cocycle's derived Lie cocycle.
pub fn cubic_coefficient_of(c: &GroupCocycle, config: &ExtractionConfig) -> Result<f64> {
    Ok(cubic_coefficient(
        diagonal_beta(c, 1, config)?,
        diagonal_beta(c, 2, config)?,
    ))
}

/// Central charge of `C`: its cubic coefficient divided by that of the
/// charge-one cocycle `B_{1,ℝ}` at the same resolution.
pub fn central_charge(c: &GroupCocycle, config: &ExtractionConfig) -> Result<f64> {
    let reference = GroupCocycle::virasoro(1.0).with_quadrature(c.quadrature_points());
    let a_ref = cubic_coefficient_of(&reference, config)?;
    Ok(cubic_coefficient_of(c, config)? / a_ref + 0.0)
}

/// Residual of the sl₂-normal form of a diagonal class.
///
/// Adds the coboundary direction `α·m` with `α = −β(1)`, fits the result to
/// `κ·m(m² − 1)` by least squares over `m = 2..=max_mode`, and returns the
/// largest deviation on `m = 1..=max_mode` relative to the fitted values.
/// Zero means the class has a representative vanishing on `m ∈ {−1, 0, 1}`.
pub fn sl2_class_check(b: &DiagonalCocycle, max_mode: i64) -> Result<f64> {
    if max_mode < 3 {
        return Err(Error::Usage(
            "the sl₂ check needs modes up to at least 3".into(),
        ));
    }
    let alpha = -b.beta_f64(1)?;
    let adjusted = (1..=max_mode)
        .map(|m| Ok(b.beta_f64(m)? + alpha * m as f64))
        .collect::<Result<Vec<_>>>()?;
    let basis = |m: i64| (m * m * m - m) as f64;
    let (num, den) = (2..=max_mode).fold((0.0, 0.0), |(n, d), m| {
        (
            n + adjusted[(m - 1) as usize] * basis(m),
            d + basis(m) * basis(m),
        )
    });
    let kappa = num / den;
    let scale = (kappa * basis(max_mode)).abs();
    let worst = (1..=max_mode)
        .map(|m| (adjusted[(m - 1) as usize] - kappa * basis(m)).abs())
        .fold(0.0, f64::max);
    if scale == 0.0 {
        return Ok(if worst == 0.0 { 0.0 } else { f64::INFINITY });
    }
    Ok(worst / scale)
}
