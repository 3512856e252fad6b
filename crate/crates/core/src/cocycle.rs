//! Bott–Thurston group cocycles and the twisted group law they define.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::diffeo::CircleDiffeo;
use crate::error::{Error, Result};
use crate::quadrature::trapezoid;

pub const DEFAULT_QUADRATURE_POINTS: usize = 2048;

/// `∫ log(γ₁′∘γ₂) d log(γ₂′)` by the trapezoid rule on `m` nodes.
pub fn bott_thurston_r(g1: &CircleDiffeo, g2: &CircleDiffeo, m: usize) -> Result<f64> {
    trapezoid(m, |theta| {
        let j2 = g2.jet(theta)?;
        let j1 = g1.jet(j2.value)?;
        Ok(j1.d1.ln() * j2.d2 / j2.d1)
    })
}

/// `∫ log((γ₁∘γ₂)′) d log(γ₂′)`; differs from [`bott_thurston_r`] by an
/// exact form and so agrees with it.
pub fn bott_original_r(g1: &CircleDiffeo, g2: &CircleDiffeo, m: usize) -> Result<f64> {
    trapezoid(m, |theta| {
        let j2 = g2.jet(theta)?;
        let j1 = g1.jet(j2.value)?;
        Ok((j1.d1 * j2.d1).ln() * j2.d2 / j2.d1)
    })
}

/// `∫ log(γ′) d log(γ′)`, which vanishes since the integrand is exact.
pub fn log_derivative_self_pairing(g: &CircleDiffeo, m: usize) -> Result<f64> {
    trapezoid(m, |theta| {
        let j = g.jet(theta)?;
        Ok(j.d1.ln() * j.d2 / j.d1)
    })
}

/// Scale turning [`bott_thurston_r`] into the ℝ-valued cocycle at central
/// charge `λ`: `−λ/96π²`.
pub fn real_scale(lambda: f64) -> f64 {
    -lambda / (96.0 * PI * PI)
}

/// The 𝕋-valued cocycle `exp(2πi · B_{λ,ℝ})`.
pub fn bott_thurston_t(
    lambda: f64,
    g1: &CircleDiffeo,
    g2: &CircleDiffeo,
    m: usize,
) -> Result<Complex64> {
    let real = real_scale(lambda) * bott_thurston_r(g1, g2, m)?;
    Ok(Complex64::from_polar(1.0, TAU * real))
}

pub type CustomCocycleFn = dyn Fn(&CircleDiffeo, &CircleDiffeo) -> Result<f64> + Send + Sync;

#[derive(Clone)]
pub enum CocycleKind {
    BottThurston,
    BottOriginal,
    Custom(Arc<CustomCocycleFn>),
}

impl fmt::Debug for CocycleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::BottThurston => f.write_str("BottThurston"),
            Self::BottOriginal => f.write_str("BottOriginal"),
            Self::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

/// A real 2-cochain `scale · c(γ₁, γ₂)` on `Diff⁺(S¹)`.
#[derive(Debug, Clone)]
pub struct GroupCocycle {
    kind: CocycleKind,
    scale: f64,
    quadrature_points: usize,
}

impl PartialEq for GroupCocycle {
    fn eq(&self, other: &Self) -> bool {
        let same_kind = match (&self.kind, &other.kind) {
            (CocycleKind::BottThurston, CocycleKind::BottThurston) => true,
            (CocycleKind::BottOriginal, CocycleKind::BottOriginal) => true,
            (CocycleKind::Custom(a), CocycleKind::Custom(b)) => Arc::ptr_eq(a, b),
            _ => false,
        };
        same_kind && self.scale == other.scale && self.quadrature_points == other.quadrature_points
    }
}

impl GroupCocycle {
    pub fn bott_thurston(scale: f64) -> Self {
        Self {
            kind: CocycleKind::BottThurston,
            scale,
            quadrature_points: DEFAULT_QUADRATURE_POINTS,
        }
    }

    pub fn bott_original(scale: f64) -> Self {
        Self {
            kind: CocycleKind::BottOriginal,
            scale,
            quadrature_points: DEFAULT_QUADRATURE_POINTS,
        }
    }

    /// `B_{λ,ℝ}`, whose exponential defines the Virasoro group at central charge `λ`.
    pub fn virasoro(lambda: f64) -> Self {
        Self::bott_thurston(real_scale(lambda))
    }

    pub fn custom<F>(f: F) -> Self
    where
        F: Fn(&CircleDiffeo, &CircleDiffeo) -> Result<f64> + Send + Sync + 'static,
    {
        Self {
            kind: CocycleKind::Custom(Arc::new(f)),
            scale: 1.0,
            quadrature_points: DEFAULT_QUADRATURE_POINTS,
        }
    }

    pub fn with_quadrature(mut self, m: usize) -> Self {
        self.quadrature_points = m;
        self
    }

    pub fn scaled(mut self, c: f64) -> Self {
        self.scale *= c;
        self
    }

    pub fn kind(&self) -> &CocycleKind {
        &self.kind
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn quadrature_points(&self) -> usize {
        self.quadrature_points
    }

    pub fn evaluate(&self, g1: &CircleDiffeo, g2: &CircleDiffeo) -> Result<f64> {
        let raw = match &self.kind {
            CocycleKind::BottThurston => bott_thurston_r(g1, g2, self.quadrature_points)?,
            CocycleKind::BottOriginal => bott_original_r(g1, g2, self.quadrature_points)?,
            CocycleKind::Custom(f) => f(g1, g2)?,
        };
        Ok(self.scale * raw + 0.0)
    }
}

/// `C(γ₁,γ₂) + C(γ₁γ₂,γ₃) − C(γ₂,γ₃) − C(γ₁,γ₂γ₃)`.
pub fn cocycle_defect(
    c: &GroupCocycle,
    g1: &CircleDiffeo,
    g2: &CircleDiffeo,
    g3: &CircleDiffeo,
) -> Result<f64> {
    let g12 = CircleDiffeo::compose(g1, g2);
    let g23 = CircleDiffeo::compose(g2, g3);
    Ok(c.evaluate(g1, g2)? + c.evaluate(&g12, g3)? - c.evaluate(g2, g3)? - c.evaluate(g1, &g23)?)
}

/// Central coordinate of an extension element.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Phase {
    /// Extension by `𝕋`, obtained from the real cocycle through `exp(2πi·)`.
    Circle(Complex64),
    /// Extension by `ℝ`.
    Real(f64),
}

/// `(z, γ)` in `𝕋 × Γ` or `ℝ × Γ` with the product twisted by a cocycle.
#[derive(Debug, Clone)]
pub struct VirasoroElement {
    phase: Phase,
    diffeo: CircleDiffeo,
    cocycle: GroupCocycle,
}

const UNIT_TOL: f64 = 1e-12;

impl VirasoroElement {
    pub fn circle(z: Complex64, diffeo: CircleDiffeo, cocycle: GroupCocycle) -> Result<Self> {
        if (z.norm() - 1.0).abs() > UNIT_TOL {
            return Err(Error::InvalidElement(format!(
                "phase {z} is not of unit modulus"
            )));
        }
        Ok(Self {
            phase: Phase::Circle(z),
            diffeo,
            cocycle,
        })
    }

    pub fn real(x: f64, diffeo: CircleDiffeo, cocycle: GroupCocycle) -> Self {
        Self {
            phase: Phase::Real(x),
            diffeo,
            cocycle,
        }
    }

    pub fn circle_identity(cocycle: GroupCocycle) -> Self {
        Self {
            phase: Phase::Circle(Complex64::new(1.0, 0.0)),
            diffeo: CircleDiffeo::identity(),
            cocycle,
        }
    }

    pub fn real_identity(cocycle: GroupCocycle) -> Self {
        Self::real(0.0, CircleDiffeo::identity(), cocycle)
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn diffeo(&self) -> &CircleDiffeo {
        &self.diffeo
    }

    pub fn cocycle(&self) -> &GroupCocycle {
        &self.cocycle
    }

    fn twist(phase: Phase, c: f64) -> Phase {
        match phase {
            Phase::Circle(z) => {
                let w = z * Complex64::from_polar(1.0, TAU * c);
                Phase::Circle(w / w.norm())
            }
            Phase::Real(x) => Phase::Real(x + c),
        }
    }
}

/// `(z₁, γ₁)·(z₂, γ₂) = (z₁ z₂ C(γ₁, γ₂), γ₁∘γ₂)`, written additively for ℝ.
pub fn virasoro_mul(e1: &VirasoroElement, e2: &VirasoroElement) -> Result<VirasoroElement> {
    if e1.cocycle != e2.cocycle {
        return Err(Error::Usage("elements carry different cocycles".into()));
    }
    let product = match (e1.phase, e2.phase) {
        (Phase::Circle(a), Phase::Circle(b)) => Phase::Circle(a * b),
        (Phase::Real(a), Phase::Real(b)) => Phase::Real(a + b),
        _ => {
            return Err(Error::Usage(
                "cannot multiply 𝕋- and ℝ-extension elements".into(),
            ))
        }
    };
    let c = e1.cocycle.evaluate(&e1.diffeo, &e2.diffeo)?;
    Ok(VirasoroElement {
        phase: VirasoroElement::twist(product, c),
        diffeo: CircleDiffeo::compose(&e1.diffeo, &e2.diffeo),
        cocycle: e1.cocycle.clone(),
    })
}

/// `(z, γ)⁻¹ = (z⁻¹ C(γ, γ⁻¹)⁻¹, γ⁻¹)`.
pub fn virasoro_inv(e: &VirasoroElement) -> Result<VirasoroElement> {
    let inv = e.diffeo.inverse()?;
    let c = e.cocycle.evaluate(&e.diffeo, &inv)?;
    let phase = match e.phase {
        Phase::Circle(z) => Phase::Circle(z.conj()),
        Phase::Real(x) => Phase::Real(-x),
    };
    Ok(VirasoroElement {
        phase: VirasoroElement::twist(phase, -c),
        diffeo: inv,
        cocycle: e.cocycle.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffeo::circle_distance;
    use crate::sampling::{random_diffeo, seeded};

    fn wobble() -> CircleDiffeo {
        CircleDiffeo::fourier(0.0, vec![0.0], vec![0.3]).unwrap()
    }

    /// `θ + 0.3 sin θ + 0.1 cos 2θ` with closed-form derivatives.
    fn skew_lift(t: f64) -> (f64, f64, f64) {
        (
            t + 0.3 * t.sin() + 0.1 * (2.0 * t).cos(),
            1.0 + 0.3 * t.cos() - 0.2 * (2.0 * t).sin(),
            -0.3 * t.sin() - 0.4 * (2.0 * t).cos(),
        )
    }

    /// Oracle for `B(γ, γ)`: closed-form lift derivatives, 10⁵ nodes.
    fn self_pairing_oracle(lift: impl Fn(f64) -> (f64, f64, f64)) -> f64 {
        let n = 100_000;
        let mut sum = 0.0;
        for j in 0..n {
            let t = TAU * j as f64 / n as f64;
            let (g, g1, g2) = lift(t);
            sum += lift(g).1.ln() * g2 / g1;
        }
        sum * TAU / n as f64
    }

    // Frozen from `self_pairing_oracle(skew_lift)`.
    const SKEW_SELF_PAIRING: f64 = -0.141_583_779_697_317_5;

    #[test]
    fn frozen_self_pairing_matches_oracle() {
        assert!((self_pairing_oracle(skew_lift) - SKEW_SELF_PAIRING).abs() < 1e-14);
        // θ ↦ −θ symmetry makes the integrand odd
        let wob = |t: f64| (t + 0.3 * t.sin(), 1.0 + 0.3 * t.cos(), -0.3 * t.sin());
        assert!(self_pairing_oracle(wob).abs() < 1e-14);
    }

    #[test]
    fn bott_thurston_self_pairing() {
        let g = wobble();
        assert!(
            bott_thurston_r(&g, &g, DEFAULT_QUADRATURE_POINTS)
                .unwrap()
                .abs()
                < 1e-14
        );
        let skew = CircleDiffeo::fourier(0.0, vec![0.0, 0.1], vec![0.3, 0.0]).unwrap();
        let v = bott_thurston_r(&skew, &skew, DEFAULT_QUADRATURE_POINTS).unwrap();
        assert!((v - SKEW_SELF_PAIRING).abs() < 1e-13, "{v}");
    }

    #[test]
    fn normalization_is_exact() {
        let g = wobble();
        let id = CircleDiffeo::identity();
        assert_eq!(bott_thurston_r(&id, &g, 256).unwrap(), 0.0);
        assert_eq!(bott_thurston_r(&g, &id, 256).unwrap(), 0.0);
        assert_eq!(
            bott_thurston_r(&g, &CircleDiffeo::rotation(1.1), 256).unwrap(),
            0.0
        );
        // only zero up to rounding: the integrand is exact but not pointwise zero
        assert!(bott_original_r(&id, &g, 256).unwrap().abs() < 1e-15);
    }

    #[test]
    fn variants_agree() {
        let mut rng = seeded(3);
        for _ in 0..10 {
            let a = random_diffeo(&mut rng, 4, 0.05);
            let b = random_diffeo(&mut rng, 4, 0.05);
            let d = bott_original_r(&a, &b, 2048).unwrap() - bott_thurston_r(&a, &b, 2048).unwrap();
            assert!(d.abs() < 1e-10);
            assert!(log_derivative_self_pairing(&b, 2048).unwrap().abs() < 1e-10);
        }
    }

    #[test]
    fn circle_valued_cocycle() {
        let g = wobble();
        let h = CircleDiffeo::mobius(1.3, 0.2, 0.1, 0.9).unwrap();
        assert_eq!(
            bott_thurston_t(0.0, &g, &h, 512).unwrap(),
            Complex64::new(1.0, 0.0)
        );
        assert_eq!(
            bott_thurston_t(2.0, &CircleDiffeo::identity(), &g, 512).unwrap(),
            Complex64::new(1.0, 0.0)
        );
        let z = bott_thurston_t(5.0, &g, &h, 512).unwrap();
        assert!((z.norm() - 1.0).abs() < 1e-15);
        // exp(−iλ/48π ∫…) written out directly
        let direct = Complex64::from_polar(
            1.0,
            -5.0 / (48.0 * PI) * bott_thurston_r(&g, &h, 512).unwrap(),
        );
        assert!((z - direct).norm() < 1e-14);
    }

    #[test]
    fn defect_vanishes_with_identity_first() {
        let mut rng = seeded(4);
        let (b, c) = (
            random_diffeo(&mut rng, 4, 0.05),
            random_diffeo(&mut rng, 4, 0.05),
        );
        let id = CircleDiffeo::identity();
        assert_eq!(
            cocycle_defect(&GroupCocycle::bott_thurston(1.0), &id, &b, &c).unwrap(),
            0.0
        );
        assert!(
            cocycle_defect(&GroupCocycle::bott_original(2.0), &id, &b, &c)
                .unwrap()
                .abs()
                < 1e-15
        );
    }

    #[test]
    fn bott_thurston_satisfies_cocycle_identity() {
        let mut rng = seeded(5);
        let c = GroupCocycle::bott_thurston(1.0).with_quadrature(4096);
        for _ in 0..5 {
            let g: Vec<_> = (0..3).map(|_| random_diffeo(&mut rng, 8, 0.05)).collect();
            assert!(cocycle_defect(&c, &g[0], &g[1], &g[2]).unwrap().abs() < 1e-8);
        }
    }

    #[test]
    fn coboundaries_are_cocycles() {
        let k = |g: &CircleDiffeo| -> Result<f64> {
            trapezoid(64, |t| Ok(g.jet(t)?.d1.ln().powi(2) + g.value(t)?.sin()))
        };
        let c =
            GroupCocycle::custom(move |a, b| Ok(k(&CircleDiffeo::compose(a, b))? - k(a)? - k(b)?));
        let mut rng = seeded(6);
        let g: Vec<_> = (0..3).map(|_| random_diffeo(&mut rng, 4, 0.05)).collect();
        assert!(cocycle_defect(&c, &g[0], &g[1], &g[2]).unwrap().abs() < 1e-13);
    }

    #[test]
    fn real_extension_group_law() {
        let c = GroupCocycle::bott_thurston(1.0);
        let mut rng = seeded(7);
        let g: Vec<_> = (0..3).map(|_| random_diffeo(&mut rng, 4, 0.05)).collect();
        let e: Vec<_> = g
            .iter()
            .zip([0.1, -0.4, 2.0])
            .map(|(g, x)| VirasoroElement::real(x, g.clone(), c.clone()))
            .collect();
        let left = virasoro_mul(&virasoro_mul(&e[0], &e[1]).unwrap(), &e[2]).unwrap();
        let right = virasoro_mul(&e[0], &virasoro_mul(&e[1], &e[2]).unwrap()).unwrap();
        match (left.phase(), right.phase()) {
            (Phase::Real(a), Phase::Real(b)) => assert!((a - b).abs() < 1e-8),
            _ => unreachable!(),
        }
        let unit = virasoro_mul(&e[0], &virasoro_inv(&e[0]).unwrap()).unwrap();
        match unit.phase() {
            Phase::Real(x) => assert!(x.abs() < 1e-8),
            _ => unreachable!(),
        }
        assert!(
            unit.diffeo()
                .distance(&CircleDiffeo::identity(), 128)
                .unwrap()
                < 1e-9
        );
    }

    #[test]
    fn circle_extension_group_law() {
        let c = GroupCocycle::virasoro(1.0);
        let z1 = Complex64::from_polar(1.0, 0.3);
        let z2 = Complex64::from_polar(1.0, -1.2);
        let a = VirasoroElement::circle(z1, CircleDiffeo::identity(), c.clone()).unwrap();
        let b = VirasoroElement::circle(z2, CircleDiffeo::identity(), c.clone()).unwrap();
        match virasoro_mul(&a, &b).unwrap().phase() {
            Phase::Circle(z) => assert!((z - z1 * z2).norm() < 1e-15),
            _ => unreachable!(),
        }
        let e = VirasoroElement::circle(z1, wobble(), c).unwrap();
        let unit = virasoro_mul(&e, &virasoro_inv(&e).unwrap()).unwrap();
        match unit.phase() {
            Phase::Circle(z) => assert!((z - 1.0).norm() < 1e-8),
            _ => unreachable!(),
        }
        assert!(circle_distance(unit.diffeo().value(1.0).unwrap(), 1.0) < 1e-9);
    }

    #[test]
    fn mismatched_cocycles_rejected() {
        let a = VirasoroElement::real_identity(GroupCocycle::bott_thurston(1.0));
        let b = VirasoroElement::real_identity(GroupCocycle::bott_thurston(2.0));
        assert!(matches!(virasoro_mul(&a, &b), Err(Error::Usage(_))));
        let c = VirasoroElement::circle_identity(GroupCocycle::bott_thurston(1.0));
        assert!(matches!(virasoro_mul(&a, &c), Err(Error::Usage(_))));
    }

    #[test]
    fn non_unit_phase_rejected() {
        let r = VirasoroElement::circle(
            Complex64::new(2.0, 0.0),
            CircleDiffeo::identity(),
            GroupCocycle::bott_thurston(1.0),
        );
        assert!(r.is_err());
    }
}
