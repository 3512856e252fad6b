//! Seeded random diffeomorphisms and tangent data.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::diffeo::{CircleDiffeo, WittField};

/// Modes of random diffeomorphisms and perturbation fields.
pub const DEFAULT_ORDER: usize = 4;
/// Coefficients are drawn uniformly from `[−amplitude, amplitude]`.
pub const DEFAULT_AMPLITUDE: f64 = 0.05;

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn coefficients<R: Rng + ?Sized>(
    rng: &mut R,
    order: usize,
    amplitude: f64,
) -> (Vec<f64>, Vec<f64>) {
    let mut draw = || rng.random_range(-amplitude..=amplitude);
    let cos = (0..order).map(|_| draw()).collect();
    let sin = (0..order).map(|_| draw()).collect();
    (cos, sin)
}

/// `θ + Σₖ≤order (aₖ cos kθ + bₖ sin kθ)`, redrawn until orientation preserving.
pub fn random_diffeo<R: Rng + ?Sized>(rng: &mut R, order: usize, amplitude: f64) -> CircleDiffeo {
    loop {
        let (cos, sin) = coefficients(rng, order, amplitude);
        if let Ok(g) = CircleDiffeo::fourier(0.0, cos, sin) {
            return g;
        }
    }
}

pub fn random_field<R: Rng + ?Sized>(rng: &mut R, order: usize, amplitude: f64) -> WittField {
    let c = rng.random_range(-amplitude..=amplitude);
    let (cos, sin) = coefficients(rng, order, amplitude);
    WittField::new(c, cos, sin)
}

pub fn random_angle<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.random_range(0.0..std::f64::consts::TAU)
}
