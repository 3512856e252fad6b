use std::f64::consts::TAU;

use crate::error::{Error, Result};

use super::Jet;

/// Smallest admissible value of `f′` on the validation grid.
pub const ORIENTATION_EPS: f64 = 1e-6;

/// `(k, cos kθ, sin kθ)` for `k = 1..=n` via the angle-addition recurrence.
#[derive(Debug, Clone)]
pub(crate) struct Harmonics {
    k: usize,
    n: usize,
    c1: f64,
    s1: f64,
    c: f64,
    s: f64,
}

impl Harmonics {
    pub(crate) fn new(theta: f64, n: usize) -> Self {
        let (s1, c1) = theta.sin_cos();
        Self {
            k: 0,
            n,
            c1,
            s1,
            c: 1.0,
            s: 0.0,
        }
    }
}

impl Iterator for Harmonics {
    type Item = (f64, f64, f64);

    fn next(&mut self) -> Option<Self::Item> {
        if self.k == self.n {
            return None;
        }
        self.k += 1;
        let c = self.c * self.c1 - self.s * self.s1;
        let s = self.s * self.c1 + self.c * self.s1;
        self.c = c;
        self.s = s;
        Some((self.k as f64, c, s))
    }
}

/// Lift `f(θ) = θ + a₀ + Σₖ (aₖ cos kθ + bₖ sin kθ)` of a circle diffeomorphism.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierLift {
    offset: f64,
    cos: Vec<f64>,
    sin: Vec<f64>,
}

impl FourierLift {
    /// Validates orientation on a dense grid and normalizes `f(0)` into `[0, 2π)`.
    pub fn new(offset: f64, cos: Vec<f64>, sin: Vec<f64>) -> Result<Self> {
        if cos.len() != sin.len() {
            return Err(Error::InvalidElement(format!(
                "cosine and sine coefficient counts differ ({} vs {})",
                cos.len(),
                sin.len()
            )));
        }
        if !offset.is_finite() || cos.iter().chain(sin.iter()).any(|c| !c.is_finite()) {
            return Err(Error::InvalidElement(
                "non-finite Fourier coefficient".into(),
            ));
        }
        let mut lift = Self { offset, cos, sin };
        let min = lift.min_derivative();
        if min < ORIENTATION_EPS {
            return Err(Error::InvalidElement(format!(
                "not orientation preserving: min f' = {min:e} < {ORIENTATION_EPS:e}"
            )));
        }
        let at_zero = lift.offset + lift.cos.iter().sum::<f64>();
        lift.offset -= TAU * (at_zero / TAU).floor();
        Ok(lift)
    }

    pub fn identity() -> Self {
        Self {
            offset: 0.0,
            cos: Vec::new(),
            sin: Vec::new(),
        }
    }

    pub fn order(&self) -> usize {
        self.cos.len()
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn cos_coefficients(&self) -> &[f64] {
        &self.cos
    }

    pub fn sin_coefficients(&self) -> &[f64] {
        &self.sin
    }

    /// Lower bound for `min f′`.
    ///
    /// Starts from a uniform grid of `4·max(N, 16)` points and refines until
    /// the grid minimum minus the interpolation error `h²/8 · sup|f‴|`
    /// clears [`ORIENTATION_EPS`]. At the densest grid the plain grid minimum
    /// is returned.
    pub fn min_derivative(&self) -> f64 {
        let third: f64 = self
            .cos
            .iter()
            .zip(&self.sin)
            .enumerate()
            .map(|(i, (a, b))| ((i + 1) as f64).powi(3) * (a.abs() + b.abs()))
            .sum();
        let mut grid = 4 * self.order().max(16);
        loop {
            let min = (0..grid)
                .map(|j| self.jet(TAU * j as f64 / grid as f64).d1)
                .fold(f64::INFINITY, f64::min);
            let h = TAU / grid as f64;
            let certified = min - h * h / 8.0 * third;
            if certified >= ORIENTATION_EPS || min < ORIENTATION_EPS || grid >= 4096 {
                return if certified >= ORIENTATION_EPS {
                    certified
                } else {
                    min
                };
            }
            grid *= 4;
        }
    }

    pub fn jet(&self, theta: f64) -> Jet {
        let (mut p, mut p1, mut p2) = (0.0, 0.0, 0.0);
        for ((k, c, s), (a, b)) in
            Harmonics::new(theta, self.order()).zip(self.cos.iter().zip(&self.sin))
        {
            p += a * c + b * s;
            p1 += k * (b * c - a * s);
            p2 -= k * k * (a * c + b * s);
        }
        Jet {
            value: theta + self.offset + p,
            d1: 1.0 + p1,
            d2: p2,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonics_match_direct_evaluation() {
        let theta = 2.345;
        for (k, c, s) in Harmonics::new(theta, 32) {
            assert!((c - (k * theta).cos()).abs() < 1e-13);
            assert!((s - (k * theta).sin()).abs() < 1e-13);
        }
    }

    #[test]
    fn rejects_folding_lift() {
        let err = FourierLift::new(0.0, vec![0.0], vec![1.5]).unwrap_err();
        assert!(matches!(err, Error::InvalidElement(_)));
    }

    #[test]
    fn rejects_mismatched_lengths() {
        assert!(FourierLift::new(0.0, vec![0.0, 0.1], vec![0.1]).is_err());
    }

    #[test]
    fn offset_is_normalized() {
        let lift = FourierLift::new(-1.0, vec![0.2], vec![0.0]).unwrap();
        let f0 = lift.jet(0.0).value;
        assert!((0.0..TAU).contains(&f0));
        assert!((f0 - (TAU - 0.8)).abs() < 1e-14);
    }
}
