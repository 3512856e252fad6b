use std::f64::consts::TAU;

use crate::error::{Error, Result};

use super::Jet;

/// Real fractional linear transformation acting on `S¹ = ℝP¹`.
///
/// The point `θ` is the line spanned by `w = (sin θ/2, cos θ/2)`, so the
/// half-angle chart `t = tan(θ/2)` transforms as `t ↦ (at + b)/(ct + d)`.
/// Working with `w` directly avoids the pole of the chart at `θ = π`.
#[derive(Debug, Clone, PartialEq)]
pub struct MobiusMap {
    m: [f64; 4],
    shift: f64,
}

impl MobiusMap {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let det = a * d - b * c;
        if det.is_nan() || det <= 0.0 || ![a, b, c, d].iter().all(|x| x.is_finite()) {
            return Err(Error::InvalidElement(format!(
                "Möbius matrix must have positive determinant, got {det}"
            )));
        }
        // ±M act identically; a non-negative trace rules out eigenvalues of
        // negative sign, so the rotation angle from w to Mw stays in (−π, π).
        let m = if a + d < 0.0 {
            [-a, -b, -c, -d]
        } else {
            [a, b, c, d]
        };
        let mut map = Self { m, shift: 0.0 };
        if map.raw_value(0.0) < 0.0 {
            map.shift = TAU;
        }
        Ok(map)
    }

    pub fn matrix(&self) -> [f64; 4] {
        self.m
    }

    fn det(&self) -> f64 {
        let [a, b, c, d] = self.m;
        a * d - b * c
    }

    fn image(&self, w: (f64, f64)) -> (f64, f64) {
        let [a, b, c, d] = self.m;
        (a * w.0 + b * w.1, c * w.0 + d * w.1)
    }

    fn raw_value(&self, theta: f64) -> f64 {
        let (s, c) = (0.5 * theta).sin_cos();
        let (p0, p1) = self.image((s, c));
        let turn = (p0 * c - p1 * s).atan2(p0 * s + p1 * c);
        theta + 2.0 * turn
    }

    pub fn jet(&self, theta: f64) -> Jet {
        let (s, c) = (0.5 * theta).sin_cos();
        let (p0, p1) = self.image((s, c));
        let (dp0, dp1) = self.image((c, -s));
        let q = p0 * p0 + p1 * p1;
        let dq = 2.0 * (p0 * dp0 + p1 * dp1);
        let det = self.det();
        Jet {
            value: self.raw_value(theta) + self.shift,
            d1: det / q,
            d2: -det * dq / (2.0 * q * q),
        }
    }
}
