use std::f64::consts::TAU;

use rustfft::{num_complex::Complex64, FftPlanner};

use crate::error::{Error, Result};

use super::field::WittField;
use super::fourier::FourierLift;
use super::CircleDiffeo;

/// Largest step of the fixed-step integrator.
pub const MAX_STEP: f64 = 0.01;
/// RK4 step bound in units of the field's Lipschitz constant.
const STABILITY_STEP: f64 = 0.5;
const MAX_STEPS: f64 = 1e7;

fn step_count(field: &WittField, t: f64) -> Result<usize> {
    let by_size = (t.abs() / MAX_STEP - 1e-9).ceil();
    let by_stiffness = (t.abs() * field.lipschitz_bound() / STABILITY_STEP - 1e-9).ceil();
    let n = by_size.max(by_stiffness).max(1.0);
    if !n.is_finite() || n > MAX_STEPS {
        return Err(Error::Integration(format!(
            "step size underflow: flow to t = {t} would need {n:e} steps"
        )));
    }
    Ok(n as usize)
}

/// Classical RK4 for the displacement `δ(s) = θ(s) − θ₀` of `dθ/ds = u(θ)`.
///
/// Integrating the displacement rather than the position keeps small flows
/// free of cancellation against `θ₀`.
pub(crate) fn displacement(field: &WittField, theta0: f64, t: f64, steps: usize) -> f64 {
    let h = t / steps as f64;
    let rhs = |d: f64| field.value(theta0 + d);
    let mut d = 0.0;
    for _ in 0..steps {
        let k1 = rhs(d);
        let k2 = rhs(d + 0.5 * h * k1);
        let k3 = rhs(d + 0.5 * h * k2);
        let k4 = rhs(d + h * k3);
        d += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    d
}

/// Fourier coefficients of order `order` of uniformly sampled periodic data.
pub(crate) fn fourier_fit(samples: &[f64], order: usize) -> (f64, Vec<f64>, Vec<f64>) {
    let m = samples.len();
    debug_assert!(2 * order < m);
    let mut buf: Vec<Complex64> = samples.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(m).process(&mut buf);
    let scale = 2.0 / m as f64;
    let cos = (1..=order).map(|k| buf[k].re * scale).collect();
    let sin = (1..=order).map(|k| -buf[k].im * scale).collect();
    (buf[0].re / m as f64, cos, sin)
}

pub(crate) fn flow(field: &WittField, t: f64, order: usize) -> Result<CircleDiffeo> {
    if !t.is_finite() {
        return Err(Error::Integration(format!("non-finite flow time {t}")));
    }
    let steps = step_count(field, t)?;
    let grid = 4 * order.max(1);
    let samples: Vec<f64> = (0..grid)
        .map(|j| displacement(field, TAU * j as f64 / grid as f64, t, steps))
        .collect();
    if samples.iter().any(|d| !d.is_finite()) {
        return Err(Error::Integration("flow produced non-finite values".into()));
    }
    let (a0, cos, sin) = fourier_fit(&samples, order);
    FourierLift::new(a0, cos, sin)
        .map(CircleDiffeo::from_lift)
        .map_err(|e| Error::Integration(format!("projected flow is not a diffeomorphism: {e}")))
}
