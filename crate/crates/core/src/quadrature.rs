//! Uniform trapezoid rule on `[0, 2π)`.
//!
//! For smooth 2π-periodic integrands the rule converges geometrically in the
//! number of nodes, and it is exact on trigonometric polynomials of degree
//! below the node count.

use std::f64::consts::TAU;

use crate::error::{Error, Result};

/// Nodes `2πj/M`, `j = 0..M`.
pub fn nodes(m: usize) -> impl Iterator<Item = f64> {
    (0..m).map(move |j| TAU * j as f64 / m as f64)
}

pub fn trapezoid<F>(m: usize, mut integrand: F) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    if m == 0 {
        return Err(Error::Usage("quadrature needs at least one node".into()));
    }
    let mut sum = 0.0;
    for theta in nodes(m) {
        sum += integrand(theta)?;
    }
    Ok(sum * TAU / m as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_on_low_degree_trig_polynomials() {
        let v = trapezoid(16, |t| Ok((3.0 * t).cos().powi(2) + (5.0 * t).sin())).unwrap();
        assert!((v - std::f64::consts::PI).abs() < 1e-13);
    }

    #[test]
    fn geometric_convergence_for_analytic_integrand() {
        // ∫ exp(cos t) dt = 2π I₀(1)
        let exact = TAU * 1.266_065_877_752_008_4;
        let coarse = trapezoid(10, |t| Ok(t.cos().exp())).unwrap();
        let fine = trapezoid(16, |t| Ok(t.cos().exp())).unwrap();
        assert!((coarse - exact).abs() < 1e-8);
        assert!((fine - exact).abs() < 1e-13);
    }

    #[test]
    fn zero_nodes_is_rejected() {
        assert!(trapezoid(0, |_| Ok(1.0)).is_err());
    }
}
