//! First-order dual numbers `a + b·ε` with `ε² = 0`.
//!
//! Tangent vectors are pushed through face maps by evaluating the maps on
//! dual arguments; the `eps` part of the output is the pushed tangent.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Dual {
    pub re: f64,
    pub eps: f64,
}

impl Dual {
    pub const fn new(re: f64, eps: f64) -> Self {
        Self { re, eps }
    }

    pub const fn constant(re: f64) -> Self {
        Self { re, eps: 0.0 }
    }

    /// The coordinate function at `re` pushing forward the unit tangent.
    pub const fn variable(re: f64) -> Self {
        Self { re, eps: 1.0 }
    }

    pub fn exp(self) -> Self {
        let e = self.re.exp();
        Self::new(e, e * self.eps)
    }

    pub fn ln(self) -> Self {
        Self::new(self.re.ln(), self.eps / self.re)
    }

    pub fn sin(self) -> Self {
        Self::new(self.re.sin(), self.re.cos() * self.eps)
    }

    pub fn cos(self) -> Self {
        Self::new(self.re.cos(), -self.re.sin() * self.eps)
    }

    pub fn recip(self) -> Self {
        Self::new(1.0 / self.re, -self.eps / (self.re * self.re))
    }

    /// `d log` of a positive quantity: the `eps` part of `ln(self)`.
    pub fn dlog(self) -> f64 {
        self.eps / self.re
    }
}

impl fmt::Display for Dual {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}ε", self.re, self.eps)
    }
}

impl From<f64> for Dual {
    fn from(re: f64) -> Self {
        Self::constant(re)
    }
}

impl Add for Dual {
    type Output = Dual;
    fn add(self, rhs: Dual) -> Dual {
        Dual::new(self.re + rhs.re, self.eps + rhs.eps)
    }
}

impl AddAssign for Dual {
    fn add_assign(&mut self, rhs: Dual) {
        self.re += rhs.re;
        self.eps += rhs.eps;
    }
}

impl Sub for Dual {
    type Output = Dual;
    fn sub(self, rhs: Dual) -> Dual {
        Dual::new(self.re - rhs.re, self.eps - rhs.eps)
    }
}

impl Mul for Dual {
    type Output = Dual;
    fn mul(self, rhs: Dual) -> Dual {
        Dual::new(self.re * rhs.re, self.re * rhs.eps + self.eps * rhs.re)
    }
}

impl Div for Dual {
    type Output = Dual;
    fn div(self, rhs: Dual) -> Dual {
        Dual::new(
            self.re / rhs.re,
            (self.eps * rhs.re - self.re * rhs.eps) / (rhs.re * rhs.re),
        )
    }
}

impl Neg for Dual {
    type Output = Dual;
    fn neg(self) -> Dual {
        Dual::new(-self.re, -self.eps)
    }
}

impl Add<f64> for Dual {
    type Output = Dual;
    fn add(self, rhs: f64) -> Dual {
        Dual::new(self.re + rhs, self.eps)
    }
}

impl Sub<f64> for Dual {
    type Output = Dual;
    fn sub(self, rhs: f64) -> Dual {
        Dual::new(self.re - rhs, self.eps)
    }
}

impl Mul<f64> for Dual {
    type Output = Dual;
    fn mul(self, rhs: f64) -> Dual {
        Dual::new(self.re * rhs, self.eps * rhs)
    }
}

impl Mul<Dual> for f64 {
    type Output = Dual;
    fn mul(self, rhs: Dual) -> Dual {
        rhs * self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fd(f: impl Fn(f64) -> f64, x: f64) -> f64 {
        let h = 1e-6;
        (f(x + h) - f(x - h)) / (2.0 * h)
    }

    #[test]
    fn elementary_derivatives_match_central_differences() {
        let x = 0.7;
        let g = |d: Dual| (d.sin() * d.exp() + d.cos().recip()) / (d * d + 1.0).ln();
        let gr = |t: f64| (t.sin() * t.exp() + 1.0 / t.cos()) / (t * t + 1.0).ln();
        let out = g(Dual::variable(x));
        assert!((out.re - gr(x)).abs() < 1e-14);
        assert!((out.eps - fd(gr, x)).abs() < 1e-7);
    }

    #[test]
    fn dlog_of_product_is_sum() {
        let a = Dual::new(2.0, 0.3);
        let b = Dual::new(5.0, -1.1);
        assert!(((a * b).dlog() - (a.dlog() + b.dlog())).abs() < 1e-15);
    }
}
