use num_complex::Complex64;

use super::fourier::Harmonics;

/// Real periodic vector field `u(θ)∂θ` with finitely many Fourier modes.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct WittField {
    constant: f64,
    cos: Vec<f64>,
    sin: Vec<f64>,
}

impl WittField {
    pub fn new(constant: f64, mut cos: Vec<f64>, mut sin: Vec<f64>) -> Self {
        let n = cos.len().max(sin.len());
        cos.resize(n, 0.0);
        sin.resize(n, 0.0);
        Self { constant, cos, sin }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: f64) -> Self {
        Self::new(c, Vec::new(), Vec::new())
    }

    /// `cos(mθ)∂θ`; even in `m`.
    pub fn cos_mode(m: i64) -> Self {
        if m == 0 {
            return Self::constant(1.0);
        }
        let k = m.unsigned_abs() as usize;
        let mut cos = vec![0.0; k];
        cos[k - 1] = 1.0;
        Self::new(0.0, cos, Vec::new())
    }

    /// `sin(mθ)∂θ`; odd in `m`.
    pub fn sin_mode(m: i64) -> Self {
        if m == 0 {
            return Self::zero();
        }
        let k = m.unsigned_abs() as usize;
        let mut sin = vec![0.0; k];
        sin[k - 1] = m.signum() as f64;
        Self::new(0.0, Vec::new(), sin)
    }

    pub fn order(&self) -> usize {
        self.cos.len()
    }

    pub fn constant_term(&self) -> f64 {
        self.constant
    }

    pub fn cos_coefficients(&self) -> &[f64] {
        &self.cos
    }

    pub fn sin_coefficients(&self) -> &[f64] {
        &self.sin
    }

    /// `(u, u′, u″)` at `θ`.
    pub fn eval(&self, theta: f64) -> (f64, f64, f64) {
        let (mut u, mut u1, mut u2) = (self.constant, 0.0, 0.0);
        for ((k, c, s), (a, b)) in
            Harmonics::new(theta, self.order()).zip(self.cos.iter().zip(&self.sin))
        {
            u += a * c + b * s;
            u1 += k * (b * c - a * s);
            u2 -= k * k * (a * c + b * s);
        }
        (u, u1, u2)
    }

    pub fn value(&self, theta: f64) -> f64 {
        self.eval(theta).0
    }

    /// Upper bound for `sup |u′|`.
    pub fn lipschitz_bound(&self) -> f64 {
        self.cos
            .iter()
            .zip(&self.sin)
            .enumerate()
            .map(|(i, (a, b))| (i + 1) as f64 * (a.abs() + b.abs()))
            .sum()
    }

    pub fn scale(&self, c: f64) -> Self {
        Self {
            constant: self.constant * c,
            cos: self.cos.iter().map(|a| a * c).collect(),
            sin: self.sin.iter().map(|b| b * c).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.order().max(other.order());
        let get = |v: &[f64], i: usize| v.get(i).copied().unwrap_or(0.0);
        Self {
            constant: self.constant + other.constant,
            cos: (0..n)
                .map(|i| get(&self.cos, i) + get(&other.cos, i))
                .collect(),
            sin: (0..n)
                .map(|i| get(&self.sin, i) + get(&other.sin, i))
                .collect(),
        }
    }

    /// Drops trailing zero modes.
    pub fn trimmed(&self) -> Self {
        let mut n = self.order();
        while n > 0 && self.cos[n - 1] == 0.0 && self.sin[n - 1] == 0.0 {
            n -= 1;
        }
        Self {
            constant: self.constant,
            cos: self.cos[..n].to_vec(),
            sin: self.sin[..n].to_vec(),
        }
    }

    /// Complex exponential coefficients `c_k`, `k = −N..=N`, stored at `k + N`.
    fn exponential_coefficients(&self) -> Vec<Complex64> {
        let n = self.order();
        let mut c = vec![Complex64::new(0.0, 0.0); 2 * n + 1];
        c[n] = Complex64::new(self.constant, 0.0);
        for k in 1..=n {
            let (a, b) = (self.cos[k - 1], self.sin[k - 1]);
            c[n + k] = Complex64::new(0.5 * a, -0.5 * b);
            c[n - k] = Complex64::new(0.5 * a, 0.5 * b);
        }
        c
    }

    /// Lie bracket of `Diff⁺(S¹)`: `[u, w] = (w u′ − u w′)∂θ`, the negative of
    /// the commutator of vector fields. With this sign the generators obey
    /// `[L_m, L_n] = (m − n)L_{m+n}`.
    ///
    /// Computed on exponential coefficients; for coefficients that are small
    /// integers or halves every intermediate is exact in binary floating point.
    pub fn bracket(&self, other: &Self) -> Self {
        let (n1, n2) = (self.order() as i64, other.order() as i64);
        let (c, d) = (
            self.exponential_coefficients(),
            other.exponential_coefficients(),
        );
        let n = n1 + n2;
        let mut out = vec![Complex64::new(0.0, 0.0); (2 * n + 1) as usize];
        for k in -n1..=n1 {
            let ck = c[(k + n1) as usize];
            if ck == Complex64::new(0.0, 0.0) {
                continue;
            }
            for l in -n2..=n2 {
                let dl = d[(l + n2) as usize];
                out[(k + l + n) as usize] += ck * dl * Complex64::new(0.0, (k - l) as f64);
            }
        }
        let nu = n as usize;
        let cos = (1..=nu).map(|k| 2.0 * out[nu + k].re).collect();
        let sin = (1..=nu).map(|k| -2.0 * out[nu + k].im).collect();
        Self::new(out[nu].re, cos, sin).trimmed()
    }
}

/// Complexified field `X + iY`; the Witt generators live here.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ComplexWittField {
    pub re: WittField,
    pub im: WittField,
}

impl ComplexWittField {
    /// `L_m = −i e^{imθ}∂θ = (sin mθ − i cos mθ)∂θ`.
    pub fn generator(m: i64) -> Self {
        Self {
            re: WittField::sin_mode(m),
            im: WittField::cos_mode(m).scale(-1.0),
        }
    }

    pub fn scale(&self, c: f64) -> Self {
        Self {
            re: self.re.scale(c),
            im: self.im.scale(c),
        }
    }

    pub fn bracket(&self, other: &Self) -> Self {
        let rr = self.re.bracket(&other.re);
        let ii = self.im.bracket(&other.im);
        let ri = self.re.bracket(&other.im);
        let ir = self.im.bracket(&other.re);
        Self {
            re: rr.add(&ii.scale(-1.0)).trimmed(),
            im: ri.add(&ir).trimmed(),
        }
    }

    pub fn trimmed(&self) -> Self {
        Self {
            re: self.re.trimmed(),
            im: self.im.trimmed(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivatives_match_finite_differences() {
        let u = WittField::new(0.3, vec![0.1, -0.2, 0.05], vec![0.4, 0.0, -0.1]);
        let h = 1e-5;
        for theta in [0.0, 0.7, 2.9, 5.5] {
            let (_, d1, d2) = u.eval(theta);
            let fd1 = (u.value(theta + h) - u.value(theta - h)) / (2.0 * h);
            let fd2 = (u.eval(theta + h).1 - u.eval(theta - h).1) / (2.0 * h);
            assert!((d1 - fd1).abs() < 1e-9);
            assert!((d2 - fd2).abs() < 1e-8);
        }
    }

    #[test]
    fn bracket_matches_pointwise_formula() {
        let u = WittField::new(0.2, vec![1.0, 0.5], vec![-0.25, 0.0]);
        let w = WittField::new(-1.0, vec![0.0, 2.0, 0.5], vec![1.0, 0.0, 0.0]);
        let b = u.bracket(&w);
        for theta in [0.1, 1.3, 4.0] {
            let (uv, ud, _) = u.eval(theta);
            let (wv, wd, _) = w.eval(theta);
            assert!((b.value(theta) - (wv * ud - uv * wd)).abs() < 1e-13);
        }
    }

    #[test]
    fn cos_sin_bracket_is_constant_field() {
        // [cos mθ, sin mθ] = −m
        for m in 1..5 {
            let b = WittField::cos_mode(m).bracket(&WittField::sin_mode(m));
            assert_eq!(b, WittField::constant(-(m as f64)));
        }
    }

    #[test]
    fn generator_modes() {
        assert_eq!(ComplexWittField::generator(0).re, WittField::zero());
        assert_eq!(ComplexWittField::generator(0).im, WittField::constant(-1.0));
        let lm = ComplexWittField::generator(-2);
        assert_eq!(lm.re, WittField::new(0.0, vec![], vec![0.0, -1.0]));
    }
}
