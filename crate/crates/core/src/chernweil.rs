//! Degree-2 invariant polynomials on `gl(n)` and the line of differential
//! lifts of the first Pontryagin class.
//!
//! A polynomial is stored in the basis `tr(A²)`, `tr(A)²`. For `n = 1` the
//! two basis elements coincide, so the whole polynomial is kept in the
//! `tr(A²)` slot.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use rand::Rng;

use crate::error::{Error, Result};
use crate::sampling::seeded;

/// `1/8π²`, the coefficient of `−tr(A²)` in every lift and the scale at
/// which the distinguished lift transgresses.
pub const P1_HAT_SCALE: f64 = 1.0 / (8.0 * PI * PI);

/// Largest matrix size drawn by the random checks.
pub const MAX_SAMPLE_SIZE: usize = 6;

/// `c_sq·tr(A²) + c_trsq·tr(A)²` on `n × n` matrices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvPoly2 {
    n: usize,
    c_sq: f64,
    c_trsq: f64,
}

impl InvPoly2 {
    pub fn new(n: usize, c_sq: f64, c_trsq: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Usage("invariant polynomials need n ≥ 1".into()));
        }
        if !(c_sq.is_finite() && c_trsq.is_finite()) {
            return Err(Error::InvalidElement(
                "polynomial coefficients must be finite".into(),
            ));
        }
        Ok(if n == 1 {
            Self {
                n,
                c_sq: c_sq + c_trsq,
                c_trsq: 0.0,
            }
        } else {
            Self { n, c_sq, c_trsq }
        })
    }

    pub fn zero(n: usize) -> Result<Self> {
        Self::new(n, 0.0, 0.0)
    }

    pub fn trace_of_square(n: usize) -> Result<Self> {
        Self::new(n, 1.0, 0.0)
    }

    pub fn square_of_trace(n: usize) -> Result<Self> {
        Self::new(n, 0.0, 1.0)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn c_sq(&self) -> f64 {
        self.c_sq
    }

    pub fn c_trsq(&self) -> f64 {
        self.c_trsq
    }

    pub fn is_zero(&self) -> bool {
        self.c_sq == 0.0 && self.c_trsq == 0.0
    }

    pub fn evaluate(&self, a: &DMatrix<f64>) -> Result<f64> {
        if a.nrows() != self.n || a.ncols() != self.n {
            return Err(Error::Usage(format!(
                "polynomial on {0}×{0} matrices evaluated on a {1}×{2} matrix",
                self.n,
                a.nrows(),
                a.ncols()
            )));
        }
        let tr = a.trace();
        let tr_sq = a.component_mul(&a.transpose()).sum();
        Ok(self.c_sq * tr_sq + self.c_trsq * tr * tr)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::Usage(format!(
                "cannot add polynomials on gl({}) and gl({})",
                self.n, other.n
            )));
        }
        Self::new(self.n, self.c_sq + other.c_sq, self.c_trsq + other.c_trsq)
    }

    pub fn scale(&self, c: f64) -> Result<Self> {
        Self::new(self.n, c * self.c_sq, c * self.c_trsq)
    }
}

/// The lift `p̂₁^λ` on rank-`n` bundles, with image `λ·tr(A)² − tr(A²)/8π²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DifferentialLift {
    pub lambda: f64,
    pub n: usize,
}

impl DifferentialLift {
    pub fn new(lambda: f64, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Usage("lifts need n ≥ 1".into()));
        }
        Ok(Self { lambda, n })
    }

    /// `λ = 0`, the only member compatible with direct sums.
    pub fn distinguished(n: usize) -> Result<Self> {
        Self::new(0.0, n)
    }

    pub fn polynomial(&self) -> InvPoly2 {
        InvPoly2::new(self.n, -P1_HAT_SCALE, self.lambda).expect("n ≥ 1 checked at construction")
    }

    /// Pullback along `GL₁⁺ → GL⁺ₙ`, where both basis elements become `A²`.
    pub fn restrict_to_gl1(&self) -> Result<InvPoly2> {
        if self.n < 2 {
            return Err(Error::Usage("restriction to gl(1) needs n ≥ 2".into()));
        }
        InvPoly2::new(1, self.lambda - P1_HAT_SCALE, 0.0)
    }
}

/// Outcome of evaluating a polynomial on random antisymmetric matrices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SoRestriction {
    pub samples: usize,
    /// Largest `|poly(A) − c_sq·tr(A²)|`.
    pub max_residual: f64,
    /// Largest `|tr A|`; zero for antisymmetric input.
    pub max_trace: f64,
}

pub fn random_matrix<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DMatrix<f64> {
    DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0))
}

pub fn random_antisymmetric<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DMatrix<f64> {
    let a = random_matrix(rng, n);
    &a - a.transpose()
}

pub fn restrict_to_so(poly: &InvPoly2, samples: usize, seed: u64) -> Result<SoRestriction> {
    if poly.n < 2 {
        return Err(Error::Usage("so(n) restriction needs n ≥ 2".into()));
    }
    let mut rng = seeded(seed);
    let mut out = SoRestriction {
        samples,
        max_residual: 0.0,
        max_trace: 0.0,
    };
    for _ in 0..samples {
        let a = random_antisymmetric(&mut rng, poly.n);
        let expected = poly.c_sq * InvPoly2::trace_of_square(poly.n)?.evaluate(&a)?;
        out.max_residual = out.max_residual.max((poly.evaluate(&a)? - expected).abs());
        out.max_trace = out.max_trace.max(a.trace().abs());
    }
    Ok(out)
}

fn block_sum(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    let (n, m) = (a.nrows(), b.nrows());
    let mut out = DMatrix::zeros(n + m, n + m);
    out.view_mut((0, 0), (n, n)).copy_from(a);
    out.view_mut((n, n), (m, m)).copy_from(b);
    out
}

fn square(a: &DMatrix<f64>) -> Result<usize> {
    if a.nrows() == 0 || a.nrows() != a.ncols() {
        return Err(Error::Usage(format!(
            "expected a nonempty square matrix, got {}×{}",
            a.nrows(),
            a.ncols()
        )));
    }
    Ok(a.nrows())
}

/// `p̂₁^λ(Aₙ) + p̂₁^λ(Aₘ) − p̂₁^λ(Aₙ ⊕ Aₘ)`, by direct evaluation.
pub fn whitney_defect(lambda: f64, an: &DMatrix<f64>, am: &DMatrix<f64>) -> Result<f64> {
    let (n, m) = (square(an)?, square(am)?);
    let lift = |k| DifferentialLift::new(lambda, k).map(|l| l.polynomial());
    Ok(lift(n)?.evaluate(an)? + lift(m)?.evaluate(am)?
        - lift(n + m)?.evaluate(&block_sum(an, am))?)
}

/// `−2λ·tr(Aₙ)·tr(Aₘ)`.
pub fn whitney_defect_closed_form(
    lambda: f64,
    an: &DMatrix<f64>,
    am: &DMatrix<f64>,
) -> Result<f64> {
    square(an)?;
    square(am)?;
    Ok(-2.0 * lambda * an.trace() * am.trace())
}

/// Least-squares `λ` making the Whitney defect vanish on `pairs` random
/// matrix pairs of sizes `1..=MAX_SAMPLE_SIZE`. The defect is affine in `λ`;
/// a sample set whose slopes all vanish is redrawn.
pub fn solve_whitney_with(pairs: usize, seed: u64) -> Result<f64> {
    if pairs == 0 {
        return Err(Error::Usage("need at least one matrix pair".into()));
    }
    let mut rng = seeded(seed);
    for _ in 0..16 {
        let mut rows = Vec::with_capacity(pairs);
        let mut rhs = Vec::with_capacity(pairs);
        for _ in 0..pairs {
            let n = rng.random_range(1..=MAX_SAMPLE_SIZE);
            let m = rng.random_range(1..=MAX_SAMPLE_SIZE);
            let (an, am) = (random_matrix(&mut rng, n), random_matrix(&mut rng, m));
            let d0 = whitney_defect(0.0, &an, &am)?;
            rows.push(whitney_defect(1.0, &an, &am)? - d0);
            rhs.push(-d0);
        }
        let norm = rows.iter().map(|s| s * s).sum::<f64>();
        if norm > 1e-12 {
            let a = DMatrix::from_column_slice(pairs, 1, &rows);
            let b = DMatrix::from_column_slice(pairs, 1, &rhs);
            let solution = a
                .svd(true, true)
                .solve(&b, 1e-14)
                .map_err(|e| Error::Numeric(format!("least squares failed: {e}")))?;
            return Ok(solution[(0, 0)] + 0.0);
        }
    }
    Err(Error::Numeric(
        "every sampled matrix pair had vanishing traces".into(),
    ))
}

pub fn solve_whitney() -> Result<f64> {
    solve_whitney_with(32, 0)
}
