use std::collections::BTreeMap;
use std::f64::consts::PI;

use rand::Rng;

use super::report::{Check, Criterion};
use crate::chernweil::{
    random_antisymmetric, random_matrix, restrict_to_so, solve_whitney_with, whitney_defect,
    whitney_defect_closed_form, DifferentialLift, InvPoly2, MAX_SAMPLE_SIZE, P1_HAT_SCALE,
};
use crate::cocycle::{
    bott_original_r, bott_thurston_r, cocycle_defect, log_derivative_self_pairing, GroupCocycle,
};
use crate::diffeo::{CircleDiffeo, ComplexWittField};
use crate::error::{Error, Result};
use crate::sampling::{random_diffeo, seeded, DEFAULT_AMPLITUDE, DEFAULT_ORDER};
use crate::simplicial::{
    fiber_integrate, transgress_with_quadrature, verify_lemma_cochains, verify_main_lemma,
    LemmaCochains, LevelOneForm,
};
use crate::witt::{
    central_charge, cubic_coefficient, cubic_coefficient_upper, diagonal_beta, jacobi_defect,
    rational, sl2_class_check, DiagonalCocycle, ExtractionConfig, LieCocycle, ModeElement,
};

pub const LEMMA_SAMPLES: usize = 1000;
pub const COCYCLE_TRIPLES: usize = 100;
pub const FIBER_PAIRS: usize = 100;
pub const WHITNEY_PAIRS: usize = 100;
pub const JACOBI_RANGE: i64 = 10;
pub const WITT_RANGE: i64 = 6;
/// First resolution of the convergence measurement; below it the
/// trapezoid rule does not yet resolve the sampled integrands.
pub const CONVERGENCE_START: usize = 16;
/// Defects below this are rounding noise and end the convergence measurement.
pub const DEFECT_FLOOR: f64 = 1e-12;
const CONVERGENCE_TRIPLES: usize = 20;

const DEFAULT_TOLERANCES: [(&str, f64); 12] = [
    ("ad_invariance", 1e-10),
    ("bott_original", 1e-10),
    ("central_charge", 0.01),
    ("cocycle_defect", 1e-8),
    ("cubic_stability", 0.01),
    ("fiber_integral", 1e-10),
    ("lemma_mutation", 0.1),
    ("lemma_residual", 1e-9),
    ("self_pairing", 1e-10),
    ("sl2_residual", 1e-3),
    ("spectral_ratio", 10.0),
    ("whitney", 1e-12),
];

/// Named tolerances; only the names above exist.
#[derive(Debug, Clone, PartialEq)]
pub struct Tolerances(BTreeMap<String, f64>);

impl Default for Tolerances {
    fn default() -> Self {
        Self(
            DEFAULT_TOLERANCES
                .iter()
                .map(|&(k, v)| (k.to_string(), v))
                .collect(),
        )
    }
}

impl Tolerances {
    pub fn get(&self, name: &str) -> f64 {
        self.0[name]
    }

    pub fn set(&mut self, name: &str, value: f64) -> Result<()> {
        if !(value.is_finite() && value > 0.0) {
            return Err(Error::Usage(format!(
                "tolerance {name} must be positive, got {value}"
            )));
        }
        match self.0.get_mut(name) {
            Some(slot) => {
                *slot = value;
                Ok(())
            }
            None => Err(Error::Usage(format!(
                "unknown tolerance {name}; known: {}",
                self.0.keys().cloned().collect::<Vec<_>>().join(", ")
            ))),
        }
    }

    pub fn as_map(&self) -> &BTreeMap<String, f64> {
        &self.0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub fourier_order: usize,
    pub quadrature_points: usize,
    pub fd_step: f64,
    pub seed: u64,
    pub tolerances: Tolerances,
    /// Record wall-clock runtimes and a timestamp in reports.
    pub timestamps: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            fourier_order: crate::diffeo::DEFAULT_FOURIER_ORDER,
            quadrature_points: crate::cocycle::DEFAULT_QUADRATURE_POINTS,
            fd_step: 1e-3,
            seed: 0,
            tolerances: Tolerances::default(),
            timestamps: true,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.fourier_order == 0 || self.quadrature_points == 0 {
            return Err(Error::Usage(
                "fourier order and quadrature points must be positive".into(),
            ));
        }
        if !(self.fd_step.is_finite() && self.fd_step > 0.0) {
            return Err(Error::Usage(format!(
                "fd step must be positive, got {}",
                self.fd_step
            )));
        }
        Ok(())
    }

    pub fn extraction(&self) -> ExtractionConfig {
        ExtractionConfig {
            step: self.fd_step,
            fourier_order: self.fourier_order,
            ..ExtractionConfig::default()
        }
    }

    fn tol(&self, name: &str) -> f64 {
        self.tolerances.get(name)
    }

    fn check(
        &self,
        name: &str,
        anchor: &str,
        criterion: Criterion,
        measure: impl FnOnce() -> Result<f64>,
    ) -> Check {
        Check::run(name, anchor, criterion, self.timestamps, measure)
    }
}

pub type Triple = (CircleDiffeo, CircleDiffeo, CircleDiffeo);

pub fn random_triples(seed: u64, count: usize) -> Vec<Triple> {
    let mut rng = seeded(seed);
    let mut draw = || random_diffeo(&mut rng, DEFAULT_ORDER, DEFAULT_AMPLITUDE);
    (0..count).map(|_| (draw(), draw(), draw())).collect()
}

fn max_abs<T>(items: &[T], f: impl Fn(&T) -> Result<f64>) -> Result<f64> {
    items
        .iter()
        .try_fold(0.0_f64, |acc, x| Ok(acc.max(f(x)?.abs())))
}

/// Largest cocycle defect of `B_ℝ` over `triples` at `m` nodes.
pub fn max_cocycle_defect(triples: &[Triple], m: usize) -> Result<f64> {
    let c = GroupCocycle::bott_thurston(1.0).with_quadrature(m);
    max_abs(triples, |(a, b, d)| cocycle_defect(&c, a, b, d))
}

/// Smallest defect reduction per doubling of `m` from [`CONVERGENCE_START`]
/// up to `max_m`, stopping once the defect reaches [`DEFECT_FLOOR`].
pub fn spectral_convergence(triples: &[Triple], max_m: usize) -> Result<f64> {
    let mut m = CONVERGENCE_START;
    let mut previous = max_cocycle_defect(triples, m)?;
    let mut worst = f64::INFINITY;
    let mut measured = false;
    while previous > DEFECT_FLOOR && 2 * m <= max_m {
        m *= 2;
        let current = max_cocycle_defect(triples, m)?;
        worst = worst.min(previous / current);
        measured = true;
        previous = current;
    }
    if !measured {
        return Err(Error::Numeric(format!(
            "no doubling from M = {CONVERGENCE_START} up to M = {max_m} above the defect floor"
        )));
    }
    Ok(worst)
}

pub fn cocycle_suite(cfg: &RunConfig) -> Vec<Check> {
    let m = cfg.quadrature_points;
    let triples = random_triples(cfg.seed, COCYCLE_TRIPLES);
    vec![
        cfg.check(
            "cocycle.defect",
            "group-cocycle-identity",
            Criterion::absolute(0.0, cfg.tol("cocycle_defect")),
            || max_cocycle_defect(&triples, m),
        ),
        cfg.check(
            "cocycle.spectral_convergence",
            "trapezoid-spectral-accuracy",
            Criterion::at_least(cfg.tol("spectral_ratio")),
            || spectral_convergence(&triples[..CONVERGENCE_TRIPLES], m),
        ),
        cfg.check(
            "cocycle.bott_original",
            "bott-formula-agreement",
            Criterion::absolute(0.0, cfg.tol("bott_original")),
            || {
                max_abs(&triples, |(a, b, _)| {
                    Ok(bott_original_r(a, b, m)? - bott_thurston_r(a, b, m)?)
                })
            },
        ),
        cfg.check(
            "cocycle.self_pairing",
            "exact-self-pairing",
            Criterion::absolute(0.0, cfg.tol("self_pairing")),
            || max_abs(&triples, |(a, _, _)| log_derivative_self_pairing(a, m)),
        ),
        cfg.check(
            "cocycle.normalized",
            "normalized-cocycle",
            Criterion::absolute(0.0, 0.0),
            || {
                let id = CircleDiffeo::identity();
                max_abs(&triples, |(a, _, _)| {
                    Ok(bott_thurston_r(&id, a, m)?.abs() + bott_thurston_r(a, &id, m)?.abs())
                })
            },
        ),
    ]
}

fn fiber_vs_direct(cfg: &RunConfig) -> Result<f64> {
    let z2 = LevelOneForm::bott_thurston_integrand();
    let pairs = random_triples(cfg.seed.wrapping_add(1), FIBER_PAIRS);
    let m = cfg.quadrature_points;
    max_abs(&pairs, |(a, b, _)| {
        let direct = bott_thurston_r(a, b, m)?;
        let fiber = fiber_integrate(&z2, &[a.clone(), b.clone()], m)?;
        Ok(if direct == 0.0 {
            fiber
        } else {
            (fiber - direct) / direct
        })
    })
}

pub fn lemma_suite(cfg: &RunConfig) -> Vec<Check> {
    vec![
        cfg.check(
            "lemma.residual",
            "coboundary-identities",
            Criterion::absolute(0.0, cfg.tol("lemma_residual")),
            || Ok(verify_main_lemma(LEMMA_SAMPLES, cfg.seed)?.max()),
        ),
        cfg.check(
            "lemma.mutation",
            "coboundary-identities",
            Criterion::at_least(cfg.tol("lemma_mutation")),
            || {
                let flipped =
                    LemmaCochains::standard().with_beta1(LevelOneForm::neg_log_v_dx().scaled(-1.0));
                Ok(verify_lemma_cochains(&flipped, LEMMA_SAMPLES, cfg.seed)?.max())
            },
        ),
        cfg.check(
            "lemma.fiber_vs_direct",
            "fiber-integral-is-bott-thurston",
            Criterion::absolute(0.0, cfg.tol("fiber_integral")),
            || fiber_vs_direct(cfg),
        ),
    ]
}

fn witt_bracket_mismatches() -> f64 {
    let l = ComplexWittField::generator;
    let mut bad = 0;
    for m in -WITT_RANGE..=WITT_RANGE {
        for n in -WITT_RANGE..=WITT_RANGE {
            if l(m).bracket(&l(n)).trimmed() != l(m + n).scale((m - n) as f64).trimmed() {
                bad += 1;
            }
        }
    }
    bad as f64
}

fn jacobi_failures(b: &LieCocycle) -> Result<f64> {
    let g = ModeElement::generator;
    let mut bad = 0;
    for m in -JACOBI_RANGE..=JACOBI_RANGE {
        for n in -JACOBI_RANGE..=JACOBI_RANGE {
            for k in -JACOBI_RANGE..=JACOBI_RANGE {
                if !jacobi_defect(&g(m), &g(n), &g(k), b)?.is_zero() {
                    bad += 1;
                }
            }
        }
    }
    Ok(bad as f64)
}

pub fn algebra_suite(cfg: &RunConfig) -> Vec<Check> {
    let x = cfg.extraction();
    let bt = GroupCocycle::bott_thurston(1.0).with_quadrature(cfg.quadrature_points);
    let betas = (1..=3)
        .map(|m| diagonal_beta(&bt, m, &x))
        .collect::<Result<Vec<_>>>();
    let betas = &betas;
    let from_betas = move |f: &dyn Fn(&[f64]) -> Result<f64>| match betas {
        Ok(b) => f(b),
        Err(e) => Err(e.clone()),
    };
    vec![
        cfg.check(
            "algebra.witt_bracket",
            "witt-commutation-relations",
            Criterion::absolute(0.0, 0.0),
            || Ok(witt_bracket_mismatches()),
        ),
        cfg.check(
            "algebra.jacobi_standard",
            "virasoro-lie-cocycle",
            Criterion::absolute(0.0, 0.0),
            || jacobi_failures(&LieCocycle::standard(rational(1, 1))),
        ),
        cfg.check(
            "algebra.jacobi_non_antisymmetric",
            "non-antisymmetric-cocycle",
            Criterion::at_least(1.0),
            || {
                jacobi_failures(&LieCocycle::Diagonal(DiagonalCocycle::non_antisymmetric(
                    rational(1, 1),
                )))
            },
        ),
        cfg.check(
            "algebra.sl2_residual",
            "sl2-vanishing",
            Criterion::at_most(cfg.tol("sl2_residual")),
            || from_betas(&|b| sl2_class_check(&DiagonalCocycle::from_samples("extracted", b)?, 3)),
        ),
        cfg.check(
            "algebra.cubic_stability",
            "cubic-diagonal-cocycle",
            Criterion::at_most(cfg.tol("cubic_stability")),
            || {
                from_betas(&|b| {
                    let low = cubic_coefficient(b[0], b[1]);
                    Ok((low - cubic_coefficient_upper(b[1], b[2])).abs() / low.abs())
                })
            },
        ),
        cfg.check(
            "algebra.cubic_coefficient",
            "cubic-diagonal-cocycle",
            Criterion::relative(PI, cfg.tol("central_charge")),
            || from_betas(&|b| Ok(cubic_coefficient(b[0], b[1]))),
        ),
    ]
}

pub fn whitney_suite(cfg: &RunConfig) -> Vec<Check> {
    let tol = cfg.tol("whitney");
    let seed = cfg.seed;
    vec![
        cfg.check(
            "whitney.solve",
            "whitney-forces-distinguished-lift",
            Criterion::absolute(0.0, tol),
            || solve_whitney_with(32, seed),
        ),
        cfg.check(
            "whitney.defect_formula",
            "whitney-defect",
            Criterion::absolute(0.0, tol),
            || {
                let mut rng = seeded(seed.wrapping_add(2));
                let mut worst = 0.0_f64;
                for _ in 0..WHITNEY_PAIRS {
                    let (n, m) = (
                        rng.random_range(1..=MAX_SAMPLE_SIZE),
                        rng.random_range(1..=MAX_SAMPLE_SIZE),
                    );
                    let (a, b) = (random_matrix(&mut rng, n), random_matrix(&mut rng, m));
                    let lambda = rng.random_range(-2.0..2.0);
                    let gap = whitney_defect(lambda, &a, &b)?
                        - whitney_defect_closed_form(lambda, &a, &b)?;
                    worst = worst.max(gap.abs());
                }
                Ok(worst)
            },
        ),
        cfg.check(
            "whitney.so_kernel",
            "trace-square-kernel",
            Criterion::absolute(0.0, cfg.tol("ad_invariance")),
            || {
                let mut worst = 0.0_f64;
                for n in 2..=MAX_SAMPLE_SIZE {
                    for lambda in [-1.0, 0.0, 1.0] {
                        let p = DifferentialLift::new(lambda, n)?.polynomial();
                        worst = worst.max(restrict_to_so(&p, 20, seed)?.max_residual);
                    }
                }
                Ok(worst)
            },
        ),
        cfg.check(
            "whitney.ad_invariance",
            "invariant-polynomials",
            Criterion::absolute(0.0, cfg.tol("ad_invariance")),
            || {
                let mut rng = seeded(seed.wrapping_add(3));
                let mut worst = 0.0_f64;
                for n in 1..=MAX_SAMPLE_SIZE {
                    let p =
                        InvPoly2::new(n, rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))?;
                    let a = random_matrix(&mut rng, n);
                    let g = random_antisymmetric(&mut rng, n).map(|e| 0.3 * e).exp();
                    let conj = &g * &a * g.transpose();
                    worst = worst.max((p.evaluate(&a)? - p.evaluate(&conj)?).abs());
                }
                Ok(worst)
            },
        ),
        cfg.check(
            "whitney.gl1_restriction",
            "transgression-scale",
            Criterion::absolute(0.0, 0.0),
            || {
                Ok(DifferentialLift::distinguished(2)?
                    .restrict_to_gl1()?
                    .c_sq()
                    + P1_HAT_SCALE)
            },
        ),
    ]
}

/// Scale of a `central-charge` run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScaleArg {
    /// The distinguished lift, transgressed at `1/8π²`.
    P1Hat,
    Value(f64),
}

impl ScaleArg {
    pub fn parse(s: &str) -> Result<Self> {
        if s == "p1hat" {
            return Ok(Self::P1Hat);
        }
        match s.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(Self::Value(v)),
            _ => Err(Error::Usage(format!(
                "scale must be a finite number or `p1hat`, got `{s}`"
            ))),
        }
    }

    pub fn scale(self) -> f64 {
        match self {
            Self::P1Hat => P1_HAT_SCALE,
            Self::Value(v) => v,
        }
    }

    /// Charge predicted for the transgressed cocycle.
    pub fn expected_charge(self) -> f64 {
        match self {
            Self::P1Hat => -12.0,
            Self::Value(v) => -96.0 * PI * PI * v,
        }
    }
}

pub fn transgressed_charge(scale: f64, cfg: &RunConfig) -> Result<f64> {
    central_charge(
        &transgress_with_quadrature(scale, cfg.quadrature_points)?,
        &cfg.extraction(),
    )
}

pub fn central_charge_check(name: &str, scale: ScaleArg, cfg: &RunConfig) -> Check {
    let anchor = match scale {
        ScaleArg::P1Hat => "distinguished-lift-central-charge",
        ScaleArg::Value(_) => "transgression-central-charge",
    };
    cfg.check(
        name,
        anchor,
        Criterion::relative(scale.expected_charge(), cfg.tol("central_charge")),
        || transgressed_charge(scale.scale(), cfg),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tolerance_overrides() {
        let mut t = Tolerances::default();
        t.set("whitney", 1e-6).unwrap();
        assert_eq!(t.get("whitney"), 1e-6);
        assert!(matches!(t.set("nope", 1.0), Err(Error::Usage(_))));
        assert!(matches!(t.set("whitney", -1.0), Err(Error::Usage(_))));
    }

    #[test]
    fn scale_arguments() {
        assert_eq!(ScaleArg::parse("p1hat").unwrap(), ScaleArg::P1Hat);
        assert_eq!(ScaleArg::parse("-2.5").unwrap(), ScaleArg::Value(-2.5));
        assert!(ScaleArg::parse("inf").is_err());
        assert!(ScaleArg::parse("twelve").is_err());
        assert!(
            (ScaleArg::P1Hat.expected_charge() - ScaleArg::Value(P1_HAT_SCALE).expected_charge())
                .abs()
                < 1e-12
        );
    }

    #[test]
    fn invalid_configs_are_usage_errors() {
        let cfg = RunConfig {
            fd_step: 0.0,
            ..RunConfig::default()
        };
        assert!(matches!(cfg.validate(), Err(Error::Usage(_))));
        let cfg = RunConfig {
            quadrature_points: 0,
            ..RunConfig::default()
        };
        assert!(matches!(cfg.validate(), Err(Error::Usage(_))));
    }

    #[test]
    fn whitney_and_algebra_suites_pass_at_defaults() {
        let cfg = RunConfig {
            timestamps: false,
            ..RunConfig::default()
        };
        for c in whitney_suite(&cfg).into_iter().chain(algebra_suite(&cfg)) {
            assert!(c.passed, "{c:?}");
        }
    }
}
