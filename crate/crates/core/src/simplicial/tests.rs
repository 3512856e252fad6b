use std::f64::consts::PI;

use super::*;
use crate::cocycle::{bott_thurston_r, GroupCocycle};
use crate::diffeo::circle_distance;
use crate::sampling::seeded;

const GRID: usize = 17;

fn jets_close(a: &JetPoint, b: &JetPoint, tol: f64) -> bool {
    if a.level() != b.level() {
        return false;
    }
    let scalar = |x: Dual, y: Dual| (x.re - y.re).abs() <= tol && (x.eps - y.eps).abs() <= tol;
    let angle =
        |x: Dual, y: Dual| circle_distance(x.re, y.re) <= tol && (x.eps - y.eps).abs() <= tol;
    let frame = angle(a.theta, b.theta) && scalar(a.v, b.v);
    let xs = a.xs.iter().zip(&b.xs).all(|(&x, &y)| scalar(x, y));
    let gammas = a.gammas.iter().zip(&b.gammas).all(|(g, h)| {
        (0..GRID).all(|k| {
            let t = Dual::new(2.0 * PI * k as f64 / GRID as f64, 0.3);
            let (gv, gd) = g.eval(t).unwrap();
            let (hv, hd) = h.eval(t).unwrap();
            angle(gv, hv) && scalar(gd, hd)
        })
    });
    frame && xs && gammas
}

fn random_jet(seed: u64, level: Level) -> JetPoint {
    let (point, tangent) = random_sample(&mut seeded(seed), level);
    JetPoint::new(&point, &tangent).unwrap()
}

#[test]
fn face_identities_hold_through_level_three() {
    for p in 0..=3 {
        for q in 0..=3 {
            let jet = random_jet((10 * p + q) as u64, Level::new(p, q));
            for (dir, top) in [(Direction::Horizontal, p), (Direction::Vertical, q)] {
                for j in (1..=top).filter(|_| top >= 2) {
                    for i in 0..j {
                        let lhs = jet.face(dir, j).unwrap().face(dir, i).unwrap();
                        let rhs = jet.face(dir, i).unwrap().face(dir, j - 1).unwrap();
                        assert!(
                            jets_close(&lhs, &rhs, 1e-12),
                            "{dir:?} d{i}d{j} at ({p},{q})"
                        );
                    }
                }
            }
            if p == 0 || q == 0 {
                continue;
            }
            for i in 0..=p {
                for j in 0..=q {
                    let hv = jet
                        .face(Direction::Horizontal, i)
                        .unwrap()
                        .face(Direction::Vertical, j)
                        .unwrap();
                    let vh = jet
                        .face(Direction::Vertical, j)
                        .unwrap()
                        .face(Direction::Horizontal, i)
                        .unwrap();
                    assert!(jets_close(&hv, &vh, 1e-12), "h{i} v{j} at ({p},{q})");
                }
            }
        }
    }
}

#[test]
fn missing_faces_are_rejected() {
    let jet = random_jet(1, Level::new(1, 0));
    assert!(matches!(
        jet.face(Direction::Vertical, 0),
        Err(Error::Usage(_))
    ));
    assert!(matches!(
        jet.face(Direction::Horizontal, 2),
        Err(Error::Usage(_))
    ));
    let point = jet.point();
    assert!(matches!(
        JetPoint::new(&point, &Tangent::zero(Level::new(2, 0))),
        Err(Error::Usage(_))
    ));
    assert!(BisimplicialPoint::new(vec![], 0.0, 0.0, vec![]).is_err());
}

#[test]
fn last_horizontal_face_pushes_the_frame_by_the_chain_rule() {
    let g2 = CircleDiffeo::fourier(0.0, vec![0.1, -0.04], vec![0.2, 0.03]).unwrap();
    let g1 = CircleDiffeo::fourier(0.1, vec![0.05, 0.0], vec![-0.1, 0.0]).unwrap();
    let point = BisimplicialPoint::new(vec![g1, g2.clone()], 0.7, 1.3, vec![]).unwrap();
    let tangent = Tangent {
        d_theta: 0.4,
        d_v: -0.9,
        ..Tangent::zero(Level::new(2, 0))
    };
    let (image, push) = pushforward(Direction::Horizontal, 2, &point, &tangent).unwrap();
    let j = g2.jet(0.7).unwrap();
    assert_eq!(image.gammas.len(), 1);
    assert!((image.theta - j.value).abs() < 1e-15);
    assert!((image.v - j.d1 * 1.3).abs() < 1e-15);
    assert!((push.d_theta - j.d1 * 0.4).abs() < 1e-15);
    assert!((push.d_v - (j.d2 * 1.3 * 0.4 + j.d1 * -0.9)).abs() < 1e-15);
}

#[test]
fn composing_face_varies_by_the_product_rule() {
    let g1 = CircleDiffeo::fourier(0.2, vec![0.1, 0.0], vec![0.05, 0.02]).unwrap();
    let g2 = CircleDiffeo::fourier(0.0, vec![-0.03, 0.04], vec![0.1, 0.0]).unwrap();
    let u1 = WittField::new(0.1, vec![0.2, -0.1], vec![0.05]);
    let u2 = WittField::new(-0.2, vec![0.0], vec![0.3, 0.1]);
    let point = BisimplicialPoint::new(vec![g1.clone(), g2.clone()], 0.0, 1.0, vec![]).unwrap();
    let tangent = Tangent {
        fields: vec![u1.clone().into(), u2.clone().into()],
        ..Tangent::zero(Level::new(2, 0))
    };
    let (_, push) = pushforward(Direction::Horizontal, 1, &point, &tangent).unwrap();
    for k in 0..GRID {
        let t = 2.0 * PI * k as f64 / GRID as f64;
        let inner = g2.jet(t).unwrap();
        let outer = g1.jet(inner.value).unwrap();
        let (a, a1, _) = u1.eval(inner.value);
        let (b, b1, _) = u2.eval(t);
        let expected = a + outer.d1 * b;
        let expected_d = a1 * inner.d1 + outer.d2 * inner.d1 * b + outer.d1 * b1;
        let (got, got_d) = push.fields[0].eval(t).unwrap();
        assert!((got - expected).abs() < 1e-14);
        assert!((got_d - expected_d).abs() < 1e-14);
    }
}

#[test]
fn first_vertical_face_rescales_the_frame() {
    let point = BisimplicialPoint::new(vec![], 0.3, 2.0, vec![0.5, -0.2]).unwrap();
    let tangent = Tangent {
        d_theta: 0.1,
        d_v: 0.7,
        d_xs: vec![-0.4, 0.9],
        fields: vec![],
    };
    let (image, push) = pushforward(Direction::Vertical, 0, &point, &tangent).unwrap();
    let e = 0.5_f64.exp();
    assert!((image.v - 2.0 * e).abs() < 1e-15);
    assert!((push.d_v - e * (-0.4 * 2.0 + 0.7)).abs() < 1e-15);
    assert_eq!(image.xs, vec![-0.2]);
    assert_eq!(push.d_xs, vec![0.9]);
    assert_eq!(push.d_theta, 0.1);
}

fn frame_form() -> LevelOneForm {
    LevelOneForm::new(Level::new(0, 0), "test", |jet| {
        let (t, v) = (jet.theta.re, jet.v.re);
        Ok((2.0 * t).sin() * v * jet.theta.eps + (t.cos() + v * v) * jet.v.eps)
    })
}

fn max_on_samples(form: &LevelOneForm, seed: u64, n: usize) -> f64 {
    let mut rng = seeded(seed);
    (0..n)
        .map(|_| {
            let (p, t) = random_sample(&mut rng, form.level());
            form.evaluate(&p, &t).unwrap().abs()
        })
        .fold(0.0, f64::max)
}

#[test]
fn coboundary_squares_to_zero() {
    use Direction::{Horizontal as H, Vertical as V};
    let cases = [
        (frame_form(), H, H),
        (frame_form(), V, V),
        (LevelOneForm::log_gamma_dlog_v(), H, H),
        (LevelOneForm::neg_log_v_dx(), V, V),
        (LevelOneForm::log_gamma_dx(), H, H),
        (LevelOneForm::log_gamma_dx(), V, V),
    ];
    for (form, first, second) in cases {
        let dd = coboundary(second, &coboundary(first, &form).unwrap()).unwrap();
        assert!(
            max_on_samples(&dd, 3, 50) < 1e-12,
            "{first:?}{second:?} on {form:?}"
        );
    }
    let hv = coboundary(V, &coboundary(H, &frame_form()).unwrap()).unwrap();
    let vh = coboundary(H, &coboundary(V, &frame_form()).unwrap()).unwrap();
    assert!(max_on_samples(&hv.sub(&vh).unwrap(), 4, 50) < 1e-12);
}

#[test]
fn x1_dx2_is_independent_of_the_group_factor() {
    let form = LevelOneForm::x1_dx2();
    let lifted = form.pullback(Direction::Horizontal, 0).unwrap();
    let mut rng = seeded(5);
    for _ in 0..20 {
        let (p, t) = random_sample(&mut rng, Level::new(1, 2));
        let exact = p.xs[0] * t.d_xs[1];
        assert_eq!(lifted.evaluate(&p, &t).unwrap(), exact);
        let base = BisimplicialPoint {
            gammas: vec![],
            ..p
        };
        let base_t = Tangent {
            fields: vec![],
            ..t
        };
        assert_eq!(form.evaluate(&base, &base_t).unwrap(), exact);
    }
}

#[test]
fn lemma_identities_hold() {
    let r = verify_main_lemma(200, 11).unwrap();
    assert!(r.max() < 1e-9, "{r:?}");
    let mixed = coboundary(Direction::Horizontal, &LevelOneForm::neg_log_v_dx())
        .unwrap()
        .sub(&LevelOneForm::log_gamma_dx())
        .unwrap();
    assert!(max_on_samples(&mixed, 6, 50) < 1e-12);
}

#[test]
fn mutated_beta_breaks_the_lemma() {
    let flipped = LemmaCochains::standard().with_beta1(LevelOneForm::neg_log_v_dx().scaled(-1.0));
    let r = verify_lemma_cochains(&flipped, 200, 11).unwrap();
    assert!(r.vertical > 0.1 && r.mixed > 0.1, "{r:?}");
    assert!(r.horizontal < 1e-9);
}

#[test]
fn combining_forms_checks_levels() {
    let a = LevelOneForm::x1_dx2();
    assert!(matches!(
        a.add(&LevelOneForm::log_gamma_dx()),
        Err(Error::Usage(_))
    ));
    assert!(matches!(
        a.pullback(Direction::Vertical, 4),
        Err(Error::Usage(_))
    ));
    let jet = random_jet(2, Level::new(1, 0));
    assert!(matches!(a.evaluate_jet(&jet), Err(Error::Usage(_))));
}

#[test]
fn forms_are_linear_in_the_tangent() {
    let form = coboundary(Direction::Horizontal, &LevelOneForm::log_gamma_dlog_v()).unwrap();
    let mut rng = seeded(8);
    let (p, t1) = random_sample(&mut rng, form.level());
    let (_, t2) = random_sample(&mut rng, form.level());
    let c = 0.37;
    let witt = |f: &TangentField| match f {
        TangentField::Witt(w) => w.clone(),
        _ => unreachable!(),
    };
    let combo = Tangent {
        fields: t1
            .fields
            .iter()
            .zip(&t2.fields)
            .map(|(a, b)| witt(a).scale(c).add(&witt(b)).into())
            .collect(),
        d_theta: c * t1.d_theta + t2.d_theta,
        d_v: c * t1.d_v + t2.d_v,
        d_xs: vec![],
    };
    let lhs = form.evaluate(&p, &combo).unwrap();
    let rhs = c * form.evaluate(&p, &t1).unwrap() + form.evaluate(&p, &t2).unwrap();
    assert!((lhs - rhs).abs() < 1e-14);
}

#[test]
fn fiber_integral_of_z2_is_bott_thurston() {
    let mut rng = seeded(21);
    let z2 = LevelOneForm::bott_thurston_integrand();
    for _ in 0..5 {
        let g1 = random_diffeo(&mut rng, DEFAULT_ORDER, 0.1);
        let g2 = random_diffeo(&mut rng, DEFAULT_ORDER, 0.1);
        let direct = bott_thurston_r(&g1, &g2, 512).unwrap();
        let fiber = fiber_integrate(&z2, &[g1, g2], 512).unwrap();
        assert!(
            (fiber - direct).abs() <= 1e-10 * direct.abs().max(1e-300),
            "{fiber} vs {direct}"
        );
    }
}

#[test]
fn non_basic_forms_do_not_integrate() {
    let beta2 = LevelOneForm::log_gamma_dlog_v();
    assert!(matches!(
        FiberIntegral::new(beta2, 64),
        Err(Error::Usage(_))
    ));
    assert!(matches!(
        FiberIntegral::new(LevelOneForm::log_gamma_dx(), 64),
        Err(Error::Usage(_))
    ));
    let z2 = FiberIntegral::new(LevelOneForm::bott_thurston_integrand(), 64).unwrap();
    assert!(matches!(
        z2.evaluate(&[CircleDiffeo::identity()]),
        Err(Error::Usage(_))
    ));
}

#[test]
fn transgression_is_a_rescaled_bott_thurston_cocycle() {
    let scale = 1.0 / (8.0 * PI * PI);
    let c = transgress_with_quadrature(scale, 256).unwrap();
    let reference = GroupCocycle::bott_thurston(scale).with_quadrature(256);
    let g1 = CircleDiffeo::fourier(0.0, vec![0.1, 0.0], vec![0.2, -0.05]).unwrap();
    let g2 = CircleDiffeo::fourier(0.3, vec![0.0, 0.08], vec![-0.1, 0.0]).unwrap();
    let (a, b) = (
        c.evaluate(&g1, &g2).unwrap(),
        reference.evaluate(&g1, &g2).unwrap(),
    );
    assert!((a - b).abs() < 1e-14 * b.abs().max(1e-3));
    assert_eq!(c.quadrature_points(), 256);
}

#[test]
fn identity_diffeos_with_zero_tangents_give_exact_zeros() {
    let c = LemmaCochains::standard();
    let identities = [
        (
            coboundary(Direction::Vertical, &c.beta1)
                .unwrap()
                .add(&c.z1)
                .unwrap(),
            Level::new(0, 2),
        ),
        (
            coboundary(Direction::Horizontal, &c.beta1)
                .unwrap()
                .sub(&coboundary(Direction::Vertical, &c.beta2).unwrap())
                .unwrap(),
            Level::new(1, 1),
        ),
        (
            coboundary(Direction::Horizontal, &c.beta2)
                .unwrap()
                .sub(&c.z2)
                .unwrap(),
            Level::new(2, 0),
        ),
    ];
    for (form, level) in identities {
        let point = BisimplicialPoint::new(
            vec![CircleDiffeo::identity(); level.p],
            1.1,
            0.8,
            vec![0.3; level.q],
        )
        .unwrap();
        assert_eq!(form.evaluate(&point, &Tangent::zero(level)).unwrap(), 0.0);
    }
}

#[test]
fn fiber_integral_special_cases_vanish() {
    let radial_only = LevelOneForm::new(Level::new(1, 0), "zero dtheta", |_| Ok(0.0));
    let g = CircleDiffeo::fourier(0.0, vec![0.2], vec![0.1]).unwrap();
    assert_eq!(
        fiber_integrate(&radial_only, std::slice::from_ref(&g), 64).unwrap(),
        0.0
    );
    let z2 = LevelOneForm::bott_thurston_integrand();
    assert_eq!(
        fiber_integrate(&z2, &[CircleDiffeo::identity(), g], 64).unwrap(),
        0.0
    );
}

#[test]
fn zero_scale_transgresses_to_the_zero_cocycle() {
    let c = transgress_with_quadrature(0.0, 128).unwrap();
    let g1 = CircleDiffeo::fourier(0.0, vec![0.2], vec![0.1]).unwrap();
    let g2 = CircleDiffeo::rotation(0.4);
    assert_eq!(
        c.evaluate(&g1, &CircleDiffeo::compose(&g1, &g2)).unwrap(),
        0.0
    );
}
