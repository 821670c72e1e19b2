use std::f64::consts::PI;

use approx::assert_relative_eq;
use conewave::cone::{make_exponents, make_exponents_from, normalisation_constant, ExponentConfig};
use conewave::euler_lagrange::*;
use conewave::quadrature::QuadratureConfig;
use conewave::specfun::bessel_j;

fn exact(d: u32, p: &str) -> ExponentConfig {
    make_exponents_from(d, &p.parse().unwrap()).unwrap()
}

fn cfg() -> QuadratureConfig {
    QuadratureConfig::default()
}

#[test]
fn watson_examples() {
    assert_relative_eq!(watson_closed_form(1.0, 1.0, 1.0).unwrap(), 0.5, max_relative = 1e-15);
    assert_relative_eq!(watson_closed_form(2.0, 2.0, 1.0).unwrap(), 0.25, max_relative = 1e-15);
    let w = watson_closed_form(1.0, 2.0, 2.0).unwrap();
    let q = conewave::quadrature::bessel_product_integral(1.0, 2.0, 2.0, &cfg()).unwrap();
    assert_relative_eq!(q.value, w, max_relative = 1e-4);
    assert!(watson_closed_form(1.0, 1.0, 5.0).is_err());
    assert!(watson_closed_form(1.0, 1.0, 0.0).is_err());
}

#[test]
fn lhs_vanishes_at_two_and_on_the_boundary() {
    let l = lhs_quadrature(&exact(3, "2"), 2, &cfg()).unwrap();
    assert!(l.value.abs() <= 1e-8 * l.scale);
    // γ = 2 = 2k − 2 at k = 2 and 2k − 4 at k = 3
    for k in [2, 3] {
        let l = lhs_quadrature(&exact(3, "3/2"), k, &cfg()).unwrap();
        assert!(l.value.abs() <= 1e-8 * l.scale, "k={k}: {l:?}");
        let c = lhs_closed(&exact(3, "3/2"), k).unwrap();
        assert!(c.vanishing && c.value == 0.0);
    }
}

#[test]
fn lhs_negative_inside_the_window() {
    let e = exact(2, "3/2");
    let l = lhs_quadrature(&e, 2, &cfg()).unwrap();
    assert_eq!(l.certified_sign(ZERO_FLOOR), -1);
    assert!(lhs_closed(&e, 2).unwrap().value < 0.0);
    // regression value of this implementation
    assert_relative_eq!(l.value, -0.7776943809699363, max_relative = 1e-10);
}

#[test]
fn calibration_is_constant_and_analytic() {
    for (d, p) in [(2, 1.5), (3, 2.2), (4, 1.3), (2, 3.5)] {
        let e = make_exponents(d, p).unwrap();
        let c = calibrate_lhs_constant(&e, &cfg()).unwrap();
        assert!(c.constant > 0.0);
        for (_, r) in &c.ratios {
            assert_relative_eq!(*r, c.constant, max_relative = 1e-5);
        }
        assert_relative_eq!(c.constant, lhs_calibration_analytic(&e).unwrap(), max_relative = 1e-10);
    }
    assert!(calibrate_lhs_constant(&exact(3, "3/2"), &cfg()).is_err());
}

#[test]
fn hk_transform_examples() {
    for tau in [0.5, 1.0, 5.0, 10.0] {
        let z = hk_fourier_transform(0.0, 0, tau).unwrap();
        assert_relative_eq!(z.re, PI * bessel_j(0.0, tau).unwrap(), max_relative = 1e-13);
        assert!(z.im.abs() < 1e-15);
    }
    let (closed, quad) = (hk_fourier_transform(1.0, 2, 3.0).unwrap(), hk_fourier_quadrature(1.0, 2, 3.0, &cfg()).unwrap());
    assert!((closed - quad).norm() <= 1e-8 * closed.norm());
}

#[test]
fn rhs_signs_follow_the_regime() {
    let r = rhs_quadrature(&exact(3, "2"), 2, &cfg()).unwrap();
    assert!(r.value.abs() <= 1e-10 * r.scale);
    for k in [2, 3, 4] {
        assert_eq!(rhs_quadrature(&exact(2, "3/2"), k, &cfg()).unwrap().certified_sign(ZERO_FLOOR), 1);
    }
    assert_eq!(rhs_quadrature(&make_exponents(3, 2.2).unwrap(), 3, &cfg()).unwrap().certified_sign(ZERO_FLOOR), -1);
}

#[test]
fn rhs_routes_agree() {
    for (e, k) in [(exact(2, "3/2"), 2), (make_exponents(3, 2.5).unwrap(), 4)] {
        let q = rhs_quadrature(&e, k, &cfg()).unwrap();
        let r = rhs_rodrigues(&e, k, &cfg()).unwrap();
        assert_relative_eq!(q.value, r.value, max_relative = 1e-8);
    }
}

#[test]
fn series_certificates() {
    let s = rhs_series_signs(&exact(2, "3/2"), 2, 30).unwrap();
    assert!(s.all_signs_match && s.terms.iter().all(|t| *t > 0.0));
    let e = make_exponents(3, 2.2).unwrap();
    let s = rhs_series_signs(&e, 3, 30).unwrap();
    assert!(s.all_signs_match && s.terms.iter().all(|t| *t < 0.0));
    let s = rhs_series_signs(&e, 2, 30).unwrap();
    assert_relative_eq!(s.partial_sum, rhs_quadrature(&e, 2, &cfg()).unwrap().value, max_relative = 1e-6);
}

#[test]
fn full_constant_rhs() {
    let z = rhs_exact(&exact(3, "2"), 2, &cfg()).unwrap();
    let scale = rhs_exact(&exact(3, "2"), 0, &cfg()).unwrap().value.abs();
    assert!(z.value.abs() <= 1e-8 * scale);
    let e = exact(3, "5/2");
    let ratios: Vec<f64> =
        [2, 3].iter().map(|&k| rhs_exact(&e, k, &cfg()).unwrap().value / rhs_quadrature(&e, k, &cfg()).unwrap().value).collect();
    assert_relative_eq!(ratios[0], ratios[1], max_relative = 1e-4);
    assert_relative_eq!(ratios[0], rhs_exact_ratio_analytic(&e).unwrap(), max_relative = 1e-8);
    assert!(rhs_exact(&exact(2, "3/2"), 2, &cfg()).unwrap().value > 0.0);
    assert!(rhs_exact(&exact(4, "3/2"), 2, &cfg()).is_err());
}

#[test]
fn half_wave_norms_at_two() {
    assert_relative_eq!(half_wave_norm_q(&exact(3, "2"), &cfg()).unwrap().value, 2.0 * PI.powi(3), max_relative = 1e-10);
    assert_relative_eq!(half_wave_norm_q(&exact(2, "2"), &cfg()).unwrap().value, 4.0 * PI * PI, max_relative = 1e-10);
    let near = half_wave_norm_q(&make_exponents(3, 2.93).unwrap(), &cfg()).unwrap();
    assert!(near.value.is_finite() && near.near_blow_up);
    assert!(!half_wave_norm_q(&make_exponents(3, 2.5).unwrap(), &cfg()).unwrap().near_blow_up);
}

#[test]
fn input_norms() {
    let c3 = normalisation_constant(3).unwrap();
    assert_relative_eq!(fstar_input_norm_p(&exact(3, "2")).unwrap(), c3 * PI.sqrt(), max_relative = 1e-14);
    for d in [2u32, 3, 4] {
        for p in [1.2, 1.5, 2.0, 2.4] {
            if p >= conewave::cone::p_upper(d) {
                continue;
            }
            let e = make_exponents(d, p).unwrap();
            assert_relative_eq!(
                fstar_input_norm_p(&e).unwrap(),
                fstar_input_norm_p_quadrature(&e, &cfg()).unwrap(),
                max_relative = 1e-10
            );
        }
    }
    let lam = lambda_multiplier(&exact(3, "2"), &cfg()).unwrap();
    assert_relative_eq!(lam, 2.0 * PI.powi(3) / (c3 * PI.sqrt()).powi(4), max_relative = 1e-10);
}

#[test]
fn wiring_holds_in_degrees_zero_and_one() {
    for d in [2u32, 3] {
        let e = exact(d, "3/2");
        let m = el_multiplier(&e, &cfg()).unwrap();
        for k in [0, 1] {
            let l = lhs_quadrature(&e, k, &cfg()).unwrap().value;
            let r = rhs_exact(&e, k, &cfg()).unwrap().value;
            assert_relative_eq!(l, m * r, max_relative = 1e-3);
        }
    }
}

#[test]
fn report_is_internally_consistent() {
    let r = el_report(&make_exponents(3, 2.5).unwrap(), 3, &cfg(), true).unwrap();
    assert_relative_eq!(r.lhs_calibration.unwrap(), lhs_calibration_analytic(&r.exponents).unwrap(), max_relative = 1e-5);
    assert_relative_eq!(r.rhs_quad.value, r.rhs_rodrigues.unwrap().value, max_relative = 1e-8);
    assert_eq!((r.sign_lhs, r.sign_rhs), (-1, -1));
    assert!(r.rhs_exact.is_some() && r.lambda_exact.unwrap() > 0.0);
}
