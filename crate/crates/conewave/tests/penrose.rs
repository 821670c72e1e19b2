use std::f64::consts::PI;

use conewave::cone::{make_exponents, make_exponents_from};
use conewave::penrose::*;
use conewave::quadrature::QuadratureConfig;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn cfg() -> QuadratureConfig {
    QuadratureConfig::default()
}

fn point(t: f64, r: f64) -> SpacetimePoint {
    SpacetimePoint { t, r, omega: vec![0.0, 0.0, 1.0] }
}

#[test]
fn forward_examples() {
    let p = penrose_forward(&point(1.0, 0.0));
    assert!((p.big_t - PI / 2.0).abs() < 1e-15 && p.big_r.abs() < 1e-15);
    let p = penrose_forward(&point(0.0, 1.0));
    assert!(p.big_t.abs() < 1e-15 && (p.big_r - PI / 2.0).abs() < 1e-15);
    assert!(p.in_diamond());
    let (a, b) = conformal_factor_pair(&point(1.0, 1.0));
    assert!((a - 2.0 / 5f64.sqrt()).abs() < 1e-15 && (a - b).abs() < 1e-15);
    assert_eq!(conformal_factor(&point(0.0, 0.0)).unwrap(), 2.0);
}

#[test]
fn inverse_rejects_the_boundary() {
    let edge = PenrosePoint { big_t: 0.5, big_r: PI - 0.5, omega: vec![1.0, 0.0] };
    assert!(penrose_inverse(&edge).is_err());
    let neg = PenrosePoint { big_t: 0.0, big_r: -0.1, omega: vec![1.0, 0.0] };
    assert!(penrose_inverse(&neg).is_err());
}

#[test]
fn round_trips() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for d in [2, 3, 5] {
        let r = round_trip_check(&mut rng, d, 2000).unwrap();
        assert!(r.round_trip <= 1e-12 && r.omega_dual <= 1e-12, "{r:?}");
    }
}

#[test]
fn funk_hecke_examples() {
    let c = cfg();
    assert!((funk_hecke_eigenvalue(3, 2, &c).unwrap() - 1.0 / 3.0).abs() < 1e-13);
    assert!((funk_hecke_eigenvalue(2, 0, &c).unwrap() - 2.0).abs() < 1e-13);
    assert!((funk_hecke_eigenvalue(4, 5, &c).unwrap() - 2.0 / 13.0).abs() < 1e-13);
    assert!(funk_hecke_eigenvalue(1, 0, &c).is_err());
}

#[test]
fn zonal_operators() {
    let y = ZonalFunction::harmonic(3, 2);
    assert!((penrose_transform_zonal(&y, 1.0) - Complex64::new(-1.0, 0.0)).norm() < 1e-15);
    // the transform of 1 is g⋆(r) = (2/(1+r²))^ν
    let one = ZonalFunction::harmonic(3, 0);
    for r in [0.0, 0.5, 2.0] {
        assert!((penrose_transform_zonal(&one, r).re - 2.0 / (1.0 + r * r)).abs() < 1e-15);
    }
    let f = ZonalFunction::new(2, vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 2.0)]);
    let df = dsd_apply(&f);
    assert_eq!(df.coeffs, vec![Complex64::new(0.5, 0.0), Complex64::new(0.0, 3.0)]);
    let w = spherical_halfwave(&f, PI);
    assert!((w.coeffs[0] - Complex64::new(0.0, 1.0)).norm() < 1e-15);
    assert!((w.coeffs[1] - Complex64::new(0.0, 2.0) * Complex64::new(0.0, -1.0)).norm() < 1e-15);
    // D g⋆ at r = 0, d = 3: ν·2^{ν+1}
    assert!((dg_closed(3, 0, 0.0) - 4.0).abs() < 1e-15);
}

#[test]
fn pushforward_of_the_measure() {
    let trials = [
        DiamondTrial { centre: (0.0, 1.0), radius: 0.6, time_harmonic: None },
        DiamondTrial { centre: (0.4, 1.5), radius: 0.5, time_harmonic: Some(2) },
    ];
    for d in [2, 3] {
        for t in &trials {
            assert!(pushforward_check(t, d, &cfg()).unwrap() <= 1e-6);
        }
    }
}

#[test]
fn intertwining_low_degrees() {
    let grid: Vec<f64> = (0..=8).map(|i| 0.25 * i as f64).collect();
    for k in [0, 2] {
        assert!(intertwining_check(3, k, &grid, &cfg()).unwrap() <= 1e-8, "k={k}");
    }
    assert!(intertwining_check(4, 0, &grid, &cfg()).is_err());
}

#[test]
fn diamond_unfolds_onto_the_cylinder() {
    let g = ZonalFunction::new(3, vec![Complex64::new(1.0, 0.0), Complex64::new(0.5, 0.0), Complex64::new(0.0, 0.25)]);
    for p in ["3/2", "5/2"] {
        let e = make_exponents_from(3, &p.parse().unwrap()).unwrap();
        let u = diamond_unfold_check(&g, &e, &cfg()).unwrap();
        assert!(u.residual <= 1e-6, "p={p}: {u:?}");
    }
    let h = half_wave_on_cylinder(&make_exponents(3, 2.0).unwrap(), &cfg()).unwrap();
    assert!((h - 2.0 * PI.powi(3)).abs() < 1e-9 * h);
}

#[test]
fn tangent_directions_have_degree_at_most_one() {
    for d in [2, 3, 6] {
        assert!(tangent_space_check(d).unwrap() <= 1e-10);
    }
}

#[test]
fn radial_fourier_of_a_gaussian() {
    // ∫ e^{−|x|²/2} e^{−ix·ξ} dx = (2π)^{d/2} e^{−ρ²/2}
    let f = |r: f64| (-r * r / 2.0).exp();
    for d in [2u32, 3] {
        let v = radial_fourier(d, &f, 1.3, &cfg()).unwrap();
        let want = (2.0 * PI).powf(d as f64 / 2.0) * (-1.3f64 * 1.3 / 2.0).exp();
        assert!((v - want).abs() <= 1e-10 * want, "d={d}: {v} vs {want}");
    }
}
