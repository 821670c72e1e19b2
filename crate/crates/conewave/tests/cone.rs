use conewave::cone::*;
use num_complex::Complex64;
use num_rational::Rational64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(1.0)
}

#[test]
fn exponent_examples() {
    let e = make_exponents(3, 2.0).unwrap();
    assert!(close(e.q, 4.0, 1e-15) && e.gamma_p == 0.0 && e.nu == 1.0);
    assert!(e.is_critical());

    let e = make_exponents_from(3, &"3/2".parse().unwrap()).unwrap();
    assert!(close(e.p_prime, 3.0, 1e-15) && close(e.q, 6.0, 1e-15) && e.nu == 1.0);
    assert_eq!(e.gamma_exact, Some(Rational64::from_integer(2)));
    assert_eq!(e.gamma_p, 2.0);

    let e = make_exponents(2, 2.0).unwrap();
    assert!(close(e.q, 6.0, 1e-15) && e.gamma_p == 0.0 && e.nu == 0.5);
}

#[test]
fn exponent_range_is_enforced() {
    for (d, p) in [(3, "1"), (3, "2"), (3, "3"), (2, "4"), (2, "0.5"), (1, "2")] {
        let r = make_exponents_from(d, &p.parse().unwrap());
        let admissible = d >= 2 && p != "1" && p.parse::<f64>().unwrap() < p_upper(d) && p.parse::<f64>().unwrap() > 1.0;
        assert_eq!(r.is_ok(), admissible, "d={d} p={p}");
    }
    assert_eq!(p_upper(3), 3.0);
    assert_eq!(p_upper(2), 4.0);
}

#[test]
fn ab_coefficient_examples() {
    let (a, b) = ab_coefficients(1.5);
    assert!(close(a, -0.75, 1e-15) && close(b, 1.25, 1e-15));
    let (a, b) = ab_coefficients(2.5);
    assert!(close(a, 1.25, 1e-15) && close(b, 3.25, 1e-15));
    assert_eq!(ab_coefficients(2.0).0, 0.0);
}

#[test]
fn p_value_formats() {
    let p: PValue = "3/2".parse().unwrap();
    assert_eq!((p.value, p.text.as_str()), (1.5, "3/2"));
    assert_eq!(PValue::from_ratio(5, 2).exact, Some(Rational64::new(5, 2)));
    assert_eq!(PValue::from_f64(2.5).exact, None);
}

#[test]
fn translation_of_canonical_candidate() {
    let f = FFunctionParams::canonical(3).unwrap();
    let g = apply_symmetry(&SymmetryElement::Translation { t0: 1.0, x0: vec![0.0; 3] }, &f, 2.0).unwrap();
    assert!((g.a - Complex64::new(-1.0, -1.0)).norm() < 1e-15);
    assert!(g.b.iter().all(|z| z.norm() == 0.0));
    assert_eq!(g.c, f.c);
}

#[test]
fn symmetry_action_matches_pointwise() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for d in [2usize, 3, 4] {
        for _ in 0..50 {
            let f = random_params(&mut rng, d);
            let word: Vec<_> = (0..3).map(|_| random_element(&mut rng, d)).collect();
            let xi: Vec<f64> = (0..d).map(|j| 0.4 + 0.3 * j as f64).collect();
            assert!(symmetry_pointwise_oracle(&word, &f, 1.7, &xi).unwrap() < 1e-11);
        }
    }
}

#[test]
fn boost_preserves_cone_measure() {
    let s = SymmetryElement::Boost(vec![0.3, 0.0]);
    assert!(cone_measure_invariance_check(&s, 2, 0).unwrap() <= 1e-6);
    let s = SymmetryElement::Boost(vec![0.2, -0.4, 0.1]);
    assert!(cone_measure_invariance_check(&s, 3, 1).unwrap() <= 1e-6);
    assert!(cone_measure_invariance_check(&s, 4, 1).is_err());
}

#[test]
fn admissibility_is_closed_and_detected() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    assert_eq!(admissibility_closure_check(&mut rng, 2, 1.5, 2000, 8).unwrap(), 2000);
    let f = FFunctionParams { a: Complex64::new(-1.0, 0.0), b: vec![Complex64::new(2.0, 0.0), Complex64::new(0.0, 0.0)], c: Complex64::new(0.0, 0.0) };
    assert!(!f.is_admissible());
}

proptest! {
    #[test]
    fn gamma_round_trip(d in 2u32..=6, frac in 0.001f64..0.999) {
        let p = 1.0 + frac * (p_upper(d) - 1.0);
        let e = make_exponents(d, p).unwrap();
        // γ = (d+1)(p′/2 − 1) ⟹ p′ = 2(γ/(d+1) + 1)
        let pp = 2.0 * (e.gamma_p / (d as f64 + 1.0) + 1.0);
        let back = pp / (pp - 1.0);
        prop_assert!((back - p).abs() <= 1e-12 * p);
        prop_assert!(e.gamma_p > -1.0);
    }

    #[test]
    fn inverse_undoes_element(seed in 0u64..1000, d in 2usize..=5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_params(&mut rng, d);
        let s = random_element(&mut rng, d);
        let back = apply_word(&[s.clone(), s.inverse()], &f, 1.8).unwrap();
        prop_assert!(params_distance(&f, &back) < 1e-12);
    }
}
