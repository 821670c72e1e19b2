use std::f64::consts::PI;

use conewave::quadrature::{gauss_jacobi, QuadratureConfig};
use conewave::specfun::*;
use proptest::prelude::*;

// (order, x, J_order(x)) at 40-digit working precision
const BESSEL: &[(f64, f64, f64)] = &[
    (0.0, 0.1, 0.997501562066040032),
    (0.0, 1.0, 0.76519768655796655145),
    (0.0, 2.5, -0.048383776468197996327),
    (0.0, 5.0, -0.17759677131433830435),
    (0.0, 10.0, -0.2459357644513483352),
    (0.0, 24.0, -0.056230274166859267015),
    (0.0, 26.0, 0.1559993155224211296),
    (0.0, 30.0, -0.086367983581040211336),
    (0.0, 50.0, 0.055812327669251815005),
    (0.0, 100.0, 0.019985850304223122424),
    (0.0, 150.0, -0.00077409037539429124695),
    (0.0, 200.0, -0.015437439930565091592),
    (0.5, 0.1, 0.25189294032600095267),
    (0.5, 1.0, 0.67139670714180309042),
    (0.5, 2.5, 0.30200490606236568126),
    (0.5, 5.0, -0.34216798479816180976),
    (0.5, 10.0, -0.13726373575505048121),
    (0.5, 24.0, -0.14748928746712271766),
    (0.5, 26.0, 0.11932364893397459959),
    (0.5, 30.0, -0.14392965337039988914),
    (0.5, 50.0, -0.029605831888924612568),
    (0.5, 100.0, -0.040402132716252123744),
    (0.5, 150.0, -0.046572055895600107672),
    (0.5, 200.0, -0.049270523842854474976),
    (1.0, 0.1, 0.049937526036242000321),
    (1.0, 1.0, 0.44005058574493351596),
    (1.0, 2.5, 0.49709410246427403801),
    (1.0, 5.0, -0.32757913759146522204),
    (1.0, 10.0, 0.04347274616886143667),
    (1.0, 24.0, -0.15403806518312122128),
    (1.0, 26.0, 0.01504573058691581115),
    (1.0, 30.0, -0.11875106261662293652),
    (1.0, 50.0, -0.097511828125175137661),
    (1.0, 100.0, -0.077145352014112158033),
    (1.0, 150.0, -0.065145163657727360305),
    (1.0, 200.0, -0.054304538182378222711),
    (1.5, 0.1, 0.0084020343015001435986),
    (1.5, 1.0, 0.2402978391234270109),
    (1.5, 2.5, 0.52508026466400314595),
    (1.5, 5.0, -0.16965130614474076152),
    (1.5, 10.0, 0.1979824927558931048),
    (1.5, 24.0, -0.075230363138244720464),
    (1.5, 26.0, -0.096639294122715311147),
    (1.5, 30.0, -0.027267945711177687796),
    (1.5, 50.0, -0.10947687298831803539),
    (1.5, 100.0, -0.069207112795890604984),
    (1.5, 150.0, -0.045864573772034219353),
    (1.5, 200.0, -0.02773297376639450223),
    (2.5, 0.1, 0.00016808871900334129365),
    (2.5, 1.0, 0.049496810228477942271),
    (2.5, 2.5, 0.32809141153443809388),
    (2.5, 5.0, 0.24037720111131735285),
    (2.5, 10.0, 0.19665848358181841265),
    (2.5, 24.0, 0.1380854920748421276),
    (2.5, 26.0, -0.1304743367173648278),
    (2.5, 30.0, 0.14120285879928212036),
    (2.5, 50.0, 0.023037219509625530445),
    (2.5, 100.0, 0.038325919332375405594),
    (2.5, 150.0, 0.045654764420159423285),
    (2.5, 200.0, 0.048854529236358557442),
    (5.0, 0.1, 2.6030817909644415564e-9),
    (5.0, 1.0, 0.00024975773021123443138),
    (5.0, 2.5, 0.019501625134503219886),
    (5.0, 5.0, 0.26114054612017009005),
    (5.0, 10.0, -0.23406152818679364044),
    (5.0, 24.0, -0.16229575288623108409),
    (5.0, 26.0, 0.083751419318481513329),
    (5.0, 30.0, -0.14324029551207707699),
    (5.0, 50.0, -0.081400247696569639644),
    (5.0, 100.0, -0.074195736964513920834),
    (5.0, 150.0, -0.064998631740725846593),
    (5.0, 200.0, -0.055132678944014677614),
    (7.5, 0.1, 1.2443805684963260157e-14),
    (7.5, 1.0, 3.821974121348042196e-7),
    (7.5, 2.5, 0.00031550517899598516895),
    (7.5, 5.0, 0.031940778293484687016),
    (7.5, 10.0, 0.28608848611686449661),
    (7.5, 24.0, 0.16692081994000311337),
    (7.5, 26.0, -0.059323379604618480276),
    (7.5, 30.0, 0.13142029812318965145),
    (7.5, 50.0, 0.10856137065342746007),
    (7.5, 100.0, 0.077399827825100083371),
    (7.5, 150.0, 0.053440364481328785512),
    (7.5, 200.0, 0.034105652819720785507),
    (12.0, 0.1, 5.0958844202514144769e-25),
    (12.0, 1.0, 4.9997181794484052891e-13),
    (12.0, 2.5, 2.6925131898897755695e-8),
    (12.0, 5.0, 0.000076278131660845513551),
    (12.0, 10.0, 0.06337025497015601509),
    (12.0, 24.0, 0.07299008930873356487),
    (12.0, 26.0, -0.16109040864391326293),
    (12.0, 30.0, 0.14825335109966010021),
    (12.0, 50.0, 0.10577531055851069217),
    (12.0, 100.0, 0.066236048659638041258),
    (12.0, 150.0, 0.029456180525347028317),
    (12.0, 200.0, 0.0046786031208384521432),
    (20.5, 0.1, 1.9239118396845255481e-46),
    (20.5, 1.0, 6.0142908292586846696e-26),
    (20.5, 2.5, 8.1356557151528055114e-18),
    (20.5, 5.0, 9.683738209818926173e-12),
    (20.5, 10.0, 5.824328368524614441e-6),
    (20.5, 24.0, 0.20173840503312302556),
    (20.5, 26.0, -0.0054581593978200454744),
    (20.5, 30.0, -0.064292512919191251334),
    (20.5, 50.0, -0.089057494445934368323),
    (20.5, 100.0, 0.080647548630727859623),
    (20.5, 150.0, 0.037266348097156199134),
    (20.5, 200.0, -0.00062345145753245796013),
    (33.0, 0.1, 1.340579341821124432e-80),
    (33.0, 1.0, 1.3308551172129219044e-47),
    (33.0, 2.5, 1.7352946622749627801e-34),
    (33.0, 5.0, 1.2980456526047180386e-24),
    (33.0, 10.0, 6.3758926566612502423e-15),
    (33.0, 24.0, 0.0005024364273975332134),
    (33.0, 26.0, 0.0029572653042744548808),
    (33.0, 30.0, 0.041808109470107239985),
    (33.0, 50.0, -0.099220113729515449299),
    (33.0, 100.0, -0.070677939565877664111),
    (33.0, 150.0, 0.058158388262573656532),
    (33.0, 200.0, 0.043811955677326046924),
    (40.0, 0.1, 1.114624600251642287e-100),
    (40.0, 1.0, 1.1079158511286326622e-60),
    (40.0, 2.5, 8.8755868405815496357e-45),
    (40.0, 5.0, 8.7022416173888180768e-33),
    (40.0, 10.0, 6.0308953123469066317e-21),
    (40.0, 24.0, 4.5528204159068760723e-7),
    (40.0, 26.0, 5.6801394324227393657e-6),
    (40.0, 30.0, 0.00036120236088965853089),
    (40.0, 50.0, -0.13817628120116143097),
    (40.0, 100.0, 0.072701754822811056577),
    (40.0, 150.0, -0.053178029743433989334),
    (40.0, 200.0, -0.031932993297986605204),
];

// (x, ln Γ(x)) at 40-digit working precision
const LN_GAMMA: &[(f64, f64)] = &[
    (0.001, 6.907178885383853661684),
    (0.013, 4.335440242151057511486),
    (0.5, 0.5723649429247000870717),
    (0.9, 0.06637623973474295442597),
    (1.7, -0.09580769740706587378829),
    (3.3, 0.9870985778947344040573),
    (10.25, 13.36802367147604629543),
    (47.5, 134.8749893121619495666),
    (99.9, 358.6742394519775637568),
    (150.5, 602.5139548705854119507),
    (169.9, 700.9240078752710447189),
];

#[test]
fn bessel_matches_reference_table() {
    for &(nu, x, exact) in BESSEL {
        let v = bessel_j(nu, x).unwrap();
        let err = (v - exact).abs();
        assert!(
            err <= 1e-10 * exact.abs() || err <= 1e-12,
            "J_{nu}({x}) = {v}, expected {exact}"
        );
    }
}

#[test]
fn bessel_half_order_closed_form() {
    for x in [1.0, 2.0, 10.0] {
        let exact = (2.0 / (PI * x)).sqrt() * f64::sin(x);
        assert!((bessel_j(0.5, x).unwrap() - exact).abs() < 1e-14);
    }
    assert_eq!(bessel_j(0.0, 0.0).unwrap(), 1.0);
    assert!(bessel_j(1.0, -1.0).is_err());
}

#[test]
fn bessel_matches_poisson_integral_for_small_arguments() {
    // J_m(x)/x^m = ∫(1−t²)^{m−1/2} cos(tx) dt / (2^m Γ(m+1/2) √π)
    let cfg = QuadratureConfig::default();
    for m in [0.5, 1.0, 2.5, 4.0] {
        for x in [0.3, 1.5, 4.0] {
            let q = gauss_jacobi(|t| (t * x).cos(), m - 0.5, m - 0.5, &cfg).unwrap().value;
            let poisson = q * x.powf(m) / (2f64.powf(m) * gamma(m + 0.5) * PI.sqrt());
            let v = bessel_j(m, x).unwrap();
            assert!((v - poisson).abs() < 1e-13 * v.abs(), "m={m} x={x}: {v} vs {poisson}");
        }
    }
}

#[test]
fn log_gamma_reference_values() {
    for &(x, exact) in LN_GAMMA {
        let v = log_gamma(x).unwrap();
        let rel = ((v - exact).exp() - 1.0).abs();
        assert!(rel <= 1e-13, "ln Γ({x}): {v} vs {exact}");
    }
    assert_eq!(log_gamma(1.0).unwrap(), 0.0);
    assert!((log_gamma(0.5).unwrap() - PI.sqrt().ln()).abs() < 1e-15);
    let fact9: f64 = (1..=9).map(|i| i as f64).product();
    assert!((log_gamma(10.0).unwrap() - fact9.ln()).abs() < 1e-14);
    assert!(log_gamma(0.0).is_err());
    assert!(log_gamma(-2.5).is_err());
}

#[test]
fn exp_log_gamma_tracks_factorials_to_170() {
    let mut fact = 1.0f64;
    for n in 1..170u32 {
        // fact = (n−1)!
        let v = log_gamma(n as f64).unwrap().exp();
        assert!((v / fact - 1.0).abs() <= 1e-13, "Γ({n})");
        fact *= n as f64;
    }
}

#[test]
fn gegenbauer_examples() {
    assert!(gegenbauer(1.0, 2, 0.5).unwrap().abs() < 1e-15);
    assert_eq!(gegenbauer(1.5, 0, 0.3).unwrap(), 1.0);
    assert!((gegenbauer(0.5, 3, 1.0).unwrap() - 1.0).abs() < 1e-15);
    assert!(gegenbauer(0.0, 2, 0.1).is_err());
    assert!(gegenbauer(1.0, 61, 0.1).is_err());
    for (a, k) in [(0.5, 7), (1.0, 12), (2.5, 30)] {
        let at_one = gegenbauer(a, k, 1.0).unwrap();
        assert!((at_one / gegenbauer_at_one(a, k) - 1.0).abs() < 1e-12);
    }
}

#[test]
fn chebyshev_examples() {
    assert!((chebyshev_t(2, 0.0).unwrap() + 1.0).abs() < 1e-15);
    assert_eq!(chebyshev_t(5, 1.0).unwrap(), 1.0);
    assert!((chebyshev_t(3, 0.3).unwrap() + 0.792).abs() < 1e-15);
    for j in 0..=50 {
        let th = j as f64 * PI / 50.0;
        for k in 0..20 {
            assert!((chebyshev_t(k, th.cos()).unwrap() - (k as f64 * th).cos()).abs() < 1e-12);
        }
    }
}

#[test]
fn rodrigues_and_homogeneous_constants() {
    assert!((rodrigues_r(0.0, 0).unwrap() - 1.0).abs() < 1e-15);
    assert!((rodrigues_r(0.0, 1).unwrap() - 1.0).abs() < 1e-15);
    assert!((rodrigues_r(1.0, 2).unwrap() - 0.2).abs() < 1e-15);
    assert_eq!(homogeneous_h(0.0).unwrap(), 0.0);
    assert_eq!(homogeneous_h(2.0).unwrap(), 0.0);
    assert_eq!(homogeneous_h(4.0).unwrap(), 0.0);
    assert!(homogeneous_h(1.0).unwrap() < 0.0);
    for g in [0.3, 1.7, 2.2, 3.9, 5.5, 7.1] {
        let expect = if ((g / 2.0) as i64 + 1) % 2 == 0 { 1.0 } else { -1.0 };
        assert_eq!(homogeneous_h(g).unwrap().signum(), expect, "gamma={g}");
    }
    assert!(homogeneous_h(-1.0).is_err());
}

#[test]
fn gamma_ratio_examples() {
    assert_eq!(gamma_ratio(1.3, 1.3, 17).unwrap(), 1.0);
    assert!((gamma_ratio(1.0, 0.0, 5).unwrap() - 5.0).abs() < 1e-12);
    let r = gamma_ratio(2.5, 1.0, 200).unwrap();
    assert!((r / 200f64.powf(1.5) - 1.0).abs() < 0.01);
    let big = gamma_ratio(2.5, 1.0, 1_000_000).unwrap();
    assert!(big.is_finite() && (big * 1e6f64.powf(-1.5) - 1.0).abs() < 1e-5);
}

#[test]
fn sphere_area_examples() {
    assert!((sphere_area(2).unwrap() - 2.0 * PI).abs() < 1e-14);
    assert!((sphere_area(3).unwrap() - 4.0 * PI).abs() < 1e-14);
    assert!((sphere_area(4).unwrap() - 2.0 * PI * PI).abs() < 1e-13);
    assert!(sphere_area(0).is_err());
}

#[test]
fn gegenbauer_orthogonality_and_norms() {
    let cfg = QuadratureConfig::default();
    for a in [0.5, 1.0, 1.5] {
        for k in 0..=12 {
            for kp in 0..k {
                let v = gauss_jacobi(
                    |t| gegenbauer(a, k, t).unwrap() * gegenbauer(a, kp, t).unwrap(),
                    a - 0.5,
                    a - 0.5,
                    &cfg,
                )
                .unwrap()
                .value;
                assert!(v.abs() <= 1e-10, "alpha={a} ({k},{kp}) = {v}");
            }
            let nsq = gauss_jacobi(|t| gegenbauer(a, k, t).unwrap().powi(2), a - 0.5, a - 0.5, &cfg)
                .unwrap()
                .value;
            assert!((nsq / gegenbauer_norm_sq(a, k) - 1.0).abs() < 1e-9);
        }
    }
}

proptest! {
    #[test]
    fn gegenbauer_recurrence_and_parity(alpha in 0.05f64..4.0, k in 2usize..=60, t in -1.0f64..1.0) {
        let c = |j| gegenbauer(alpha, j, t).unwrap();
        let kf = k as f64;
        let lhs = kf * c(k);
        let rhs = 2.0 * (kf + alpha - 1.0) * t * c(k - 1) - (kf + 2.0 * alpha - 2.0) * c(k - 2);
        let scale = gegenbauer_at_one(alpha, k) * kf;
        prop_assert!((lhs - rhs).abs() <= 1e-12 * scale);
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        prop_assert!((gegenbauer(alpha, k, -t).unwrap() - sign * c(k)).abs() <= 1e-13 * gegenbauer_at_one(alpha, k));
    }

    #[test]
    fn bessel_three_term_recurrence(nu in 1.0f64..30.0, x in 0.5f64..150.0) {
        let j = |n: f64| bessel_j(n, x).unwrap();
        let resid = j(nu - 1.0) + j(nu + 1.0) - 2.0 * nu / x * j(nu);
        let scale = j(nu - 1.0).abs().max(j(nu + 1.0).abs()).max((2.0 * nu / x * j(nu)).abs());
        prop_assert!(resid.abs() <= 1e-11 * scale.max(1e-300) + 1e-300);
    }
}
