use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use proptest::prelude::*;

use nclocal::quadratic_cf::{
    boundary_to_theta, cf_expand, gl2z_equivalent, incidence_matrix, is_reduced, CfExpansion,
    QuadraticIrrational, QuadraticSurd,
};

fn nonsquare(d: i64) -> bool {
    let r = (d as f64).sqrt() as i64;
    (r - 1..=r + 1).all(|s| s * s != d)
}

fn qi(p: i64, d: i64, q: i64) -> QuadraticIrrational {
    QuadraticIrrational::new(p, d, q).unwrap()
}

fn arb_irrational() -> impl Strategy<Value = QuadraticIrrational> {
    (-30i64..=30, 2i64..=500, prop_oneof![-30i64..=-1, 1i64..=30])
        .prop_filter("nonsquare radicand", |(_, d, _)| nonsquare(*d))
        .prop_map(|(p, d, q)| qi(p, d, q))
}

#[test]
fn galois_grid() {
    let mut reduced = 0;
    for p in -20i64..=20 {
        for q in (-20i64..=20).filter(|&q| q != 0) {
            for d in (2i64..=300).filter(|&d| nonsquare(d)) {
                let x = qi(p, d, q);
                let pure = cf_expand(&x).is_purely_periodic();
                assert_eq!(pure, is_reduced(&x), "{x}");
                reduced += pure as usize;
            }
        }
    }
    assert!(reduced > 1000);
}

#[test]
fn known_expansions() {
    let cases = [
        ("sqrt(2)", "[1; (2)]"),
        ("sqrt(3)", "[1; (1, 2)]"),
        ("(1+sqrt(5))/2", "[(1)]"),
        ("sqrt(7)", "[2; (1, 1, 1, 4)]"),
        ("sqrt(13)", "[3; (1, 1, 1, 1, 6)]"),
        ("(-1+sqrt(5))/2", "[0; (1)]"),
    ];
    for (text, expected) in cases {
        let x: QuadraticIrrational = text.parse().unwrap();
        assert_eq!(cf_expand(&x).to_string(), expected, "{text}");
    }
}

#[test]
fn equivalence_is_an_equivalence_relation() {
    let sample: Vec<QuadraticIrrational> = [
        (0, 2, 1),
        (1, 2, 1),
        (3, 8, 1),
        (0, 3, 1),
        (1, 3, 2),
        (1, 5, 2),
        (-1, 5, 2),
        (2, 5, 1),
        (0, 7, 1),
        (5, 7, 3),
        (0, 13, 1),
        (3, 13, 2),
        (1, 13, 3),
        (4, 17, 1),
    ]
    .iter()
    .map(|&(p, d, q)| qi(p, d, q))
    .collect();
    for x in &sample {
        assert!(gl2z_equivalent(x, x));
        for y in &sample {
            assert_eq!(gl2z_equivalent(x, y), gl2z_equivalent(y, x), "{x} {y}");
            for z in &sample {
                if gl2z_equivalent(x, y) && gl2z_equivalent(y, z) {
                    assert!(gl2z_equivalent(x, z), "{x} {y} {z}");
                }
            }
        }
    }
}

fn surd(r: &BigRational, d: &BigInt) -> QuadraticSurd {
    QuadraticSurd::rational(r.clone(), d)
}

proptest! {
    #[test]
    fn expansion_evaluates_back(x in arb_irrational()) {
        let cf = cf_expand(&x);
        prop_assert!(!cf.period.is_empty());
        prop_assert_eq!(cf.value().unwrap(), x);
    }

    #[test]
    fn convergent_error_bound(x in arb_irrational()) {
        let v = x.to_surd();
        let d = v.radicand().clone();
        let conv = cf_expand(&x).convergents(10);
        for (n, pair) in conv.windows(2).enumerate() {
            let err = (v.clone() - surd(&pair[0], &d)).abs();
            let bound = BigRational::new(BigInt::one(), pair[0].denom() * pair[1].denom());
            prop_assert!((surd(&bound, &d) - err).signum() > 0, "n = {}", n);
        }
    }

    #[test]
    fn incidence_matrix_fixes_the_tail(x in arb_irrational()) {
        let cf = cf_expand(&x);
        let theta = CfExpansion { preperiod: vec![], period: cf.period.clone() }.value().unwrap();
        prop_assert!(is_reduced(&theta));
        let t = theta.to_surd();
        let d = t.radicand().clone();
        let a = incidence_matrix(&cf.period).unwrap();
        let m = |i, j| QuadraticSurd::from_integer(a.get(i, j).clone(), &d);
        let lambda = m(1, 0) * t.clone() + m(1, 1);
        prop_assert_eq!(m(0, 0) * t.clone() + m(0, 1), lambda.clone() * t);
        prop_assert!((lambda.clone() - lambda.conjugate().abs()).signum() > 0);
    }

    #[test]
    fn boundary_map_lands_in_unit_interval(x in arb_irrational()) {
        let theta = boundary_to_theta(&x).to_surd();
        let d = theta.radicand().clone();
        prop_assert!(theta.signum() > 0);
        prop_assert!((QuadraticSurd::from_integer(1, &d) - theta).signum() > 0);
    }

    #[test]
    fn display_parses_back(x in arb_irrational()) {
        let y: QuadraticIrrational = x.to_string().parse().unwrap();
        prop_assert_eq!(y, x);
    }

    #[test]
    fn integer_shifts_and_inversion_are_equivalences(x in arb_irrational(), k in -5i64..=5) {
        let shifted = QuadraticIrrational::from_surd(&(x.to_surd() + QuadraticSurd::from_integer(k, x.d()))).unwrap();
        let inverted = QuadraticIrrational::from_surd(&x.to_surd().recip().unwrap()).unwrap();
        prop_assert!(gl2z_equivalent(&x, &shifted));
        prop_assert!(gl2z_equivalent(&x, &inverted));
    }
}
