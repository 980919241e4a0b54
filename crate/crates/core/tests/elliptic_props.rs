mod common;

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use nclocal::elliptic::{
    builtin_catalog, classify_reduction, count_nonsingular, count_points, find_isomorphism_witness,
    group_structure, isomorphic_over_closure, point_counts_via_recurrence, reduce_mod_p,
    reduce_transform, trace_of_frobenius, AdmissibleTransform, ClassificationMethod, RationalModel,
    RationalTransform, ReducedModel, ReductionKind,
};
use nclocal::ffield::{ExtField, FieldElement};
use nclocal::functor::draw_transform;

use common::*;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn random_rational<R: Rng>(rng: &mut R) -> BigRational {
    q(rng.gen_range(-9..=9), rng.gen_range(1..=5))
}

fn random_model<R: Rng>(rng: &mut R) -> RationalModel {
    loop {
        let c: Vec<i64> = (0..5).map(|_| rng.gen_range(-6..=6)).collect();
        let e = RationalModel::from_integers([c[0], c[1], c[2], c[3], c[4]]);
        if !e.is_singular() {
            return e;
        }
    }
}

#[test]
fn invariants_scale_under_transforms() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..1000 {
        let e = random_model(&mut rng);
        let mut u = random_rational(&mut rng);
        if u.is_zero() {
            u = BigRational::one();
        }
        let (r, s, t) = (
            random_rational(&mut rng),
            random_rational(&mut rng),
            random_rational(&mut rng),
        );
        let tr = AdmissibleTransform::new(u.clone(), r, s, t).unwrap();
        let e2 = e.transform(&tr);
        let u4 = num_traits::pow(u.clone(), 4);
        let u12 = num_traits::pow(u, 12);
        assert_eq!(e2.discriminant() * &u12, e.discriminant(), "{e} by {tr:?}");
        assert_eq!(e2.c4() * u4, e.c4());
        assert_eq!(e2.j_invariant().unwrap(), e.j_invariant().unwrap());
        assert_eq!(e2.transform(&tr.inverse()), e);
    }
}

#[test]
fn transforms_compose() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..300 {
        let e = random_model(&mut rng);
        let a = draw_transform(&mut rng, 7);
        let b = RationalTransform::new(
            q(rng.gen_range(1..=4), rng.gen_range(1..=3)),
            random_rational(&mut rng),
            random_rational(&mut rng),
            random_rational(&mut rng),
        )
        .unwrap();
        assert_eq!(e.transform(&a).transform(&b), e.transform(&a.then(&b)));
    }
}

fn random_fp_transform<R: Rng>(rng: &mut R, p: u64) -> AdmissibleTransform<FieldElement> {
    let f = Arc::new(ExtField::prime(p).unwrap());
    let el = |v: u64| f.element(vec![v]);
    AdmissibleTransform::new(
        el(rng.gen_range(1..p)),
        el(rng.gen_range(0..p)),
        el(rng.gen_range(0..p)),
        el(rng.gen_range(0..p)),
    )
    .unwrap()
}

#[test]
fn singular_type_is_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut seen = [0usize; 3];
    for p in primes_upto(97).into_iter().filter(|&p| p > 3) {
        // node y^2 = x^2 (x + c) or cusp y^2 = x^3
        for c in [0i64, 1, 2, 3, 5, 6] {
            let base = reduce_mod_p(&RationalModel::from_integers([0, c, 0, 0, 0]), p).unwrap();
            let kind = classify_reduction(&base).unwrap().kind;
            for _ in 0..100 {
                let moved = base.transform(&random_fp_transform(&mut rng, p));
                assert!(moved.is_singular());
                let r = classify_reduction(&moved).unwrap();
                assert_eq!(r.kind, kind, "p={p}, c={c}, {moved}");
                assert_eq!(r.method, ClassificationMethod::TangentCone);
            }
            seen[match kind {
                ReductionKind::SplitMultiplicative => 0,
                ReductionKind::NonSplitMultiplicative => 1,
                _ => 2,
            }] += 1;
        }
    }
    assert!(seen.iter().all(|&n| n > 0), "{seen:?}");
}

#[test]
fn hasse_bound_on_catalog() {
    for entry in builtin_catalog() {
        let bad = bad_primes(&entry.model);
        for p in primes_upto(97) {
            let r = reduce_mod_p(&entry.model, p).unwrap();
            assert_eq!(r.is_singular(), bad.contains(&p), "{} at {p}", entry.label);
            if r.is_singular() {
                continue;
            }
            let a = trace_of_frobenius(&r).unwrap();
            assert!(a * a <= 4 * p as i64, "{} at {p}", entry.label);
        }
    }
}

/// Affine solutions of the Weierstrass equation over `F_{p^n}`, by checking every pair.
fn brute_count(e: &ReducedModel, n: u32) -> u64 {
    let f = ExtField::new(e.a1.field().p(), n).unwrap();
    let c: Vec<Vec<u64>> = e
        .coefficients()
        .iter()
        .map(|x| f.from_base(x.as_base().unwrap()))
        .collect();
    let elems: Vec<Vec<u64>> = f.enumerate().unwrap().collect();
    let mut count = 1;
    for x in &elems {
        let x2 = f.mul(x, x);
        let rhs = f.add(
            &f.add(&f.mul(&x2, x), &f.mul(&c[1], &x2)),
            &f.add(&f.mul(&c[3], x), &c[4]),
        );
        let lin = f.add(&f.mul(&c[0], x), &c[2]);
        for y in &elems {
            let lhs = f.add(&f.mul(y, y), &f.mul(&lin, y));
            count += (lhs == rhs) as u64;
        }
    }
    count
}

#[test]
fn recurrence_matches_brute_force() {
    for e in [curve_x3_minus_x(), curve_x3_plus_1(), catalog_model("cm7")] {
        for p in primes_upto(23) {
            let r = reduce_mod_p(&e, p).unwrap();
            if r.is_singular() {
                continue;
            }
            let a = trace_of_frobenius(&r).unwrap();
            let rec = point_counts_via_recurrence(a, p, 3);
            for n in 1..=3u32 {
                if p.pow(n) > 700 {
                    break;
                }
                let direct = count_points(&r, n).unwrap();
                assert_eq!(BigInt::from(direct), rec[n as usize - 1], "{e} p={p} n={n}");
                assert_eq!(direct, brute_count(&r, n));
            }
        }
    }
}

#[test]
fn singular_counts_match_brute_force() {
    for p in [5u64, 7, 11, 13] {
        for c in [0i64, 1, 2, 3] {
            let r = reduce_mod_p(&RationalModel::from_integers([0, c, 0, 0, 0]), p).unwrap();
            // brute force includes the singular point once
            assert_eq!(count_nonsingular(&r, 1).unwrap(), brute_count(&r, 1) - 1);
            assert_eq!(count_nonsingular(&r, 2).unwrap(), brute_count(&r, 2) - 1);
        }
    }
}

#[test]
fn group_structure_shape() {
    for e in [curve_x3_minus_x(), curve_x3_plus_1()] {
        for p in primes_upto(31) {
            let r = reduce_mod_p(&e, p).unwrap();
            if r.is_singular() {
                continue;
            }
            for n in 1..=2u32 {
                let g = group_structure(&r, n).unwrap();
                let d = g.invariant_factors();
                let qn = BigInt::from(p.pow(n));
                let d1 = if d.len() == 2 {
                    d[0].clone()
                } else {
                    BigInt::one()
                };
                let d2 = d.last().cloned().unwrap_or_else(BigInt::one);
                assert!(
                    (&d2 % &d1).is_zero() && ((&qn - 1u32) % &d1).is_zero(),
                    "p={p} n={n} {d:?}"
                );
                assert_eq!(g.order(), BigInt::from(count_points(&r, n).unwrap()));
            }
        }
    }
}

fn fields() -> Vec<Arc<ExtField>> {
    vec![
        Arc::new(ExtField::with_modulus(3, vec![1, 0, 1]).unwrap()),
        Arc::new(ExtField::with_modulus(3, vec![2, 1, 1]).unwrap()),
        Arc::new(ExtField::new(2, 3).unwrap()),
        Arc::new(ExtField::new(5, 2).unwrap()),
        Arc::new(ExtField::new(7, 3).unwrap()),
        Arc::new(ExtField::new(13, 1).unwrap()),
    ]
}

#[test]
fn field_axioms() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for f in fields() {
        let qn = f.order().unwrap();
        let rand_el = |rng: &mut ChaCha8Rng| f.from_index(rng.gen_range(0..qn));
        for _ in 0..1000 {
            let (a, b, c) = (rand_el(&mut rng), rand_el(&mut rng), rand_el(&mut rng));
            assert_eq!(f.add(&a, &b), f.add(&b, &a));
            assert_eq!(f.mul(&a, &b), f.mul(&b, &a));
            assert_eq!(f.mul(&f.mul(&a, &b), &c), f.mul(&a, &f.mul(&b, &c)));
            assert_eq!(
                f.mul(&a, &f.add(&b, &c)),
                f.add(&f.mul(&a, &b), &f.mul(&a, &c))
            );
            assert_eq!(f.add(&a, &f.neg(&a)), f.zero());
            if !f.is_zero(&a) {
                assert_eq!(f.mul(&a, &f.inv(&a).unwrap()), f.one());
            }
            assert_eq!(
                f.frobenius(&f.add(&a, &b)),
                f.add(&f.frobenius(&a), &f.frobenius(&b))
            );
            assert_eq!(
                f.frobenius(&f.mul(&a, &b)),
                f.mul(&f.frobenius(&a), &f.frobenius(&b))
            );
            assert_eq!(f.pow(&a, qn as u128), a);
        }
        if f.p() != 2 {
            let squares = f.enumerate().unwrap().filter(|a| f.is_square(a)).count() as u64;
            assert_eq!(squares, qn.div_ceil(2), "F_{qn}");
        }
    }
}

#[test]
fn witnesses_for_random_transforms() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for e in [curve_x3_minus_x(), curve_x3_plus_1()] {
        for p in [5u64, 7, 11, 13, 17] {
            let base = reduce_mod_p(&e, p).unwrap();
            for _ in 0..20 {
                let tr = draw_transform(&mut rng, p);
                let moved = reduce_mod_p(&e.transform(&tr), p).unwrap();
                let w = find_isomorphism_witness(&base, &moved)
                    .unwrap()
                    .expect("witness");
                let field = Arc::clone(w.transform.u().field());
                let lift = |m: &ReducedModel| m.map(|c| Ok(c.lift_to(&field).unwrap())).unwrap();
                assert_eq!(lift(&base).transform(&w.transform), lift(&moved));
                assert_eq!(base.transform(&reduce_transform(&tr, p).unwrap()), moved);
            }
        }
    }
}

#[test]
fn twists_need_an_extension() {
    // y^2 = x^3 - x and y^2 = x^3 - 2x share j = 1728
    for p in [5u64, 13, 17, 29] {
        let a = reduce_mod_p(&RationalModel::from_integers([0, 0, 0, -1, 0]), p).unwrap();
        let b = reduce_mod_p(&RationalModel::from_integers([0, 0, 0, -2, 0]), p).unwrap();
        assert!(isomorphic_over_closure(&a, &b).unwrap());
        let w = find_isomorphism_witness(&a, &b)
            .unwrap()
            .expect("witness over an extension");
        let field = Arc::clone(w.transform.u().field());
        let lift = |m: &ReducedModel| m.map(|c| Ok(c.lift_to(&field).unwrap())).unwrap();
        assert_eq!(lift(&a).transform(&w.transform), lift(&b));
        let different_counts = count_points(&a, 1).unwrap() != count_points(&b, 1).unwrap();
        assert!(!different_counts || w.degree > 1, "p={p}");
    }
    let a = reduce_mod_p(&RationalModel::from_integers([0, 0, 0, -1, 0]), 7).unwrap();
    let c = reduce_mod_p(&RationalModel::from_integers([0, 0, 0, 0, 1]), 7).unwrap();
    assert!(find_isomorphism_witness(&a, &c).unwrap().is_none());
}

proptest! {
    #[test]
    fn inverse_and_then_cancel(u in 1i64..6, r in -5i64..5, s in -5i64..5, t in -5i64..5, ud in 1i64..4) {
        let tr = RationalTransform::new(q(u, ud), q(r, 1), q(s, 2), q(t, 3)).unwrap();
        let id = tr.then(&tr.inverse());
        prop_assert_eq!(id, RationalTransform::from_integers(1, 0, 0, 0).unwrap());
    }
}
