#![allow(dead_code)]

use nclocal::elliptic::{builtin_catalog, reduce_mod_p, RationalModel};
use nclocal::ffield::is_prime;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// y^2 = x^3 - x
pub fn curve_x3_minus_x() -> RationalModel {
    catalog_model("cm4")
}

/// y^2 = x^3 + 1
pub fn curve_x3_plus_1() -> RationalModel {
    catalog_model("cm3")
}

pub fn catalog_model(label: &str) -> RationalModel {
    builtin_catalog()
        .into_iter()
        .find(|c| c.label == label)
        .unwrap_or_else(|| panic!("no catalog entry {label}"))
        .model
}

pub fn primes_upto(n: u64) -> Vec<u64> {
    (2..=n).filter(|&p| is_prime(p)).collect()
}

/// Primes dividing the numerator of the discriminant, by trial division.
pub fn bad_primes(e: &RationalModel) -> Vec<u64> {
    let disc = e.discriminant();
    assert!(disc.denom().is_one(), "integral model expected");
    let mut n = disc.numer().abs();
    let mut out = Vec::new();
    let mut d = 2u64;
    while !n.is_zero() && d * d <= 10_000_000 {
        if (&n % d).is_zero() {
            out.push(d);
            while (&n % d).is_zero() {
                n /= d;
            }
        }
        d += 1;
    }
    let rest = n.to_u64().expect("cofactor fits");
    if rest > 1 {
        assert!(is_prime(rest));
        out.push(rest);
    }
    for &p in &out {
        assert!(reduce_mod_p(e, p).unwrap().is_singular());
    }
    out
}

pub type M2 = [i64; 4];

pub fn mul2(a: M2, b: M2) -> M2 {
    [
        a[0] * b[0] + a[1] * b[2],
        a[0] * b[1] + a[1] * b[3],
        a[2] * b[0] + a[3] * b[2],
        a[2] * b[1] + a[3] * b[3],
    ]
}

/// Some `B` with entries in `[-bound, bound]`, `det B = +-1` and `B A = A' B`.
pub fn brute_conjugator(a: M2, a2: M2, bound: i64) -> Option<M2> {
    let r = -bound..=bound;
    for b0 in r.clone() {
        for b1 in r.clone() {
            for b2 in r.clone() {
                for b3 in r.clone() {
                    let b = [b0, b1, b2, b3];
                    let det = b0 * b3 - b1 * b2;
                    if det.abs() == 1 && mul2(b, a) == mul2(a2, b) {
                        return Some(b);
                    }
                }
            }
        }
    }
    None
}

pub fn to_m2(m: &nclocal::intmat::IntMatrix) -> M2 {
    let e = m.entries();
    [0, 1, 2, 3].map(|i| e[i].to_i64().expect("small entries"))
}
