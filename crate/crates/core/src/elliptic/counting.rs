//! Brute-force point counts, the Frobenius trace and group structure.

use num_bigint::BigInt;
use num_integer::Integer;

use super::ReducedModel;
use crate::ck_k0::AbelianGroupInv;
use crate::error::{Error, Result};
use crate::ffield::{checked_order, ExtField, RootTable, ENUMERATION_GUARD};

/// Largest field order enumerated for point counts.
pub const COUNT_GUARD: u64 = ENUMERATION_GUARD;
/// Largest field order for which group structure is computed.
pub const GROUP_GUARD: u64 = 1_000_000;

fn base_coefficients(e: &ReducedModel) -> Result<(u64, [u64; 5])> {
    let p = e.a1.field().p();
    let mut out = [0u64; 5];
    for (slot, c) in out.iter_mut().zip(e.coefficients()) {
        *slot = c
            .as_base()
            .ok_or_else(|| Error::Internal("point counting expects a model over F_p".into()))?;
    }
    Ok((p, out))
}

/// The model's coefficients inside `F_{p^n}`, plus the field and a root table.
struct Lifted {
    field: ExtField,
    a: [Vec<u64>; 5],
    table: RootTable,
}

impl Lifted {
    fn new(e: &ReducedModel, n: u32, guard: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Internal("extension degree must be positive".into()));
        }
        let (p, c) = base_coefficients(e)?;
        checked_order(p, n, guard)?;
        let field = ExtField::new(p, n)?;
        let a = c.map(|x| field.from_base(x));
        let table = RootTable::build(&field, guard)?;
        Ok(Lifted { field, a, table })
    }

    /// `(b, c)` with the curve written as `y^2 + b y = c`.
    fn fibre(&self, x: &[u64]) -> (Vec<u64>, Vec<u64>) {
        let f = &self.field;
        let [a1, a2, a3, a4, a6] = &self.a;
        let b = f.add(&f.mul(a1, x), a3);
        let x2 = f.square(x);
        let c = f.add(
            &f.add(&f.mul(&x2, x), &f.mul(a2, &x2)),
            &f.add(&f.mul(a4, x), a6),
        );
        (b, c)
    }

    fn affine_count(&self) -> u64 {
        let f = &self.field;
        let q = f.order().expect("guarded");
        let char2 = f.p() == 2;
        let mut count = 0;
        for xi in 0..q {
            let x = f.from_index(xi);
            let (b, c) = self.fibre(&x);
            count += if char2 {
                if f.is_zero(&b) {
                    1
                } else {
                    let binv = f.inv(&f.square(&b)).expect("nonzero");
                    self.table.root_count(f.to_index(&f.mul(&c, &binv)))
                }
            } else {
                let disc = f.add(&f.square(&b), &f.scale(&c, 4));
                self.table.root_count(f.to_index(&disc))
            };
        }
        count
    }

    fn affine_points(&self) -> Vec<(Vec<u64>, Vec<u64>)> {
        let f = &self.field;
        let q = f.order().expect("guarded");
        let char2 = f.p() == 2;
        let half = f.inv(&f.from_base(2));
        let mut pts = Vec::new();
        for xi in 0..q {
            let x = f.from_index(xi);
            let (b, c) = self.fibre(&x);
            if char2 {
                if f.is_zero(&b) {
                    let y = f.from_index(self.table.sqrt_char2(f.to_index(&c)));
                    pts.push((x.clone(), y));
                } else {
                    let b2inv = f.inv(&f.square(&b)).expect("nonzero");
                    let w = f.to_index(&f.mul(&c, &b2inv));
                    for z in self.table.roots_of(f, w) {
                        pts.push((x.clone(), f.mul(&b, &f.from_index(z))));
                    }
                }
            } else {
                let half = half.as_ref().expect("odd characteristic");
                let disc = f.add(&f.square(&b), &f.scale(&c, 4));
                for t in self.table.roots_of(f, f.to_index(&disc)) {
                    let y = f.mul(&f.sub(&f.from_index(t), &b), half);
                    pts.push((x.clone(), y));
                }
            }
        }
        pts
    }
}

/// Affine solutions over `F_{p^n}`, the singular point included if any.
pub(crate) fn affine_count(e: &ReducedModel, n: u32) -> Result<u64> {
    Ok(Lifted::new(e, n, COUNT_GUARD)?.affine_count())
}

/// `#E(F_{p^n})` including the point at infinity.
pub fn count_points(e: &ReducedModel, n: u32) -> Result<u64> {
    if e.is_singular() {
        return Err(Error::SingularModel(
            "count_points needs good reduction; use count_nonsingular".into(),
        ));
    }
    Ok(affine_count(e, n)? + 1)
}

/// Points of the nonsingular locus over `F_{p^n}`, infinity included.
///
/// The singular point of a singular cubic is rational over `F_p`, so it is
/// removed once from the full count.
pub fn count_nonsingular(e: &ReducedModel, n: u32) -> Result<u64> {
    let affine = affine_count(e, n)?;
    Ok(if e.is_singular() { affine } else { affine + 1 })
}

/// `a_p = p + 1 - #E(F_p)`, with the Hasse bound checked.
pub fn trace_of_frobenius(e: &ReducedModel) -> Result<i64> {
    let p = e.a1.field().p();
    let n1 = count_points(e, 1)?;
    let a = p as i128 + 1 - n1 as i128;
    if a * a > 4 * p as i128 {
        return Err(Error::CountBug(format!(
            "a_p = {a} violates the Hasse bound at p = {p}"
        )));
    }
    Ok(a as i64)
}

/// `s_0..=s_{n_max}` with `s_0 = 2`, `s_1 = a_p`, `s_{k+1} = a_p s_k - p s_{k-1}`.
pub fn frobenius_power_sums(a_p: i64, p: u64, n_max: u32) -> Vec<BigInt> {
    let a = BigInt::from(a_p);
    let pb = BigInt::from(p);
    let mut s = vec![BigInt::from(2), a.clone()];
    while s.len() <= n_max as usize {
        let k = s.len();
        let next = &a * &s[k - 1] - &pb * &s[k - 2];
        s.push(next);
    }
    s.truncate(n_max as usize + 1);
    s
}

/// `N_1..=N_{n_max}` from `N_k = p^k + 1 - s_k`.
pub fn point_counts_via_recurrence(a_p: i64, p: u64, n_max: u32) -> Vec<BigInt> {
    let s = frobenius_power_sums(a_p, p, n_max);
    let pb = BigInt::from(p);
    (1..=n_max as usize)
        .map(|k| num_traits::pow(pb.clone(), k) + 1 - &s[k])
        .collect()
}

type Point = Option<(Vec<u64>, Vec<u64>)>;

struct GroupLaw<'a> {
    f: &'a ExtField,
    a: &'a [Vec<u64>; 5],
}

impl GroupLaw<'_> {
    fn negate(&self, pt: &Point) -> Point {
        let f = self.f;
        let [a1, _, a3, _, _] = self.a;
        pt.as_ref().map(|(x, y)| {
            let ny = f.sub(&f.neg(y), &f.add(&f.mul(a1, x), a3));
            (x.clone(), ny)
        })
    }

    fn add(&self, p1: &Point, p2: &Point) -> Point {
        let f = self.f;
        let [a1, a2, a3, a4, a6] = self.a;
        let ((x1, y1), (x2, y2)) = match (p1, p2) {
            (None, _) => return p2.clone(),
            (_, None) => return p1.clone(),
            (Some(a), Some(b)) => (a, b),
        };
        let (lambda, nu) = if x1 == x2 {
            let denom = f.add(&f.add(&f.scale(y1, 2), &f.mul(a1, x1)), a3);
            if f.is_zero(&denom) || *y1 != *y2 {
                // y2 is then the other root, so P2 = -P1
                return None;
            }
            let inv = f.inv(&denom).expect("nonzero");
            let x1sq = f.square(x1);
            let num_l = f.sub(
                &f.add(&f.add(&f.scale(&x1sq, 3), &f.scale(&f.mul(a2, x1), 2)), a4),
                &f.mul(a1, y1),
            );
            let num_n = f.sub(
                &f.add(
                    &f.add(&f.neg(&f.mul(&x1sq, x1)), &f.mul(a4, x1)),
                    &f.scale(a6, 2),
                ),
                &f.mul(a3, y1),
            );
            (f.mul(&num_l, &inv), f.mul(&num_n, &inv))
        } else {
            let inv = f.inv(&f.sub(x2, x1)).expect("distinct x");
            let lambda = f.mul(&f.sub(y2, y1), &inv);
            let nu = f.mul(&f.sub(&f.mul(y1, x2), &f.mul(y2, x1)), &inv);
            (lambda, nu)
        };
        let x3 = f.sub(
            &f.sub(
                &f.sub(&f.add(&f.square(&lambda), &f.mul(a1, &lambda)), a2),
                x1,
            ),
            x2,
        );
        let y3 = f.sub(&f.sub(&f.neg(&f.mul(&f.add(&lambda, a1), &x3)), &nu), a3);
        Some((x3, y3))
    }

    fn multiply(&self, pt: &Point, mut k: u64) -> Point {
        let mut acc: Point = None;
        let mut base = pt.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(&acc, &base);
            }
            base = self.add(&base, &base);
            k >>= 1;
        }
        acc
    }

    fn order(&self, pt: &Point, n: u64, primes: &[u64]) -> u64 {
        let mut ord = n;
        for &r in primes {
            while ord.is_multiple_of(r) && self.multiply(pt, ord / r).is_none() {
                ord /= r;
            }
        }
        ord
    }
}

fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// `E(F_{p^n}) = Z/d1 x Z/d2` with `d2` the exponent of the group.
pub fn group_structure(e: &ReducedModel, n: u32) -> Result<AbelianGroupInv> {
    if e.is_singular() {
        return Err(Error::SingularModel(
            "group structure needs good reduction".into(),
        ));
    }
    let lifted = Lifted::new(e, n, GROUP_GUARD)?;
    let f = &lifted.field;
    let q = f.order().expect("guarded");
    let points = lifted.affine_points();
    let total = points.len() as u64 + 1;
    let expected = count_points(e, n)?;
    if total != expected {
        return Err(Error::CountBug(format!(
            "enumerated {total} points but counted {expected}"
        )));
    }
    let law = GroupLaw { f, a: &lifted.a };
    let primes = prime_divisors(total);
    let mut exponent = 1u64;
    for (x, y) in points {
        if exponent == total {
            break;
        }
        let pt = Some((x, y));
        debug_assert!(law.add(&pt, &law.negate(&pt)).is_none());
        if law.multiply(&pt, exponent).is_none() {
            continue;
        }
        exponent = exponent.lcm(&law.order(&pt, total, &primes));
    }
    let d1 = total / exponent;
    if !total.is_multiple_of(exponent) || !exponent.is_multiple_of(d1) || (q - 1) % d1 != 0 {
        return Err(Error::CountBug(format!(
            "inconsistent structure: N = {total}, exponent = {exponent}, q = {q}"
        )));
    }
    AbelianGroupInv::new(vec![BigInt::from(d1), BigInt::from(exponent)])
}

/// `#E_ns(F_{p^n}) = p^n - alpha^n` for a singular reduction with the given alpha.
pub(crate) fn nonsingular_counts(alpha: i64, p: u64, n_max: u32) -> Vec<BigInt> {
    let pb = BigInt::from(p);
    let a = BigInt::from(alpha);
    (1..=n_max as usize)
        .map(|k| num_traits::pow(pb.clone(), k) - num_traits::pow(a.clone(), k))
        .collect()
}
