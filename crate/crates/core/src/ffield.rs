//! Finite fields `F_p` and `F_{p^n}` for desk-scale enumeration.
//!
//! An extension field is `F_p[x]/(f)` for the lexicographically smallest
//! monic irreducible `f` of degree `n` (coefficients compared from the
//! `x^{n-1}` term down). Elements are coefficient vectors `(c_0, ..., c_{n-1})`;
//! the integer `c_0 + c_1 p + ... + c_{n-1} p^{n-1}` is the element's index,
//! which fixes the enumeration order.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};

/// Largest `p^n` that may be enumerated element by element.
pub const ENUMERATION_GUARD: u64 = 10_000_000;

/// Deterministic Miller-Rabin for all `n < 2^64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &w in &WITNESSES {
        if n.is_multiple_of(w) {
            return n == w;
        }
    }
    let mut d = n - 1;
    let mut r = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        r += 1;
    }
    'outer: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// The prime field `F_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(PrimeField { p })
        } else {
            Err(Error::NotPrime(p))
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        ((a as u128 + b as u128) % self.p as u128) as u64
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.p - b % self.p)
    }

    pub fn neg(&self, a: u64) -> u64 {
        (self.p - a % self.p) % self.p
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        mul_mod(a, b, self.p)
    }

    pub fn pow(&self, a: u64, e: u64) -> u64 {
        pow_mod(a, e, self.p)
    }

    pub fn inv(&self, a: u64) -> Option<u64> {
        let a = a % self.p;
        (a != 0).then(|| self.pow(a, self.p - 2))
    }

    pub fn is_square(&self, a: u64) -> bool {
        let a = a % self.p;
        a == 0 || self.p == 2 || self.pow(a, (self.p - 1) / 2) == 1
    }

    pub fn from_i64(&self, a: i64) -> u64 {
        a.rem_euclid(self.p as i64) as u64
    }

    pub fn from_bigint(&self, a: &BigInt) -> u64 {
        a.mod_floor(&BigInt::from(self.p))
            .to_u64()
            .expect("residue fits in u64")
    }

    /// Reduction of a `p`-integral rational.
    pub fn from_rational(&self, a: &BigRational) -> Option<u64> {
        let den = self.from_bigint(a.denom());
        let inv = self.inv(den)?;
        Some(self.mul(self.from_bigint(a.numer()), inv))
    }

    /// Centered representative in `(-p/2, p/2]`.
    pub fn centered(&self, a: u64) -> i64 {
        let a = a % self.p;
        if a > self.p / 2 {
            a as i64 - self.p as i64
        } else {
            a as i64
        }
    }
}

// Dense polynomials over F_p, lowest coefficient first, no trailing zeros.

fn trim(mut f: Vec<u64>) -> Vec<u64> {
    while f.last() == Some(&0) {
        f.pop();
    }
    f
}

fn poly_sub(fp: &PrimeField, a: &[u64], b: &[u64]) -> Vec<u64> {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            fp.sub(
                a.get(i).copied().unwrap_or(0),
                b.get(i).copied().unwrap_or(0),
            )
        })
        .collect();
    trim(out)
}

fn poly_rem(fp: &PrimeField, a: &[u64], m: &[u64]) -> Vec<u64> {
    let mut r = trim(a.to_vec());
    let dm = m.len() - 1;
    let lead_inv = fp.inv(m[dm]).expect("nonzero leading coefficient");
    while r.len() > dm {
        let shift = r.len() - 1 - dm;
        let c = fp.mul(*r.last().unwrap(), lead_inv);
        for (i, &mi) in m.iter().enumerate() {
            r[shift + i] = fp.sub(r[shift + i], fp.mul(c, mi));
        }
        r = trim(r);
    }
    r
}

fn poly_mulmod(fp: &PrimeField, a: &[u64], b: &[u64], m: &[u64]) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = fp.add(prod[i + j], fp.mul(x, y));
        }
    }
    poly_rem(fp, &prod, m)
}

fn poly_gcd(fp: &PrimeField, a: &[u64], b: &[u64]) -> Vec<u64> {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let r = poly_rem(fp, &a, &b);
        a = b;
        b = r;
    }
    a
}

/// Ben-Or: `f` of degree `n` is irreducible iff `gcd(x^{p^k} - x, f) = 1` for `k <= n/2`.
pub fn is_irreducible(p: u64, f: &[u64]) -> Result<bool> {
    let fp = PrimeField::new(p)?;
    let f = trim(f.iter().map(|&c| c % p).collect());
    if f.len() < 2 {
        return Ok(false);
    }
    let n = f.len() - 1;
    let x = poly_rem(&fp, &[0, 1], &f);
    let mut xpk = x.clone();
    for _ in 1..=n / 2 {
        // x^{p^k} = (x^{p^{k-1}})^p
        let mut acc = vec![1u64];
        let mut base = xpk.clone();
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                acc = poly_mulmod(&fp, &acc, &base, &f);
            }
            base = poly_mulmod(&fp, &base, &base, &f);
            e >>= 1;
        }
        xpk = acc;
        let g = poly_gcd(&fp, &poly_sub(&fp, &xpk, &x), &f);
        if g.len() > 1 {
            return Ok(false);
        }
    }
    Ok(true)
}

pub(crate) fn checked_order(p: u64, n: u32, guard: u64) -> Result<u64> {
    match p.checked_pow(n) {
        Some(q) if q <= guard => Ok(q),
        _ => Err(Error::FieldTooLarge { p, n, guard }),
    }
}

/// Lexicographically smallest monic irreducible of degree `n` over `F_p`,
/// returned lowest coefficient first (length `n + 1`).
pub fn find_irreducible(p: u64, n: u32) -> Result<Vec<u64>> {
    PrimeField::new(p)?;
    if n == 0 {
        return Err(Error::DimensionMismatch(
            "extension degree must be positive".into(),
        ));
    }
    let count = checked_order(p, n, ENUMERATION_GUARD)?;
    for index in 0..count {
        // most significant base-p digit of `index` is c_{n-1}
        let mut f = vec![0u64; n as usize + 1];
        let mut rest = index;
        for c in f.iter_mut().take(n as usize) {
            *c = rest % p;
            rest /= p;
        }
        f[n as usize] = 1;
        if is_irreducible(p, &f)? {
            return Ok(f);
        }
    }
    Err(Error::Internal(format!(
        "no irreducible of degree {n} over F_{p}"
    )))
}

/// `F_{p^n} = F_p[x]/(modulus)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExtField {
    base: PrimeField,
    n: u32,
    modulus: Vec<u64>,
}

impl ExtField {
    pub fn new(p: u64, n: u32) -> Result<Self> {
        let base = PrimeField::new(p)?;
        let modulus = if n == 1 {
            vec![0, 1]
        } else {
            find_irreducible(p, n)?
        };
        Ok(ExtField { base, n, modulus })
    }

    pub fn prime(p: u64) -> Result<Self> {
        ExtField::new(p, 1)
    }

    /// Uses a caller-supplied monic modulus, checked for irreducibility.
    pub fn with_modulus(p: u64, modulus: Vec<u64>) -> Result<Self> {
        let base = PrimeField::new(p)?;
        let modulus = trim(modulus.into_iter().map(|c| c % p).collect());
        if modulus.len() < 2 || modulus.last() != Some(&1) {
            return Err(Error::Parse(
                "modulus must be monic of positive degree".into(),
            ));
        }
        if !is_irreducible(p, &modulus)? {
            return Err(Error::Parse(format!("{modulus:?} is reducible over F_{p}")));
        }
        let n = (modulus.len() - 1) as u32;
        Ok(ExtField { base, n, modulus })
    }

    pub fn p(&self) -> u64 {
        self.base.p
    }

    pub fn degree(&self) -> u32 {
        self.n
    }

    pub fn base(&self) -> &PrimeField {
        &self.base
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// `p^n`, if it fits in a `u64`.
    pub fn order(&self) -> Option<u64> {
        self.base.p.checked_pow(self.n)
    }

    pub fn order_within_guard(&self, guard: u64) -> Result<u64> {
        checked_order(self.base.p, self.n, guard)
    }

    fn width(&self) -> usize {
        self.n as usize
    }

    pub fn zero(&self) -> Vec<u64> {
        vec![0; self.width()]
    }

    pub fn one(&self) -> Vec<u64> {
        self.from_base(1)
    }

    pub fn from_base(&self, c: u64) -> Vec<u64> {
        let mut e = self.zero();
        e[0] = c % self.base.p;
        e
    }

    fn pad(&self, mut v: Vec<u64>) -> Vec<u64> {
        v.resize(self.width(), 0);
        v
    }

    pub fn is_zero(&self, a: &[u64]) -> bool {
        a.iter().all(|&c| c == 0)
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter()
            .zip(b)
            .map(|(&x, &y)| self.base.add(x, y))
            .collect()
    }

    pub fn sub(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter()
            .zip(b)
            .map(|(&x, &y)| self.base.sub(x, y))
            .collect()
    }

    pub fn neg(&self, a: &[u64]) -> Vec<u64> {
        a.iter().map(|&x| self.base.neg(x)).collect()
    }

    pub fn scale(&self, a: &[u64], k: u64) -> Vec<u64> {
        a.iter().map(|&x| self.base.mul(x, k)).collect()
    }

    pub fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        if self.n == 1 {
            return vec![self.base.mul(a[0], b[0])];
        }
        self.pad(poly_mulmod(&self.base, a, b, &self.modulus))
    }

    pub fn square(&self, a: &[u64]) -> Vec<u64> {
        self.mul(a, a)
    }

    pub fn pow(&self, a: &[u64], mut e: u128) -> Vec<u64> {
        let mut acc = self.one();
        let mut base = a.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    fn order_u128(&self) -> u128 {
        (self.base.p as u128).pow(self.n)
    }

    pub fn inv(&self, a: &[u64]) -> Option<Vec<u64>> {
        if self.is_zero(a) {
            return None;
        }
        if self.n == 1 {
            return self.base.inv(a[0]).map(|x| vec![x]);
        }
        Some(self.pow(a, self.order_u128() - 2))
    }

    /// `a^{(q-1)/2} = 1` for odd `q`; every element is a square in characteristic 2.
    pub fn is_square(&self, a: &[u64]) -> bool {
        if self.is_zero(a) || self.base.p == 2 {
            return true;
        }
        self.pow(a, (self.order_u128() - 1) / 2) == self.one()
    }

    pub fn frobenius(&self, a: &[u64]) -> Vec<u64> {
        self.pow(a, self.base.p as u128)
    }

    /// Absolute trace `a + a^p + ... + a^{p^{n-1}}`, an element of `F_p`.
    pub fn absolute_trace(&self, a: &[u64]) -> u64 {
        let mut acc = self.zero();
        let mut term = a.to_vec();
        for _ in 0..self.n {
            acc = self.add(&acc, &term);
            term = self.frobenius(&term);
        }
        debug_assert!(acc[1..].iter().all(|&c| c == 0));
        acc[0]
    }

    pub fn to_index(&self, a: &[u64]) -> u64 {
        a.iter().rev().fold(0u64, |acc, &c| acc * self.base.p + c)
    }

    pub fn from_index(&self, mut index: u64) -> Vec<u64> {
        (0..self.n)
            .map(|_| {
                let c = index % self.base.p;
                index /= self.base.p;
                c
            })
            .collect()
    }

    /// Every element exactly once, in index order.
    pub fn enumerate(&self) -> Result<impl Iterator<Item = Vec<u64>> + '_> {
        let q = self.order_within_guard(ENUMERATION_GUARD)?;
        Ok((0..q).map(move |i| self.from_index(i)))
    }

    pub fn format(&self, a: &[u64]) -> String {
        let parts: Vec<String> = a.iter().map(ToString::to_string).collect();
        format!("({})", parts.join(","))
    }

    pub fn element(self: &Arc<Self>, coeffs: Vec<u64>) -> FieldElement {
        FieldElement {
            field: Arc::clone(self),
            coeffs: self.pad(coeffs.into_iter().map(|c| c % self.base.p).collect()),
        }
    }
}

/// An element that carries its field, so it supports operator syntax.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldElement {
    field: Arc<ExtField>,
    coeffs: Vec<u64>,
}

impl FieldElement {
    pub fn field(&self) -> &Arc<ExtField> {
        &self.field
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    fn wrap(&self, coeffs: Vec<u64>) -> FieldElement {
        FieldElement {
            field: Arc::clone(&self.field),
            coeffs,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.field.is_zero(&self.coeffs)
    }

    pub fn inv(&self) -> Option<FieldElement> {
        self.field.inv(&self.coeffs).map(|c| self.wrap(c))
    }

    pub fn pow(&self, e: u128) -> FieldElement {
        self.wrap(self.field.pow(&self.coeffs, e))
    }

    pub fn is_square(&self) -> bool {
        self.field.is_square(&self.coeffs)
    }

    pub fn scale(&self, k: i64) -> FieldElement {
        let k = self.field.base.from_i64(k);
        self.wrap(self.field.scale(&self.coeffs, k))
    }

    pub fn zero_like(&self) -> FieldElement {
        self.wrap(self.field.zero())
    }

    pub fn one_like(&self) -> FieldElement {
        self.wrap(self.field.one())
    }

    /// The residue in `F_p` when the element lies in the prime field.
    pub fn as_base(&self) -> Option<u64> {
        self.coeffs[1..]
            .iter()
            .all(|&c| c == 0)
            .then(|| self.coeffs[0])
    }

    /// Maps an element of the prime field into `target`.
    pub fn lift_to(&self, target: &Arc<ExtField>) -> Option<FieldElement> {
        if target.p() != self.field.p() {
            return None;
        }
        Some(target.element(vec![self.as_base()?]))
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.field.degree() == 1 {
            write!(f, "{}", self.coeffs[0])
        } else {
            write!(f, "{}", self.field.format(&self.coeffs))
        }
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn same_field(a: &FieldElement, b: &FieldElement) {
    assert!(
        Arc::ptr_eq(&a.field, &b.field) || a.field == b.field,
        "operands from different fields"
    );
}

impl Add for FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: Self) -> Self {
        same_field(&self, &rhs);
        let c = self.field.add(&self.coeffs, &rhs.coeffs);
        self.wrap(c)
    }
}

impl Sub for FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: Self) -> Self {
        same_field(&self, &rhs);
        let c = self.field.sub(&self.coeffs, &rhs.coeffs);
        self.wrap(c)
    }
}

impl Mul for FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: Self) -> Self {
        same_field(&self, &rhs);
        let c = self.field.mul(&self.coeffs, &rhs.coeffs);
        self.wrap(c)
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> Self {
        let c = self.field.neg(&self.coeffs);
        self.wrap(c)
    }
}

/// Square roots over `F_q` by table lookup, built by one pass over the field.
///
/// For odd `q` the table maps `v` to one root of `y^2 = v`; in
/// characteristic 2 it maps `w` to one root of `z^2 + z = w` and keeps the
/// (unique) square roots separately.
pub(crate) struct RootTable {
    root: Vec<u32>,
    sqrt2: Vec<u32>,
    char2: bool,
}

const NO_ROOT: u32 = u32::MAX;

impl RootTable {
    pub(crate) fn build(field: &ExtField, guard: u64) -> Result<Self> {
        let q = field.order_within_guard(guard.min(NO_ROOT as u64))?;
        let mut root = vec![NO_ROOT; q as usize];
        let char2 = field.p() == 2;
        let mut sqrt2 = if char2 {
            vec![0; q as usize]
        } else {
            Vec::new()
        };
        for y in 0..q {
            let e = field.from_index(y);
            let sq = field.square(&e);
            let image = if char2 {
                sqrt2[field.to_index(&sq) as usize] = y as u32;
                field.add(&sq, &e)
            } else {
                sq
            };
            root[field.to_index(&image) as usize] = y as u32;
        }
        Ok(RootTable { root, sqrt2, char2 })
    }

    pub(crate) fn root_of(&self, index: u64) -> Option<u64> {
        let r = self.root[index as usize];
        (r != NO_ROOT).then_some(r as u64)
    }

    /// Number of solutions; `z^2 + z = w` never has exactly one.
    pub(crate) fn root_count(&self, index: u64) -> u64 {
        match self.root_of(index) {
            None => 0,
            Some(_) if !self.char2 && index == 0 => 1,
            Some(_) => 2,
        }
    }

    /// All solutions, as element indices.
    pub(crate) fn roots_of(&self, field: &ExtField, index: u64) -> Vec<u64> {
        let Some(r) = self.root_of(index) else {
            return Vec::new();
        };
        let e = field.from_index(r);
        let other = if self.char2 {
            field.add(&e, &field.one())
        } else {
            field.neg(&e)
        };
        let other = field.to_index(&other);
        if other == r {
            vec![r]
        } else {
            vec![r, other]
        }
    }

    pub(crate) fn sqrt_char2(&self, index: u64) -> u64 {
        self.sqrt2[index as usize] as u64
    }
}

/// Converts an exact rational to a residue, reporting non-integrality.
pub(crate) fn reduce_rational(fp: &PrimeField, value: &BigRational) -> Result<u64> {
    fp.from_rational(value).ok_or_else(|| Error::NotPIntegral {
        p: fp.p(),
        coefficient: value.to_string(),
    })
}
