//! Quadratic irrationals, their periodic continued fractions, the incidence
//! matrix of a periodic expansion and the boundary map `x -> |x|/(1+|x|)`.
//!
//! Values are kept in the integer form `(P + sqrt(D)) / Q` with
//! `Q | D - P^2`, which keeps the continued-fraction recurrence
//!
//! ```text
//! a_i = floor((P_i + sqrt D) / Q_i)
//! P_{i+1} = a_i Q_i - P_i
//! Q_{i+1} = (D - P_{i+1}^2) / Q_i
//! ```
//!
//! inside the integers. General field arithmetic goes through
//! [`QuadraticSurd`], the form `a + b sqrt(d)` with rational `a, b`.
//!
//! Radicands are never factored completely: square factors are stripped by
//! bounded trial division, and two radicands name the same field when their
//! product is a perfect square.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::intmat::IntMatrix;

/// An element `a + b sqrt(d)` of a real quadratic field, `d > 1` nonsquare.
#[derive(Clone, Debug)]
pub struct QuadraticSurd {
    a: BigRational,
    b: BigRational,
    d: BigInt,
}

/// Trial divisors stop here; larger prime factors are left in place.
const TRIAL_BOUND: u64 = 100_000;

/// `d = k^2 * rest`, with `rest` squarefree whenever `d < TRIAL_BOUND^3`.
fn squarefree_decompose(d: &BigInt) -> (BigInt, BigInt) {
    let mut rest = d.clone();
    let (mut k, mut s) = (BigInt::one(), BigInt::one());
    let bound = BigInt::from(TRIAL_BOUND);
    let mut f = BigInt::from(2);
    while &f * &f * &f <= rest && f <= bound {
        let mut odd = false;
        while rest.is_multiple_of(&f) {
            rest /= &f;
            odd = !odd;
            if !odd {
                k *= &f;
            }
        }
        if odd {
            s *= &f;
        }
        f += 1;
    }
    // below the cube root the cofactor is 1, a prime, a product of two primes or a prime square
    if rest > BigInt::one() && is_perfect_square(&rest) {
        k *= rest.sqrt();
    } else {
        s *= rest;
    }
    (k, s)
}

/// Largest `g` (up to prime factors above [`TRIAL_BOUND`]) with `g | h` and `g^2 | d`.
fn root_divisor(h: &BigInt, d: &BigInt) -> BigInt {
    let (mut h, mut d) = (h.abs(), d.abs());
    let mut g = BigInt::one();
    let bound = BigInt::from(TRIAL_BOUND);
    let mut f = BigInt::from(2);
    while &f * &f <= h && f <= bound {
        while h.is_multiple_of(&f) {
            h /= &f;
            let f2 = &f * &f;
            if d.is_multiple_of(&f2) {
                d /= f2;
                g *= &f;
            }
        }
        f += 1;
    }
    if h > BigInt::one() && d.is_multiple_of(&(&h * &h)) {
        g *= h;
    }
    g
}

fn is_perfect_square(d: &BigInt) -> bool {
    !d.is_negative() && {
        let r = d.sqrt();
        &r * &r == *d
    }
}

impl QuadraticSurd {
    /// `a + b sqrt(d)`; `d` must be a positive nonsquare.
    pub fn new(a: BigRational, b: BigRational, d: BigInt) -> Result<Self> {
        if !d.is_positive() {
            return Err(Error::NonPositiveRadicand(d.to_string()));
        }
        if is_perfect_square(&d) {
            return Err(Error::PerfectSquare(d.to_string()));
        }
        let (k, rest) = squarefree_decompose(&d);
        Ok(QuadraticSurd {
            a,
            b: b * BigRational::from_integer(k),
            d: rest,
        })
    }

    pub fn rational(a: BigRational, d: &BigInt) -> Self {
        QuadraticSurd {
            a,
            b: BigRational::zero(),
            d: d.clone(),
        }
    }

    pub fn from_integer(n: impl Into<BigInt>, d: &BigInt) -> Self {
        QuadraticSurd::rational(BigRational::from_integer(n.into()), d)
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.a
    }

    pub fn sqrt_coefficient(&self) -> &BigRational {
        &self.b
    }

    pub fn radicand(&self) -> &BigInt {
        &self.d
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn conjugate(&self) -> Self {
        QuadraticSurd {
            a: self.a.clone(),
            b: -self.b.clone(),
            d: self.d.clone(),
        }
    }

    /// `(a + b sqrt d)(a - b sqrt d)`
    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - &self.b * &self.b * BigRational::from_integer(self.d.clone())
    }

    /// Exact sign.
    pub fn signum(&self) -> i8 {
        let sa = sign_of(&self.a);
        let sb = sign_of(&self.b);
        if sb == 0 {
            return sa;
        }
        if sa == 0 || sa == sb {
            return sb;
        }
        match self.norm().cmp(&BigRational::zero()) {
            Ordering::Greater => sa,
            _ => sb,
        }
    }

    pub fn abs(&self) -> Self {
        if self.signum() < 0 {
            -self.clone()
        } else {
            self.clone()
        }
    }

    pub fn recip(&self) -> Result<Self> {
        let n = self.norm();
        if n.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(QuadraticSurd {
            a: &self.a / &n,
            b: -&self.b / &n,
            d: self.d.clone(),
        })
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        Ok(self.clone() * other.recip()?)
    }

    pub fn floor(&self) -> BigInt {
        if self.is_rational() {
            return self.a.floor().to_integer();
        }
        // (A + B sqrt d) / C with C > 0, and sqrt(B^2 d) is irrational
        let c = self.a.denom().lcm(self.b.denom());
        let cr = BigRational::from_integer(c.clone());
        let a = (&self.a * &cr).to_integer();
        let b = (&self.b * &cr).to_integer();
        let s: BigInt = (&b * &b * &self.d).sqrt();
        if b.is_positive() {
            (a + s).div_floor(&c)
        } else {
            (a - s - 1i32).div_floor(&c)
        }
    }

    pub fn to_f64(&self) -> f64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        let d = self.d.to_f64().unwrap_or(f64::NAN);
        a + b * d.sqrt()
    }

    /// The common radicand and both `sqrt` coefficients over it.
    fn align(&self, other: &Self) -> (BigInt, BigRational, BigRational) {
        if other.is_rational() || self.d == other.d {
            return (self.d.clone(), self.b.clone(), other.b.clone());
        }
        if self.is_rational() {
            return (other.d.clone(), self.b.clone(), other.b.clone());
        }
        // sqrt(d2) = (t / d1) sqrt(d1) with t^2 = d1 d2
        let prod = &self.d * &other.d;
        let t = prod.sqrt();
        if &t * &t != prod {
            panic!(
                "mixing quadratic fields Q(sqrt {}) and Q(sqrt {})",
                self.d, other.d
            );
        }
        let b2 = &other.b * BigRational::new(t, self.d.clone());
        (self.d.clone(), self.b.clone(), b2)
    }
}

impl PartialEq for QuadraticSurd {
    fn eq(&self, other: &Self) -> bool {
        let r = |d: &BigInt| BigRational::from_integer(d.clone());
        self.a == other.a
            && self.b.signum() == other.b.signum()
            && &self.b * &self.b * r(&self.d) == &other.b * &other.b * r(&other.d)
    }
}

impl Eq for QuadraticSurd {}

fn sign_of(r: &BigRational) -> i8 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

impl Add for QuadraticSurd {
    type Output = QuadraticSurd;
    fn add(self, rhs: Self) -> Self {
        let (d, b1, b2) = self.align(&rhs);
        QuadraticSurd {
            a: self.a + rhs.a,
            b: b1 + b2,
            d,
        }
    }
}

impl Sub for QuadraticSurd {
    type Output = QuadraticSurd;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for QuadraticSurd {
    type Output = QuadraticSurd;
    fn neg(self) -> Self {
        QuadraticSurd {
            a: -self.a,
            b: -self.b,
            d: self.d,
        }
    }
}

impl Mul for QuadraticSurd {
    type Output = QuadraticSurd;
    fn mul(self, rhs: Self) -> Self {
        let (d, b1, b2) = self.align(&rhs);
        let dr = BigRational::from_integer(d.clone());
        QuadraticSurd {
            a: &self.a * &rhs.a + &b1 * &b2 * dr,
            b: &self.a * &b2 + &b1 * &rhs.a,
            d,
        }
    }
}

/// A quadratic irrational `(P + sqrt(D)) / Q` in normalized form.
///
/// Normalized means `D > 0` nonsquare, `Q != 0`, `Q | D - P^2`, and `|Q|`
/// minimal among such representations of the same value (exactly so unless
/// `gcd(P, Q)` has large prime factors). Equality compares values.
#[derive(Clone)]
pub struct QuadraticIrrational {
    p: BigInt,
    d: BigInt,
    q: BigInt,
}

impl QuadraticIrrational {
    /// `(P/Q, D/Q^2, Q > 0)`, which determines the value.
    fn value_key(&self) -> (BigRational, BigRational, bool) {
        (
            BigRational::new(self.p.clone(), self.q.clone()),
            BigRational::new(self.d.clone(), &self.q * &self.q),
            self.q.is_positive(),
        )
    }
}

impl PartialEq for QuadraticIrrational {
    fn eq(&self, other: &Self) -> bool {
        (self.p == other.p && self.d == other.d && self.q == other.q)
            || self.value_key() == other.value_key()
    }
}

impl Eq for QuadraticIrrational {}

impl Hash for QuadraticIrrational {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.value_key().hash(state);
    }
}

impl QuadraticIrrational {
    pub fn new(p: impl Into<BigInt>, d: impl Into<BigInt>, q: impl Into<BigInt>) -> Result<Self> {
        let (mut p, mut d, mut q) = (p.into(), d.into(), q.into());
        if !d.is_positive() {
            return Err(Error::NonPositiveRadicand(d.to_string()));
        }
        if is_perfect_square(&d) {
            return Err(Error::PerfectSquare(d.to_string()));
        }
        if q.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        if !(&d - &p * &p).is_multiple_of(&q) {
            let aq = q.abs();
            p *= &aq;
            d *= &q * &q;
            q *= &aq;
        }
        Ok(Self::shrink(p, d, q))
    }

    /// Divides by the largest `g` with `g | P`, `g | Q`, `g^2 | D` and
    /// `g Q | D - P^2`; the first, second and fourth say `g | gcd(P, Q, (D - P^2)/Q)`.
    fn shrink(p: BigInt, d: BigInt, q: BigInt) -> Self {
        let h = p.gcd(&q).gcd(&((&d - &p * &p) / &q));
        let g = root_divisor(&h, &d);
        if g.is_one() {
            return QuadraticIrrational { p, d, q };
        }
        let g2 = &g * &g;
        QuadraticIrrational {
            p: p / &g,
            d: d / g2,
            q: q / &g,
        }
    }

    /// Converts a surd with nonzero irrational part.
    pub fn from_surd(x: &QuadraticSurd) -> Result<Self> {
        if x.is_rational() {
            return Err(Error::PerfectSquare("rational value".into()));
        }
        // a + b sqrt d = (a Q + sqrt(b^2 Q^2 d)) / Q with sign(Q) = sign(b)
        let lcm = x.a.denom().lcm(x.b.denom());
        let q = if x.b.is_negative() { -lcm } else { lcm };
        let qr = BigRational::from_integer(q.clone());
        let p = (&x.a * &qr).to_integer();
        let c = (&x.b * &qr).to_integer();
        let d = &c * &c * &x.d;
        if q.is_zero() || !(&d - &p * &p).is_multiple_of(&q) {
            return QuadraticIrrational::new(p, d, q);
        }
        Ok(QuadraticIrrational::shrink(p, d, q))
    }

    pub fn p(&self) -> &BigInt {
        &self.p
    }

    pub fn d(&self) -> &BigInt {
        &self.d
    }

    pub fn q(&self) -> &BigInt {
        &self.q
    }

    pub fn to_surd(&self) -> QuadraticSurd {
        let qr = BigRational::from_integer(self.q.clone());
        QuadraticSurd::new(
            BigRational::from_integer(self.p.clone()) / &qr,
            BigRational::one() / qr,
            self.d.clone(),
        )
        .expect("normalized radicand is a positive nonsquare")
    }

    /// `(P - sqrt D)/Q`
    pub fn conjugate(&self) -> Self {
        QuadraticIrrational {
            p: -self.p.clone(),
            d: self.d.clone(),
            q: -self.q.clone(),
        }
    }

    pub fn neg(&self) -> Self {
        QuadraticIrrational::from_surd(&-self.to_surd()).expect("negation stays irrational")
    }

    pub fn floor(&self) -> BigInt {
        floor_pq(&self.p, &self.q, &self.d.sqrt())
    }

    pub fn to_f64(&self) -> f64 {
        self.to_surd().to_f64()
    }

    pub fn signum(&self) -> i8 {
        self.to_surd().signum()
    }
}

/// `floor((p + sqrt d) / q)` for nonsquare `d`, given `s = floor(sqrt d)`.
fn floor_pq(p: &BigInt, q: &BigInt, s: &BigInt) -> BigInt {
    if q.is_positive() {
        (p + s).div_floor(q)
    } else {
        (-p - s - BigInt::one()).div_floor(&-q)
    }
}

impl fmt::Display for QuadraticIrrational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}+sqrt({}))/{}", self.p, self.d, self.q)
    }
}

impl fmt::Debug for QuadraticIrrational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for QuadraticIrrational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl FromStr for QuadraticIrrational {
    type Err = Error;

    /// Accepts `(P+sqrt(D))/Q`, `(P-sqrt(D))/Q`, `P+sqrt(D)`, `sqrt(D)`,
    /// `-sqrt(D)/Q` and similar.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("expected (P+sqrt(D))/Q, got {s:?}"));
        let text: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let (num, den) = match text.rfind('/') {
            Some(i) if !text[i + 1..].contains(')') => (&text[..i], &text[i + 1..]),
            _ => (text.as_str(), "1"),
        };
        let q: BigInt = den.parse().map_err(|_| bad())?;
        let num = num
            .strip_prefix('(')
            .and_then(|n| n.strip_suffix(')'))
            .filter(|n| n.contains("sqrt("))
            .unwrap_or(num);
        let at = num.find("sqrt(").ok_or_else(bad)?;
        let (head, tail) = num.split_at(at);
        let radicand = tail
            .strip_prefix("sqrt(")
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(bad)?;
        let d: BigInt = radicand.parse().map_err(|_| bad())?;
        let (p_text, negative) = match head.chars().last() {
            Some('+') => (&head[..head.len() - 1], false),
            Some('-') => (&head[..head.len() - 1], true),
            None => ("", false),
            Some(_) => return Err(bad()),
        };
        let p: BigInt = if p_text.is_empty() {
            BigInt::zero()
        } else {
            p_text.parse().map_err(|_| bad())?
        };
        if negative {
            QuadraticIrrational::new(-p, d, -q)
        } else {
            QuadraticIrrational::new(p, d, q)
        }
    }
}

/// An eventually periodic simple continued fraction
/// `[a_0; a_1, ..., (a_k, ..., a_{k+m-1})]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct CfExpansion {
    #[serde(serialize_with = "crate::intmat::serialize_bigint_seq")]
    pub preperiod: Vec<BigInt>,
    #[serde(serialize_with = "crate::intmat::serialize_bigint_seq")]
    pub period: Vec<BigInt>,
}

impl CfExpansion {
    pub fn is_purely_periodic(&self) -> bool {
        self.preperiod.is_empty()
    }

    /// The `i`-th partial quotient.
    pub fn term(&self, i: usize) -> &BigInt {
        let k = self.preperiod.len();
        if i < k {
            &self.preperiod[i]
        } else {
            &self.period[(i - k) % self.period.len()]
        }
    }

    /// First `count` convergents `h_i / k_i`.
    pub fn convergents(&self, count: usize) -> Vec<BigRational> {
        let (mut h_prev, mut h) = (BigInt::zero(), BigInt::one());
        let (mut k_prev, mut k) = (BigInt::one(), BigInt::zero());
        (0..count)
            .map(|i| {
                let a = self.term(i);
                let h_next = a * &h + &h_prev;
                let k_next = a * &k + &k_prev;
                h_prev = std::mem::replace(&mut h, h_next);
                k_prev = std::mem::replace(&mut k, k_next);
                BigRational::new(h.clone(), k.clone())
            })
            .collect()
    }

    /// The exact value of the infinite expansion.
    pub fn value(&self) -> Result<QuadraticIrrational> {
        let m = incidence_matrix(&self.period)?;
        let [m00, m01, m10, m11] = [m.get(0, 0), m.get(0, 1), m.get(1, 0), m.get(1, 1)];
        // y = (m00 y + m01)/(m10 y + m11): m10 y^2 + (m11 - m00) y - m01 = 0, y > 0
        let disc = (m11 - m00) * (m11 - m00) + 4 * m01 * m10;
        let mut y = QuadraticIrrational::new(m00 - m11, disc, 2 * m10)?.to_surd();
        for a in self.preperiod.iter().rev() {
            y = QuadraticSurd::from_integer(a.clone(), y.radicand()) + y.recip()?;
        }
        QuadraticIrrational::from_surd(&y)
    }
}

impl fmt::Display for CfExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |xs: &[BigInt]| {
            xs.iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(", ")
        };
        let period = format!("({})", join(&self.period));
        match self.preperiod.split_first() {
            None => write!(f, "[{period}]"),
            Some((a0, [])) => write!(f, "[{a0}; {period}]"),
            Some((a0, rest)) => write!(f, "[{a0}; {}, {period}]", join(rest)),
        }
    }
}

/// Continued fraction of `x`, detected by the first repeated `(P_i, Q_i)` state.
pub fn cf_expand(x: &QuadraticIrrational) -> CfExpansion {
    let d = &x.d;
    let s = d.sqrt();
    let (mut p, mut q) = (x.p.clone(), x.q.clone());
    let mut seen: HashMap<(BigInt, BigInt), usize> = HashMap::new();
    let mut digits = Vec::new();
    let start = loop {
        if let Some(&j) = seen.get(&(p.clone(), q.clone())) {
            break j;
        }
        seen.insert((p.clone(), q.clone()), digits.len());
        let a = floor_pq(&p, &q, &s);
        let p_next = &a * &q - &p;
        let q_next = (d - &p_next * &p_next) / &q;
        digits.push(a);
        p = p_next;
        q = q_next;
    };
    let mut period = digits.split_off(start);
    let mut preperiod = digits;

    let n = period.len();
    if let Some(m) = (1..n).find(|&m| n % m == 0 && (m..n).all(|i| period[i] == period[i - m])) {
        period.truncate(m);
    }
    while preperiod.last().is_some_and(|a| Some(a) == period.last()) {
        preperiod.pop();
        period.rotate_right(1);
    }
    CfExpansion { preperiod, period }
}

/// Galois' criterion: `x > 1` and its conjugate lies in `(-1, 0)`.
pub fn is_reduced(x: &QuadraticIrrational) -> bool {
    let v = x.to_surd();
    let c = v.conjugate();
    let one = QuadraticSurd::from_integer(1, v.radicand());
    (v - one.clone()).signum() > 0 && c.signum() < 0 && (c + one).signum() > 0
}

/// `prod (a_i, 1; 1, 0)`, left to right.
pub fn incidence_matrix<T: Clone + Into<BigInt>>(period: &[T]) -> Result<IntMatrix> {
    if period.is_empty() {
        return Err(Error::EmptyPeriod);
    }
    let word: Vec<BigInt> = period.iter().cloned().map(Into::into).collect();
    if let Some(bad) = word.iter().find(|a| !a.is_positive()) {
        return Err(Error::NonPositivePeriodEntry(bad.to_string()));
    }
    Ok(crate::intmat::conjugacy::product_of_word(&word))
}

/// `|x| / (1 + |x|)`, a quadratic irrational in `(0, 1)`.
pub fn boundary_to_theta(x: &QuadraticIrrational) -> QuadraticIrrational {
    let ax = x.to_surd().abs();
    let denom = QuadraticSurd::from_integer(1, ax.radicand()) + ax.clone();
    let theta = ax
        .checked_div(&denom)
        .expect("1 + |x| is positive, hence nonzero");
    QuadraticIrrational::from_surd(&theta).expect("theta stays irrational")
}

/// `GL(2,Z)` equivalence via the tails of the continued fractions: the
/// minimal periods must be cyclic shifts of one another.
pub fn gl2z_equivalent(x: &QuadraticIrrational, y: &QuadraticIrrational) -> bool {
    let (ex, ey) = (cf_expand(x), cf_expand(y));
    crate::intmat::conjugacy::rotation_offset(&ex.period, &ey.period).is_some()
}
