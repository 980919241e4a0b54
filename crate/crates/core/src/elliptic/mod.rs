//! Weierstrass models `y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6`.
//!
//! Models are generic over the coefficient field: exact rationals for
//! global models, [`FieldElement`] for reductions and their extensions.
//! Invariants follow Tate's formulary:
//!
//! ```text
//! b2 = a1^2 + 4a2          b4 = 2a4 + a1a3        b6 = a3^2 + 4a6
//! b8 = a1^2 a6 + 4a2a6 - a1a3a4 + a2a3^2 - a4^2
//! c4 = b2^2 - 24 b4        c6 = -b2^3 + 36 b2b4 - 216 b6
//! D  = -b2^2 b8 - 8 b4^3 - 27 b6^2 + 9 b2b4b6,     j = c4^3 / D
//! ```

mod catalog;
mod counting;
mod isomorphism;
mod reduction;

pub use catalog::{builtin_catalog, cm_j_invariant, load_catalog, CatalogEntry, CM_DISCRIMINANTS};
pub(crate) use counting::nonsingular_counts;
pub use counting::{
    count_nonsingular, count_points, frobenius_power_sums, group_structure,
    point_counts_via_recurrence, trace_of_frobenius, COUNT_GUARD, GROUP_GUARD,
};
pub use isomorphism::{
    find_isomorphism_witness, isomorphic_over_closure, IsomorphismWitness, WITNESS_GUARD,
};
pub use reduction::{
    alpha_by_counting, analyze_singularity, classify_reduction, reduce_mod_p, reduce_transform,
    ClassificationMethod, ReductionKind, ReductionType, SingularAnalysis, SINGULAR_SEARCH_GUARD,
};

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::ffield::FieldElement;

/// Coefficient arithmetic needed by the Weierstrass formulary.
pub trait CurveField:
    Clone
    + PartialEq
    + fmt::Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    /// `k * self` for a small integer `k`.
    fn scale(&self, k: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn inv(&self) -> Option<Self>;
}

impl CurveField for BigRational {
    fn scale(&self, k: i64) -> Self {
        self * BigRational::from_integer(BigInt::from(k))
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn zero_like(&self) -> Self {
        BigRational::zero()
    }
    fn one_like(&self) -> Self {
        BigRational::one()
    }
    fn inv(&self) -> Option<Self> {
        (!Zero::is_zero(self)).then(|| self.recip())
    }
}

impl CurveField for FieldElement {
    fn scale(&self, k: i64) -> Self {
        FieldElement::scale(self, k)
    }
    fn is_zero(&self) -> bool {
        FieldElement::is_zero(self)
    }
    fn zero_like(&self) -> Self {
        FieldElement::zero_like(self)
    }
    fn one_like(&self) -> Self {
        FieldElement::one_like(self)
    }
    fn inv(&self) -> Option<Self> {
        FieldElement::inv(self)
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct WeierstrassModel<T> {
    pub a1: T,
    pub a2: T,
    pub a3: T,
    pub a4: T,
    pub a6: T,
}

pub type RationalModel = WeierstrassModel<BigRational>;
pub type ReducedModel = WeierstrassModel<FieldElement>;

/// The standard quantities attached to a model.
#[derive(Clone, Debug, PartialEq)]
pub struct Invariants<T> {
    pub b2: T,
    pub b4: T,
    pub b6: T,
    pub b8: T,
    pub c4: T,
    pub c6: T,
    pub discriminant: T,
    /// `None` for singular models.
    pub j: Option<T>,
}

fn sq<T: CurveField>(x: &T) -> T {
    x.clone() * x.clone()
}

impl<T: CurveField> WeierstrassModel<T> {
    pub fn new(a1: T, a2: T, a3: T, a4: T, a6: T) -> Self {
        WeierstrassModel { a1, a2, a3, a4, a6 }
    }

    pub fn coefficients(&self) -> [&T; 5] {
        [&self.a1, &self.a2, &self.a3, &self.a4, &self.a6]
    }

    pub fn b2(&self) -> T {
        sq(&self.a1) + self.a2.scale(4)
    }

    pub fn b4(&self) -> T {
        self.a4.scale(2) + self.a1.clone() * self.a3.clone()
    }

    pub fn b6(&self) -> T {
        sq(&self.a3) + self.a6.scale(4)
    }

    pub fn b8(&self) -> T {
        let (a1, a2, a3, a4, a6) = (&self.a1, &self.a2, &self.a3, &self.a4, &self.a6);
        sq(a1) * a6.clone() + (a2.clone() * a6.clone()).scale(4)
            - a1.clone() * a3.clone() * a4.clone()
            + a2.clone() * sq(a3)
            - sq(a4)
    }

    pub fn c4(&self) -> T {
        sq(&self.b2()) - self.b4().scale(24)
    }

    /// `c4 = (a1^2 + 4a2)^2 - 24(a1a3 + 2a4)`, expanded directly from the
    /// coefficients; agrees with [`Self::c4`].
    pub fn c4_from_coefficients(&self) -> T {
        let inner = sq(&self.a1) + self.a2.scale(4);
        sq(&inner) - (self.a1.clone() * self.a3.clone() + self.a4.scale(2)).scale(24)
    }

    pub fn c6(&self) -> T {
        let (b2, b4, b6) = (self.b2(), self.b4(), self.b6());
        -(sq(&b2) * b2.clone()) + (b2 * b4).scale(36) - b6.scale(216)
    }

    pub fn discriminant(&self) -> T {
        let (b2, b4, b6, b8) = (self.b2(), self.b4(), self.b6(), self.b8());
        -(sq(&b2) * b8) - (sq(&b4) * b4.clone()).scale(8) - sq(&b6).scale(27)
            + (b2 * b4 * b6).scale(9)
    }

    pub fn is_singular(&self) -> bool {
        self.discriminant().is_zero()
    }

    pub fn j_invariant(&self) -> Result<T> {
        let delta = self.discriminant();
        let inv = delta.inv().ok_or_else(|| {
            Error::SingularModel("j-invariant needs a nonzero discriminant".into())
        })?;
        let c4 = self.c4();
        Ok(sq(&c4) * c4 * inv)
    }

    pub fn invariants(&self) -> Invariants<T> {
        Invariants {
            b2: self.b2(),
            b4: self.b4(),
            b6: self.b6(),
            b8: self.b8(),
            c4: self.c4(),
            c6: self.c6(),
            discriminant: self.discriminant(),
            j: self.j_invariant().ok(),
        }
    }

    /// The model in the coordinates `x = u^2 x' + r`, `y = u^3 y' + s u^2 x' + t`.
    pub fn transform(&self, t: &AdmissibleTransform<T>) -> Self {
        let (a1, a2, a3, a4, a6) = (&self.a1, &self.a2, &self.a3, &self.a4, &self.a6);
        let (r, s, tt) = (&t.r, &t.s, &t.t);
        let ui = t.u.inv().expect("u != 0 by construction");
        let ui2 = sq(&ui);
        let ui3 = ui2.clone() * ui.clone();
        let ui4 = sq(&ui2);
        let ui6 = sq(&ui3);

        let n1 = a1.clone() + s.scale(2);
        let n2 = a2.clone() - s.clone() * a1.clone() + r.scale(3) - sq(s);
        let n3 = a3.clone() + r.clone() * a1.clone() + tt.scale(2);
        let n4 = a4.clone() - s.clone() * a3.clone() + (r.clone() * a2.clone()).scale(2)
            - (tt.clone() + r.clone() * s.clone()) * a1.clone()
            + sq(r).scale(3)
            - (s.clone() * tt.clone()).scale(2);
        let n6 = a6.clone() + r.clone() * a4.clone() + sq(r) * a2.clone() + sq(r) * r.clone()
            - tt.clone() * a3.clone()
            - sq(tt)
            - r.clone() * tt.clone() * a1.clone();

        WeierstrassModel {
            a1: n1 * ui,
            a2: n2 * ui2,
            a3: n3 * ui3,
            a4: n4 * ui4,
            a6: n6 * ui6,
        }
    }

    /// Image of the model's coefficients under a ring map.
    pub fn map<U, F: Fn(&T) -> Result<U>>(&self, f: F) -> Result<WeierstrassModel<U>> {
        Ok(WeierstrassModel {
            a1: f(&self.a1)?,
            a2: f(&self.a2)?,
            a3: f(&self.a3)?,
            a4: f(&self.a4)?,
            a6: f(&self.a6)?,
        })
    }
}

impl RationalModel {
    pub fn from_integers(coeffs: [i64; 5]) -> Self {
        let q = |x: i64| BigRational::from_integer(BigInt::from(x));
        WeierstrassModel::new(
            q(coeffs[0]),
            q(coeffs[1]),
            q(coeffs[2]),
            q(coeffs[3]),
            q(coeffs[4]),
        )
    }
}

impl<T: fmt::Display> fmt::Display for WeierstrassModel<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{},{},{},{},{}]",
            self.a1, self.a2, self.a3, self.a4, self.a6
        )
    }
}

impl<T: fmt::Display> fmt::Debug for WeierstrassModel<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<T: fmt::Display> Serialize for WeierstrassModel<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

pub(crate) fn parse_rational(text: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("bad rational {text:?}"));
    let t = text.trim();
    match t.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::ZeroDenominator);
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(t.parse().map_err(|_| bad())?)),
    }
}

impl FromStr for RationalModel {
    type Err = Error;

    /// Parses `[a1,a2,a3,a4,a6]` with entries `n` or `n/d`.
    fn from_str(s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| Error::Parse(format!("expected [a1,a2,a3,a4,a6], got {s:?}")))?;
        let parts = inner
            .split(',')
            .map(parse_rational)
            .collect::<Result<Vec<_>>>()?;
        let [a1, a2, a3, a4, a6]: [BigRational; 5] = parts
            .try_into()
            .map_err(|_| Error::Parse(format!("expected five coefficients in {s:?}")))?;
        Ok(WeierstrassModel::new(a1, a2, a3, a4, a6))
    }
}

/// `x = u^2 x' + r`, `y = u^3 y' + s u^2 x' + t` with `u != 0`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AdmissibleTransform<T> {
    u: T,
    r: T,
    s: T,
    t: T,
}

impl<T: CurveField> AdmissibleTransform<T> {
    pub fn new(u: T, r: T, s: T, t: T) -> Result<Self> {
        if u.is_zero() {
            return Err(Error::ZeroScale);
        }
        Ok(AdmissibleTransform { u, r, s, t })
    }

    pub fn identity_like(sample: &T) -> Self {
        let zero = sample.zero_like();
        AdmissibleTransform {
            u: sample.one_like(),
            r: zero.clone(),
            s: zero.clone(),
            t: zero,
        }
    }

    pub fn u(&self) -> &T {
        &self.u
    }
    pub fn r(&self) -> &T {
        &self.r
    }
    pub fn s(&self) -> &T {
        &self.s
    }
    pub fn t(&self) -> &T {
        &self.t
    }

    /// The transform equal to applying `self` first and then `next`.
    pub fn then(&self, next: &Self) -> Self {
        let (u1, r1, s1, t1) = (&self.u, &self.r, &self.s, &self.t);
        let (u2, r2, s2, t2) = (&next.u, &next.r, &next.s, &next.t);
        let u1sq = sq(u1);
        AdmissibleTransform {
            u: u1.clone() * u2.clone(),
            r: u1sq.clone() * r2.clone() + r1.clone(),
            s: u1.clone() * s2.clone() + s1.clone(),
            t: u1sq.clone() * u1.clone() * t2.clone() + s1.clone() * u1sq * r2.clone() + t1.clone(),
        }
    }

    pub fn inverse(&self) -> Self {
        let ui = self.u.inv().expect("u != 0 by construction");
        let ui2 = sq(&ui);
        let ui3 = ui2.clone() * ui.clone();
        AdmissibleTransform {
            r: -(self.r.clone() * ui2),
            s: -(self.s.clone() * ui.clone()),
            t: (self.r.clone() * self.s.clone() - self.t.clone()) * ui3,
            u: ui,
        }
    }

    pub fn map<U: CurveField, F: Fn(&T) -> Result<U>>(
        &self,
        f: F,
    ) -> Result<AdmissibleTransform<U>> {
        AdmissibleTransform::new(f(&self.u)?, f(&self.r)?, f(&self.s)?, f(&self.t)?)
    }
}

impl<T: fmt::Display> fmt::Display for AdmissibleTransform<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(u={}, r={}, s={}, t={})",
            self.u, self.r, self.s, self.t
        )
    }
}

impl<T: fmt::Display> fmt::Debug for AdmissibleTransform<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<T: fmt::Display> Serialize for AdmissibleTransform<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("AdmissibleTransform", 4)?;
        st.serialize_field("u", &self.u.to_string())?;
        st.serialize_field("r", &self.r.to_string())?;
        st.serialize_field("s", &self.s.to_string())?;
        st.serialize_field("t", &self.t.to_string())?;
        st.end()
    }
}

pub type RationalTransform = AdmissibleTransform<BigRational>;

impl RationalTransform {
    pub fn from_integers(u: i64, r: i64, s: i64, t: i64) -> Result<Self> {
        let q = |x: i64| BigRational::from_integer(BigInt::from(x));
        AdmissibleTransform::new(q(u), q(r), q(s), q(t))
    }
}
