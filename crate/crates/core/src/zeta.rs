//! Local zeta factors of the curve and of the torus as exact truncated
//! power series, and the comparison between them.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::ck_k0::{det_one_minus, epsilon, k0_order, EpsilonData};
use crate::elliptic::{
    classify_reduction, point_counts_via_recurrence, reduce_mod_p, trace_of_frobenius,
    RationalModel, ReductionKind,
};
use crate::error::{Error, Result};
use crate::ffield::is_prime;
use crate::intmat::{serialize_bigint, serialize_bigint_seq, IntMatrix};

pub const DEFAULT_ORDER: usize = 6;
/// Largest bound accepted by [`dirichlet_coefficients`].
pub const DIRICHLET_GUARD: u64 = 10_000;

/// `c_0 + c_1 z + ... + c_K z^K` over the rationals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TruncatedSeries {
    coeffs: Vec<BigRational>,
}

fn q(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

impl TruncatedSeries {
    /// Pads with zeros or truncates to order `k`.
    pub fn new(mut coeffs: Vec<BigRational>, k: usize) -> Self {
        coeffs.resize(k + 1, BigRational::zero());
        TruncatedSeries { coeffs }
    }

    pub fn from_integers<T: Into<BigInt> + Clone>(coeffs: &[T], k: usize) -> Self {
        TruncatedSeries::new(coeffs.iter().cloned().map(q).collect(), k)
    }

    pub fn zero(k: usize) -> Self {
        TruncatedSeries::new(Vec::new(), k)
    }

    pub fn one(k: usize) -> Self {
        TruncatedSeries::new(vec![BigRational::one()], k)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &BigRational {
        &self.coeffs[i]
    }

    fn check_order(&self, other: &Self) {
        assert_eq!(
            self.order(),
            other.order(),
            "series truncated at different orders"
        );
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// `sum_{n>=1} values[n-1] z^n / n`.
    pub fn log_sum(values: &[BigInt], k: usize) -> Self {
        let mut coeffs = vec![BigRational::zero()];
        coeffs.extend(
            values
                .iter()
                .take(k)
                .enumerate()
                .map(|(i, v)| BigRational::new(v.clone(), BigInt::from(i + 1))),
        );
        TruncatedSeries::new(coeffs, k)
    }

    /// Requires `c_0 = 0`; uses `n e_n = sum_k k s_k e_{n-k}`.
    pub fn exp(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::SeriesDomain("exp needs a zero constant term".into()));
        }
        let k = self.order();
        let mut e = vec![BigRational::one()];
        for n in 1..=k {
            let mut acc = BigRational::zero();
            for j in 1..=n {
                if !self.coeffs[j].is_zero() {
                    acc += &self.coeffs[j] * q(j as u64) * &e[n - j];
                }
            }
            e.push(acc / q(n as u64));
        }
        Ok(TruncatedSeries { coeffs: e })
    }

    /// Requires `c_0 = 1`.
    pub fn log(&self) -> Result<Self> {
        if !self.coeffs[0].is_one() {
            return Err(Error::SeriesDomain("log needs constant term 1".into()));
        }
        let k = self.order();
        let c = &self.coeffs;
        let mut l = vec![BigRational::zero()];
        for n in 1..=k {
            let mut acc = c[n].clone() * q(n as u64);
            for j in 1..n {
                acc -= q(j as u64) * &l[j] * &c[n - j];
            }
            l.push(acc / q(n as u64));
        }
        Ok(TruncatedSeries { coeffs: l })
    }

    /// Requires `c_0 != 0`.
    pub fn reciprocal(&self) -> Result<Self> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(Error::SeriesDomain(
                "reciprocal needs a nonzero constant term".into(),
            ));
        }
        let inv0 = c0.recip();
        let mut r = vec![inv0.clone()];
        for n in 1..=self.order() {
            let mut acc = BigRational::zero();
            for j in 1..=n {
                acc += &self.coeffs[j] * &r[n - j];
            }
            r.push(-acc * &inv0);
        }
        Ok(TruncatedSeries { coeffs: r })
    }

    /// Expansion of `numerator / denominator` to order `k`.
    pub fn rational_function(
        numerator: &[BigRational],
        denominator: &[BigRational],
        k: usize,
    ) -> Result<Self> {
        let num = TruncatedSeries::new(numerator.to_vec(), k);
        let den = TruncatedSeries::new(denominator.to_vec(), k);
        Ok(&num * &den.reciprocal()?)
    }

    /// First index where the coefficients differ.
    pub fn first_mismatch(&self, other: &Self) -> Option<usize> {
        self.check_order(other);
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .position(|(a, b)| a != b)
    }

    /// The coefficients when all are integers.
    pub fn integer_coeffs(&self) -> Option<Vec<BigInt>> {
        self.coeffs
            .iter()
            .map(|c| c.is_integer().then(|| c.to_integer()))
            .collect()
    }
}

impl Add for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn add(self, rhs: Self) -> TruncatedSeries {
        self.check_order(rhs);
        TruncatedSeries {
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn sub(self, rhs: Self) -> TruncatedSeries {
        self.check_order(rhs);
        TruncatedSeries {
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Mul for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn mul(self, rhs: Self) -> TruncatedSeries {
        self.check_order(rhs);
        let k = self.order();
        let mut out = vec![BigRational::zero(); k + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().take(k + 1 - i).enumerate() {
                out[i + j] += a * b;
            }
        }
        TruncatedSeries { coeffs: out }
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            terms.push(match i {
                0 => format!("{c}"),
                1 => format!("{c}*z"),
                _ => format!("{c}*z^{i}"),
            });
        }
        if terms.is_empty() {
            terms.push("0".into());
        }
        write!(f, "{} + O(z^{})", terms.join(" + "), self.order() + 1)
    }
}

impl fmt::Debug for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

pub(crate) fn serialize_rational_seq<S: Serializer>(
    v: &[BigRational],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        match x.is_integer().then(|| x.to_integer().to_i64()).flatten() {
            Some(n) => seq.serialize_element(&n)?,
            None => seq.serialize_element(&x.to_string())?,
        }
    }
    seq.end()
}

impl Serialize for TruncatedSeries {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        serialize_rational_seq(&self.coeffs, s)
    }
}

/// Which count enters the torus series.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ZetaMode {
    /// `|K0(O_{eps_n})| = |det(I - eps_n)|`.
    Absolute,
    /// `det(I - eps_n)` with its sign.
    Signed,
}

impl FromStr for ZetaMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "absolute" => Ok(ZetaMode::Absolute),
            "signed" => Ok(ZetaMode::Signed),
            other => Err(Error::Parse(format!("unknown mode {other:?}"))),
        }
    }
}

/// `(1 - a z + p z^2) / ((1 - z)(1 - p z))` to order `k`.
pub fn good_prime_rational_series(a_p: &BigInt, p: u64, k: usize) -> TruncatedSeries {
    let pq = q(p);
    let num = [q(1), -q(a_p.clone()), pq.clone()];
    let den = [q(1), -(q(1) + &pq), pq];
    TruncatedSeries::rational_function(&num, &den, k).expect("constant term 1")
}

/// What the curve looks like at `p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalCurveData {
    pub p: u64,
    pub kind: ReductionKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a_p: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<i64>,
}

impl LocalCurveData {
    pub fn is_good(&self) -> bool {
        self.kind.is_good()
    }

    /// `N_n` at good primes, `#E_ns = p^n - alpha^n` at bad ones, `n = 1..=k`.
    pub fn counts(&self, k: usize) -> Vec<BigInt> {
        match (self.a_p, self.alpha) {
            (Some(a), _) => point_counts_via_recurrence(a, self.p, k as u32),
            (None, Some(alpha)) => crate::elliptic::nonsingular_counts(alpha, self.p, k as u32),
            (None, None) => unreachable!("either a_p or alpha is set"),
        }
    }
}

/// Reduces and classifies; `a_p` is found by counting at good primes.
pub fn local_curve_data(e: &RationalModel, p: u64) -> Result<LocalCurveData> {
    let reduced = reduce_mod_p(e, p)?;
    let r = classify_reduction(&reduced)?;
    let a_p = if r.is_good() {
        Some(trace_of_frobenius(&reduced)?)
    } else {
        None
    };
    Ok(LocalCurveData {
        p,
        kind: r.kind,
        a_p,
        alpha: r.alpha,
    })
}

fn curve_series(data: &LocalCurveData, k: usize) -> Result<TruncatedSeries> {
    let series = TruncatedSeries::log_sum(&data.counts(k), k).exp()?;
    if let Some(a) = data.a_p {
        let closed = good_prime_rational_series(&BigInt::from(a), data.p, k);
        if let Some(i) = series.first_mismatch(&closed) {
            return Err(Error::Internal(format!(
                "exp series and rational function differ at z^{i} for p = {}",
                data.p
            )));
        }
    }
    Ok(series)
}

/// `exp(sum N_n z^n / n)` (good `p`) or `exp(sum (p^n - alpha^n) z^n / n)` (bad `p`).
pub fn curve_local_zeta(e: &RationalModel, p: u64, k: usize) -> Result<TruncatedSeries> {
    curve_series(&local_curve_data(e, p)?, k)
}

/// The counts `|K0(O_{eps_n})|` (or signed determinants), `n = 1..=k`.
pub fn torus_counts(data: &EpsilonData, p: u64, k: usize, mode: ZetaMode) -> Result<Vec<BigInt>> {
    (1..=k as u32)
        .map(|n| {
            let d = epsilon(p, n, data.clone())?;
            Ok(match mode {
                ZetaMode::Absolute => k0_order(&d),
                ZetaMode::Signed => det_one_minus(&d),
            })
        })
        .collect()
}

/// `exp(sum |K0(O_{eps_n})| z^n / n)` to order `k`.
pub fn torus_local_zeta(
    data: &EpsilonData,
    p: u64,
    k: usize,
    mode: ZetaMode,
) -> Result<TruncatedSeries> {
    TruncatedSeries::log_sum(&torus_counts(data, p, k, mode)?, k).exp()
}

/// Where the trace in `L_p` comes from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TraceSource {
    /// `a_p` from point counting.
    PointCount,
    /// `tr(A^p)` for a user-supplied incidence matrix `A`.
    IncidenceMatrix(IntMatrix),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Match,
    Mismatch,
}

impl Verdict {
    fn of(mismatch: Option<usize>) -> Self {
        if mismatch.is_none() {
            Verdict::Match
        } else {
            Verdict::Mismatch
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LocalFactorReport {
    pub p: u64,
    pub good: bool,
    /// The torus series the verdict compares against.
    pub mode: ZetaMode,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a_p: Option<i64>,
    /// The number placed in `L_p` (equal to `a_p` when counting supplies it).
    #[serde(
        skip_serializing_if = "Option::is_none",
        serialize_with = "serialize_opt_bigint"
    )]
    pub trace: Option<BigInt>,
    #[serde(serialize_with = "serialize_bigint_seq")]
    pub curve_counts: Vec<BigInt>,
    #[serde(serialize_with = "serialize_bigint_seq")]
    pub k0_orders: Vec<BigInt>,
    pub curve_coeffs: TruncatedSeries,
    pub torus_coeffs: TruncatedSeries,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub torus_signed_coeffs: Option<TruncatedSeries>,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_mismatch: Option<usize>,
    /// Absolute against signed torus series, bad primes only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub modes_first_mismatch: Option<usize>,
    /// The series times `(1 - z)(1 - p z)` (good) or `(1 - p z)` (bad).
    pub curve_numerator: TruncatedSeries,
    pub torus_numerator: TruncatedSeries,
}

fn serialize_opt_bigint<S: Serializer>(
    v: &Option<BigInt>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(x) => serialize_bigint(x, s),
        None => s.serialize_none(),
    }
}

fn denominator(p: u64, good: bool, k: usize) -> TruncatedSeries {
    let pq = q(p);
    if good {
        TruncatedSeries::new(vec![q(1), -(q(1) + &pq), pq], k)
    } else {
        TruncatedSeries::new(vec![q(1), -pq], k)
    }
}

/// Both local factors at `p` and their comparison.
pub fn local_factor_report(
    data: &LocalCurveData,
    source: &TraceSource,
    k: usize,
    mode: ZetaMode,
) -> Result<LocalFactorReport> {
    let p = data.p;
    let curve = curve_series(data, k)?;
    let curve_counts = data.counts(k);
    let (eps, trace) = match (data.a_p, data.alpha) {
        (Some(a), _) => {
            let t = match source {
                TraceSource::PointCount => BigInt::from(a),
                TraceSource::IncidenceMatrix(m) => m.pow(p)?.trace()?,
            };
            (EpsilonData::Trace(t.clone()), Some(t))
        }
        (None, Some(alpha)) => (EpsilonData::Alpha(alpha), None),
        (None, None) => unreachable!("either a_p or alpha is set"),
    };
    let k0_orders = torus_counts(&eps, p, k, ZetaMode::Absolute)?;
    let torus = TruncatedSeries::log_sum(&k0_orders, k).exp()?;
    let signed = torus_local_zeta(&eps, p, k, ZetaMode::Signed)?;
    let first_mismatch = match mode {
        ZetaMode::Absolute => curve.first_mismatch(&torus),
        ZetaMode::Signed => curve.first_mismatch(&signed),
    };
    let signed = (!data.is_good()).then_some(signed);
    let modes_first_mismatch = signed.as_ref().and_then(|s| torus.first_mismatch(s));
    let den = denominator(p, data.is_good(), k);
    Ok(LocalFactorReport {
        p,
        good: data.is_good(),
        mode,
        alpha: data.alpha,
        a_p: data.a_p,
        trace,
        curve_counts,
        k0_orders,
        curve_numerator: &curve * &den,
        torus_numerator: &torus * &den,
        curve_coeffs: curve,
        torus_coeffs: torus,
        torus_signed_coeffs: signed,
        verdict: Verdict::of(first_mismatch),
        first_mismatch,
        modes_first_mismatch,
    })
}

/// Compares the curve and torus local factors at each prime.
pub fn lemma1_check(
    e: &RationalModel,
    source: &TraceSource,
    primes: &[u64],
    k: usize,
    mode: ZetaMode,
) -> Result<Vec<LocalFactorReport>> {
    if let TraceSource::IncidenceMatrix(m) = source {
        let t = m.trace()?;
        if &t * &t == BigInt::from(4) {
            return Err(Error::DegenerateIncidence(format!(
                "tr(A)^2 = 4 for A = {m}; every prime divides tr(A)^2 - 4"
            )));
        }
    }
    primes
        .iter()
        .map(|&p| local_factor_report(&local_curve_data(e, p)?, source, k, mode))
        .collect()
}

/// Primes up to `n`.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    (2..=n).filter(|&m| is_prime(m)).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SkippedPrime {
    pub p: u64,
    pub reason: String,
}

/// Dirichlet coefficients `c_1..=c_X` of the curve and torus Euler products.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DirichletReport {
    pub bound: u64,
    #[serde(serialize_with = "serialize_bigint_seq")]
    pub curve: Vec<BigInt>,
    #[serde(serialize_with = "serialize_bigint_seq")]
    pub torus: Vec<BigInt>,
    pub bad_primes: Vec<u64>,
    pub skipped: Vec<SkippedPrime>,
    /// Indices `m` built from good primes only where the two sides differ.
    pub good_mismatches: Vec<u64>,
}

impl DirichletReport {
    /// `c_m` on the curve side, `m >= 1`.
    pub fn curve_coefficient(&self, m: u64) -> &BigInt {
        &self.curve[m as usize - 1]
    }

    pub fn torus_coefficient(&self, m: u64) -> &BigInt {
        &self.torus[m as usize - 1]
    }

    pub fn agree_on_good(&self) -> bool {
        self.good_mismatches.is_empty()
    }
}

fn integer_series(s: &TruncatedSeries) -> Result<Vec<BigInt>> {
    s.integer_coeffs()
        .ok_or_else(|| Error::Internal(format!("non-integral local factor {s}")))
}

/// Euler products truncated at `bound`.
///
/// The curve side uses the Hasse–Weil factors `1/(1 - a_p z + p z^2)` and
/// `1/(1 - alpha z)`. The torus side uses `1/P(z)` at good primes, where
/// `P` is its zeta series times `(1 - z)(1 - p z)`, and its zeta series
/// itself at bad primes.
pub fn dirichlet_coefficients(e: &RationalModel, bound: u64) -> Result<DirichletReport> {
    if bound == 0 || bound > DIRICHLET_GUARD {
        return Err(Error::Unsupported(format!(
            "Dirichlet bound must lie in 1..={DIRICHLET_GUARD}"
        )));
    }
    let n = bound as usize;
    let mut curve = vec![BigInt::zero(); n + 1];
    let mut torus = vec![BigInt::zero(); n + 1];
    curve[1] = BigInt::one();
    torus[1] = BigInt::one();
    let mut bad_primes = Vec::new();
    let mut skipped = Vec::new();
    let mut good_only = vec![true; n + 1];
    let mut spf = vec![0u64; n + 1];
    for p in primes_up_to(bound) {
        let mut m = p;
        while m <= bound {
            if spf[m as usize] == 0 {
                spf[m as usize] = p;
            }
            m += p;
        }
    }
    // p -> (curve factor, torus factor), coefficients of z^0..z^k with p^k <= bound
    let mut local: HashMap<u64, (Vec<BigInt>, Vec<BigInt>)> = HashMap::new();
    for p in primes_up_to(bound) {
        let mut k = 0usize;
        let mut pk = 1u64;
        while pk * p <= bound {
            pk *= p;
            k += 1;
        }
        let data = match local_curve_data(e, p) {
            Ok(d) => d,
            Err(err) => {
                skipped.push(SkippedPrime {
                    p,
                    reason: err.to_string(),
                });
                continue;
            }
        };
        let (c_side, t_side) = if let Some(a) = data.a_p {
            let pq = q(p);
            let hw = TruncatedSeries::new(vec![q(1), -q(a), pq], k).reciprocal()?;
            let order = k.max(4);
            let zeta = torus_local_zeta(
                &EpsilonData::Trace(BigInt::from(a)),
                p,
                order,
                ZetaMode::Absolute,
            )?;
            let numerator = &zeta * &denominator(p, true, order);
            if numerator.coeffs()[3..].iter().any(|c| !c.is_zero()) {
                return Err(Error::Internal(format!(
                    "torus factor at p = {p} is not quadratic over (1 - z)(1 - pz)"
                )));
            }
            let numerator = TruncatedSeries::new(numerator.coeffs()[..3].to_vec(), k);
            (
                integer_series(&hw)?,
                integer_series(&numerator.reciprocal()?)?,
            )
        } else {
            bad_primes.push(p);
            let alpha = data.alpha.expect("bad prime");
            let hw = TruncatedSeries::new(vec![q(1), -q(alpha)], k).reciprocal()?;
            let zeta = torus_local_zeta(&EpsilonData::Alpha(alpha), p, k, ZetaMode::Absolute)?;
            (integer_series(&hw)?, integer_series(&zeta)?)
        };
        if !data.is_good() {
            let mut m = p;
            while m <= bound {
                good_only[m as usize] = false;
                m += p;
            }
        }
        local.insert(p, (c_side, t_side));
    }
    let skipped_set: Vec<u64> = skipped.iter().map(|s| s.p).collect();
    for m in 2..=n {
        let p = spf[m];
        let mut rest = m as u64;
        let mut k = 0;
        while rest.is_multiple_of(p) {
            rest /= p;
            k += 1;
        }
        let (cf, tf) = match local.get(&p) {
            Some((c, t)) => (c[k].clone(), t[k].clone()),
            None => (BigInt::zero(), BigInt::zero()),
        };
        curve[m] = cf * &curve[rest as usize];
        torus[m] = tf * &torus[rest as usize];
        if skipped_set.contains(&p) {
            good_only[m] = false;
        }
    }
    let good_mismatches = (1..=n)
        .filter(|&m| good_only[m] && curve[m] != torus[m])
        .map(|m| m as u64)
        .collect();
    curve.remove(0);
    torus.remove(0);
    Ok(DirichletReport {
        bound,
        curve,
        torus,
        bad_primes,
        skipped,
        good_mismatches,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&x| q(x)).collect()
    }

    #[test]
    fn exp_examples() {
        assert_eq!(
            TruncatedSeries::zero(4).exp().unwrap(),
            TruncatedSeries::one(4)
        );
        let e = TruncatedSeries::from_integers(&[0, 1], 3).exp().unwrap();
        let want: Vec<BigRational> = [(1, 1), (1, 1), (1, 2), (1, 6)]
            .iter()
            .map(|&(a, b)| BigRational::new(a.into(), b.into()))
            .collect();
        assert_eq!(e.coeffs(), want.as_slice());
        let geo = TruncatedSeries::log_sum(&[1, 1, 1, 1].map(BigInt::from), 4)
            .exp()
            .unwrap();
        assert_eq!(geo.coeffs(), ints(&[1, 1, 1, 1, 1]).as_slice());
        assert!(TruncatedSeries::one(3).exp().is_err());
        assert!(TruncatedSeries::zero(3).log().is_err());
        assert!(TruncatedSeries::zero(3).reciprocal().is_err());
    }

    #[test]
    fn reciprocal_and_log() {
        let s = TruncatedSeries::from_integers(&[1, -1], 5);
        assert_eq!(s.reciprocal().unwrap().coeffs(), ints(&[1; 6]).as_slice());
        let l = s.reciprocal().unwrap().log().unwrap();
        assert_eq!(l, TruncatedSeries::log_sum(&[1; 5].map(BigInt::from), 5));
    }

    #[test]
    fn curve_examples() {
        let e = RationalModel::from_integers([0, 0, 0, -1, 0]);
        let s = curve_local_zeta(&e, 3, 3).unwrap();
        assert_eq!(s, good_prime_rational_series(&BigInt::from(0), 3, 3));
        assert_eq!(s.coeffs(), ints(&[1, 4, 16, 52]).as_slice());
        let s = curve_local_zeta(&e, 5, 3).unwrap();
        let num = ints(&[1, 2, 5]);
        let den = ints(&[1, -6, 5]);
        assert_eq!(
            s,
            TruncatedSeries::rational_function(&num, &den, 3).unwrap()
        );
        assert!(s.coeff(0).is_one());
    }

    #[test]
    fn torus_examples() {
        let t = torus_local_zeta(
            &EpsilonData::Trace(BigInt::zero()),
            3,
            3,
            ZetaMode::Absolute,
        )
        .unwrap();
        let e = RationalModel::from_integers([0, 0, 0, -1, 0]);
        assert_eq!(t, curve_local_zeta(&e, 3, 3).unwrap());
        for k in [0, 1, 6] {
            let t = torus_local_zeta(&EpsilonData::Alpha(0), 7, k, ZetaMode::Absolute).unwrap();
            assert_eq!(t, TruncatedSeries::one(k));
        }
        let t = torus_local_zeta(&EpsilonData::Alpha(1), 7, 3, ZetaMode::Absolute).unwrap();
        assert_eq!(t.coeffs(), ints(&[1, 1, 1, 1]).as_slice());
        let abs = torus_local_zeta(&EpsilonData::Alpha(-1), 7, 3, ZetaMode::Absolute).unwrap();
        let sgn = torus_local_zeta(&EpsilonData::Alpha(-1), 7, 3, ZetaMode::Signed).unwrap();
        assert_eq!(abs.first_mismatch(&sgn), Some(1));
        assert_eq!(sgn.coeffs(), ints(&[1, -1, 1, -1]).as_slice());
    }

    #[test]
    fn lemma1_examples() {
        let e = RationalModel::from_integers([0, 0, 0, -1, 0]);
        let reports = lemma1_check(
            &e,
            &TraceSource::PointCount,
            &[3, 5, 7, 11, 13],
            4,
            ZetaMode::Absolute,
        )
        .unwrap();
        assert!(reports.iter().all(|r| r.verdict == Verdict::Match));
        let e = RationalModel::from_integers([0, 0, 0, 0, 1]);
        let r = lemma1_check(&e, &TraceSource::PointCount, &[5], 4, ZetaMode::Absolute).unwrap();
        assert_eq!(r[0].a_p, Some(0));
        assert_eq!(r[0].verdict, Verdict::Match);
        assert_eq!(
            r[0].curve_numerator.coeffs(),
            ints(&[1, 0, 5, 0, 0]).as_slice()
        );
        let bad = lemma1_check(&e, &TraceSource::PointCount, &[3], 4, ZetaMode::Absolute).unwrap();
        assert!(!bad[0].good);
        assert_eq!(bad[0].alpha, Some(0));
        assert!(bad[0].torus_signed_coeffs.is_some());
    }

    #[test]
    fn degenerate_period_rejected() {
        let e = RationalModel::from_integers([0, 0, 0, -1, 0]);
        let deg = IntMatrix::two_by_two(1, 1, 0, 1);
        assert!(matches!(
            lemma1_check(
                &e,
                &TraceSource::IncidenceMatrix(deg),
                &[5],
                3,
                ZetaMode::Absolute
            ),
            Err(Error::DegenerateIncidence(_))
        ));
    }

    #[test]
    fn dirichlet_examples() {
        let e = RationalModel::from_integers([0, 0, 0, -1, 0]);
        let d = dirichlet_coefficients(&e, 100).unwrap();
        assert!(d.curve_coefficient(1).is_one());
        assert_eq!(*d.curve_coefficient(5), BigInt::from(-2));
        assert_eq!(
            *d.curve_coefficient(15),
            d.curve_coefficient(3) * d.curve_coefficient(5)
        );
        assert_eq!(d.bad_primes, vec![2]);
        assert!(d.agree_on_good());
        assert!(dirichlet_coefficients(&e, 10_001).is_err());
    }

    #[test]
    fn json_shape() {
        let e = RationalModel::from_integers([0, 0, 0, -1, 0]);
        let r = lemma1_check(&e, &TraceSource::PointCount, &[2, 3], 2, ZetaMode::Absolute).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v[1]["verdict"], "match");
        assert_eq!(v[1]["curve_coeffs"], serde_json::json!([1, 4, 16]));
        assert!(v[1].get("torus_signed_coeffs").is_none());
        assert!(v[0].get("torus_signed_coeffs").is_some());
        assert_eq!(v[0]["alpha"], 0);
    }
}
