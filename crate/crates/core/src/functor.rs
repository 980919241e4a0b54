//! The localization `F(p)`: a rational model and a prime go to Cuntz–Krieger
//! descriptors, their K0 groups, and the matching curve data.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::ck_k0::{build_lp, epsilon, k0_group, AbelianGroupInv, CKDescriptor, EpsilonData};
use crate::elliptic::{
    classify_reduction, group_structure, isomorphic_over_closure, reduce_mod_p, reduce_transform,
    trace_of_frobenius, RationalModel, RationalTransform, ReductionType, GROUP_GUARD,
};
use crate::error::{Error, Result};
use crate::intmat::{conjugacy_test, serialize_bigint, ConjugacyVerdict, IntMatrix};
use crate::quadratic_cf::incidence_matrix;
use crate::zeta::LocalCurveData;

pub const MAX_LOCALIZATION_DEGREE: u32 = 6;
/// Entry bound for the conjugator search behind [`lemma3_bridge`].
pub const CONJUGACY_SEARCH_BOUND: u32 = 10;
const REGENERATION_LIMIT: usize = 32;

/// A user-supplied period and how `tr(A^p)` compares with `a_p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PeriodExploration {
    pub period: Vec<u64>,
    pub matrix: IntMatrix,
    #[serde(serialize_with = "serialize_bigint")]
    pub trace_of_power: BigInt,
    /// `p | tr(A)^2 - 4`.
    pub prime_divides_discriminant: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matches_a_p: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LocalizationResult {
    pub p: u64,
    pub reduction: ReductionType,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a_p: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lp: Option<IntMatrix>,
    pub descriptors: Vec<CKDescriptor>,
    pub k0: Vec<AbelianGroupInv>,
    #[serde(serialize_with = "crate::intmat::serialize_bigint_seq")]
    pub curve_counts: Vec<BigInt>,
    /// `E(F_{p^n})` where good and within the group guard.
    pub curve_group: Vec<Option<AbelianGroupInv>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exploration: Option<PeriodExploration>,
}

impl LocalizationResult {
    pub fn is_good(&self) -> bool {
        self.reduction.is_good()
    }

    pub fn k0_orders(&self) -> Vec<BigInt> {
        self.k0.iter().map(|g| g.order()).collect()
    }
}

fn epsilon_data(data: &LocalCurveData) -> EpsilonData {
    match (data.a_p, data.alpha) {
        (Some(a), _) => EpsilonData::Trace(BigInt::from(a)),
        (None, Some(alpha)) => EpsilonData::Alpha(alpha),
        (None, None) => unreachable!("either a_p or alpha is set"),
    }
}

/// Rejects empty periods, zero entries and `tr(A)^2 = 4`.
pub fn checked_incidence(period: &[u64]) -> Result<IntMatrix> {
    let a = incidence_matrix(period)?;
    let t = a.trace()?;
    if &t * &t == BigInt::from(4) {
        return Err(Error::DegenerateIncidence(format!(
            "period {period:?} gives tr(A)^2 = 4, so every prime divides tr(A)^2 - 4"
        )));
    }
    Ok(a)
}

fn explore_period(period: &[u64], p: u64, a_p: Option<i64>) -> Result<PeriodExploration> {
    let matrix = checked_incidence(period)?;
    let t = matrix.trace()?;
    let trace_of_power = matrix.pow(p)?.trace()?;
    let disc: BigInt = &t * &t - 4;
    Ok(PeriodExploration {
        period: period.to_vec(),
        prime_divides_discriminant: disc.is_multiple_of(&BigInt::from(p)),
        matches_a_p: a_p.map(|a| trace_of_power == BigInt::from(a)),
        trace_of_power,
        matrix,
    })
}

/// `F(p)` on a p-integral model, for `n = 1..=n_max`.
pub fn localize(
    e: &RationalModel,
    p: u64,
    n_max: u32,
    period: Option<&[u64]>,
) -> Result<LocalizationResult> {
    if n_max == 0 || n_max > MAX_LOCALIZATION_DEGREE {
        return Err(Error::Unsupported(format!(
            "n_max must lie in 1..={MAX_LOCALIZATION_DEGREE}"
        )));
    }
    let reduced = reduce_mod_p(e, p)?;
    let reduction = classify_reduction(&reduced)?;
    let a_p = if reduction.is_good() {
        Some(trace_of_frobenius(&reduced)?)
    } else {
        None
    };
    let data = LocalCurveData {
        p,
        kind: reduction.kind,
        a_p,
        alpha: reduction.alpha,
    };
    let eps = epsilon_data(&data);
    let descriptors = (1..=n_max)
        .map(|n| epsilon(p, n, eps.clone()))
        .collect::<Result<Vec<_>>>()?;
    let k0: Vec<AbelianGroupInv> = descriptors.iter().map(k0_group).collect();
    let curve_counts = data.counts(n_max as usize);
    if data.is_good() {
        for (n, (g, count)) in k0.iter().zip(&curve_counts).enumerate() {
            if g.order() != *count {
                return Err(Error::Internal(format!(
                    "|K0| = {} but N_{} = {count} at p = {p}",
                    g.order(),
                    n + 1
                )));
            }
        }
    }
    let curve_group = (1..=n_max)
        .map(|n| {
            let fits = p.checked_pow(n).is_some_and(|q| q <= GROUP_GUARD);
            if data.is_good() && fits {
                group_structure(&reduced, n).map(Some)
            } else {
                Ok(None)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let exploration = period.map(|per| explore_period(per, p, a_p)).transpose()?;
    Ok(LocalizationResult {
        p,
        reduction,
        a_p,
        lp: a_p.map(|a| build_lp(a, p)).transpose()?,
        descriptors,
        k0,
        curve_counts,
        curve_group,
        exploration,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialRecord {
    pub index: u64,
    pub transform: RationalTransform,
    pub model: RationalModel,
    pub reduced_model: String,
    /// `j(E) = j(E')` over `F_p`; absent at bad primes.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub j_equal: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lp: Option<IntMatrix>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<i64>,
    /// Reducing then transforming agrees with transforming then reducing.
    pub square_commutes: bool,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Theorem1Report {
    pub p: u64,
    pub model: RationalModel,
    pub seed: u64,
    pub reduction: ReductionType,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lp: Option<IntMatrix>,
    pub trials: Vec<TrialRecord>,
    pub passed: usize,
    pub all_pass: bool,
}

/// The generator for trial `index`: stream `index` of the seeded ChaCha8.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Draws `(u, r, s, t)` with `u` in {1,2,3} prime to `p` and `r, s, t` in `[-3, 3]`.
pub fn draw_transform<R: Rng>(rng: &mut R, p: u64) -> RationalTransform {
    let choices: Vec<i64> = [1i64, 2, 3]
        .into_iter()
        .filter(|&u| u == 1 || !p.is_multiple_of(u as u64))
        .collect();
    let u = choices[rng.gen_range(0..choices.len())];
    let r = rng.gen_range(-3..=3);
    let s = rng.gen_range(-3..=3);
    let t = rng.gen_range(-3..=3);
    RationalTransform::from_integers(u, r, s, t).expect("u != 0")
}

fn run_trial(
    e: &RationalModel,
    p: u64,
    base: &LocalizationBase,
    index: u64,
    transform: RationalTransform,
) -> Result<Option<TrialRecord>> {
    let model = e.transform(&transform);
    let reduced = match reduce_mod_p(&model, p) {
        Ok(r) => r,
        Err(Error::NotPIntegral { .. }) => return Ok(None),
        Err(other) => return Err(other),
    };
    let t_bar = match reduce_transform(&transform, p) {
        Ok(t) => t,
        Err(Error::NotPIntegral { .. }) => return Ok(None),
        Err(other) => return Err(other),
    };
    let square_commutes = base.reduced.transform(&t_bar) == reduced;
    let reduction = classify_reduction(&reduced)?;
    let (j_equal, lp, alpha, same) = if base.reduction.is_good() {
        let j_equal = reduction.is_good() && isomorphic_over_closure(&base.reduced, &reduced)?;
        let lp = if reduction.is_good() {
            Some(build_lp(trace_of_frobenius(&reduced)?, p)?)
        } else {
            None
        };
        let same = j_equal && lp == base.lp;
        (Some(j_equal), lp, None, same)
    } else {
        let same = reduction.kind == base.reduction.kind;
        (None, None, reduction.alpha, same)
    };
    Ok(Some(TrialRecord {
        index,
        transform,
        model,
        reduced_model: reduced.to_string(),
        j_equal,
        lp,
        alpha,
        square_commutes,
        pass: same && square_commutes,
    }))
}

struct LocalizationBase {
    reduced: crate::elliptic::ReducedModel,
    reduction: ReductionType,
    lp: Option<IntMatrix>,
}

/// Random admissible transforms of `e` must keep `j`, `L_p` (good `p`) and
/// `alpha` (bad `p`) unchanged after reduction.
pub fn theorem1_check(e: &RationalModel, p: u64, trials: u64, seed: u64) -> Result<Theorem1Report> {
    if trials == 0 {
        return Err(Error::Unsupported("at least one trial is needed".into()));
    }
    let reduced = reduce_mod_p(e, p)?;
    let reduction = classify_reduction(&reduced)?;
    let lp = if reduction.is_good() {
        Some(build_lp(trace_of_frobenius(&reduced)?, p)?)
    } else {
        None
    };
    let base = LocalizationBase {
        reduced,
        reduction,
        lp,
    };
    let mut records = Vec::with_capacity(trials as usize);
    for index in 0..trials {
        let mut rng = trial_rng(seed, index);
        let mut record = None;
        for _ in 0..REGENERATION_LIMIT {
            let t = draw_transform(&mut rng, p);
            if let Some(r) = run_trial(e, p, &base, index, t)? {
                record = Some(r);
                break;
            }
        }
        records.push(record.ok_or_else(|| {
            Error::Unsupported(format!(
                "trial {index}: no p-integral transform in {REGENERATION_LIMIT} draws"
            ))
        })?);
    }
    let passed = records.iter().filter(|r| r.pass).count();
    Ok(Theorem1Report {
        p,
        model: e.clone(),
        seed,
        reduction: base.reduction,
        lp: base.lp,
        all_pass: passed == records.len(),
        passed,
        trials: records,
    })
}

/// Runs the identity transform as trial 0; it must pass.
pub fn identity_trial(e: &RationalModel, p: u64) -> Result<TrialRecord> {
    let reduced = reduce_mod_p(e, p)?;
    let reduction = classify_reduction(&reduced)?;
    let lp = if reduction.is_good() {
        Some(build_lp(trace_of_frobenius(&reduced)?, p)?)
    } else {
        None
    };
    let base = LocalizationBase {
        reduced,
        reduction,
        lp,
    };
    let id = RationalTransform::from_integers(1, 0, 0, 0)?;
    Ok(run_trial(e, p, &base, 0, id)?.expect("identity keeps integrality"))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Lemma3Report {
    pub period: Vec<u64>,
    pub period_prime: Vec<u64>,
    pub p: u64,
    pub a: IntMatrix,
    pub a_prime: IntMatrix,
    pub verdict: ConjugacyVerdict,
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "ser_opt")]
    pub trace_of_power: Option<BigInt>,
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "ser_opt")]
    pub trace_of_power_prime: Option<BigInt>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lp: Option<IntMatrix>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lp_prime: Option<IntMatrix>,
    /// Conjugate, equal traces of `p`-th powers, equal `L_p`; absent unless conjugate.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chain_holds: Option<bool>,
}

fn ser_opt<S: serde::Serializer>(v: &Option<BigInt>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(x) => serialize_bigint(x, s),
        None => s.serialize_none(),
    }
}

/// Similar incidence matrices have equal `tr(A^p)` and hence equal `L_p`.
pub fn lemma3_bridge(period: &[u64], period_prime: &[u64], p: u64) -> Result<Lemma3Report> {
    let a = incidence_matrix(period)?;
    let a_prime = incidence_matrix(period_prime)?;
    let verdict = conjugacy_test(&a, &a_prime, CONJUGACY_SEARCH_BOUND)?;
    let mut report = Lemma3Report {
        period: period.to_vec(),
        period_prime: period_prime.to_vec(),
        p,
        a: a.clone(),
        a_prime: a_prime.clone(),
        verdict: verdict.clone(),
        trace_of_power: None,
        trace_of_power_prime: None,
        lp: None,
        lp_prime: None,
        chain_holds: None,
    };
    if verdict.is_conjugate() {
        let t = a.pow(p)?.trace()?;
        let t2 = a_prime.pow(p)?.trace()?;
        let lp = build_lp(t.clone(), p)?;
        let lp2 = build_lp(t2.clone(), p)?;
        report.chain_holds = Some(t == t2 && lp == lp2);
        report.trace_of_power = Some(t);
        report.trace_of_power_prime = Some(t2);
        report.lp = Some(lp);
        report.lp_prime = Some(lp2);
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GroupComparisonRow {
    pub n: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub curve_group: Option<AbelianGroupInv>,
    pub k0_group: AbelianGroupInv,
    #[serde(serialize_with = "serialize_bigint")]
    pub order: BigInt,
    /// `None` when the curve group lies beyond the enumeration guard.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub isomorphic: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GroupComparisonReport {
    pub p: u64,
    pub a_p: i64,
    pub rows: Vec<GroupComparisonRow>,
}

/// `E(F_{p^n})` against `K0(O_{L_p^n})` as abelian groups, side by side.
///
/// Orders must agree; whether the groups are isomorphic is only reported.
pub fn compare_group_structures(
    e: &RationalModel,
    p: u64,
    n_max: u32,
) -> Result<GroupComparisonReport> {
    let loc = localize(e, p, n_max, None)?;
    let a_p = loc.a_p.ok_or_else(|| {
        Error::Unsupported(format!("group comparison needs good reduction at p = {p}"))
    })?;
    let rows = loc
        .k0
        .iter()
        .zip(&loc.curve_group)
        .zip(&loc.curve_counts)
        .enumerate()
        .map(|(i, ((k0, curve), count))| GroupComparisonRow {
            n: i as u32 + 1,
            isomorphic: curve.as_ref().map(|c| c.is_isomorphic_to(k0)),
            curve_group: curve.clone(),
            k0_group: k0.clone(),
            order: count.clone(),
        })
        .collect();
    Ok(GroupComparisonReport { p, a_p, rows })
}

/// Whether every K0 group in the result is infinite.
pub fn all_k0_infinite(loc: &LocalizationResult) -> bool {
    loc.k0.iter().all(|g| g.order().is_zero())
}
