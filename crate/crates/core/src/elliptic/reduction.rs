//! Reduction of rational models and classification of the reduction type.

use std::sync::Arc;

use num_rational::BigRational;
use serde::Serialize;

use super::counting::affine_count;
use super::{AdmissibleTransform, RationalModel, RationalTransform, ReducedModel};
use crate::error::{Error, Result};
use crate::ffield::{reduce_rational, ExtField, FieldElement};

/// Largest prime for which the singular point is located by search.
pub const SINGULAR_SEARCH_GUARD: u64 = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ReductionKind {
    Good,
    SplitMultiplicative,
    NonSplitMultiplicative,
    Additive,
}

impl ReductionKind {
    pub fn alpha(self) -> Option<i64> {
        match self {
            ReductionKind::Good => None,
            ReductionKind::SplitMultiplicative => Some(1),
            ReductionKind::NonSplitMultiplicative => Some(-1),
            ReductionKind::Additive => Some(0),
        }
    }

    pub fn from_alpha(alpha: i64) -> Result<Self> {
        match alpha {
            1 => Ok(ReductionKind::SplitMultiplicative),
            -1 => Ok(ReductionKind::NonSplitMultiplicative),
            0 => Ok(ReductionKind::Additive),
            other => Err(Error::InvalidAlpha(other)),
        }
    }

    pub fn is_good(self) -> bool {
        self == ReductionKind::Good
    }
}

/// How the reduction type was decided.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassificationMethod {
    Discriminant,
    TangentCone,
    Counting,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ReductionType {
    pub kind: ReductionKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<i64>,
    pub method: ClassificationMethod,
}

impl ReductionType {
    fn new(kind: ReductionKind, method: ClassificationMethod) -> Self {
        ReductionType {
            kind,
            alpha: kind.alpha(),
            method,
        }
    }

    pub fn is_good(&self) -> bool {
        self.kind.is_good()
    }
}

/// The singular point of a singular model and its tangent cone.
#[derive(Clone, Debug, PartialEq)]
pub struct SingularAnalysis {
    pub point: (u64, u64),
    /// The model moved so that the singular point is the origin:
    /// `y^2 + a1 xy = x^3 + a2 x^2`.
    pub translated: ReducedModel,
    /// `a1^2 + 4 a2` of the translated model; the tangent slopes solve
    /// `b^2 + a1 b - a2 = 0`.
    pub tangent_discriminant: u64,
    pub kind: ReductionKind,
}

/// Coefficientwise reduction of a p-integral rational model.
pub fn reduce_mod_p(e: &RationalModel, p: u64) -> Result<ReducedModel> {
    let field = Arc::new(ExtField::prime(p)?);
    let fp = *field.base();
    e.map(|c| Ok(field.element(vec![reduce_rational(&fp, c)?])))
}

/// Reduces a transform over `Z_(p)`; `u` must be a unit mod p.
pub fn reduce_transform(
    t: &RationalTransform,
    p: u64,
) -> Result<AdmissibleTransform<FieldElement>> {
    let field = Arc::new(ExtField::prime(p)?);
    let fp = *field.base();
    t.map(|c: &BigRational| Ok(field.element(vec![reduce_rational(&fp, c)?])))
}

fn prime_of(e: &ReducedModel) -> Result<u64> {
    let f = e.a1.field();
    if f.degree() != 1 {
        return Err(Error::Internal(
            "classification expects a model over F_p".into(),
        ));
    }
    Ok(f.p())
}

/// Locates the singular point and reads the node or cusp off the tangent
/// cone. Returns `None` for nonsingular models and for `p <= 3`.
pub fn analyze_singularity(e: &ReducedModel) -> Result<Option<SingularAnalysis>> {
    let p = prime_of(e)?;
    if !e.is_singular() || p <= 3 {
        return Ok(None);
    }
    if p > SINGULAR_SEARCH_GUARD {
        return Err(Error::FieldTooLarge {
            p,
            n: 1,
            guard: SINGULAR_SEARCH_GUARD,
        });
    }
    let zero = e.a1.zero_like();
    let field = Arc::clone(e.a1.field());
    let half = zero.one_like().scale(2).inv().expect("p odd");
    let (a1, a2, a3, a4, a6) = (&e.a1, &e.a2, &e.a3, &e.a4, &e.a6);
    let mut found = None;
    for xv in 0..p {
        let x = field.element(vec![xv]);
        // dF/dy = 2y + a1 x + a3 = 0
        let y = -(a1.clone() * x.clone() + a3.clone()) * half.clone();
        let fx = a1.clone() * y.clone()
            - x.clone() * x.clone() * zero.one_like().scale(3)
            - a2.clone() * x.clone() * zero.one_like().scale(2)
            - a4.clone();
        let f = y.clone() * y.clone() + a1.clone() * x.clone() * y.clone() + a3.clone() * y.clone()
            - x.clone() * x.clone() * x.clone()
            - a2.clone() * x.clone() * x.clone()
            - a4.clone() * x.clone()
            - a6.clone();
        if fx.is_zero() && f.is_zero() {
            found = Some((x, y));
            break;
        }
    }
    let (x0, y0) = found.ok_or_else(|| {
        Error::Internal("singular model without a rational singular point".into())
    })?;
    let shift = AdmissibleTransform::new(zero.one_like(), x0.clone(), zero.clone(), y0.clone())?;
    let translated = e.transform(&shift);
    if !(translated.a3.is_zero() && translated.a4.is_zero() && translated.a6.is_zero()) {
        return Err(Error::Internal(
            "translation did not move the singular point to 0".into(),
        ));
    }
    let delta = translated.a1.clone() * translated.a1.clone() + translated.a2.scale(4);
    let kind = if delta.is_zero() {
        ReductionKind::Additive
    } else if delta.is_square() {
        ReductionKind::SplitMultiplicative
    } else {
        ReductionKind::NonSplitMultiplicative
    };
    let base = |v: &FieldElement| v.as_base().expect("prime field");
    Ok(Some(SingularAnalysis {
        point: (base(&x0), base(&y0)),
        tangent_discriminant: base(&delta),
        translated,
        kind,
    }))
}

/// `alpha = p - #E_ns(F_p)` for a singular model.
pub fn alpha_by_counting(e: &ReducedModel) -> Result<i64> {
    let p = prime_of(e)?;
    if !e.is_singular() {
        return Err(Error::Internal(
            "alpha is defined for singular reductions only".into(),
        ));
    }
    let ns = affine_count(e, 1)?;
    let alpha = p as i64 - ns as i64;
    if !(-1..=1).contains(&alpha) {
        return Err(Error::CountBug(format!(
            "singular cubic over F_{p} has {ns} nonsingular points"
        )));
    }
    Ok(alpha)
}

/// Good, split or non-split multiplicative, or additive.
///
/// For `p > 3` the tangent cone decides and the counting identity
/// `#E_ns(F_p) = p - alpha` is checked against it; for `p <= 3` counting
/// alone decides.
pub fn classify_reduction(e: &ReducedModel) -> Result<ReductionType> {
    let p = prime_of(e)?;
    if !e.is_singular() {
        return Ok(ReductionType::new(
            ReductionKind::Good,
            ClassificationMethod::Discriminant,
        ));
    }
    let counted = ReductionKind::from_alpha(alpha_by_counting(e)?)?;
    if p <= 3 {
        return Ok(ReductionType::new(counted, ClassificationMethod::Counting));
    }
    let analysis = analyze_singularity(e)?.expect("singular and p > 3");
    let additive_by_c4 = e.c4().is_zero();
    if analysis.kind != counted || (analysis.kind == ReductionKind::Additive) != additive_by_c4 {
        return Err(Error::CountBug(format!(
            "tangent cone says {:?}, counting says {:?}, c4 = 0 is {additive_by_c4}",
            analysis.kind, counted
        )));
    }
    Ok(ReductionType::new(
        analysis.kind,
        ClassificationMethod::TangentCone,
    ))
}
