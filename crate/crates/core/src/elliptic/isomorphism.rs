//! Isomorphism over the algebraic closure, with explicit witnesses.

use std::sync::Arc;

use serde::Serialize;

use super::{AdmissibleTransform, ReducedModel};
use crate::error::{Error, Result};
use crate::ffield::{checked_order, ExtField, FieldElement};

/// Largest extension field searched for a witness.
pub const WITNESS_GUARD: u64 = 1_000_000;

/// An admissible transform over `F_{p^k}` carrying one model to the other.
#[derive(Clone, Debug, Serialize)]
pub struct IsomorphismWitness {
    pub degree: u32,
    pub modulus: Vec<u64>,
    pub transform: AdmissibleTransform<FieldElement>,
}

fn same_prime(e: &ReducedModel, e2: &ReducedModel) -> Result<u64> {
    let (f, g) = (e.a1.field(), e2.a1.field());
    if f != g {
        return Err(Error::DimensionMismatch(format!(
            "models over F_{} (degree {}) and F_{} (degree {})",
            f.p(),
            f.degree(),
            g.p(),
            g.degree()
        )));
    }
    Ok(f.p())
}

/// `j(E) = j(E')`, the criterion for isomorphism over the closure.
pub fn isomorphic_over_closure(e: &ReducedModel, e2: &ReducedModel) -> Result<bool> {
    same_prime(e, e2)?;
    Ok(e.j_invariant()? == e2.j_invariant()?)
}

/// Transform to `y^2 = x^3 + A x + B`, valid away from characteristic 2, 3.
fn to_short_form(e: &ReducedModel) -> AdmissibleTransform<FieldElement> {
    let one = e.a1.one_like();
    let zero = e.a1.zero_like();
    let half = one.scale(2).inv().expect("p > 3");
    let third = one.scale(3).inv().expect("p > 3");
    let ta = AdmissibleTransform::new(
        one.clone(),
        zero.clone(),
        -(e.a1.clone() * half.clone()),
        -(e.a3.clone() * half),
    )
    .expect("u = 1");
    let m = e.transform(&ta);
    let tb = AdmissibleTransform::new(one, -(m.a2 * third), zero.clone(), zero).expect("u = 1");
    ta.then(&tb)
}

fn lift(x: &FieldElement, field: &Arc<ExtField>) -> FieldElement {
    x.lift_to(field).expect("prime-field element")
}

fn lift_model(e: &ReducedModel, field: &Arc<ExtField>) -> ReducedModel {
    e.map(|c| Ok(lift(c, field))).expect("infallible")
}

fn lift_transform(
    t: &AdmissibleTransform<FieldElement>,
    field: &Arc<ExtField>,
) -> AdmissibleTransform<FieldElement> {
    t.map(|c| Ok(lift(c, field))).expect("u stays nonzero")
}

/// Searches `F_{p^k}` for `(u, r, s, t)` with `E.transform(T) = E'`.
///
/// Extensions up to degree 2 are tried, or 6 when `j` is 0 or 1728; fields
/// above [`WITNESS_GUARD`] elements are skipped. Returns `None` when the
/// curves are not isomorphic or no witness was found in range.
pub fn find_isomorphism_witness(
    e: &ReducedModel,
    e2: &ReducedModel,
) -> Result<Option<IsomorphismWitness>> {
    let p = same_prime(e, e2)?;
    if e.a1.field().degree() != 1 {
        return Err(Error::Unsupported(
            "witness search expects models over F_p".into(),
        ));
    }
    if p <= 3 {
        return Err(Error::Unsupported("witness search needs p > 3".into()));
    }
    if !isomorphic_over_closure(e, e2)? {
        return Ok(None);
    }
    let (t1, t2) = (to_short_form(e), to_short_form(e2));
    let (s1, s2) = (e.transform(&t1), e2.transform(&t2));
    let (a, b, a2, b2) = (&s1.a4, &s1.a6, &s2.a4, &s2.a6);
    // u^e = w makes (u, 0, 0, 0) carry s1 to s2
    let (exp, w) = if b.is_zero() {
        (4u128, a.clone() * a2.inv().expect("nonsingular"))
    } else if a.is_zero() {
        (6, b.clone() * b2.inv().expect("nonsingular"))
    } else {
        let den = (a.clone() * b2.clone()).inv().expect("nonzero");
        (2, a2.clone() * b.clone() * den)
    };
    let k_max = if exp == 2 { 2 } else { 6 };
    for k in 1..=k_max {
        if checked_order(p, k, WITNESS_GUARD).is_err() {
            break;
        }
        let field = Arc::new(ExtField::new(p, k)?);
        let w_k = lift(&w, &field);
        let Some(u) = field
            .enumerate()?
            .map(|c| field.element(c))
            .find(|z| !z.is_zero() && z.pow(exp) == w_k)
        else {
            continue;
        };
        let zero = u.zero_like();
        let scale = AdmissibleTransform::new(u, zero.clone(), zero.clone(), zero)?;
        let total = lift_transform(&t1, &field)
            .then(&scale)
            .then(&lift_transform(&t2, &field).inverse());
        let image = lift_model(e, &field).transform(&total);
        if image != lift_model(e2, &field) {
            return Err(Error::Internal(format!(
                "witness {total} does not map {e} to {e2}"
            )));
        }
        return Ok(Some(IsomorphismWitness {
            degree: k,
            modulus: field.modulus().to_vec(),
            transform: total,
        }));
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elliptic::{reduce_mod_p, reduce_transform, RationalModel, RationalTransform};

    fn model(c: [i64; 5], p: u64) -> ReducedModel {
        reduce_mod_p(&RationalModel::from_integers(c), p).unwrap()
    }

    #[test]
    fn j_criterion_examples() {
        let e = model([0, 0, 0, -1, 0], 5);
        let twist = model([0, 0, 0, -4, 0], 5);
        assert!(isomorphic_over_closure(&e, &twist).unwrap());
        assert!(
            !isomorphic_over_closure(&model([0, 0, 0, 0, 1], 7), &model([0, 0, 0, -1, 0], 7))
                .unwrap()
        );
        let t =
            reduce_transform(&RationalTransform::from_integers(2, 1, -1, 3).unwrap(), 5).unwrap();
        assert!(isomorphic_over_closure(&e, &e.transform(&t)).unwrap());
        assert!(isomorphic_over_closure(&e, &model([0, 0, 0, -1, 0], 2)).is_err());
    }

    #[test]
    fn witnesses() {
        let e = model([0, 0, 0, -1, 0], 5);
        let twist = model([0, 0, 0, -4, 0], 5);
        let w = find_isomorphism_witness(&e, &twist).unwrap().unwrap();
        assert!(w.degree <= 6);

        let e = model([1, -1, 0, -2, -1], 11);
        let t =
            reduce_transform(&RationalTransform::from_integers(3, 2, -1, 1).unwrap(), 11).unwrap();
        let w = find_isomorphism_witness(&e, &e.transform(&t))
            .unwrap()
            .unwrap();
        assert_eq!(w.degree, 1);

        // j = 0 sextic twists
        let w = find_isomorphism_witness(&model([0, 0, 0, 0, 1], 7), &model([0, 0, 0, 0, 3], 7))
            .unwrap()
            .unwrap();
        assert!(w.degree > 1);

        assert!(
            find_isomorphism_witness(&model([0, 0, 0, 0, 1], 7), &model([0, 0, 0, -1, 0], 7))
                .unwrap()
                .is_none()
        );
    }

    #[test]
    fn generic_quadratic_twist() {
        // j != 0, 1728: a quadratic twist needs F_{p^2}
        let e = model([0, 0, 0, 1, 1], 13);
        let tw = model([0, 0, 0, 4, 8], 13);
        let w = find_isomorphism_witness(&e, &tw).unwrap().unwrap();
        assert!(w.degree <= 2);
    }
}
