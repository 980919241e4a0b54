//! Rational models with complex multiplication by orders of class number one.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::RationalModel;
use crate::error::{Error, Result};

const BUILTIN: &str = include_str!("../../data/cm_catalog.json");

/// Discriminants of the imaginary quadratic orders of class number one.
pub const CM_DISCRIMINANTS: [i64; 13] =
    [-3, -4, -7, -8, -11, -12, -16, -19, -27, -28, -43, -67, -163];

/// The rational j-invariant attached to a class-number-one discriminant.
pub fn cm_j_invariant(d: i64) -> Option<BigInt> {
    let j: i64 = match d {
        -3 => 0,
        -4 => 1728,
        -7 => -3375,
        -8 => 8000,
        -11 => -32768,
        -12 => 54000,
        -16 => 287496,
        -19 => -884736,
        -27 => -12288000,
        -28 => 16581375,
        -43 => -884736000,
        -67 => -147197952000,
        -163 => -262537412640768000,
        _ => return None,
    };
    Some(BigInt::from(j))
}

#[derive(Deserialize)]
struct RawEntry {
    label: String,
    coefficients: String,
    cm_discriminant: i64,
    #[serde(default)]
    notes: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CatalogEntry {
    pub label: String,
    #[serde(rename = "coefficients")]
    pub model: RationalModel,
    pub cm_discriminant: i64,
    pub notes: String,
    #[serde(serialize_with = "serialize_rational")]
    pub j: BigRational,
}

fn serialize_rational<S: serde::Serializer>(
    x: &BigRational,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(x)
}

/// Parses a JSON array of `{label, coefficients, cm_discriminant, notes}`
/// and checks every j-invariant against its discriminant.
pub fn load_catalog(json: &str) -> Result<Vec<CatalogEntry>> {
    let raw: Vec<RawEntry> =
        serde_json::from_str(json).map_err(|e| Error::Catalog(e.to_string()))?;
    raw.into_iter()
        .map(|r| {
            let model: RationalModel = r.coefficients.parse()?;
            let j = model
                .j_invariant()
                .map_err(|_| Error::Catalog(format!("{}: singular model", r.label)))?;
            let expected = cm_j_invariant(r.cm_discriminant).ok_or_else(|| {
                Error::Catalog(format!(
                    "{}: {} is not a class-number-one discriminant",
                    r.label, r.cm_discriminant
                ))
            })?;
            if j != BigRational::from_integer(expected.clone()) {
                return Err(Error::Catalog(format!(
                    "{}: j = {j} but discriminant {} needs j = {expected}",
                    r.label, r.cm_discriminant
                )));
            }
            Ok(CatalogEntry {
                label: r.label,
                model,
                cm_discriminant: r.cm_discriminant,
                notes: r.notes,
                j,
            })
        })
        .collect()
}

pub fn builtin_catalog() -> Vec<CatalogEntry> {
    load_catalog(BUILTIN).expect("built-in catalog verifies")
}
