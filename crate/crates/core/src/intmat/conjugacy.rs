//! `GL(2,Z)` conjugacy of 2x2 integer matrices.
//!
//! Matrices that factor as products of `(a,1;1,0)` with `a >= 1` are decided
//! exactly: two such products are conjugate iff their factor words are
//! cyclic rotations of one another. Everything else falls back to a bounded
//! search for a conjugator.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::IntMatrix;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ConjugacyVerdict {
    /// `witness * A * witness^-1 == A'`, checked exactly.
    Conjugate {
        witness: IntMatrix,
    },
    NotConjugate {
        reason: NonConjugacyReason,
    },
    /// No conjugator with entries in `[-bound, bound]` exists.
    Unknown {
        bound: u32,
    },
}

impl ConjugacyVerdict {
    pub fn is_conjugate(&self) -> bool {
        matches!(self, ConjugacyVerdict::Conjugate { .. })
    }

    pub fn witness(&self) -> Option<&IntMatrix> {
        match self {
            ConjugacyVerdict::Conjugate { witness } => Some(witness),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "invariant", rename_all = "snake_case")]
pub enum NonConjugacyReason {
    TraceMismatch {
        left: String,
        right: String,
    },
    DeterminantMismatch {
        left: String,
        right: String,
    },
    CyclicPeriodMismatch {
        left: Vec<String>,
        right: Vec<String>,
    },
}

impl fmt::Display for NonConjugacyReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NonConjugacyReason::TraceMismatch { left, right } => {
                write!(f, "traces differ ({left} vs {right})")
            }
            NonConjugacyReason::DeterminantMismatch { left, right } => {
                write!(f, "determinants differ ({left} vs {right})")
            }
            NonConjugacyReason::CyclicPeriodMismatch { left, right } => write!(
                f,
                "period words [{}] and [{}] are not cyclic shifts",
                left.join(","),
                right.join(",")
            ),
        }
    }
}

/// Decides whether `B * a * B^-1 == a_prime` for some `B` in `GL(2,Z)`.
pub fn conjugacy_test(a: &IntMatrix, a_prime: &IntMatrix, bound: u32) -> Result<ConjugacyVerdict> {
    for m in [a, a_prime] {
        if m.rows() != 2 || m.cols() != 2 {
            return Err(Error::DimensionMismatch(format!(
                "conjugacy test needs 2x2 matrices, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
    }
    let (tr, tr_p) = (a.trace()?, a_prime.trace()?);
    if tr != tr_p {
        return Ok(ConjugacyVerdict::NotConjugate {
            reason: NonConjugacyReason::TraceMismatch {
                left: tr.to_string(),
                right: tr_p.to_string(),
            },
        });
    }
    let (det, det_p) = (a.det()?, a_prime.det()?);
    if det != det_p {
        return Ok(ConjugacyVerdict::NotConjugate {
            reason: NonConjugacyReason::DeterminantMismatch {
                left: det.to_string(),
                right: det_p.to_string(),
            },
        });
    }

    if let (Some(w), Some(w_p)) = (incidence_word(a), incidence_word(a_prime)) {
        return match rotation_offset(&w, &w_p) {
            Some(k) => {
                // w = u v, w' = v u  =>  M(w') = M(u)^-1 M(w) M(u)
                let head = product_of_word(&w[..k]);
                let witness = head
                    .unimodular_inverse_2x2()
                    .ok_or_else(|| Error::Internal("incidence product not unimodular".into()))?;
                if !conjugates_to(&witness, a, a_prime) {
                    return Err(Error::Internal(format!(
                        "rotation witness {witness} failed to conjugate {a} to {a_prime}"
                    )));
                }
                Ok(ConjugacyVerdict::Conjugate { witness })
            }
            None => Ok(ConjugacyVerdict::NotConjugate {
                reason: NonConjugacyReason::CyclicPeriodMismatch {
                    left: w.iter().map(ToString::to_string).collect(),
                    right: w_p.iter().map(ToString::to_string).collect(),
                },
            }),
        };
    }

    Ok(match search_conjugator(a, a_prime, bound) {
        Some(witness) => ConjugacyVerdict::Conjugate { witness },
        None => ConjugacyVerdict::Unknown { bound },
    })
}

/// `B * a == a_prime * B` with `det B = +-1`.
pub(crate) fn conjugates_to(b: &IntMatrix, a: &IntMatrix, a_prime: &IntMatrix) -> bool {
    let unimodular = b.det().is_ok_and(|d| d.abs().is_one());
    unimodular && b.matmul(a).ok() == a_prime.matmul(b).ok()
}

fn search_conjugator(a: &IntMatrix, a_prime: &IntMatrix, bound: u32) -> Option<IntMatrix> {
    let bound = i64::from(bound);
    let range = || -bound..=bound;
    for p in range() {
        for q in range() {
            for r in range() {
                for s in range() {
                    let det = p * s - q * r;
                    if det != 1 && det != -1 {
                        continue;
                    }
                    let b = IntMatrix::two_by_two(p, q, r, s);
                    if conjugates_to(&b, a, a_prime) {
                        return Some(b);
                    }
                }
            }
        }
    }
    None
}

/// Writes `m` as `prod (a_i,1;1,0)` with every `a_i >= 1` and at least one
/// factor, if possible.
pub fn incidence_word(m: &IntMatrix) -> Option<Vec<BigInt>> {
    if m.rows() != 2 || m.cols() != 2 || m.entries().iter().any(Signed::is_negative) {
        return None;
    }
    if *m == IntMatrix::identity(2) {
        return None;
    }
    let mut word = Vec::new();
    peel(m, &mut word).then_some(word)
}

fn peel(m: &IntMatrix, word: &mut Vec<BigInt>) -> bool {
    if *m == IntMatrix::identity(2) {
        return !word.is_empty();
    }
    let [m00, m01, m10, m11] = [m.get(0, 0), m.get(0, 1), m.get(1, 0), m.get(1, 1)];
    if m10.is_zero() {
        return false;
    }
    let mut a = m00.div_floor(m10);
    if !m11.is_zero() {
        a = a.min(m01.div_floor(m11));
    }
    // (a,1;1,0)^-1 * M = (m10, m11; m00 - a m10, m01 - a m11)
    while a >= BigInt::one() {
        let rest = IntMatrix::two_by_two(m10.clone(), m11.clone(), m00 - &a * m10, m01 - &a * m11);
        word.push(a.clone());
        if peel(&rest, word) {
            return true;
        }
        word.pop();
        a -= 1;
    }
    false
}

pub(crate) fn product_of_word(word: &[BigInt]) -> IntMatrix {
    word.iter().fold(IntMatrix::identity(2), |acc, a| {
        acc.matmul(&IntMatrix::two_by_two(
            a.clone(),
            BigInt::one(),
            BigInt::one(),
            BigInt::zero(),
        ))
        .expect("2x2 product")
    })
}

/// Smallest `k` with `rotate_left(left, k) == right`.
pub(crate) fn rotation_offset<T: PartialEq>(left: &[T], right: &[T]) -> Option<usize> {
    if left.len() != right.len() {
        return None;
    }
    if left.is_empty() {
        return Some(0);
    }
    let n = left.len();
    (0..n).find(|&k| (0..n).all(|i| left[(i + k) % n] == right[i]))
}
