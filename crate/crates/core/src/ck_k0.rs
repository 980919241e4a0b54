//! Cuntz–Krieger data: the matrices `eps_n`, the group `K0 = coker(I - eps^T)`
//! and its order.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::ffield::is_prime;
use crate::intmat::{serialize_bigint, serialize_bigint_seq, smith_normal_form, IntMatrix};

/// A finitely generated abelian group `Z/d1 x Z/d2 x ...` with `d1 | d2 | ...`.
///
/// A factor 0 stands for `Z`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AbelianGroupInv {
    invariant_factors: Vec<BigInt>,
}

impl AbelianGroupInv {
    pub fn new(invariant_factors: Vec<BigInt>) -> Result<Self> {
        if let Some(d) = invariant_factors.iter().find(|d| d.is_negative()) {
            return Err(Error::Internal(format!("negative invariant factor {d}")));
        }
        for w in invariant_factors.windows(2) {
            let ok = if w[0].is_zero() {
                w[1].is_zero()
            } else {
                w[1].is_multiple_of(&w[0])
            };
            if !ok {
                return Err(Error::Internal(format!(
                    "invariant factors {} and {} break the divisibility chain",
                    w[0], w[1]
                )));
            }
        }
        Ok(AbelianGroupInv { invariant_factors })
    }

    /// The cokernel of an integer matrix.
    pub fn cokernel(m: &IntMatrix) -> Self {
        let mut factors = smith_normal_form(m).diagonal();
        // columns beyond the rank contribute free summands
        factors.extend((m.cols().min(m.rows())..m.rows()).map(|_| BigInt::zero()));
        AbelianGroupInv::new(factors).expect("Smith form satisfies the chain")
    }

    pub fn invariant_factors(&self) -> &[BigInt] {
        &self.invariant_factors
    }

    /// Factors other than 1; equal lists mean isomorphic groups.
    pub fn nontrivial_factors(&self) -> Vec<BigInt> {
        self.invariant_factors
            .iter()
            .filter(|d| !d.is_one())
            .cloned()
            .collect()
    }

    pub fn is_finite(&self) -> bool {
        self.invariant_factors.iter().all(|d| !d.is_zero())
    }

    pub fn is_cyclic(&self) -> bool {
        self.nontrivial_factors().len() <= 1
    }

    /// `|G|`, or 0 when the group is infinite.
    pub fn order(&self) -> BigInt {
        if self.is_finite() {
            self.invariant_factors.iter().product()
        } else {
            BigInt::zero()
        }
    }

    pub fn is_isomorphic_to(&self, other: &AbelianGroupInv) -> bool {
        self.nontrivial_factors() == other.nontrivial_factors()
    }
}

impl fmt::Display for AbelianGroupInv {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .nontrivial_factors()
            .iter()
            .map(|d| {
                if d.is_zero() {
                    "Z".to_string()
                } else {
                    format!("Z/{d}")
                }
            })
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" x "))
        }
    }
}

impl Serialize for AbelianGroupInv {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        struct Factors<'a>(&'a [BigInt]);
        impl Serialize for Factors<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                serialize_bigint_seq(self.0, s)
            }
        }
        struct Big<'a>(&'a BigInt);
        impl Serialize for Big<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                serialize_bigint(self.0, s)
            }
        }
        let mut st = s.serialize_struct("AbelianGroupInv", 3)?;
        st.serialize_field("invariant_factors", &Factors(&self.invariant_factors))?;
        st.serialize_field("order", &Big(&self.order()))?;
        st.serialize_field("structure", &self.to_string())?;
        st.end()
    }
}

/// `L_p = (tr, p; -1, 0)`.
pub fn build_lp(trace_ap: impl Into<BigInt>, p: u64) -> Result<IntMatrix> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    Ok(IntMatrix::two_by_two(
        trace_ap.into(),
        BigInt::from(p),
        BigInt::from(-1),
        BigInt::zero(),
    ))
}

/// What `eps_n` is built from.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum EpsilonData {
    /// Good prime: the trace placed in `L_p`.
    Trace(BigInt),
    /// Bad prime: `alpha` in {-1, 0, 1}.
    Alpha(i64),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum CKKind {
    Matrix {
        epsilon: IntMatrix,
    },
    Scalar {
        #[serde(serialize_with = "serialize_bigint")]
        epsilon: BigInt,
    },
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

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CKSource {
    pub p: u64,
    pub n: u32,
    #[serde(
        skip_serializing_if = "Option::is_none",
        serialize_with = "serialize_opt_bigint"
    )]
    pub trace_ap: Option<BigInt>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CKDescriptor {
    #[serde(flatten)]
    pub kind: CKKind,
    pub source: CKSource,
}

impl CKDescriptor {
    /// `I - eps` as a square matrix (1x1 in the scalar case).
    fn one_minus(&self) -> IntMatrix {
        match &self.kind {
            CKKind::Matrix { epsilon } => IntMatrix::identity(epsilon.rows())
                .checked_sub(epsilon)
                .expect("square by construction"),
            CKKind::Scalar { epsilon } => {
                IntMatrix::new(1, 1, vec![BigInt::one() - epsilon]).expect("1x1")
            }
        }
    }
}

/// `eps_n = L_p^n` at a good prime, `1 - alpha^n` at a bad one.
pub fn epsilon(p: u64, n: u32, data: EpsilonData) -> Result<CKDescriptor> {
    if n == 0 {
        return Err(Error::Unsupported("eps_n is defined for n >= 1".into()));
    }
    match data {
        EpsilonData::Trace(t) => Ok(CKDescriptor {
            kind: CKKind::Matrix {
                epsilon: build_lp(t.clone(), p)?.pow(n as u64)?,
            },
            source: CKSource {
                p,
                n,
                trace_ap: Some(t),
                alpha: None,
            },
        }),
        EpsilonData::Alpha(a) => {
            if !(-1..=1).contains(&a) {
                return Err(Error::InvalidAlpha(a));
            }
            if !is_prime(p) {
                return Err(Error::NotPrime(p));
            }
            Ok(CKDescriptor {
                kind: CKKind::Scalar {
                    epsilon: BigInt::one() - num_traits::pow(BigInt::from(a), n as usize),
                },
                source: CKSource {
                    p,
                    n,
                    trace_ap: None,
                    alpha: Some(a),
                },
            })
        }
    }
}

/// `K0(O_eps) = Z^k / (I - eps^T) Z^k`.
pub fn k0_group(d: &CKDescriptor) -> AbelianGroupInv {
    AbelianGroupInv::cokernel(&d.one_minus().transpose())
}

/// `det(I - eps)`, the signed version of the K0 order.
pub fn det_one_minus(d: &CKDescriptor) -> BigInt {
    d.one_minus().det().expect("square")
}

/// `|det(I - eps)|`; 0 exactly when `K0` is infinite.
pub fn k0_order(d: &CKDescriptor) -> BigInt {
    det_one_minus(d).abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn lp_examples() {
        assert_eq!(build_lp(0, 3).unwrap().to_string(), "[[0,3],[-1,0]]");
        assert_eq!(build_lp(1, 2).unwrap().to_string(), "[[1,2],[-1,0]]");
        assert_eq!(build_lp(0, 4), Err(Error::NotPrime(4)));
        for t in -10..=10 {
            for p in [2, 3, 5, 7] {
                let l = build_lp(t, p).unwrap();
                assert_eq!(l.det().unwrap(), BigInt::from(p));
                assert_eq!(l.trace().unwrap(), BigInt::from(t));
            }
        }
    }

    #[test]
    fn epsilon_examples() {
        let e = epsilon(3, 2, EpsilonData::Trace(BigInt::zero())).unwrap();
        assert_eq!(
            e.kind,
            CKKind::Matrix {
                epsilon: IntMatrix::two_by_two(-3, 0, 0, -3)
            }
        );
        let e = epsilon(11, 1, EpsilonData::Alpha(1)).unwrap();
        assert_eq!(
            e.kind,
            CKKind::Scalar {
                epsilon: BigInt::zero()
            }
        );
        let e = epsilon(11, 2, EpsilonData::Alpha(-1)).unwrap();
        assert_eq!(
            e.kind,
            CKKind::Scalar {
                epsilon: BigInt::zero()
            }
        );
        assert_eq!(
            epsilon(11, 1, EpsilonData::Alpha(2)),
            Err(Error::InvalidAlpha(2))
        );
    }

    #[test]
    fn k0_examples() {
        let l3 = epsilon(3, 1, EpsilonData::Trace(BigInt::zero())).unwrap();
        let g = k0_group(&l3);
        assert_eq!(g.invariant_factors(), big(&[1, 4]).as_slice());
        assert_eq!(g.to_string(), "Z/4");
        assert_eq!(k0_order(&l3), BigInt::from(4));

        let scalar = |e: i64| CKDescriptor {
            kind: CKKind::Scalar {
                epsilon: BigInt::from(e),
            },
            source: CKSource {
                p: 2,
                n: 1,
                trace_ap: None,
                alpha: None,
            },
        };
        let g = k0_group(&scalar(0));
        assert_eq!(g.invariant_factors(), big(&[1]).as_slice());
        assert_eq!(g.to_string(), "0");
        let g = k0_group(&scalar(1));
        assert_eq!(g.invariant_factors(), big(&[0]).as_slice());
        assert_eq!(g.to_string(), "Z");
        assert_eq!(g.order(), BigInt::zero());
    }

    #[test]
    fn bad_prime_orders() {
        for (alpha, expected) in [(-1, 1), (0, 0), (1, 1)] {
            for n in 1..=6 {
                let d = epsilon(5, n, EpsilonData::Alpha(alpha)).unwrap();
                assert_eq!(k0_order(&d), BigInt::from(expected));
            }
        }
    }

    #[test]
    fn group_display_and_chain() {
        let g = AbelianGroupInv::new(big(&[2, 2])).unwrap();
        assert_eq!(g.to_string(), "Z/2 x Z/2");
        assert!(!g.is_cyclic());
        assert!(!g.is_isomorphic_to(&AbelianGroupInv::new(big(&[1, 4])).unwrap()));
        assert!(AbelianGroupInv::new(big(&[2, 3])).is_err());
        assert!(AbelianGroupInv::new(big(&[0, 2])).is_err());
        assert!(AbelianGroupInv::new(big(&[2, 0])).is_ok());
        let json = serde_json::to_string(&g).unwrap();
        assert_eq!(
            json,
            r#"{"invariant_factors":[2,2],"order":4,"structure":"Z/2 x Z/2"}"#
        );
    }
}
