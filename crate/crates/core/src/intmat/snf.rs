//! Smith normal form over the integers with explicit unimodular transforms.
//!
//! The reduction repeatedly moves the smallest nonzero entry (in absolute
//! value, first in row-major order) of the active block to the pivot slot,
//! clears its row and column by Euclidean steps, and repairs divisibility
//! by folding an offending row into the pivot row. The result satisfies
//! `U * M * V = S`, `S` diagonal with `d_1 | d_2 | ...`, all `d_i >= 0`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::IntMatrix;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithNormalForm {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
}

impl SmithNormalForm {
    /// The diagonal `d_1, ..., d_min(m,n)`.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.s.rows().min(self.s.cols()))
            .map(|i| self.s.get(i, i).clone())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|d| !d.is_zero()).count()
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> SmithNormalForm {
    let rows = m.rows();
    let cols = m.cols();
    let mut s = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);

    for t in 0..rows.min(cols) {
        loop {
            let Some((pi, pj)) = smallest_nonzero(&s, t) else {
                return SmithNormalForm { u, s, v };
            };
            s.swap_rows(t, pi);
            u.swap_rows(t, pi);
            s.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let pivot = s.get(t, t).clone();
            let mut cleared = true;
            for i in t + 1..rows {
                if s.get(i, t).is_zero() {
                    continue;
                }
                let q = -(s.get(i, t).div_floor(&pivot));
                s.add_row_multiple(i, t, &q);
                u.add_row_multiple(i, t, &q);
                cleared &= s.get(i, t).is_zero();
            }
            for j in t + 1..cols {
                if s.get(t, j).is_zero() {
                    continue;
                }
                let q = -(s.get(t, j).div_floor(&pivot));
                s.add_col_multiple(j, t, &q);
                v.add_col_multiple(j, t, &q);
                cleared &= s.get(t, j).is_zero();
            }
            if !cleared {
                continue;
            }

            // Pivot must divide every remaining entry.
            let offender =
                (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !s.get(i, j).is_multiple_of(&pivot)));
            match offender {
                Some(i) => {
                    let one = BigInt::from(1);
                    s.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        if s.get(t, t).is_negative() {
            s.negate_row(t);
            u.negate_row(t);
        }
    }
    SmithNormalForm { u, s, v }
}

fn smallest_nonzero(s: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..s.rows() {
        for j in t..s.cols() {
            let e = s.get(i, j);
            if e.is_zero() {
                continue;
            }
            if best.is_none_or(|(bi, bj)| e.abs() < s.get(bi, bj).abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn check(m: &IntMatrix) -> SmithNormalForm {
        let snf = smith_normal_form(m);
        let prod = snf.u.matmul(m).unwrap().matmul(&snf.v).unwrap();
        assert_eq!(prod, snf.s, "U*M*V != S for {m}");
        assert!(snf.s.is_diagonal());
        assert_eq!(snf.u.det().unwrap().abs(), BigInt::from(1));
        assert_eq!(snf.v.det().unwrap().abs(), BigInt::from(1));
        let d = snf.diagonal();
        for w in d.windows(2) {
            assert!(!w[0].is_negative());
            if w[0].is_zero() {
                assert!(w[1].is_zero(), "zeros must trail: {d:?}");
            } else {
                assert!(w[1].is_multiple_of(&w[0]), "chain broken: {d:?}");
            }
        }
        snf
    }

    #[test]
    fn worked_examples() {
        let snf = check(&IntMatrix::two_by_two(1, 1, -3, 1));
        assert_eq!(snf.diagonal(), vec![BigInt::from(1), BigInt::from(4)]);

        let snf = check(&IntMatrix::identity(3));
        assert_eq!(snf.s, IntMatrix::identity(3));

        let snf = check(&IntMatrix::two_by_two(2, 0, 0, 2));
        assert_eq!(snf.diagonal(), vec![BigInt::from(2), BigInt::from(2)]);
    }

    #[test]
    fn divisibility_repair_and_rectangular() {
        // diag(2,3) must become diag(1,6)
        let snf = check(&IntMatrix::two_by_two(2, 0, 0, 3));
        assert_eq!(snf.diagonal(), vec![BigInt::from(1), BigInt::from(6)]);

        let snf = check(&IntMatrix::from_rows(&[[2, 4, 4], [-6, 6, 12], [10, -4, -16]]).unwrap());
        assert_eq!(
            snf.diagonal(),
            vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]
        );

        let snf = check(&IntMatrix::from_rows(&[[0, 0, 0], [0, 0, 0]]).unwrap());
        assert_eq!(snf.rank(), 0);
        let snf = check(&IntMatrix::from_rows(&[[6, 4, 0], [0, 0, 0]]).unwrap());
        assert_eq!(snf.diagonal(), vec![BigInt::from(2), BigInt::from(0)]);
        check(&IntMatrix::from_rows(&[[3], [5], [-7]]).unwrap());
    }

    #[test]
    fn determinism() {
        let m = IntMatrix::from_rows(&[[4, 7, -2], [3, 3, 9], [0, -5, 1]]).unwrap();
        assert_eq!(smith_normal_form(&m), smith_normal_form(&m));
    }

    proptest! {
        #[test]
        fn invariants_on_random_3x3(entries in proptest::collection::vec(-50i64..=50, 9)) {
            let m = IntMatrix::new(3, 3, entries.into_iter().map(BigInt::from).collect()).unwrap();
            let snf = check(&m);
            let det = m.det().unwrap();
            if !det.is_zero() {
                let prod: BigInt = snf.diagonal().iter().product();
                prop_assert_eq!(prod, det.abs());
            }
        }
    }
}
